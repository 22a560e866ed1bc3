"""The shipped genus-3 corpus and the lattice spanned by its tau values.

Run with ``python3 demos/03_corpus_span.py``.
"""
# %% Load and verify
from surfacelie import exact_linalg as xl
from surfacelie.corpus import entry_tau, load_corpus, verify_corpus

entries = load_corpus()
rep = verify_corpus(entries)
print(f"{rep.entries} entries, passed={rep.passed}, span rank {rep.span_rank}")

# %% Smith normal form of the stacked tau vectors
rows = [list(entry_tau(e)) for e in entries]
print("invariant factors:", [int(d) for d in xl.smith_divisors(xl.int_matrix(rows))])

# %% Equivariance: conjugating by a symplectic lift acts on tau by wedge^3 of its matrix
import numpy as np

from surfacelie import johnson_tau, symplectic_automorphisms, validate_endo, wedge_power

byid = {e.id: e for e in entries}
comm = byid["comm"].endo
for a in symplectic_automorphisms(3)[:4]:
    lhs = johnson_tau(validate_endo(a.conjugate(comm)))
    rhs = wedge_power(a.matrix, 3).dot(johnson_tau(validate_endo(comm)))
    print(f"lift {a.label:>6}: equivariant = {np.array_equal(lhs, rhs)}")
