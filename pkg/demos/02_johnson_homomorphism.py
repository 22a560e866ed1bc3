"""Johnson tau of word-level Torelli elements at genus 3.

Run with ``python3 demos/02_johnson_homomorphism.py``.
"""
# %% Inner automorphisms land in q ^ H
import numpy as np

from surfacelie import (build_standard_maps, inner_endo, johnson_tau, module_lambda3, parse_word,
                        validate_endo)

g = 3
labels = module_lambda3(g).labels
maps = build_standard_maps(g)


def show(tau):
    return " + ".join(f"{int(c)}*{lab}" for c, lab in zip(tau, labels) if c) or "0"


w = parse_word("a1", g)
tau = johnson_tau(inner_endo(w))
print("tau(u -> a1 u a1^-1) =", show(tau))
print("equals -i(a1):", np.array_equal(tau, -maps.i([1, 0, 0, 0, 0, 0])))

# %% A genuine Torelli element: the commutator of two commuting transvection lifts
from surfacelie.corpus import strict_commutator

comm = strict_commutator(g)
T = validate_endo(comm)
print("commutator word lengths:", [len(x) for x in comm.images])
print("tau(comm) =", show(johnson_tau(T)))

# %% The seed endomorphism only preserves the relator through degree 3
from surfacelie.corpus import seed_endo
from surfacelie.johnson import relator_defect_degree

seed = seed_endo(g)
print("relator defect appears in degree", relator_defect_degree(seed, 4))
print("tau(seed), relaxed 3 =", show(johnson_tau(validate_endo(seed, 3))))

# %% A map whose Magnus tensor misses the image of f
from surfacelie import GroupEndo, NotInImage

phi = GroupEndo.from_dict(g, {"a1": "a1 [a2, b2]"})
try:
    johnson_tau(validate_endo(phi, 2))
except NotInImage as exc:
    print("a1 -> a1 [a2, b2]:", exc)
