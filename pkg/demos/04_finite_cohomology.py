"""Mod-2 invariants of Sp and H^1 of small finite models.

Run with ``python3 demos/04_finite_cohomology.py``.
"""
# %% Fixed vectors of the transvection generators modulo 2
from surfacelie import build_standard_maps, invariants_mod_p, sp_generator_action

for g in (2, 3):
    acts = sp_generator_action(g)
    m = build_standard_maps(g)
    for name, pick, rank in (("H", lambda a: a.h, 2 * g), ("L", lambda a: a.lambda3, m.c.source.rank),
                             ("L/H", lambda a: a.lmodh, m.p.target.rank)):
        dim = len(invariants_mod_p([pick(a).matrix for a in acts], rank, 2))
        print(f"g={g} {name:>3}: dim H^0 mod 2 = {dim}")

# %% A central -1 forces exponent 2
from surfacelie import bockstein_check, cyclic_group, cyclic_module, h1_bruteforce

G = cyclic_group(2)
for k in range(1, 5):
    res = h1_bruteforce(G, cyclic_module(2, [[-1, 0], [0, -1]], 2 ** k))
    b = bockstein_check(G, cyclic_module(2, [[-1, 0], [0, -1]], 2 ** (k + 1)).action, 2, k)
    print(f"(Z/2^{k})^2 with negation: H^1 = {res.divisors}, Bockstein bijective: {b.passed}")
