"""Graded pieces of the surface group, from the free Lie algebra down.

Run with ``python3 demos/01_surface_lie_algebra.py``.
"""
# %% Free Lie algebra on 2g letters: Lyndon words index a basis
from surfacelie import lie_bracket, LieElement, lyndon_basis, witt_dimension

rank = 4
print("Lyndon words of length 3 on 4 letters:", len(lyndon_basis(rank, 3)), "=", witt_dimension(rank, 3))
x1, x2 = LieElement.generator(rank, 0), LieElement.generator(rank, 1)
print("[[x1, x2], x1] in Lyndon coordinates:", lie_bracket(lie_bracket(x1, x2), x1).coords)

# %% Magnus expansion: commutators start in degree 2
from surfacelie import Word, commutator, magnus_expand, gr_class, surface_relator

g = 2
c = commutator(Word.a(g, 1), Word.b(g, 1))
print("Magnus expansion of [a1, b1] through degree 2:", magnus_expand(c, 2).terms)
print("class of the relator:", gr_class(surface_relator(g)).coords)

# %% Quotient by the ideal generated by q, degree by degree
from surfacelie import surface_gr

for genus in (1, 2, 3):
    ranks = [surface_gr(genus, n).rank for n in range(1, 6)]
    free = [witt_dimension(2 * genus, n) for n in range(1, 6)]
    print(f"g={genus}: surface ranks {ranks}  (free ranks {free})")
