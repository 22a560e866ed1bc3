"""Magnus expansion, lower central series classes and the surface quotient.

The Magnus expansion sends a generator ``x_i`` to ``1 + X_i`` in the
degree-truncated tensor algebra.  For a word ``w`` the lowest nonzero
homogeneous part of ``expand(w) - 1`` is a Lie polynomial: it is the class
of ``w`` in the graded quotient of the lower central series of the free
group.  Reading classes off this way keeps every coefficient integral.

The graded Lie algebra of the surface group is the free Lie algebra on
``H`` modulo the ideal generated by ``q = sum_j [a_j, b_j]``.
:func:`surface_gr` builds each graded piece of that quotient, checks it is
torsion free, and fixes a basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as iproduct

import numpy as np

from . import exact_linalg as xl
from .cache import cached
from .errors import (DegreeOverflow, LiftDegreeError, NotTorelliModN,
                     TorsionFound, TrivialWithinCap)
from .free_lie import (DEFAULT_MAX_DEGREE, LieElement, NcPoly, assoc_coords,
                       lie_bracket, lyndon_basis, standard_factorization)
from .words import GroupEndo, Word, commutator, surface_relator


class AtLeast(int):
    """Filtration degree known only to be at least this value."""

    def __repr__(self):
        return f"AtLeast({int(self)})"

    def __str__(self):
        return f">={int(self)}"


def _mul_letter(terms: dict, x: int, m: int) -> dict:
    out = dict(terms)
    i = abs(x) - 1
    if x > 0:
        for mono, c in terms.items():
            if len(mono) < m:
                key = mono + (i,)
                v = out.get(key, 0) + c
                if v:
                    out[key] = v
                else:
                    del out[key]
    else:
        for mono, c in terms.items():
            key = mono
            sign = c
            for _ in range(m - len(mono)):
                key = key + (i,)
                sign = -sign
                v = out.get(key, 0) + sign
                if v:
                    out[key] = v
                else:
                    del out[key]
    return out


def magnus_expand(w: Word, m: int) -> NcPoly:
    """Magnus expansion of ``w`` truncated above degree ``m``."""
    terms = {(): 1}
    for x in w.letters:
        terms = _mul_letter(terms, x, m)
    return NcPoly._raw(terms, m)


def filtration_degree(w: Word, m: int) -> int:
    """Lowest degree with nonzero Magnus part, or ``AtLeast(m + 1)``."""
    d = magnus_expand(w, m).lowest_degree()
    return AtLeast(m + 1) if d is None else d


def lowest_class(p: NcPoly, rank: int) -> tuple[int, LieElement] | None:
    """Degree and Lie coordinates of the lowest nonconstant part of ``p``."""
    d = p.lowest_degree()
    if d is None:
        return None
    return d, assoc_coords(p.homogeneous_part(d), rank)


def gr_class(w: Word, max_degree: int = DEFAULT_MAX_DEGREE) -> LieElement:
    """Class of ``w`` in the lower central series quotient of its filtration degree."""
    found = lowest_class(magnus_expand(w, max_degree), 2 * w.genus)
    if found is None:
        raise TrivialWithinCap(f"{w} is trivial through degree {max_degree}")
    return found[1]


def symplectic_element(genus: int) -> LieElement:
    """q = sum_j [a_j, b_j] in Lyndon coordinates."""
    return LieElement(2 * genus, {2: {(j, genus + j): 1 for j in range(genus)}})


def lyndon_word_lift(w: tuple, genus: int) -> Word:
    """Group commutator word matching the Lyndon bracketing of ``w``."""
    if len(w) == 1:
        return Word.gen(genus, w[0])
    u, v = standard_factorization(w)
    return commutator(lyndon_word_lift(u, genus), lyndon_word_lift(v, genus))


@dataclass(frozen=True)
class SurfaceGr:
    """Degree-``degree`` piece of the graded Lie algebra of the genus-``genus`` surface group.

    ``generators`` lists the index sequences ``(i1, ..., ik)`` of the
    right-normed brackets ``[x_i1, [..., [x_ik, q]]]`` spanning the ideal in
    this degree, and ``generator_rows`` their Lyndon coordinates.
    """

    genus: int
    degree: int
    cokernel: xl.Cokernel
    generators: tuple
    generator_rows: tuple

    @property
    def lyndon(self):
        return lyndon_basis(2 * self.genus, self.degree)

    @property
    def rank(self) -> int:
        return self.cokernel.rank

    @property
    def ambient_rank(self) -> int:
        return self.cokernel.ncols

    @property
    def divisors(self) -> tuple:
        return self.cokernel.divisors

    @property
    def projection(self) -> np.ndarray:
        return self.cokernel.projection

    @property
    def basis(self) -> tuple | None:
        """Lyndon words forming the quotient basis, when it is a coordinate basis."""
        free = self.cokernel.free_columns
        if free is None:
            return None
        words = self.lyndon.words
        return tuple(words[j] for j in free)

    def project(self, x) -> np.ndarray:
        """Quotient coordinates of a Lie element or a Lyndon coordinate vector."""
        if isinstance(x, LieElement):
            vec = x.coords.get(self.degree, {})
            idx = self.lyndon.index
            sparse = {idx[w]: c for w, c in vec.items()}
            if any(d != self.degree for d in x.coords):
                raise ValueError("element is not homogeneous of this degree")
        else:
            sparse = {j: int(c) for j, c in enumerate(x) if c}
        ck = self.cokernel
        out = np.zeros(ck.rank, dtype=object)
        if ck.free_columns is not None:
            pos, pivot_rows = self._reduction
            for j, c in sparse.items():
                if j in pos:
                    out[pos[j]] += c
                else:
                    for jj, v in pivot_rows[j].items():
                        if jj != j:
                            out[pos[jj]] -= c * v
            return out
        for j, c in sparse.items():
            out += c * ck.projection[:, j]
        return out

    @cached_property
    def _reduction(self):
        pos = {j: k for k, j in enumerate(self.cokernel.free_columns)}
        # each reduced relation row has exactly one non-free column: its unit pivot
        pivots = {next(c for c in r if c not in pos): r for r in self.cokernel.relations}
        return pos, pivots

    def lift(self, coords) -> LieElement:
        """Lie element (in the free Lie algebra) representing quotient coordinates."""
        vec = self.cokernel.section.dot(xl.int_vector(coords)) if self.rank else []
        return LieElement.from_vector(2 * self.genus, self.degree, vec)

    def lift_word(self, k: int) -> Word:
        """Group word whose class projects to basis vector ``k``."""
        col = self.cokernel.section[:, k]
        words = self.lyndon.words
        w = Word.identity(self.genus)
        for j, c in enumerate(col):
            if c:
                w = w * lyndon_word_lift(words[j], self.genus) ** int(c)
        return w

    def ideal_word(self, gen: tuple) -> Word:
        """Right-normed group commutator of generators with the surface relator."""
        w = surface_relator(self.genus)
        for i in reversed(gen):
            w = commutator(Word.gen(self.genus, i), w)
        return w


@lru_cache(maxsize=None)
def _surface_gr(genus: int, degree: int) -> SurfaceGr:
    return cached(f"surface_gr_g{genus}_n{degree}", lambda: _build_surface_gr(genus, degree))


def _build_surface_gr(genus: int, degree: int) -> SurfaceGr:
    rank = 2 * genus
    basis = lyndon_basis(rank, degree)
    gens: list[tuple] = []
    rows: list[dict] = []
    if degree >= 2:
        q = symplectic_element(genus)
        gens = [seq for seq in iproduct(range(rank), repeat=degree - 2)]
        for seq in gens:
            el = q
            for i in reversed(seq):
                el = lie_bracket(LieElement.generator(rank, i), el, max_degree=degree)
            rows.append({basis.index[w]: c for w, c in el.coords.get(degree, {}).items()})
    ck = xl.cokernel(rows, len(basis))
    if any(d != 1 for d in ck.divisors):
        raise TorsionFound(f"genus {genus} degree {degree}: divisors {ck.divisors}")
    return SurfaceGr(genus, degree, ck, tuple(gens), tuple(rows))


def surface_gr(genus: int, degree: int, max_degree: int = DEFAULT_MAX_DEGREE) -> SurfaceGr:
    if genus < 1 or degree < 1:
        raise ValueError("genus and degree must be positive")
    if degree > max_degree:
        raise DegreeOverflow(f"degree {degree} exceeds cap {max_degree}")
    return _surface_gr(genus, degree)


class EndoMagnus:
    """Magnus expansions of ``phi(w)``, built from cached expansions of the images."""

    def __init__(self, phi: GroupEndo, m: int):
        self.phi = phi
        self.m = m
        self._cache: dict[int, NcPoly] = {}

    def letter(self, x: int) -> NcPoly:
        if x not in self._cache:
            img = self.phi.images[abs(x) - 1]
            self._cache[x] = magnus_expand(img if x > 0 else img.inverse(), self.m)
        return self._cache[x]

    def expand_image(self, w: Word) -> NcPoly:
        p = NcPoly.one(self.m)
        for x in w.letters:
            p = p * self.letter(x)
        return p

    def defect(self, u: Word) -> NcPoly:
        """Expansion of ``phi(u) u^-1``."""
        return self.expand_image(u) * magnus_expand(u.inverse(), self.m)


def _check_torelli(phi, n):
    endo = getattr(phi, "endo", phi)
    ab = endo.abelianization
    if not all(ab[i, j] == (1 if i == j else 0) for i in range(ab.shape[0]) for j in range(ab.shape[1])):
        raise NotTorelliModN("abelianization is not the identity")
    validated = getattr(phi, "validated_to_degree", None)
    if validated is not None and validated < n + 1:
        raise NotTorelliModN(f"endo validated only to degree {validated}; epsilon_{n} needs {n + 1}")
    return endo


def epsilon_on_word(phi, u: Word, n: int, max_degree: int = DEFAULT_MAX_DEGREE,
                    _cache: EndoMagnus | None = None) -> np.ndarray:
    """Surface-quotient coordinates of ``phi(u) u^-1`` in degree ``n + 1`` for ``u`` in L^n."""
    endo = _check_torelli(phi, n)
    if n + 1 > max_degree:
        raise DegreeOverflow(f"epsilon_{n} needs degree {n + 1} > cap {max_degree}")
    tgt = surface_gr(endo.genus, n + 1, max_degree)
    em = _cache or EndoMagnus(endo, n + 1)
    p = em.defect(u)
    low = p.lowest_degree()
    if low is not None and low <= n:
        raise LiftDegreeError(f"phi(u)u^-1 has filtration degree {low} <= {n}")
    cls = assoc_coords(p.homogeneous_part(n + 1), 2 * endo.genus)
    return tgt.project(cls)


def epsilon_n(phi, n: int, max_degree: int = DEFAULT_MAX_DEGREE) -> np.ndarray:
    """Matrix of the map Gr^n -> Gr^(n+1) induced by ``u -> phi(u) u^-1``.

    Columns are indexed by the basis of ``surface_gr(g, n)``, rows by that
    of ``surface_gr(g, n + 1)``.  ``phi`` may be a :class:`GroupEndo` or a
    validated Torelli endo, in which case its validated degree must be at
    least ``n + 1``.
    """
    endo = _check_torelli(phi, n)
    src = surface_gr(endo.genus, n, max_degree)
    if n + 1 > max_degree:
        raise DegreeOverflow(f"epsilon_{n} needs degree {n + 1} > cap {max_degree}")
    tgt = surface_gr(endo.genus, n + 1, max_degree)
    em = EndoMagnus(endo, n + 1)
    out = np.zeros((tgt.rank, src.rank), dtype=object)
    for k in range(src.rank):
        out[:, k] = epsilon_on_word(phi, src.lift_word(k), n, max_degree, em)
    return out


def surface_bracket(genus: int, i: int, x, j: int, y, max_degree: int = DEFAULT_MAX_DEGREE) -> np.ndarray:
    """Bracket of quotient coordinates ``x`` (degree i) and ``y`` (degree j) in degree i + j."""
    u = surface_gr(genus, i, max_degree).lift(x)
    v = surface_gr(genus, j, max_degree).lift(y)
    return surface_gr(genus, i + j, max_degree).project(lie_bracket(u, v, max_degree))


def leibniz_defects(phi, i: int, j: int, max_degree: int = DEFAULT_MAX_DEGREE) -> tuple[int, list]:
    """Check ``eps([u, v]) = [eps(u), v] + [u, eps(v)]`` on all basis pairs of degrees (i, j).

    Returns the number of pairs tested and the list of failing ``(k, l)``.
    """
    endo = _check_torelli(phi, i + j)
    g = endo.genus
    Ei, Ej, Eij = (epsilon_n(phi, n, max_degree) for n in (i, j, i + j))
    ri, rj = surface_gr(g, i, max_degree).rank, surface_gr(g, j, max_degree).rank
    bad = []
    for k in range(ri):
        u = [int(a == k) for a in range(ri)]
        for l in range(rj):
            v = [int(b == l) for b in range(rj)]
            lhs = Eij.dot(surface_bracket(g, i, u, j, v, max_degree))
            rhs = (surface_bracket(g, i + 1, Ei[:, k], j, v, max_degree)
                   + surface_bracket(g, i, u, j + 1, Ej[:, l], max_degree))
            if not np.array_equal(lhs, rhs):
                bad.append((k, l))
    return ri * rj, bad
