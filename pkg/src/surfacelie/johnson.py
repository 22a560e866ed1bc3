"""Torelli validation and the Johnson homomorphism at word level.

Sign conventions: ``omega(a_j, b_j) = 1``, ``q = sum_j a_j ^ b_j``, and
``a ^ b`` in ``wedge^2 H`` is identified with the class of ``[a, b]`` in
``Gr2``.  The Magnus tensor is

    tau_tilde(phi) = sum_j a_j (x) eps1(phi)(b_j) - b_j (x) eps1(phi)(a_j)

and ``tau(phi)`` is the unique ``x`` in ``wedge^3 H`` with ``f(x) = tau_tilde``.
With these conventions the inner automorphism ``u -> a1 u a1^-1`` has
``tau = -(q ^ a1)``; in general ``tau(inner_endo(w)) = -(q ^ [w])``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import exact_linalg as xl
from .errors import NotInImage, NotTorelli
from .free_lie import DEFAULT_MAX_DEGREE, assoc_coords
from .magnus import epsilon_n, magnus_expand, surface_gr
from .sp_modules import ModuleMap, build_standard_maps, is_symplectic, transvection, transvection_vectors
from .words import GroupEndo, Word, commutator, parse_word, surface_relator

STRICT = "strict"


@dataclass(frozen=True)
class TorelliEndo:
    """An endomorphism certified to act trivially on H and preserve the relator.

    ``mode`` is ``"strict"`` (relator preserved up to conjugacy, exactly) or
    ``"relaxed"`` (preserved modulo the normal closure of the relator and
    ``L^(validated_to_degree + 1)``).
    """

    endo: GroupEndo
    mode: str
    validated_to_degree: int

    @property
    def genus(self):
        return self.endo.genus

    @property
    def relaxed(self) -> bool:
        return self.mode != STRICT


def _peel(e: Word, m: int) -> int | None:
    """Lowest degree <= m at which ``e`` fails to lie in N(r) L^(m+1), or None.

    At each degree the lowest Magnus class of ``e`` must lie in the ideal
    generated by q; it is then cancelled by a product of right-normed
    commutators with the relator and the search continues one degree up.
    """
    g = e.genus
    while True:
        p = magnus_expand(e, m)
        d = p.lowest_degree()
        if d is None:
            return None
        gr = surface_gr(g, d, max(m, DEFAULT_MAX_DEGREE))
        cls = assoc_coords(p.homogeneous_part(d), 2 * g)
        if np.any(gr.project(cls)):
            return d
        vec = cls.vector(d)
        gens = xl.int_matrix([[row.get(j, 0) for j in range(len(vec))] for row in gr.generator_rows],
                             (len(gr.generator_rows), len(vec))).T
        coeffs = xl.solve_in_image(gens, vec)
        if coeffs is None:
            return d
        n = Word.identity(g)
        for seq, k in zip(gr.generators, coeffs):
            if k:
                n = n * gr.ideal_word(seq) ** int(k)
        e = n.inverse() * e


def relator_defect_degree(phi: GroupEndo, m: int) -> int | None:
    """First degree <= m where phi(r) r^-1 leaves N(r) L^(m+1); None if it never does."""
    r = surface_relator(phi.genus)
    return _peel(phi(r) * r.inverse(), m)


def validate_endo(phi: GroupEndo, mode=STRICT, max_degree: int = DEFAULT_MAX_DEGREE) -> TorelliEndo:
    """Certify ``phi`` as a Torelli element.

    ``mode`` is ``"strict"`` or an integer ``m`` for relaxed validation
    through degree ``m``.
    """
    ab = phi.abelianization
    if not np.array_equal(ab, xl.identity(2 * phi.genus)):
        raise NotTorelli("abelianization is not the identity", condition="abelianization")
    r = surface_relator(phi.genus)
    if mode == STRICT:
        if not phi(r).is_conjugate_to(r):
            raise NotTorelli("phi(r) is not conjugate to r", condition="relator")
        return TorelliEndo(phi, STRICT, max_degree)
    m = int(mode)
    if m < 1:
        raise ValueError("relaxed degree must be positive")
    d = relator_defect_degree(phi, m)
    if d is not None:
        raise NotTorelli(f"relator not preserved modulo degree {d}", condition=f"relator_degree_{d}")
    return TorelliEndo(phi, "relaxed", m)


def _as_torelli(phi) -> TorelliEndo:
    if isinstance(phi, TorelliEndo):
        return phi
    return validate_endo(phi)


def tau_tilde(phi) -> np.ndarray:
    """Coordinates of the Magnus tensor in ``H (x) Gr2``."""
    phi = _as_torelli(phi)
    g = phi.genus
    e1 = epsilon_n(phi, 1)
    r2 = e1.shape[0]
    out = np.zeros(2 * g * r2, dtype=object)
    for j in range(g):
        a, b = j, g + j
        out[a * r2:(a + 1) * r2] += e1[:, b]
        out[b * r2:(b + 1) * r2] -= e1[:, a]
    return out


def f_map(genus: int) -> ModuleMap:
    """f: L -> H(-1) (x) Gr2, a^b^c -> a(x)[b,c] + b(x)[c,a] + c(x)[a,b]."""
    return build_standard_maps(genus).f


def johnson_tau(phi) -> np.ndarray:
    """tau(phi) in wedge^3 H coordinates; raises :class:`NotInImage` if tau_tilde misses im(f)."""
    phi = _as_torelli(phi)
    tt = tau_tilde(phi)
    F = f_map(phi.genus).matrix
    if F.shape[1] == 0:
        if np.any(tt):
            raise NotInImage("nonzero Magnus tensor at genus 1")
        return np.zeros(0, dtype=object)
    x = xl.solve_in_image(F, tt)
    if x is None:
        raise NotInImage(f"tau_tilde of {phi.endo.name or 'endo'} is not in the image of f"
                         + (" (relaxed mode)" if phi.relaxed else ""))
    return x


def inner_endo(w: Word) -> GroupEndo:
    """u -> w u w^-1."""
    g = w.genus
    return GroupEndo(g, tuple(w * Word.gen(g, i) * w.inverse() for i in range(2 * g)), f"inn({w})")


# ---- word-level symplectic automorphisms --------------------------------

@dataclass(frozen=True)
class SymplecticAuto:
    """Automorphism of the free group preserving r up to conjugacy, with its inverse."""

    label: str
    psi: GroupEndo
    inverse: GroupEndo

    @property
    def matrix(self) -> np.ndarray:
        return self.psi.abelianization

    def conjugate(self, phi: GroupEndo) -> GroupEndo:
        """psi o phi o psi^-1."""
        out = self.psi.compose(phi).compose(self.inverse)
        return GroupEndo(out.genus, out.images, f"{self.label}*{phi.name}")

    def validate(self):
        g = self.psi.genus
        if not is_symplectic(self.matrix, g):
            raise NotTorelli(f"{self.label}: abelianization is not symplectic", condition="symplectic")
        r = surface_relator(g)
        if not self.psi(r).is_conjugate_to(r):
            raise NotTorelli(f"{self.label}: relator not preserved", condition="relator")
        if not (self.psi.compose(self.inverse).is_identity() and self.inverse.compose(self.psi).is_identity()):
            raise NotTorelli(f"{self.label}: inverse does not invert", condition="inverse")
        return self


def _auto(genus, label, images, inverse_images):
    psi = GroupEndo.from_dict(genus, images, label)
    inv = GroupEndo.from_dict(genus, inverse_images, label + "^-1")
    return SymplecticAuto(label, psi, inv)


def _basic_autos(genus: int) -> list[SymplecticAuto]:
    """Handle twists, adjacent handle swaps and the adjacent mixing twist.

    Each one preserves the relator letter for letter.  The mixing twist on
    handles i, i+1 realizes the transvection along ``b_i - a_(i+1)``.
    """
    out = []
    for i in range(1, genus + 1):
        out.append(_auto(genus, f"a{i}", {f"b{i}": f"b{i} a{i}^-1"}, {f"b{i}": f"b{i} a{i}"}))
        out.append(_auto(genus, f"b{i}", {f"a{i}": f"a{i} b{i}"}, {f"a{i}": f"a{i} b{i}^-1"}))
    for i in range(1, genus):
        j = i + 1
        X = parse_word(f"[a{i}, b{i}]", genus)
        Y = parse_word(f"[a{j}, b{j}]", genus)
        A, B = (lambda k: Word.a(genus, k)), (lambda k: Word.b(genus, k))
        out.append(_auto(
            genus, f"swap{i}{j}",
            {f"a{i}": X * A(j) * X.inverse(), f"b{i}": X * B(j) * X.inverse(),
             f"a{j}": A(i), f"b{j}": B(i)},
            {f"a{i}": A(j), f"b{i}": B(j),
             f"a{j}": Y.inverse() * A(i) * Y, f"b{j}": Y.inverse() * B(i) * Y},
        ))
        g_ = f"a{j}^-1 b{i}"
        out.append(_auto(
            genus, f"b{i}-a{j}",
            {f"a{i}": f"a{i} {g_}", f"a{j}": f"b{i}^-1 a{j} b{i}",
             f"b{i}": f"b{i}^-1 a{j} b{i} a{j}^-1 b{i}", f"b{j}": f"b{j} {g_}"},
            {f"a{i}": f"a{i} b{i}^-1 a{j}", f"a{j}": f"a{j}^-1 b{i} a{j} b{i}^-1 a{j}",
             f"b{i}": f"a{j}^-1 b{i} a{j}", f"b{j}": f"b{j} b{i}^-1 a{j}"},
        ))
    return out


@lru_cache(maxsize=None)
def symplectic_automorphisms(genus: int) -> tuple:
    """Word-level automorphisms realizing each transvection generator.

    Labels and matrices match :func:`surfacelie.sp_modules.transvection_vectors`.
    Handle-internal twists are written down directly; each mixing
    transvection ``T_v`` is ``S T_v0 S^-1`` with ``v0 = b_i - a_(i+1)`` and
    ``S`` a product of basic automorphisms with ``S v0 = +-v``, found by
    breadth-first search on vectors.
    """
    basic = [x.validate() for x in _basic_autos(genus)]
    by_label = {x.label: x for x in basic}
    moves = basic + [SymplecticAuto(x.label + "^-1", x.inverse, x.psi) for x in basic]

    def key(v):
        v = tuple(int(c) for c in v)
        lead = next(c for c in v if c)
        return v if lead > 0 else tuple(-c for c in v)

    # breadth-first search from each mixing vector; store the move sequence
    reached: dict[tuple, tuple] = {}
    frontier = []
    for x in basic:
        if "-" in x.label:
            i, j = (int(t[1:]) for t in x.label.split("-"))
            v = [0] * (2 * genus)
            v[genus + i - 1], v[j - 1] = 1, -1
            reached[key(v)] = (x, ())
            frontier.append(key(v))
    targets = {key(v): lab for lab, v in transvection_vectors(genus)}
    while frontier and not all(t in reached for t in targets):
        nxt = []
        for v in frontier:
            seed, path = reached[v]
            for mv in moves:
                w = key(mv.matrix.dot(xl.int_vector(v)))
                if w not in reached:
                    reached[w] = (seed, (mv,) + path)
                    nxt.append(w)
        frontier = nxt

    out = []
    for lab, v in transvection_vectors(genus):
        if lab in by_label:
            out.append(by_label[lab])
            continue
        seed, path = reached[key(v)]
        psi, inv = seed.psi, seed.inverse
        for mv in reversed(path):
            psi = mv.psi.compose(psi).compose(mv.inverse)
            inv = mv.psi.compose(inv).compose(mv.inverse)
        auto = SymplecticAuto(lab, GroupEndo(genus, psi.images, lab),
                              GroupEndo(genus, inv.images, lab + "^-1")).validate()
        if not np.array_equal(auto.matrix, transvection(genus, v)):
            raise AssertionError(f"{lab}: wrong abelianization")
        out.append(auto)
    return tuple(out)
