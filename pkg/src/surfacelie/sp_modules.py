"""Integer matrices of the symplectic module maps around ``L = (wedge^3 H)(-1)``.

Conventions: ``H`` has basis a1..ag, b1..bg with ``omega(a_j, b_j) = 1``;
``q = sum_j a_j ^ b_j``; wedge powers use the lexicographic basis of
increasing index tuples; ``Gr2`` is ``wedge^2 H / q`` with the basis fixed
by :func:`surfacelie.magnus.surface_gr`; ``H (x) Gr2`` is indexed by
``h * rank(Gr2) + k``.

Weights follow the similitude convention: the scalar ``a`` acts on a module
of weight ``w`` by ``a ** (-w)``.  ``H`` has weight -1, ``wedge^k H`` weight
-k, and each Tate twist ``(n)`` lowers the weight by ``2n``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd

import numpy as np

from . import exact_linalg as xl
from .errors import ExactnessFailed, IdentityFailed, NotAUnit
from .free_lie import DEFAULT_MAX_DEGREE, LieElement, apply_linear_substitution, lie_bracket
from .magnus import surface_gr
from .words import generator_names


@dataclass(frozen=True)
class BasedModule:
    name: str
    genus: int
    rank: int
    weight: int
    labels: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class ModuleMap:
    source: BasedModule
    target: BasedModule
    matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match "
                             f"{self.source.name} -> {self.target.name}")

    @property
    def weight_shift(self) -> int:
        return self.target.weight - self.source.weight

    def __call__(self, x) -> np.ndarray:
        return self.matrix.dot(xl.int_vector(x))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        if other.target != self.source:
            raise ValueError(f"cannot compose {other.target.name} into {self.source.name}")
        return ModuleMap(other.source, self.target, self.matrix.dot(other.matrix))

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.source == other.source
                and self.target == other.target and np.array_equal(self.matrix, other.matrix))


def similitude_scalar(module: BasedModule, a: int):
    """Scalar by which the similitude ``a * I`` acts on ``module``."""
    return Fraction(a) ** (-module.weight)


# ---- bases and modules -------------------------------------------------

def omega(genus: int) -> np.ndarray:
    n = 2 * genus
    J = np.zeros((n, n), dtype=object)
    for j in range(genus):
        J[j, genus + j] = 1
        J[genus + j, j] = -1
    return J


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple:
    return tuple(combinations(range(n), k))


def _wedge_index(n, k):
    return {t: i for i, t in enumerate(wedge_basis(n, k))}


def _sort_sign(idx):
    """Sorted tuple and permutation sign, or (None, 0) if an index repeats."""
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return None, 0
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


def _labels(genus, tuples):
    names = generator_names(genus)
    return tuple("^".join(names[i] for i in t) for t in tuples)


def module_H(genus, twist=0):
    return BasedModule("H" if not twist else f"H({twist})", genus, 2 * genus, -1 - 2 * twist,
                       tuple(generator_names(genus)))


def module_wedge2(genus):
    return BasedModule("Wedge2", genus, comb(2 * genus, 2), -2, _labels(genus, wedge_basis(2 * genus, 2)))


def module_lambda3(genus, twist=-1):
    """``(wedge^3 H)(twist)``; the default twist gives L."""
    name = "Lambda3" if twist == -1 else f"Lambda3({twist})"
    return BasedModule(name, genus, comb(2 * genus, 3), -3 - 2 * twist, _labels(genus, wedge_basis(2 * genus, 3)))


def _gr_labels(genus, degree):
    gr = surface_gr(genus, degree, max(degree, DEFAULT_MAX_DEGREE))
    names = generator_names(genus)
    if gr.basis is None:
        return tuple(f"e{k}" for k in range(gr.rank))
    return tuple("".join(names[i] for i in w) for w in gr.basis)


def module_gr(genus, degree):
    gr = surface_gr(genus, degree, max(degree, DEFAULT_MAX_DEGREE))
    return BasedModule(f"Gr{degree}", genus, gr.rank, -degree, _gr_labels(genus, degree))


def module_h_gr2(genus, twist=0):
    """``H(twist) (x) Gr2``."""
    r2 = surface_gr(genus, 2).rank
    hl, gl = generator_names(genus), _gr_labels(genus, 2)
    name = "H(x)Gr2" if not twist else f"H({twist})(x)Gr2"
    return BasedModule(name, genus, 2 * genus * r2, -3 - 2 * twist,
                       tuple(f"{h}(x){k}" for h in hl for k in gl))


# ---- the standard maps --------------------------------------------------

def _i_matrix(genus):
    n = 2 * genus
    idx3 = _wedge_index(n, 3)
    M = np.zeros((comb(n, 3), n), dtype=object)
    for x in range(n):
        for j in range(genus):
            t, s = _sort_sign((j, genus + j, x))
            if t is not None:
                M[idx3[t], x] += s
    return M


def _c_matrix(genus):
    n = 2 * genus
    J = omega(genus)
    M = np.zeros((n, comb(n, 3)), dtype=object)
    for col, (x, y, z) in enumerate(wedge_basis(n, 3)):
        M[z, col] += J[x, y]
        M[x, col] += J[y, z]
        M[y, col] += J[z, x]
    return M


def _wedge2_to_gr2(genus, i, j):
    """Gr2 coordinates of the class of ``x_i ^ x_j``."""
    gr2 = surface_gr(genus, 2)
    t, s = _sort_sign((i, j))
    vec = np.zeros(comb(2 * genus, 2), dtype=object)
    if t is not None:
        vec[_wedge_index(2 * genus, 2)[t]] = s
    return gr2.project(vec)


def _f_matrix(genus):
    n = 2 * genus
    r2 = surface_gr(genus, 2).rank
    M = np.zeros((n * r2, comb(n, 3)), dtype=object)
    for col, (a, b, c) in enumerate(wedge_basis(n, 3)):
        for h, (u, v) in ((a, (b, c)), (b, (c, a)), (c, (a, b))):
            M[h * r2:(h + 1) * r2, col] += _wedge2_to_gr2(genus, u, v)
    return M


def _bracket3_matrix(genus):
    n = 2 * genus
    gr2, gr3 = surface_gr(genus, 2), surface_gr(genus, 3)
    M = np.zeros((gr3.rank, n * gr2.rank), dtype=object)
    for h in range(n):
        x = LieElement.generator(n, h)
        for k in range(gr2.rank):
            e = [0] * gr2.rank
            e[k] = 1
            M[:, h * gr2.rank + k] = gr3.project(lie_bracket(x, gr2.lift(e)))
    return M


@dataclass(frozen=True)
class StandardMaps:
    genus: int
    i: ModuleMap
    c: ModuleMap
    p: ModuleMap
    section: ModuleMap
    f: ModuleMap
    f_untwisted: ModuleMap
    embed_LmodH: ModuleMap
    bracket2: ModuleMap
    bracket3: ModuleMap

    def items(self):
        return [(k, getattr(self, k)) for k in
                ("i", "c", "p", "f", "embed_LmodH", "bracket2", "bracket3")]


@lru_cache(maxsize=None)
def build_standard_maps(genus: int) -> StandardMaps:
    """i, c, p, f, the L/H embedding and the two brackets for genus ``genus``."""
    if genus < 1:
        raise ValueError("genus must be at least 1")
    n = 2 * genus
    H, L = module_H(genus), module_lambda3(genus)
    i = ModuleMap(H, L, _i_matrix(genus))
    c = ModuleMap(L, H, _c_matrix(genus))
    ck = xl.cokernel([list(col) for col in i.matrix.T], comb(n, 3))
    if any(d != 1 for d in ck.divisors):
        raise IdentityFailed(f"image of i is not saturated: {ck.divisors}")
    if ck.free_columns is not None:
        lab = tuple(L.labels[j] for j in ck.free_columns)
    else:
        lab = tuple(f"e{k}" for k in range(ck.rank))
    LmodH = BasedModule("LmodH", genus, ck.rank, -1, lab)
    p = ModuleMap(L, LmodH, ck.projection)
    section = ModuleMap(LmodH, L, ck.section)
    emb = (genus - 1) * xl.identity(L.rank) - i.matrix.dot(c.matrix)
    embed = ModuleMap(LmodH, L, emb.dot(ck.section))
    fm = _f_matrix(genus)
    f = ModuleMap(L, module_h_gr2(genus, twist=-1), fm)
    f0 = ModuleMap(module_lambda3(genus, twist=0), module_h_gr2(genus), fm)
    b2 = ModuleMap(module_wedge2(genus), module_gr(genus, 2), surface_gr(genus, 2).projection)
    b3 = ModuleMap(module_h_gr2(genus), module_gr(genus, 3), _bracket3_matrix(genus))
    return StandardMaps(genus, i, c, p, section, f, f0, embed, b2, b3)


# ---- symplectic generators ---------------------------------------------

def transvection_vectors(genus: int) -> list[tuple[str, tuple]]:
    """The 2g^2 vectors v whose transvections generate Sp(2g, Z).

    v runs over a_i, b_i, a_i + a_j and b_i + b_j (i < j), and a_i + b_j (i != j).
    """
    n = 2 * genus
    names = generator_names(genus)

    def vec(*idx):
        v = [0] * n
        for k in idx:
            v[k] += 1
        return tuple(v)

    out = []
    for i in range(genus):
        out.append((names[i], vec(i)))
    for i in range(genus):
        out.append((names[genus + i], vec(genus + i)))
    for i, j in combinations(range(genus), 2):
        out.append((f"{names[i]}+{names[j]}", vec(i, j)))
    for i, j in combinations(range(genus), 2):
        out.append((f"{names[genus + i]}+{names[genus + j]}", vec(genus + i, genus + j)))
    for i in range(genus):
        for j in range(genus):
            if i != j:
                out.append((f"{names[i]}+{names[genus + j]}", vec(i, genus + j)))
    return out


def transvection(genus: int, v) -> np.ndarray:
    """Matrix of x -> x + omega(x, v) v."""
    J = omega(genus)
    v = xl.int_vector(v)
    n = 2 * genus
    T = xl.identity(n)
    Jv = J.dot(v)
    for j in range(n):
        T[:, j] += Jv[j] * v
    return T


def is_symplectic(S, genus: int) -> bool:
    J = omega(genus)
    return np.array_equal(S.T.dot(J).dot(S), J)


def wedge_power(S, k: int) -> np.ndarray:
    """Matrix of the k-th exterior power of S on the lexicographic basis."""
    n = S.shape[0]
    basis = wedge_basis(n, k)
    out = np.zeros((len(basis), len(basis)), dtype=object)
    for c, J in enumerate(basis):
        for r, I in enumerate(basis):
            out[r, c] = xl.det(S[np.ix_(I, J)])
    return out


def gr_action(S, genus: int, degree: int) -> np.ndarray:
    """Action of a symplectic S on the surface graded piece of given degree."""
    gr = surface_gr(genus, degree, max(degree, DEFAULT_MAX_DEGREE))
    out = np.zeros((gr.rank, gr.rank), dtype=object)
    for k in range(gr.rank):
        e = [0] * gr.rank
        e[k] = 1
        out[:, k] = gr.project(apply_linear_substitution(gr.lift(e), S))
    return out


@dataclass(frozen=True)
class SpAction:
    label: str
    vector: tuple
    h: ModuleMap
    wedge2: ModuleMap
    gr2: ModuleMap
    lambda3: ModuleMap
    lmodh: ModuleMap


@lru_cache(maxsize=None)
def sp_generator_action(genus: int) -> tuple:
    """Actions of the transvection generators on H, wedge^2 H, Gr2, L and L/H."""
    maps = build_standard_maps(genus)
    H, L = module_H(genus), module_lambda3(genus)
    W2, G2 = module_wedge2(genus), module_gr(genus, 2)
    gr2 = surface_gr(genus, 2)
    q = np.zeros(W2.rank, dtype=object)
    idx2 = _wedge_index(2 * genus, 2)
    for j in range(genus):
        q[idx2[(j, genus + j)]] = 1
    out = []
    for label, v in transvection_vectors(genus):
        S = transvection(genus, v)
        if not is_symplectic(S, genus):
            raise IdentityFailed(f"transvection {label} is not symplectic")
        S2 = wedge_power(S, 2)
        if not np.array_equal(S2.dot(q), q):
            raise IdentityFailed(f"transvection {label} moves q")
        S3 = wedge_power(S, 3)
        g2 = gr2.projection.dot(S2).dot(gr2.cokernel.section)
        lh = maps.p.matrix.dot(S3).dot(maps.section.matrix)
        out.append(SpAction(label, v, ModuleMap(H, H, S), ModuleMap(W2, W2, S2),
                            ModuleMap(G2, G2, g2), ModuleMap(L, L, S3),
                            ModuleMap(maps.p.target, maps.p.target, lh)))
    return tuple(out)


# ---- checks -------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict

    def to_json(self) -> str:
        return json.dumps({"check": self.name, "passed": self.passed, "details": self.details},
                          sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.name}: {'pass' if self.passed else 'fail'}"]
        for k in sorted(self.details):
            lines.append(f"  {k}: {self.details[k]}")
        return "\n".join(lines)


def check_ci_identity(genus: int) -> CheckReport:
    """c o i = (g - 1) id on H, exactly."""
    m = build_standard_maps(genus)
    ci = m.c.matrix.dot(m.i.matrix)
    expected = (genus - 1) * xl.identity(2 * genus)
    if not np.array_equal(ci, expected):
        raise IdentityFailed(f"c o i != {genus - 1} id at genus {genus}")
    return CheckReport("ci", True, {"genus": genus, "factor": genus - 1, "rank_H": 2 * genus,
                                    "weight_shift": (m.c @ m.i).weight_shift})


def check_lmodh_roundtrip(genus: int) -> CheckReport:
    """p o embed_LmodH = (g - 1) id on L/H."""
    m = build_standard_maps(genus)
    pe = m.p.matrix.dot(m.embed_LmodH.matrix)
    r = m.p.target.rank
    if not np.array_equal(pe, (genus - 1) * xl.identity(r)):
        raise IdentityFailed(f"p o embed != {genus - 1} id at genus {genus}")
    if r and np.any(m.c.matrix.dot(m.embed_LmodH.matrix)):
        raise IdentityFailed("embedded L/H is not killed by c")
    return CheckReport("lmodh_roundtrip", True, {"genus": genus, "factor": genus - 1, "rank_LmodH": r})


def check_mod2_injection(genus: int) -> CheckReport:
    """(L/H)/2 -> L/2 for the sequence 0 -> ker c -> L -> H -> 0.

    The kernel of c is a saturated sublattice of rank rank(L/H), so its mod-2
    reduction injects.  The mod-2 rank of ``embed_LmodH`` is reported too;
    it drops when g - 1 is even.
    """
    m = build_standard_maps(genus)
    L = m.c.source.rank
    ker = xl.kernel_basis(m.c.matrix) if L else []
    ker_mat = xl.int_matrix([list(v) for v in ker], (len(ker), L)).T if ker else np.zeros((L, 0), dtype=object)
    divisors = xl.smith_divisors(ker_mat) if ker else []
    rank2 = xl.rank_mod_p(ker_mat, 2) if ker else 0
    r = m.p.target.rank
    passed = len(ker) == r and rank2 == r and all(d == 1 for d in divisors)
    return CheckReport("mod2_injection", passed, {
        "genus": genus, "rank_LmodH": r, "rank_ker_c": len(ker), "ker_c_divisors": divisors,
        "mod2_rank_ker_c": rank2, "mod2_rank_embed_LmodH": xl.rank_mod_p(m.embed_LmodH.matrix, 2) if r else 0})


@dataclass(frozen=True)
class Decomposition:
    h: np.ndarray
    lmodh: np.ndarray
    denominator: int

    def reconstruct(self, genus: int, modulus: int | None = None):
        """x = (i(h) + embed(lmodh)) / (g - 1), over Q or modulo ``modulus``."""
        m = build_standard_maps(genus)
        num = m.i(self.h) + m.embed_LmodH(self.lmodh)
        if modulus is None:
            return np.array([Fraction(int(v), self.denominator) for v in num], dtype=object)
        if gcd(self.denominator, modulus) != 1:
            raise NotAUnit(f"{self.denominator} is not a unit mod {modulus}")
        inv = pow(self.denominator, -1, modulus)
        return np.array([int(v) * inv % modulus for v in num], dtype=object)


def decompose(genus: int, x, modulus: int | None = None) -> Decomposition:
    """Split x in L into its H and L/H components via (c, p)."""
    if genus < 2:
        raise NotAUnit("g - 1 = 0 is never a unit")
    if modulus is not None and gcd(genus - 1, modulus) != 1:
        raise NotAUnit(f"g - 1 = {genus - 1} is not a unit mod {modulus}")
    m = build_standard_maps(genus)
    x = xl.int_vector(x)
    return Decomposition(m.c(x), m.p(x), genus - 1)


def jacobi_exactness(genus: int) -> CheckReport:
    """Exactness of 0 -> wedge^3 H -> H (x) Gr2 -> Gr3 -> 0 over the integers."""
    m = build_standard_maps(genus)
    F, B = m.f_untwisted.matrix, m.bracket3.matrix
    n3, nhg, ng3 = F.shape[1], F.shape[0], B.shape[0]
    fdiv = xl.smith_divisors(F) if n3 else []
    if len(fdiv) != n3:
        raise ExactnessFailed(f"f has rank {len(fdiv)} < {n3}", stage="f_injective")
    if any(d != 1 for d in fdiv):
        raise ExactnessFailed(f"image of f not saturated: {fdiv}", stage="f_saturated")
    bdiv = xl.smith_divisors(B) if ng3 and nhg else []
    if len(bdiv) != ng3 or any(d != 1 for d in bdiv):
        raise ExactnessFailed(f"bracket not onto Gr3: divisors {bdiv}", stage="bracket_surjective")
    if n3 and np.any(B.dot(F)):
        raise ExactnessFailed("bracket o f != 0", stage="complex")
    ker = [list(v) for v in xl.kernel_basis(B)] if nhg else []
    im = [list(F[:, j]) for j in range(n3)]
    if not xl.same_lattice(ker, im, nhg):
        raise ExactnessFailed("ker(bracket) != im(f)", stage="middle")
    if n3 + ng3 != nhg:
        raise ExactnessFailed("rank identity fails", stage="ranks")
    return CheckReport("jacobi", True, {
        "genus": genus, "rank_Lambda3": n3, "rank_HGr2": nhg, "rank_Gr3": ng3,
        "f_divisors": fdiv, "bracket_divisors": bdiv, "rank_ker_bracket": len(ker)})


def check_decomposition(genus: int, samples: int = 100, seed: int = 0, bound: int = 9) -> CheckReport:
    """Round trip x -> (c(x), p(x)) -> x on every basis vector and ``samples`` random elements of L."""
    m = build_standard_maps(genus)
    n = m.c.source.rank
    rng = np.random.default_rng(seed)
    tests = [[int(i == j) for j in range(n)] for i in range(n)]
    tests += [[int(v) for v in rng.integers(-bound, bound + 1, size=n)] for _ in range(samples)]
    bad = 0
    for x in tests:
        back = decompose(genus, x).reconstruct(genus)
        if any(Fraction(int(a)) != b for a, b in zip(x, back)):
            bad += 1
    if bad:
        raise IdentityFailed(f"{bad} of {len(tests)} decompositions failed to reconstruct")
    return CheckReport("decomp", True, {"genus": genus, "tested": len(tests), "denominator": genus - 1,
                                        "rank_H": 2 * genus, "rank_LmodH": m.p.target.rank})
