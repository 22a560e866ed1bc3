"""The free Lie algebra over the integers, in Lyndon coordinates.

Elements of the tensor algebra are :class:`NcPoly` (sparse maps from
monomials, i.e. tuples of generator indices, to ints).  Lie elements are
stored as integer coordinates on Lyndon words.  Each Lyndon word ``w`` with
standard factorization ``w = uv`` (``v`` the longest proper Lyndon suffix)
stands for the bracket ``[b(u), b(v)]``; its expansion is ``w`` plus
lexicographically larger monomials, which is what makes coordinate
extraction a division-free back-substitution.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DegreeOverflow, NotLie

DEFAULT_MAX_DEGREE = 5

Monomial = tuple  # tuple[int, ...]


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_dimension(rank: int, degree: int) -> int:
    """Rank of the degree-``degree`` part of the free Lie algebra."""
    if rank < 1 or degree < 1:
        raise ValueError("rank and degree must be positive")
    total = sum(mobius(d) * rank ** (degree // d) for d in range(1, degree + 1) if degree % d == 0)
    return total // degree


def is_lyndon(w: Monomial) -> bool:
    n = len(w)
    return n > 0 and all(w < w[i:] + w[:i] for i in range(1, n))


def standard_factorization(w: Monomial) -> tuple[Monomial, Monomial]:
    """Split a Lyndon word of length >= 2 as ``u + v`` with ``v`` its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w!r} has no proper Lyndon suffix")


@dataclass(frozen=True)
class LyndonBasis:
    rank: int
    degree: int
    words: tuple
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __len__(self):
        return len(self.words)


@lru_cache(maxsize=None)
def lyndon_basis(rank: int, degree: int) -> LyndonBasis:
    """All Lyndon words of the given length, in lexicographic order (Duval)."""
    if rank < 1 or degree < 1:
        raise ValueError("rank and degree must be positive")
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == degree:
            words.append(tuple(w))
        m = len(w)
        while len(w) < degree:
            w.append(w[len(w) - m])
        while w and w[-1] == rank - 1:
            w.pop()
    return LyndonBasis(rank, degree, tuple(words))


class NcPoly:
    """Truncated noncommutative polynomial with integer coefficients."""

    __slots__ = ("truncation_degree", "terms")

    def __init__(self, terms: Mapping | None = None, truncation_degree: int = DEFAULT_MAX_DEGREE):
        self.truncation_degree = truncation_degree
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c and len(m) <= truncation_degree:
                    self.terms[tuple(m)] = self.terms.get(tuple(m), 0) + int(c)
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def one(cls, truncation_degree=DEFAULT_MAX_DEGREE):
        return cls({(): 1}, truncation_degree)

    @classmethod
    def _raw(cls, terms, truncation_degree):
        p = cls.__new__(cls)
        p.truncation_degree = truncation_degree
        p.terms = terms
        return p

    def __add__(self, other):
        t = min(self.truncation_degree, other.truncation_degree)
        out = {m: c for m, c in self.terms.items() if len(m) <= t}
        for m, c in other.terms.items():
            if len(m) <= t:
                v = out.get(m, 0) + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return NcPoly._raw(out, t)

    def __neg__(self):
        return NcPoly._raw({m: -c for m, c in self.terms.items()}, self.truncation_degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        if not k:
            return NcPoly._raw({}, self.truncation_degree)
        return NcPoly._raw({m: k * c for m, c in self.terms.items()}, self.truncation_degree)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        t = min(self.truncation_degree, other.truncation_degree)
        by_deg: dict[int, list] = {}
        for m, c in other.terms.items():
            by_deg.setdefault(len(m), []).append((m, c))
        out: dict = {}
        for m1, c1 in self.terms.items():
            room = t - len(m1)
            for d, items in by_deg.items():
                if d > room:
                    continue
                for m2, c2 in items:
                    key = m1 + m2
                    v = out.get(key, 0) + c1 * c2
                    if v:
                        out[key] = v
                    else:
                        del out[key]
        return NcPoly._raw(out, t)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"NcPoly({self.terms!r}, truncation_degree={self.truncation_degree})"

    def homogeneous_part(self, n: int) -> dict:
        return {m: c for m, c in self.terms.items() if len(m) == n}

    def degrees(self) -> set:
        return {len(m) for m in self.terms}

    def lowest_degree(self, skip_constant=True):
        ds = [len(m) for m in self.terms if len(m) or not skip_constant]
        return min(ds) if ds else None

    def is_zero(self) -> bool:
        return not self.terms


@lru_cache(maxsize=None)
def lyndon_poly(w: Monomial) -> tuple:
    """Expansion of the Lyndon bracketing of ``w`` as sorted ``(monomial, coeff)`` pairs."""
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    pu, pv = lyndon_poly(u), lyndon_poly(v)
    out: dict = {}
    for m1, c1 in pu:
        for m2, c2 in pv:
            out[m1 + m2] = out.get(m1 + m2, 0) + c1 * c2
            out[m2 + m1] = out.get(m2 + m1, 0) - c1 * c2
    return tuple(sorted((m, c) for m, c in out.items() if c))


@lru_cache(maxsize=None)
def _left_normed(m: Monomial) -> tuple:
    cur = {m[:1]: 1}
    for x in m[1:]:
        nxt: dict = {}
        for mm, c in cur.items():
            nxt[mm + (x,)] = nxt.get(mm + (x,), 0) + c
            nxt[(x,) + mm] = nxt.get((x,) + mm, 0) - c
        cur = nxt
    return tuple((k, v) for k, v in cur.items() if v)


def dynkin(p: Mapping) -> dict:
    """Left-normed bracketing map on a homogeneous polynomial."""
    out: dict = {}
    for m, c in p.items():
        for mm, k in _left_normed(m):
            out[mm] = out.get(mm, 0) + c * k
    return {m: c for m, c in out.items() if c}


@dataclass(frozen=True)
class LieElement:
    """Element of the free Lie algebra: ``coords[degree][lyndon_word] = coefficient``."""

    rank: int
    coords: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, part in self.coords.items():
            p = {tuple(w): int(c) for w, c in part.items() if c}
            for w in p:
                if len(w) != d or not is_lyndon(w) or max(w) >= self.rank:
                    raise ValueError(f"{w!r} is not a Lyndon word of length {d} on {self.rank} letters")
            if p:
                clean[d] = dict(sorted(p.items()))
        object.__setattr__(self, "coords", dict(sorted(clean.items())))

    @classmethod
    def generator(cls, rank: int, i: int):
        return cls(rank, {1: {(i,): 1}})

    @classmethod
    def from_vector(cls, rank: int, degree: int, vec: Iterable[int]):
        words = lyndon_basis(rank, degree).words
        return cls(rank, {degree: {w: int(c) for w, c in zip(words, vec) if c}})

    def vector(self, degree: int) -> np.ndarray:
        basis = lyndon_basis(self.rank, degree)
        out = np.zeros(len(basis), dtype=object)
        idx = basis.index
        for w, c in self.coords.get(degree, {}).items():
            out[idx[w]] = c
        return out

    @property
    def degrees(self):
        return tuple(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other):
        _check_rank(self, other)
        out = {d: dict(p) for d, p in self.coords.items()}
        for d, p in other.coords.items():
            q = out.setdefault(d, {})
            for w, c in p.items():
                q[w] = q.get(w, 0) + c
        return LieElement(self.rank, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return LieElement(self.rank, {d: {w: k * c for w, c in p.items()} for d, p in self.coords.items()})

    __rmul__ = scale

    def to_ncpoly(self, truncation_degree: int | None = None) -> NcPoly:
        top = max(self.coords, default=0)
        t = truncation_degree if truncation_degree is not None else max(top, 1)
        out: dict = {}
        for d, p in self.coords.items():
            for w, c in p.items():
                for m, k in lyndon_poly(w):
                    out[m] = out.get(m, 0) + c * k
        return NcPoly(out, t)

    def to_text(self, names=None) -> str:
        """``degree:word:coefficient`` lines."""
        lines = []
        for d, p in self.coords.items():
            for w, c in p.items():
                word = "".join(names[i] for i in w) if names else ".".join(str(i + 1) for i in w)
                lines.append(f"{d}:{word}:{c}")
        return "\n".join(lines)


def _check_rank(u, v):
    if u.rank != v.rank:
        raise ValueError("Lie elements of different rank")


def assoc_coords(p, rank: int, certify: bool = True) -> LieElement:
    """Lyndon coordinates of a homogeneous Lie polynomial.

    Raises :class:`NotLie` unless ``p`` passes the Dynkin test
    (left-normed bracketing equals ``n * p``) and back-substitution
    leaves nothing behind.
    """
    terms = p.terms if isinstance(p, NcPoly) else dict(p)
    terms = {tuple(m): int(c) for m, c in terms.items() if c}
    if not terms:
        return LieElement(rank)
    degs = {len(m) for m in terms}
    if len(degs) != 1:
        raise NotLie(f"not homogeneous: degrees {sorted(degs)}")
    n = degs.pop()
    if n == 0:
        raise NotLie("constant term is not a Lie element")
    if certify and n > 1:
        d = dynkin(terms)
        if d != {m: n * c for m, c in terms.items()}:
            raise NotLie("Dynkin test failed")
    rest = dict(terms)
    heap = list(rest)
    heapq.heapify(heap)
    coords: dict = {}
    while heap:
        m = heapq.heappop(heap)
        c = rest.get(m, 0)
        if not c:
            continue
        if not is_lyndon(m):
            raise NotLie(f"leading monomial {m} is not Lyndon")
        expansion = lyndon_poly(m)
        lead = dict(expansion)[m]  # +-1 under any bracket sign convention
        c *= lead
        coords[m] = c
        for mm, k in expansion:
            v = rest.get(mm, 0) - c * k
            if mm not in rest:
                heapq.heappush(heap, mm)
            if v:
                rest[mm] = v
            else:
                rest.pop(mm, None)
    return LieElement(rank, {n: coords})


def lie_bracket(u: LieElement, v: LieElement, max_degree: int = DEFAULT_MAX_DEGREE) -> LieElement:
    _check_rank(u, v)
    if u.is_zero() or v.is_zero():
        return LieElement(u.rank)
    top = max(u.degrees) + max(v.degrees)
    if top > max_degree:
        raise DegreeOverflow(f"bracket reaches degree {top} > cap {max_degree}")
    pu, pv = u.to_ncpoly(top), v.to_ncpoly(top)
    comm = pu * pv - pv * pu
    out = LieElement(u.rank)
    for d in sorted(comm.degrees()):
        out = out + assoc_coords(comm.homogeneous_part(d), u.rank)
    return out


def apply_linear_substitution(x: LieElement, matrix) -> LieElement:
    """Image of ``x`` under the Lie algebra map induced by ``X_j -> sum_i matrix[i, j] X_i``."""
    cols = [[(i, int(matrix[i, j])) for i in range(x.rank) if matrix[i, j]] for j in range(x.rank)]
    out = LieElement(x.rank)
    for d, part in x.coords.items():
        poly: dict = {}
        for w, c in part.items():
            for m, k in lyndon_poly(w):
                acc = {(): c * k}
                for letter in m:
                    nxt: dict = {}
                    for mm, cc in acc.items():
                        for i, s in cols[letter]:
                            nxt[mm + (i,)] = nxt.get(mm + (i,), 0) + cc * s
                    acc = nxt
                for mm, cc in acc.items():
                    poly[mm] = poly.get(mm, 0) + cc
        out = out + assoc_coords(poly, x.rank, certify=False)
    return out
