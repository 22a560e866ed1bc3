"""Cohomology of finite groups with coefficients in finite modules.

Only H^0 and H^1 are computed.  H^0 needs generator matrices alone, which
is what makes ``Sp(2g, Z/2)`` reachable without listing its elements.  H^1
needs a full multiplication table and is meant for groups of a few dozen
elements.

Cocycles are parametrized by their values on a generating set ``S``: a
breadth-first spanning tree of the Cayley graph expresses every ``f(g)``
through ``f(s) (s in S)`` via ``f(gs) = f(g) + g f(s)``, and the non-tree
edges give the cocycle equations.  The integer lattice of solutions
modulo ``n`` is read off a Smith normal form, so the answer comes out as
elementary divisors.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from math import gcd, lcm

import numpy as np

from . import exact_linalg as xl
from .errors import ParseError, TooLarge

SIZE_GUARD = 4096
ASSOC_CHECK_LIMIT = 512


@dataclass(frozen=True)
class FiniteGroupTable:
    """Finite group as a multiplication table on ``0..order-1``."""

    order: int
    mult: tuple
    inverse: tuple
    identity: int = 0

    def __post_init__(self):
        n = self.order
        if n < 1 or len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise ValueError("multiplication table must be order x order")
        if any(not 0 <= x < n for row in self.mult for x in row):
            raise ValueError("table entry out of range")
        e = self.identity
        if any(self.mult[e][g] != g or self.mult[g][e] != g for g in range(n)):
            raise ValueError("identity law fails")
        if any(self.mult[g][self.inverse[g]] != e for g in range(n)):
            raise ValueError("inverse law fails")
        if n <= ASSOC_CHECK_LIMIT:
            m = self.mult
            for a, b, c in iproduct(range(n), repeat=3):
                if m[m[a][b]][c] != m[a][m[b][c]]:
                    raise ValueError(f"not associative at ({a}, {b}, {c})")

    @classmethod
    def from_table(cls, mult, identity: int = 0):
        mult = tuple(tuple(int(x) for x in row) for row in mult)
        inv = []
        for g in range(len(mult)):
            h = next((h for h in range(len(mult)) if mult[g][h] == identity), None)
            if h is None:
                raise ValueError(f"element {g} has no inverse")
            inv.append(h)
        return cls(len(mult), mult, tuple(inv), identity)

    def mul(self, g: int, h: int) -> int:
        return self.mult[g][h]

    def generators(self) -> tuple:
        """Greedy generating set: add the smallest element outside the current span."""
        gens: list[int] = []
        span = {self.identity}
        while len(span) < self.order:
            s = min(g for g in range(self.order) if g not in span)
            gens.append(s)
            span = self._closure(gens)
        return tuple(gens)

    def _closure(self, gens) -> set:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.mult[g][s]
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return seen

    def is_central(self, z: int) -> bool:
        return all(self.mult[z][g] == self.mult[g][z] for g in range(self.order))


def trivial_group() -> FiniteGroupTable:
    return FiniteGroupTable(1, ((0,),), (0,), 0)


def cyclic_group(n: int) -> FiniteGroupTable:
    """Z/n with element k standing for the k-th power of the generator 1."""
    return FiniteGroupTable.from_table([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(G: FiniteGroupTable, K: FiniteGroupTable) -> FiniteGroupTable:
    """Element ``i * K.order + j`` is the pair (i, j)."""
    k = K.order
    n = G.order * k
    mult = [[G.mult[a // k][b // k] * k + K.mult[a % k][b % k] for b in range(n)] for a in range(n)]
    return FiniteGroupTable.from_table(mult, G.identity * k + K.identity)


def matrix_group(generators, modulus: int):
    """Close a set of invertible matrices mod ``modulus`` under multiplication.

    Returns the group table and the list of element matrices in table order
    (the identity is element 0).
    """
    gens = [_reduce(xl.int_matrix(g), modulus) for g in generators]
    r = gens[0].shape[0] if gens else 0
    one = _reduce(xl.identity(r), modulus)
    elems = [one]
    index = {_key(one): 0}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _reduce(x.dot(s), modulus)
                k = _key(y)
                if k not in index:
                    if len(elems) >= SIZE_GUARD:
                        raise TooLarge("matrix group exceeds the enumeration guard")
                    index[k] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    mult = [[index[_key(_reduce(a.dot(b), modulus))] for b in elems] for a in elems]
    return FiniteGroupTable.from_table(mult), elems


def _reduce(m: np.ndarray, n: int) -> np.ndarray:
    return np.vectorize(lambda x: int(x) % n, otypes=[object])(m) if m.size else m


def _key(m: np.ndarray) -> tuple:
    return tuple(int(x) for x in m.flat)


@dataclass(frozen=True)
class FiniteModule:
    """(Z/n)^rank with one action matrix per group element (or per generator)."""

    modulus: int
    rank: int
    action: tuple

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        acts = tuple(_reduce(xl.int_matrix(a, (self.rank, self.rank)), self.modulus) for a in self.action)
        for a in acts:
            if gcd(xl.det(a), self.modulus) != 1:
                raise ValueError("action matrix is not invertible modulo n")
        object.__setattr__(self, "action", acts)

    def respects(self, group: FiniteGroupTable) -> bool:
        if len(self.action) != group.order:
            return False
        n = self.modulus
        return all(np.array_equal(_reduce(self.action[g].dot(self.action[h]), n), self.action[group.mul(g, h)])
                   for g in range(group.order) for h in range(group.order))

    def reduce(self, modulus: int) -> "FiniteModule":
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return FiniteModule(modulus, self.rank, self.action)


def cyclic_module(n: int, matrix, modulus: int) -> FiniteModule:
    """Action of Z/n where element k acts by ``matrix**k``; ``matrix**n`` must be the identity."""
    m = _reduce(xl.int_matrix(matrix), modulus)
    r = m.shape[0]
    acts = [_reduce(xl.identity(r), modulus)]
    for _ in range(n):
        acts.append(_reduce(acts[-1].dot(m), modulus))
    if not np.array_equal(acts[n], acts[0]):
        raise ValueError(f"matrix does not have order dividing {n} modulo {modulus}")
    return FiniteModule(modulus, r, tuple(acts[:n]))


def invariants_mod_p(generator_actions, rank: int, p: int) -> list[list[int]]:
    """Basis of the common fixed space of the generators over the field with p elements."""
    rows = []
    for a in generator_actions:
        a = xl.int_matrix(a, (rank, rank))
        rows.extend([[int(a[i, j]) - (i == j) for j in range(rank)] for i in range(rank)])
    if not rows:
        return [[int(i == j) for j in range(rank)] for i in range(rank)]
    return xl.nullspace_mod_p(xl.int_matrix(rows, (len(rows), rank)), p)


# ---- H^1 ------------------------------------------------------------------

@dataclass(frozen=True)
class H1Result:
    """H^1 as ``sum Z/d`` plus the data needed to test cocycle classes."""

    divisors: tuple
    generators: tuple
    relations: np.ndarray
    coboundaries: np.ndarray
    modulus: int

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        out = 1
        for d in self.divisors:
            out = lcm(out, d)
        return out

    def is_coboundary(self, values) -> bool:
        """Whether the cocycle with ``f(s) = values[s]`` (flattened) is a coboundary mod n."""
        N = self.coboundaries.shape[0]
        B = np.concatenate([self.coboundaries, self.modulus * xl.identity(N)], axis=1)
        return xl.solve_in_image(B, [int(v) for v in values]) is not None


def _tree(group: FiniteGroupTable, gens):
    """Parent pointers of a BFS tree: ``parent[h] = (g, s)`` with ``h = g s``."""
    parent = {group.identity: None}
    order = [group.identity]
    for g in order:
        for k, s in enumerate(gens):
            h = group.mul(g, s)
            if h not in parent:
                parent[h] = (g, k)
                order.append(h)
    return parent, order


def _cocycle_system(group: FiniteGroupTable, module: FiniteModule):
    gens = group.generators()
    r, n = module.rank, module.modulus
    N = len(gens) * r
    parent, order = _tree(group, gens)
    # C[g] is the r x N matrix expressing f(g) in the unknowns f(s)
    C = {group.identity: np.zeros((r, N), dtype=object)}
    for h in order[1:]:
        g, k = parent[h]
        blk = np.zeros((r, N), dtype=object)
        blk[:, k * r:(k + 1) * r] = module.action[g]
        C[h] = C[g] + blk
    rows = []
    for g in range(group.order):
        for k, s in enumerate(gens):
            h = group.mul(g, s)
            if parent.get(h) == (g, k):
                continue
            blk = np.zeros((r, N), dtype=object)
            blk[:, k * r:(k + 1) * r] = module.action[g]
            eq = C[h] - C[g] - blk
            rows.extend(list(row) for row in eq)
    A = xl.int_matrix(rows, (len(rows), N)) if rows else np.zeros((0, N), dtype=object)
    # coboundaries f(s) = s v - v
    D = np.zeros((N, r), dtype=object)
    for k, s in enumerate(gens):
        D[k * r:(k + 1) * r, :] = module.action[s] - xl.identity(r)
    return gens, A, D


def h1_bruteforce(group: FiniteGroupTable, module: FiniteModule) -> H1Result:
    """H^1(G, M) for a full-table group and a module given on every element."""
    if group.order * module.rank > SIZE_GUARD:
        raise TooLarge(f"order * rank = {group.order * module.rank} exceeds {SIZE_GUARD}")
    if len(module.action) != group.order:
        raise ValueError("module needs one action matrix per group element")
    if not module.respects(group):
        raise ValueError("action does not respect the multiplication table")
    n = module.modulus
    gens, A, D = _cocycle_system(group, module)
    N = D.shape[0]
    if N == 0:
        return H1Result((), gens, np.zeros((0, 0), dtype=object), D, n)
    # lattice of integer solutions of A x = 0 mod n: x = R y with y_i in (n / gcd(d_i, n)) Z
    if A.shape[0]:
        snf = xl.smith_normal_form(A)
        R, diag = snf.right, list(snf.diag)
    else:
        R, diag = xl.identity(N), []
    scale = [n // gcd(d, n) for d in diag] + [1] * (N - len(diag))
    Rinv = xl._unimodular_inverse(R)

    def coords(v):
        y = Rinv.dot(xl.int_vector(v))
        out = []
        for yi, e in zip(y, scale):
            if int(yi) % e:
                raise AssertionError("vector is not a cocycle")
            out.append(int(yi) // e)
        return out

    rel = [coords(D[:, j]) for j in range(D.shape[1])]
    rel += [coords([n * (i == j) for i in range(N)]) for j in range(N)]
    M = xl.int_matrix(rel, (len(rel), N))
    divs = xl.smith_divisors(M)
    if len(divs) < N:
        raise AssertionError("H^1 came out infinite; the modulus must kill it")
    return H1Result(tuple(d for d in divs if d != 1), gens, M, D, n)


@dataclass
class BocksteinReport:
    passed: bool
    h0_dim: int
    h1_divisors: tuple
    injective: bool
    details: dict

    def to_dict(self) -> dict:
        return {"passed": self.passed, "h0_mod2_dim": self.h0_dim, "h1_divisors": list(self.h1_divisors),
                "injective": self.injective, **self.details}


def bockstein_check(group: FiniteGroupTable, int_actions, rank: int, k: int) -> BocksteinReport:
    """Connecting map H^0(G, V/2) -> H^1(G, V) for V = (Z/2^k)^rank.

    ``int_actions`` are integer matrices, one per group element, acting
    compatibly modulo ``2^(k+1)``.  It comes from
    ``0 -> V -> W -> V/2 -> 0`` with ``W = (Z/2^(k+1))^rank`` and the
    first map multiplication by 2: lift an invariant ``v`` of ``V/2`` to
    ``W``, take ``s -> s v - v``, which is even, and halve it.  The report
    checks that this is injective and that both groups have the same order.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if group.order * rank > SIZE_GUARD:
        raise TooLarge(f"order * rank = {group.order * rank} exceeds {SIZE_GUARD}")
    W = FiniteModule(2 ** (k + 1), rank, tuple(int_actions))
    V = W.reduce(2 ** k)
    V2 = W.reduce(2)
    h1 = h1_bruteforce(group, V)
    gens = h1.generators
    basis = invariants_mod_p([V2.action[s] for s in gens], rank, 2)
    if len(basis) > 16:
        raise TooLarge("too many invariants to enumerate")

    def beta(v):
        out = []
        for s in gens:
            d = W.action[s].dot(xl.int_vector(v)) - xl.int_vector(v)
            out.extend(int(x) % W.modulus // 2 for x in d)
        return out

    injective = True
    for coeffs in iproduct(range(2), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = [sum(c * b[i] for c, b in zip(coeffs, basis)) % 2 for i in range(rank)]
        if h1.is_coboundary(beta(v)):
            injective = False
            break
    same_order = 2 ** len(basis) == h1.order
    return BocksteinReport(injective and same_order, len(basis), h1.divisors, injective,
                           {"k": k, "rank": rank, "order": group.order, "same_order": same_order})


# ---- text formats -----------------------------------------------------------

def _clean_lines(text: str) -> list[str]:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return [ln for ln in lines if ln]


def parse_group(text: str) -> FiniteGroupTable:
    """Either ``cyclic n``, or ``order n`` followed by n rows of the table.

    Element 0 must be the identity in table form.
    """
    lines = _clean_lines(text)
    if not lines:
        raise ParseError("empty group file")
    head = lines[0].split()
    try:
        if head[0] == "cyclic" and len(head) == 2:
            return cyclic_group(int(head[1]))
        if head[0] == "order" and len(head) == 2:
            n = int(head[1])
            rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
            if len(rows) != n:
                raise ParseError(f"expected {n} table rows, got {len(rows)}")
            return FiniteGroupTable.from_table(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"bad group header {lines[0]!r}")


def parse_module(text: str) -> FiniteModule:
    """``modulus n`` and ``rank r`` lines, then r x r integer matrices one after another."""
    lines = _clean_lines(text)
    hdr = {}
    body = []
    for ln in lines:
        parts = ln.split()
        if parts[0] in ("modulus", "rank") and len(parts) == 2:
            hdr[parts[0]] = parts[1]
        else:
            body.extend(parts)
    try:
        n, r = int(hdr["modulus"]), int(hdr["rank"])
        vals = [int(t) for t in body]
    except (KeyError, ValueError):
        raise ParseError("module file needs integer 'modulus' and 'rank' headers") from None
    if r < 0 or (r and len(vals) % (r * r)):
        raise ParseError("matrix entries do not fill whole r x r blocks")
    mats = [xl.int_matrix([vals[b + i * r:b + (i + 1) * r] for i in range(r)], (r, r))
            for b in range(0, len(vals), r * r)] if r else []
    try:
        return FiniteModule(n, r, tuple(mats))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
