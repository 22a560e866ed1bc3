"""Exact integer and modular linear algebra.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so no
entry can overflow.  The heavy lifting happens on plain lists; numpy is
only the carrier.

The Smith normal form follows the smallest-absolute-value pivot rule with
(row, column) tie-break, which keeps coefficient growth modest and makes
every result reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "int_matrix",
    "int_vector",
    "identity",
    "SmithForm",
    "smith_normal_form",
    "smith_divisors",
    "rank",
    "det",
    "kernel_basis",
    "solve_in_image",
    "Cokernel",
    "cokernel",
    "same_lattice",
    "nullspace_mod_p",
    "rank_mod_p",
    "parse_matrix",
    "format_matrix",
]


def int_matrix(data, shape=None) -> np.ndarray:
    """Return ``data`` as a 2-d object array of Python ints.

    ``shape`` is only needed to pin the column count of an empty matrix.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        out = np.empty(data.shape, dtype=object)
        for idx, v in np.ndenumerate(data):
            out[idx] = int(v)
        return out
    rows = [list(r) for r in data]
    if shape is None:
        ncols = len(rows[0]) if rows else 0
        shape = (len(rows), ncols)
    out = np.zeros(shape, dtype=object)
    for i, r in enumerate(rows):
        if len(r) != shape[1]:
            raise ValueError("ragged matrix rows")
        for j, v in enumerate(r):
            out[i, j] = int(v)
    return out


def int_vector(data) -> np.ndarray:
    vals = [int(v) for v in data]
    out = np.zeros(len(vals), dtype=object)
    for i, v in enumerate(vals):
        out[i] = v
    return out


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _to_lists(a) -> tuple[list[list[int]], int, int]:
    a = int_matrix(a) if not (isinstance(a, np.ndarray) and a.dtype == object) else a
    m, n = a.shape
    return [[int(x) for x in row] for row in a], m, n


@dataclass(frozen=True)
class SmithForm:
    """Result of :func:`smith_normal_form`.

    ``left @ a @ right`` equals the rectangular diagonal matrix carrying
    ``diag`` (the nonzero invariant factors) in its leading entries.
    """

    diag: tuple[int, ...]
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.diag)


def smith_normal_form(a) -> SmithForm:
    """Smith normal form with unimodular transforms."""
    A, m, n = _to_lists(a)
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        if k:
            ra, rs = A[dst], A[src]
            for c in range(n):
                if rs[c]:
                    ra[c] += k * rs[c]
            la, ls = L[dst], L[src]
            for c in range(m):
                if ls[c]:
                    la[c] += k * ls[c]

    def add_col(dst, src, k):
        if k:
            for row in A:
                if row[src]:
                    row[dst] += k * row[src]
            for row in R:
                if row[src]:
                    row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        dirty = True
            if dirty:
                k = min((i for i in range(t, m) if A[i][t]), key=lambda i: (abs(A[i][t]), i))
                swap_rows(t, k)
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        dirty = True
            if dirty:
                k = min((j for j in range(t, n) if A[t][j]), key=lambda j: (abs(A[t][j]), j))
                swap_cols(t, k)
                continue
            # divisibility of the trailing block
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                if any(v % p for v in A[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            L[t] = [-v for v in L[t]]
        diag.append(A[t][t])
        t += 1
    return SmithForm(tuple(diag), int_matrix(L, (m, m)), int_matrix(R, (n, n)))


def _chain(diag: list[int]) -> list[int]:
    d = [abs(x) for x in diag]
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_divisors(a, ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors only, without transforms.

    ``a`` may be a matrix or an iterable of sparse rows (``dict`` column ->
    value); the sparse path is what makes the degree-5 relation matrices
    cheap, since unit pivots eliminate without fill-in.
    """
    rows: list[dict[int, int]] = []
    if isinstance(a, np.ndarray):
        for r in a:
            rows.append({j: int(v) for j, v in enumerate(r) if v})
    else:
        for r in a:
            if isinstance(r, dict):
                rows.append({j: int(v) for j, v in r.items() if v})
            else:
                rows.append({j: int(v) for j, v in enumerate(r) if v})
    active = {i: r for i, r in enumerate(rows) if r}
    diag = []
    while active:
        best = None
        for i in sorted(active):
            for j, v in active[i].items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        _, r, c = best
        while True:
            piv = active[r][c]
            dirty = []
            for i in sorted(active):
                if i != r and c in active[i]:
                    row = active[i]
                    q = row[c] // piv
                    for j, v in active[r].items():
                        nv = row.get(j, 0) - q * v
                        if nv:
                            row[j] = nv
                        else:
                            row.pop(j, None)
                    if c in row:
                        dirty.append(i)
                    elif not row:
                        del active[i]
            if dirty:
                r = min(dirty, key=lambda i: (abs(active[i][c]), i))
                continue
            prow = active[r]
            rem = {j: v % piv for j, v in prow.items() if j != c and v % piv}
            if not rem:
                diag.append(piv)
                del active[r]
                break
            # column operations touch only the pivot row here
            rem[c] = piv
            active[r] = rem
            c = min((j for j in rem if j != c), key=lambda j: (abs(rem[j]), j))
    return sorted(_chain(diag))


def rank(a) -> int:
    return len(smith_divisors(a))


def _normalize_sign(v: list[int]) -> list[int]:
    for x in v:
        if x:
            return v if x > 0 else [-y for y in v]
    return v


def kernel_basis(a, ncols: int | None = None) -> list[np.ndarray]:
    """Basis of the saturated integer kernel ``{x : a @ x = 0}``."""
    a = int_matrix(a, None if ncols is None else (len(a), ncols)) if not isinstance(a, np.ndarray) else a
    snf = smith_normal_form(a)
    R = snf.right
    out = []
    for j in range(snf.rank, a.shape[1]):
        out.append(int_vector(_normalize_sign([int(x) for x in R[:, j]])))
    return out


def solve_in_image(a, b) -> np.ndarray | None:
    """Integer solution of ``a @ x = b``, or ``None`` when none exists."""
    a = a if isinstance(a, np.ndarray) else int_matrix(a)
    b = [int(x) for x in b]
    m, n = a.shape
    if len(b) != m:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(a)
    Lb = [sum(int(snf.left[i, k]) * b[k] for k in range(m) if b[k]) for i in range(m)]
    y = [0] * n
    for i, d in enumerate(snf.diag):
        if Lb[i] % d:
            return None
        y[i] = Lb[i] // d
    if any(Lb[snf.rank:]):
        return None
    R = snf.right
    return int_vector(sum(int(R[i, k]) * y[k] for k in range(snf.rank)) for i in range(n))


@dataclass(frozen=True)
class Cokernel:
    """Presentation of ``Z^n / span(rows)`` when that quotient is free.

    ``projection`` (quotient rank x n) maps ambient coordinates to quotient
    coordinates; ``section`` (n x quotient rank) is a right inverse.  When
    ``free_columns`` is set the quotient basis is a subset of the ambient
    basis and ``relations`` is the reduced row echelon basis with unit
    pivots.
    """

    ncols: int
    projection: np.ndarray
    section: np.ndarray
    divisors: tuple[int, ...]
    relations: tuple[dict, ...]
    free_columns: tuple[int, ...] | None

    @property
    def rank(self) -> int:
        return self.projection.shape[0]


def _unit_pivot_echelon(rows: list[dict[int, int]]):
    """Reduced echelon form using only +-1 pivots, preferring the largest column.

    Returns ``(pivot_rows, pivots)`` or ``None`` if some row never acquires a
    unit entry.
    """
    pending = [dict(r) for r in rows if r]
    basis: dict[int, dict[int, int]] = {}
    progress = True
    while pending and progress:
        progress = False
        deferred = []
        for row in pending:
            for c in [c for c in row if c in basis]:
                k = row.get(c, 0)
                if k:
                    for j, v in basis[c].items():
                        nv = row.get(j, 0) - k * v
                        if nv:
                            row[j] = nv
                        else:
                            row.pop(j, None)
            if not row:
                continue
            units = [c for c, v in row.items() if abs(v) == 1]
            if not units:
                deferred.append(row)
                continue
            c = max(units)
            if row[c] < 0:
                row = {j: -v for j, v in row.items()}
            for prow in basis.values():
                k = prow.get(c, 0)
                if k:
                    for j, v in row.items():
                        nv = prow.get(j, 0) - k * v
                        if nv:
                            prow[j] = nv
                        else:
                            prow.pop(j, None)
            basis[c] = row
            progress = True
        pending = deferred
    if pending:
        return None
    return basis


def cokernel(rows: Sequence, ncols: int) -> Cokernel:
    """Quotient of ``Z^ncols`` by the row lattice of ``rows``.

    Unit-pivot elimination is tried first so the quotient basis is a set of
    coordinate vectors; otherwise the Smith form supplies the complement.
    The ``divisors`` field always comes from the Smith form of the input
    rows, so torsion is visible to the caller either way.
    """
    sparse = []
    for r in rows:
        if isinstance(r, dict):
            sparse.append({j: int(v) for j, v in r.items() if v})
        else:
            sparse.append({j: int(v) for j, v in enumerate(r) if v})
    divisors = tuple(smith_divisors(sparse))
    if any(d != 1 for d in divisors):
        return Cokernel(ncols, np.zeros((0, ncols), dtype=object),
                        np.zeros((ncols, 0), dtype=object), divisors, (), None)
    basis = _unit_pivot_echelon(sparse)
    if basis is not None:
        free = tuple(j for j in range(ncols) if j not in basis)
        pos = {j: k for k, j in enumerate(free)}
        proj = np.zeros((len(free), ncols), dtype=object)
        sec = np.zeros((ncols, len(free)), dtype=object)
        for j, k in pos.items():
            proj[k, j] = 1
            sec[j, k] = 1
        # x -> x - sum_c x[c] * row_c, then read off the free coordinates
        for c, row in basis.items():
            for j, v in row.items():
                if j != c:
                    proj[pos[j], c] -= v
        relations = tuple(dict(sorted(basis[c].items())) for c in sorted(basis))
        return Cokernel(ncols, proj, sec, divisors, relations, free)
    dense = int_matrix([[r.get(j, 0) for j in range(ncols)] for r in sparse], (len(sparse), ncols))
    snf = smith_normal_form(dense)
    r = snf.rank
    right = snf.right
    proj = right[:, r:].T.copy()
    inv = _unimodular_inverse(right)
    sec = inv[r:, :].T.copy()
    rel = tuple({j: int(v) for j, v in enumerate(inv[i]) if v} for i in range(r))
    return Cokernel(ncols, proj, sec, divisors, rel, None)


def _unimodular_inverse(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve_in_image(u, e)
        cols.append([int(v) for v in x])
    return int_matrix([[cols[j][i] for j in range(n)] for i in range(n)], (n, n))


def _hnf(vectors: Iterable[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    rows = [[int(x) for x in v] for v in vectors]
    rows = [r for r in rows if any(r)]
    out = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for j in range(col, ncols):
                    r[j] -= q * p[j]
            nz = [r for r in nz if r[col]]
        p = nz[0]
        if p[col] < 0:
            p[:] = [-x for x in p]
        for prev in out:
            q = prev[col] // p[col]
            if q:
                for j in range(col, ncols):
                    prev[j] -= q * p[j]
        out.append(p)
        rows = [r for r in rows if r is not p and any(r)]
        col += 1
    return [tuple(r) for r in out]


def same_lattice(u: Iterable[Sequence[int]], v: Iterable[Sequence[int]], ncols: int) -> bool:
    """Whether two generating sets span the same sublattice of ``Z^ncols``."""
    return _hnf(u, ncols) == _hnf(v, ncols)


def det(m) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref_mod_p(rows: list[list[int]], ncols: int, p: int):
    rows = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank_mod_p(a, p: int) -> int:
    A, m, n = _to_lists(a)
    return len(_rref_mod_p(A, n, p)[1])


def nullspace_mod_p(a, p: int) -> list[list[int]]:
    """Basis of ``{x : a x = 0 (mod p)}`` for prime ``p``."""
    A, m, n = _to_lists(a)
    red, pivots = _rref_mod_p(A, n, p)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, c in zip(red, pivots):
            x[c] = (-row[f]) % p
        basis.append(x)
    return basis


def parse_matrix(text: str) -> np.ndarray:
    """Parse ``rows cols`` followed by row-major integers."""
    toks = text.split()
    if len(toks) < 2:
        raise ValueError("matrix text needs a 'rows cols' header")
    m, n = int(toks[0]), int(toks[1])
    vals = [int(t) for t in toks[2:]]
    if len(vals) != m * n:
        raise ValueError(f"expected {m * n} entries, got {len(vals)}")
    return int_matrix([vals[i * n:(i + 1) * n] for i in range(m)], (m, n))


def format_matrix(a: np.ndarray) -> str:
    m, n = a.shape
    lines = [f"{m} {n}"]
    lines += [" ".join(str(int(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"
