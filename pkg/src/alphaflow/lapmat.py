"""Weighted Laplacians over F_q, rank, and maximal nonsingular principal minors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import Disconnected, ZeroWeight
from .ffield import FieldElem, FieldParams, field_make
from .graph import Multigraph, is_connected
from .treesum import WeightAssignment, _check_weights, _field_of, det_codes


@dataclass(frozen=True)
class SymmetricFqMatrix:
    field: FieldParams
    codes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.codes)
        for i, row in enumerate(self.codes):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j in range(i):
                if row[j] != self.codes[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")

    @classmethod
    def from_rows(cls, fp: FieldParams, rows: Sequence[Sequence[int | FieldElem]]) -> SymmetricFqMatrix:
        def code(x) -> int:
            return x.code if isinstance(x, FieldElem) else fp(int(x)).code
        return cls(fp, tuple(tuple(code(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.codes)

    def entry(self, i: int, j: int) -> FieldElem:
        return self.field.from_code(self.codes[i][j])

    def principal(self, idx: Sequence[int]) -> list[list[int]]:
        return [[self.codes[i][j] for j in idx] for i in idx]

    def to_int_rows(self) -> list[list[int]]:
        return [list(r) for r in self.codes]


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    pivot_set: frozenset[int]
    eta_minor: int
    det_minor: FieldElem
    wstar: frozenset[int] | None = None


def laplacian(g: Multigraph, a: WeightAssignment, fp: FieldParams | None = None) -> SymmetricFqMatrix:
    _check_weights(g, a)
    fp = _field_of(a, fp)
    n = g.n_vertices
    m = [[0] * n for _ in range(n)]
    for (u, v), w in zip(g.edges, a):
        c = w.code
        m[u][u] = fp.add(m[u][u], c)
        m[v][v] = fp.add(m[v][v], c)
        m[u][v] = fp.sub(m[u][v], c)
        m[v][u] = fp.sub(m[v][u], c)
    return SymmetricFqMatrix(fp, tuple(tuple(r) for r in m))


def rank_fq(m: SymmetricFqMatrix) -> int:
    """Rank by ordinary row reduction (no use of symmetry)."""
    fp = m.field
    rows = m.to_int_rows()
    n = m.n
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv_p = fp.inv(rows[r][c])
        for i in range(n):
            if i != r and rows[i][c]:
                f = fp.mul(rows[i][c], inv_p)
                rows[i] = [fp.sub(x, fp.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def max_nonsingular_principal(m: SymmetricFqMatrix) -> RankCertificate:
    """Symmetric congruence elimination with principal pivots.

    Takes the lowest-index nonzero diagonal entry as a 1x1 pivot; when the
    remaining diagonal is all zero, takes the lowest-index nonzero off-diagonal
    pair as a 2x2 block ``[[0, a], [a, 0]]`` (determinant ``-a^2``). The pivot
    set indexes a nonsingular principal submatrix of maximal order and its
    determinant is the product of the pivot-block determinants.
    """
    fp = m.field
    work = m.to_int_rows()
    active = list(range(m.n))
    pivots: list[int] = []
    det = 1

    while active:
        i = next((k for k in active if work[k][k] != 0), None)
        if i is not None:
            d = work[i][i]
            det = fp.mul(det, d)
            inv_d = fp.inv(d)
            active.remove(i)
            pivots.append(i)
            for j in active:
                if work[j][i]:
                    f = fp.mul(work[j][i], inv_d)
                    for k in active:
                        work[j][k] = fp.sub(work[j][k], fp.mul(f, work[i][k]))
            continue
        pair = next(((i, j) for i, j in itertools.combinations(active, 2) if work[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        a = work[i][j]
        det = fp.mul(det, fp.neg(fp.mul(a, a)))
        inv_a = fp.inv(a)
        active.remove(i)
        active.remove(j)
        pivots.extend((i, j))
        col_i = {k: work[k][i] for k in active}
        col_j = {k: work[k][j] for k in active}
        for k in active:
            for l in active:
                t = fp.add(fp.mul(col_i[k], work[j][l]), fp.mul(col_j[k], work[i][l]))
                work[k][l] = fp.sub(work[k][l], fp.mul(t, inv_a))

    return RankCertificate(
        rank=len(pivots),
        pivot_set=frozenset(pivots),
        eta_minor=fp.eta(det),
        det_minor=fp.from_code(det),
    )


def principal_minor(m: SymmetricFqMatrix, idx: Iterable[int]) -> FieldElem:
    idx = sorted(idx)
    return m.field.from_code(det_codes(m.field, m.principal(idx)))


def maximal_principal_etas(m: SymmetricFqMatrix) -> tuple[int, set[int]]:
    """Rank and the set of eta values over *all* nonsingular principal minors of that order."""
    r = rank_fq(m)
    etas = set()
    for idx in itertools.combinations(range(m.n), r):
        det = det_codes(m.field, m.principal(idx))
        if det:
            etas.add(m.field.eta(det))
    return r, etas


def wstar(g: Multigraph, a: WeightAssignment, fp: FieldParams | None = None) -> RankCertificate:
    """Rank certificate of L(G, alpha) with the complementary vertex set W*."""
    _check_weights(g, a)
    fp = _field_of(a, fp)
    if not is_connected(g):
        raise Disconnected("W* is defined for connected graphs")
    if any(w.code == 0 for w in a):
        raise ZeroWeight("all edge weights must be nonzero")
    cert = max_nonsingular_principal(laplacian(g, a, fp))
    rest = frozenset(range(g.n_vertices)) - cert.pivot_set
    return RankCertificate(cert.rank, cert.pivot_set, cert.eta_minor, cert.det_minor, rest)


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss elimination)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_laplacian(g: Multigraph, weights: Sequence[int]) -> list[list[int]]:
    n = g.n_vertices
    m = [[0] * n for _ in range(n)]
    for (u, v), w in zip(g.edges, weights):
        m[u][u] += w
        m[v][v] += w
        m[u][v] -= w
        m[v][u] -= w
    return m


def minor_divisibility_violations(g: Multigraph, weights: Sequence[int], p: int) -> list[tuple[int, ...]]:
    """Principal minors of order r + i not divisible by p^i, r the rank over F_p.

    ``weights`` are integer lifts of prime-field weights. An empty list means
    every larger principal minor carries the expected power of p.
    """
    lap = integer_laplacian(g, weights)
    fp = field_make(p)
    r = rank_fq(SymmetricFqMatrix(fp, tuple(tuple(x % p for x in row) for row in lap)))
    bad = []
    for size in range(r + 1, g.n_vertices + 1):
        for idx in itertools.combinations(range(g.n_vertices), size):
            det = integer_det([[lap[i][j] for j in idx] for i in idx])
            if det % p ** (size - r):
                bad.append(idx)
    return bad
