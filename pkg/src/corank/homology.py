"""Integer and GF(2) linear algebra for first homology of surfaces.

All arithmetic is exact: ranks over the rationals come from fraction-free
(Bareiss) elimination and invariant factors from an integer Smith normal
form, both over Python's arbitrary-precision integers.  Matrices are plain
tuples of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]) if b else 0))
        for i in range(len(a))
    )


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def symplectic_matrix(g: int) -> Matrix:
    """Block-diagonal pairing matrix J on the basis a1,b1,...,ag,bg."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return as_matrix(rows)


def pairing(u: Sequence[int], v: Sequence[int]) -> int:
    """Symplectic intersection pairing u^T J v."""
    if len(u) != len(v) or len(u) % 2 != 0:
        raise ValueError("vectors must share an even length")
    total = 0
    for i in range(len(u) // 2):
        total += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i]
    return total


@dataclass(frozen=True)
class HomologyAction:
    """Automorphism of H_1 preserving the symplectic pairing."""

    matrix: Matrix

    def __post_init__(self) -> None:
        n = len(self.matrix)
        if n % 2 != 0 or any(len(row) != n for row in self.matrix):
            raise ValueError("matrix must be square of even size")

    @property
    def genus(self) -> int:
        return len(self.matrix) // 2

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return mat_vec(self.matrix, v)

    def __mul__(self, other: "HomologyAction") -> "HomologyAction":
        return HomologyAction(mat_mul(self.matrix, other.matrix))

    def preserves_pairing(self) -> bool:
        j = symplectic_matrix(self.genus)
        return mat_mul(mat_mul(transpose(self.matrix), j), self.matrix) == j


def identity_action(g: int) -> HomologyAction:
    return HomologyAction(mat_identity(2 * g))


def transvection(v: Sequence[int]) -> HomologyAction:
    """x -> x + pairing(x, v) v; the homology action of a twist along v."""
    n = len(v)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        c = pairing(e, v)
        cols.append([e[i] + c * v[i] for i in range(n)])
    return HomologyAction(as_matrix(list(map(list, zip(*cols)))))


def is_torelli(act: HomologyAction) -> bool:
    return act.matrix == mat_identity(len(act.matrix))


def rank_rational(a: Matrix) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    rows = [list(row) for row in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank = 0
    prev_pivot = 1
    col = 0
    while rank < m and col < n:
        pivot_row = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                rows[i][j] = (p * rows[i][j] - rows[i][col] * rows[rank][j]) // prev_pivot
            rows[i][col] = 0
        prev_pivot = p
        rank += 1
        col += 1
    return rank


def fixed_rank(act: HomologyAction) -> int:
    """Rank of the fixed subgroup of the action: dim ker(M - I) over Q."""
    n = len(act.matrix)
    diff = tuple(
        tuple(act.matrix[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    return n - rank_rational(diff)


def smith_with_transforms(a: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U a V = D in Smith normal form, U and V unimodular.

    Pivot choice: smallest nonzero absolute value, ties broken row-major.
    """
    rows = [list(row) for row in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    u = [list(r) for r in mat_identity(m)]
    v = [list(r) for r in mat_identity(n)]

    def swap_rows(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in rows:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        for j in range(n):
            rows[dst][j] += q * rows[src][j]
        for j in range(m):
            u[dst][j] += q * u[src][j]

    def add_col(src, dst, q):
        for r in rows:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def find_pivot(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = abs(rows[i][j])
                if x and (best is None or x < best[0]):
                    best = (x, i, j)
        return best

    t = 0
    while True:
        found = find_pivot(t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if rows[i][t]:
                    q = rows[i][t] // rows[t][t]
                    add_row(t, i, -q)
                    if rows[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if rows[t][j]:
                    q = rows[t][j] // rows[t][t]
                    add_col(t, j, -q)
                    if rows[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce the divisibility chain: fold in any entry the pivot misses
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if rows[i][j] % rows[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1
    for i in range(min(m, n)):
        if rows[i][i] < 0:
            for j in range(n):
                rows[i][j] = -rows[i][j]
            for j in range(m):
                u[i][j] = -u[i][j]
    return as_matrix(u), as_matrix(rows), as_matrix(v)


def smith_normal_form(a: Matrix) -> tuple[tuple[int, ...], int]:
    """Invariant factors of an integer matrix and its rank."""
    _, d, _ = smith_with_transforms(a)
    diag = tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)))
    rank = sum(1 for x in diag if x != 0)
    return diag, rank


def isotropic_rank_check(classes: Sequence[Sequence[int]]) -> tuple[bool, int]:
    """Whether all pairwise pairings vanish, and the rational rank of the span.

    For an isotropic family in a genus-g symplectic lattice the rank is
    asserted to be at most g.
    """
    vecs = [tuple(v) for v in classes]
    isotropic = all(
        pairing(vecs[i], vecs[j]) == 0 for i in range(len(vecs)) for j in range(i + 1, len(vecs))
    )
    rank = rank_rational(as_matrix(vecs)) if vecs else 0
    if isotropic and vecs:
        g = len(vecs[0]) // 2
        assert rank <= g, "isotropic span exceeds half the lattice rank"
    return isotropic, rank


def mod2(a):
    """Entrywise reduction mod 2 of a vector or matrix."""
    if a and isinstance(a[0], (list, tuple)):
        return tuple(tuple(x % 2 for x in row) for row in a)
    return tuple(x % 2 for x in a)


def det(a: Matrix) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    rows = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if pivot is None:
                return 0
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1]
