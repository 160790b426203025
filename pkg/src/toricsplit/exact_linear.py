"""Exact linear algebra over the integers and rationals.

Everything is elementary row reduction kept deterministic so callers can
rely on canonical output: ``hnf`` returns the reduced row Hermite normal
form and ``solve_integral`` the particular solution whose free coordinates
vanish in HNF coordinates.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Rat = int | Fraction


@dataclass(frozen=True)
class IntMatrix:
    """Immutable arbitrary-precision integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
            for x in row:
                if not isinstance(x, int):
                    raise TypeError(f"non-integer entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        entries = tuple(tuple(row) for row in rows)
        ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(list(zip(*self.entries))) if self.rows else IntMatrix(0, 0, ())

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        cols = list(zip(*other.entries)) if other.rows else []
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries]
        )


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and g = s*a + t*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form of ``a``.

    Returns (H, U) with U unimodular, U @ a == H, H in row-echelon form with
    positive pivots and every entry above a pivot reduced into [0, pivot).
    The reduced form is the unique canonical representative of the row
    lattice, so equal-lattice inputs produce identical H.
    """
    m, n = a.rows, a.cols
    h = [list(row) for row in a.entries]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivot_row = 0
    for col in range(n):
        if pivot_row == m:
            break
        nz = [i for i in range(pivot_row, m) if h[i][col] != 0]
        if not nz:
            continue
        if nz[0] != pivot_row:
            h[pivot_row], h[nz[0]] = h[nz[0]], h[pivot_row]
            u[pivot_row], u[nz[0]] = u[nz[0]], u[pivot_row]
        for i in range(pivot_row + 1, m):
            if h[i][col] == 0:
                continue
            if h[i][col] % h[pivot_row][col] == 0:
                q = h[i][col] // h[pivot_row][col]
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
                continue
            g, s, t = _xgcd(h[pivot_row][col], h[i][col])
            pc, ic = h[pivot_row][col] // g, h[i][col] // g
            h[pivot_row], h[i] = (
                [s * x + t * y for x, y in zip(h[pivot_row], h[i])],
                [-ic * x + pc * y for x, y in zip(h[pivot_row], h[i])],
            )
            u[pivot_row], u[i] = (
                [s * x + t * y for x, y in zip(u[pivot_row], u[i])],
                [-ic * x + pc * y for x, y in zip(u[pivot_row], u[i])],
            )
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return IntMatrix.from_rows(h), IntMatrix.from_rows(u)


def solve_integral(
    a: IntMatrix, b: IntMatrix
) -> tuple[IntMatrix, list[tuple[int, ...]]] | None:
    """Solve a @ X == b over the integers.

    ``b`` may have several columns; each is solved against the same kernel.
    Returns (X, kernel_basis) where the basis spans {v : a @ v = 0} over the
    integers, or None when no integral solution exists.  The particular
    solution is canonical: its free coordinates vanish in the coordinates
    induced by hnf of the transpose.
    """
    if a.rows != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows} equations, {b.rows} right-hand rows")
    n_unknowns = a.cols
    hp, up = hnf(a.transpose())
    pivots: list[int] = []
    for t in range(hp.rows):
        p = next((j for j in range(hp.cols) if hp.entries[t][j] != 0), None)
        if p is None:
            break
        pivots.append(p)
    rank = len(pivots)
    kernel = [up.entries[t] for t in range(rank, n_unknowns)]

    x_cols: list[list[int]] = []
    for c_idx in range(b.cols):
        c = b.column(c_idx)
        y = [0] * n_unknowns
        ok = True
        for t, p in enumerate(pivots):
            s = c[p] - sum(hp.entries[u_i][p] * y[u_i] for u_i in range(t))
            piv = hp.entries[t][p]
            if s % piv:
                ok = False
                break
            y[t] = s // piv
        if not ok:
            return None
        for i in range(a.rows):
            if sum(hp.entries[t][i] * y[t] for t in range(rank)) != c[i]:
                return None
        x_cols.append([sum(up.entries[t][j] * y[t] for t in range(rank)) for j in range(n_unknowns)])

    x = IntMatrix.from_rows([list(col) for col in zip(*x_cols)]) if x_cols else IntMatrix(n_unknowns, 0, tuple(() for _ in range(n_unknowns)))
    return x, kernel


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    a = [list(row) for row in rows]
    for row in a:
        if len(row) != n:
            raise ValueError("determinant of a non-square matrix")
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
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref(rows: Sequence[Sequence[Rat]]) -> tuple[list[list[Fraction]], list[int]]:
    # Deterministic reduced row echelon form over exact rationals.
    m = [[Fraction(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def rat_rank(rows: Sequence[Sequence[Rat]]) -> int:
    return len(_rref(rows)[1])


def rat_kernel(rows: Sequence[Sequence[Rat]]) -> list[list[Fraction]]:
    """Basis of the right null space over the rationals, one vector per free column."""
    if not rows:
        return []
    m, pivots = _rref(rows)
    nc = len(rows[0])
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for t, p in enumerate(pivots):
            v[p] = -m[t][f]
        basis.append(v)
    return basis


def rat_invert(rows: Sequence[Sequence[Rat]]) -> list[list[Fraction]]:
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(rows)]
    m, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in m]


def rat_matmul(
    a: Sequence[Sequence[Rat]], b: Sequence[Sequence[Rat]]
) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def rat_solve(a: Sequence[Sequence[Rat]], rhs: Sequence[Rat]) -> list[Fraction] | None:
    """One rational solution of a @ x == rhs with free coordinates zero, or None."""
    if len(a) != len(rhs):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    if not a:
        return []
    nc = len(a[0])
    aug = [list(row) + [r] for row, r in zip(a, rhs)]
    m, pivots = _rref(aug)
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for t, p in enumerate(pivots):
        x[p] = m[t][nc]
    return x
