"""Exact linear algebra over the rationals and over polynomial rings.

RatMatrix covers the scalar side: elimination, determinants, inverses and
general linear solving with an explicit nullspace.  PolyMatrix covers
matrices of polynomials, where determinants use cofactor expansion for
small sizes and fraction-free elimination above that, so every division
performed is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from keller_lab.poly import Poly, PolyMap, as_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RatMatrix:
    """Dense matrix of Fractions with exact operations."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data: Iterable[Iterable[int | Fraction]]):
        data = [[as_rational(x) for x in row] for row in rows_data]
        if not data:
            raise ValueError("matrix needs at least one row")
        width = len(data[0])
        if width == 0 or any(len(row) != width for row in data):
            raise ValueError("rows must be non-empty and of equal length")
        self.rows = len(data)
        self.cols = width
        self.data = data

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)]
                    for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[_ZERO] * cols for _ in range(rows)])

    @classmethod
    def column(cls, entries: Sequence[int | Fraction]) -> "RatMatrix":
        return cls([[e] for e in entries])

    def copy(self) -> "RatMatrix":
        return RatMatrix([row[:] for row in self.data])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.data == other.data

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by "
                f"{other.rows}x{other.cols}")
        out = [[sum((self.data[i][k] * other.data[k][j]
                     for k in range(self.cols)), _ZERO)
                for j in range(other.cols)] for i in range(self.rows)]
        return RatMatrix(out)

    def apply(self, vec: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix width")
        v = [as_rational(x) for x in vec]
        return tuple(sum((row[j] * v[j] for j in range(self.cols)), _ZERO)
                     for row in self.data)

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self.data[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def _eliminated(self) -> tuple[list[list[Fraction]], list[int], Fraction]:
        """Row echelon form; returns (matrix, pivot columns, det scale).

        The determinant scale tracks row swaps (sign only; rows are not
        rescaled during elimination of the returned echelon form).
        """
        m = [row[:] for row in self.data]
        sign = _ONE
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if m[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            if pivot_row != r:
                m[r], m[pivot_row] = m[pivot_row], m[r]
                sign = -sign
            pivot = m[r][c]
            for i in range(r + 1, self.rows):
                if m[i][c]:
                    factor = m[i][c] / pivot
                    m[i][c] = _ZERO
                    for j in range(c + 1, self.cols):
                        m[i][j] -= factor * m[r][j]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots, sign

    def rank(self) -> int:
        _, pivots, _ = self._eliminated()
        return len(pivots)

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        m, pivots, sign = self._eliminated()
        if len(pivots) < self.rows:
            return _ZERO
        # full rank and square: pivot columns are exactly 0..n-1
        out = sign
        for i in range(self.rows):
            out *= m[i][i]
        return out

    def inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse requires a square matrix")
        n = self.rows
        m = [row[:] + [_ONE if i == j else _ZERO for j in range(n)]
             for i, row in enumerate(self.data)]
        for c in range(n):
            pivot_row = next((i for i in range(c, n) if m[i][c]), None)
            if pivot_row is None:
                raise ValueError("matrix is singular")
            if pivot_row != c:
                m[c], m[pivot_row] = m[pivot_row], m[c]
            pivot = m[c][c]
            m[c] = [x / pivot for x in m[c]]
            for i in range(n):
                if i != c and m[i][c]:
                    factor = m[i][c]
                    m[i] = [x - factor * y for x, y in zip(m[i], m[c])]
        return RatMatrix([row[n:] for row in m])

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]"
                         for row in self.data)

    def __repr__(self) -> str:
        return f"RatMatrix({self.data!r})"


@dataclass(frozen=True)
class SolveResult:
    """Outcome of solving A x = b over the rationals.

    solution is one particular solution (None when the system is
    inconsistent); nullspace is a basis of ker A, so the full solution set
    is solution + span(nullspace).
    """

    solution: tuple[Fraction, ...] | None
    nullspace: tuple[tuple[Fraction, ...], ...]
    rank: int

    @property
    def consistent(self) -> bool:
        return self.solution is not None

    @property
    def unique(self) -> bool:
        return self.solution is not None and not self.nullspace


def rat_solve(a: RatMatrix, b: Sequence[int | Fraction]) -> SolveResult:
    """Solve A x = b exactly, reporting inconsistency or free directions."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match row count")
    rows, cols = a.rows, a.cols
    m = [row[:] + [as_rational(b[i])] for i, row in enumerate(a.data)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        m[r] = [x / pivot for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    rank = len(pivots)
    for i in range(rank, rows):
        if m[i][cols]:
            return SolveResult(None, (), rank)
    solution = [_ZERO] * cols
    for i, c in enumerate(pivots):
        solution[c] = m[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for c in free:
        vec = [_ZERO] * cols
        vec[c] = _ONE
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][c]
        basis.append(tuple(vec))
    return SolveResult(tuple(solution), tuple(basis), rank)


def linear_poly_map(matrix: RatMatrix) -> PolyMap:
    """The linear map X -> M X as a PolyMap."""
    if matrix.rows != matrix.cols:
        raise ValueError("linear map requires a square matrix")
    n = matrix.rows
    comps = []
    for i in range(n):
        p = Poly.zero(n)
        for j in range(n):
            c = matrix.data[i][j]
            if c:
                p = p + Poly.variable(n, j + 1) * c
        comps.append(p)
    return PolyMap(comps)


class PolyMatrix:
    """Square-or-rectangular matrix of Poly entries (one shared dimension n)."""

    __slots__ = ("rows", "cols", "n", "data")

    def __init__(self, rows_data: Iterable[Iterable[Poly]]):
        data = [list(row) for row in rows_data]
        if not data or not data[0]:
            raise ValueError("matrix needs at least one entry")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("rows must have equal length")
        n = data[0][0].n
        for row in data:
            for p in row:
                if not isinstance(p, Poly) or p.n != n:
                    raise ValueError("entries must be Poly of one dimension")
        self.rows = len(data)
        self.cols = width
        self.n = n
        self.data = data

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.data[i][j]

    def eval(self, point: Sequence[int | Fraction]) -> RatMatrix:
        return RatMatrix([[p.eval(point) for p in row] for row in self.data])

    def det(self) -> Poly:
        """Exact determinant.

        Cofactor expansion up to 4x4 (cheap, no divisions), fraction-free
        elimination beyond that: intermediate entries stay true minors and
        every division is exact, which keeps expression swell polynomial
        instead of exponential.
        """
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        if self.rows <= 4:
            return _det_cofactor(self.data, self.n)
        return _det_bareiss(self.data, self.n)


def _det_cofactor(m: list[list[Poly]], n: int) -> Poly:
    size = len(m)
    if size == 1:
        return m[0][0]
    if size == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Poly.zero(n)
    # expand along the column with the most zero entries
    best = min(range(size),
               key=lambda j: sum(0 if m[i][j].is_zero() else 1
                                 for i in range(size)))
    for i in range(size):
        entry = m[i][best]
        if entry.is_zero():
            continue
        minor = [[m[r][c] for c in range(size) if c != best]
                 for r in range(size) if r != i]
        cof = entry * _det_cofactor(minor, n)
        total = total + cof if (i + best) % 2 == 0 else total - cof
    return total


def _det_bareiss(m: list[list[Poly]], n: int) -> Poly:
    size = len(m)
    a = [row[:] for row in m]
    sign = 1
    prev = Poly.const(n, 1)
    for k in range(size - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, size)
                         if not a[i][k].is_zero()), None)
            if swap is None:
                return Poly.zero(n)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.divexact(prev)
            a[i][k] = Poly.zero(n)
        prev = a[k][k]
    out = a[size - 1][size - 1]
    return out if sign == 1 else -out
