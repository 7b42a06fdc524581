"""Exact linear algebra over ExactScalar: congruence diagonalization, Sylvester
signatures, characteristic polynomials and the 2x2 spectral classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polynomials import Poly
from .scalars import ES, ExactScalar, parse_scalar


class NotSymmetricError(ValueError):
    pass


class SingularError(ValueError):
    pass


class DimensionError(ValueError):
    pass


class ExactMatrix:
    """Immutable n x m matrix of ExactScalar entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(ES(x) for x in row) for row in rows)
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise DimensionError("ragged matrix")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int, m: Optional[int] = None) -> "ExactMatrix":
        m = n if m is None else m
        return ExactMatrix([[0] * m for _ in range(n)])

    @staticmethod
    def diag(*entries) -> "ExactMatrix":
        n = len(entries)
        return ExactMatrix([[entries[i] if i == j else 0 for j in range(n)]
                            for i in range(n)])

    @staticmethod
    def parse(obj) -> "ExactMatrix":
        """Exact matrix literal: {"n": int, "entries": [[str,...],...]} or a
        bare list of rows of entry strings."""
        if isinstance(obj, dict):
            entries = obj["entries"]
            n = obj.get("n")
            if n is not None and len(entries) != n:
                raise ValueError("matrix literal: n does not match entries")
        else:
            entries = obj
        rows = []
        for row in entries:
            rows.append([parse_scalar(e) if isinstance(e, str) else ES(e) for e in row])
        return ExactMatrix(rows)

    def to_literal(self) -> dict:
        return {"n": self.nrows,
                "entries": [[str(x) for x in row] for row in self.rows]}

    # -- shape ------------------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise DimensionError("matrix product shape mismatch")
            ot = other.rows
            return ExactMatrix([
                [sum((self.rows[i][k] * ot[k][j] for k in range(self.ncols)), ES(0))
                 for j in range(other.ncols)]
                for i in range(self.nrows)])
        return ExactMatrix([[a * other for a in r] for r in self.rows])

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.nrows == other.nrows and self.ncols == other.ncols and
                all(a == b for r1, r2 in zip(self.rows, other.rows)
                    for a, b in zip(r1, r2)))

    def __hash__(self):
        return hash((self.nrows, self.ncols))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)))

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def apply(self, vec: Sequence) -> list[ExactScalar]:
        v = [ES(x) for x in vec]
        return [sum((self.rows[i][k] * v[k] for k in range(self.ncols)), ES(0))
                for i in range(self.nrows)]

    def trace(self) -> ExactScalar:
        return sum((self.rows[i][i] for i in range(self.nrows)), ES(0))

    def det(self) -> ExactScalar:
        if not self.is_square():
            raise DimensionError("determinant of non-square matrix")
        n = self.nrows
        rows = [list(r) for r in self.rows]
        det = ES(1)
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not rows[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                return ES(0)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = ES(1) / rows[col][col]
            for r in range(col + 1, n):
                f = rows[r][col] * inv
                if f.is_zero():
                    continue
                for c in range(col, n):
                    rows[r][c] = rows[r][c] - f * rows[col][c]
        return det

    def rank(self) -> int:
        rows = [list(r) for r in self.rows]
        n, m = self.nrows, self.ncols
        rank = 0
        row = 0
        for col in range(m):
            piv = None
            for r in range(row, n):
                if not rows[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                continue
            rows[row], rows[piv] = rows[piv], rows[row]
            inv = ES(1) / rows[row][col]
            for r in range(row + 1, n):
                f = rows[r][col] * inv
                if not f.is_zero():
                    for c in range(col, m):
                        rows[r][c] = rows[r][c] - f * rows[row][c]
            rank += 1
            row += 1
            if row == n:
                break
        return rank

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise DimensionError("inverse of non-square matrix")
        n = self.nrows
        aug = [list(r) + [ES(1) if i == j else ES(0) for j in range(n)]
               for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not aug[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                raise SingularError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = ES(1) / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r == col or aug[r][col].is_zero():
                    continue
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return ExactMatrix([row[n:] for row in aug])

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows) for j in range(i + 1, self.nrows))

    def is_invertible(self) -> bool:
        return self.is_square() and not self.det().is_zero()

    def charpoly(self) -> Poly:
        """Monic characteristic polynomial det(t*I - M), by Faddeev-LeVerrier."""
        if not self.is_square():
            raise DimensionError("characteristic polynomial of non-square matrix")
        n = self.nrows
        coeffs = [ES(0)] * (n + 1)
        coeffs[n] = ES(1)
        M = ExactMatrix.identity(n)
        for k in range(1, n + 1):
            M = self * M
            c = -(M.trace() / k)
            coeffs[n - k] = c
            if k < n:
                M = M + ExactMatrix.diag(*([c] * n))
        return Poly(coeffs)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([list(r1) + list(r2) for r1, r2 in zip(self.rows, other.rows)])

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.rows) + "]"

    def __repr__(self):
        return f"ExactMatrix({self})"


@dataclass(frozen=True)
class SignaturePair:
    """Counts of positive and negative squares of a symmetric form."""
    p: int
    q: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)


def congruence_diagonalize(M: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """P with P*M*P^T diagonal, by symmetric elimination.

    Pivots prefer the first nonzero diagonal entry; if the diagonal vanishes,
    the first nonzero off-diagonal pair is folded onto the diagonal first.
    Returns (P, D) with D = P*M*P^T.
    """
    if not M.is_symmetric():
        raise NotSymmetricError("congruence diagonalization needs a symmetric matrix")
    n = M.nrows
    A = [[M.rows[i][j] for j in range(n)] for i in range(n)]
    P = [[ES(1) if i == j else ES(0) for j in range(n)] for i in range(n)]

    def row_op(dst: int, src: int, f: ExactScalar):
        # row_dst += f*row_src, symmetric counterpart on columns, tracked in P
        for c in range(n):
            A[dst][c] = A[dst][c] + f * A[src][c]
        for r in range(n):
            A[r][dst] = A[r][dst] + f * A[r][src]
        for c in range(n):
            P[dst][c] = P[dst][c] + f * P[src][c]

    def swap(i: int, j: int):
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        P[i], P[j] = P[j], P[i]

    for k in range(n):
        if A[k][k].is_zero():
            piv = next((i for i in range(k, n) if not A[i][i].is_zero()), None)
            if piv is not None:
                swap(k, piv)
            else:
                pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                             if not A[i][j].is_zero()), None)
                if pair is None:
                    break
                i, j = pair
                row_op(i, j, ES(1))
                if i != k:
                    swap(k, i)
        inv = ES(1) / A[k][k]
        for r in range(k + 1, n):
            if not A[r][k].is_zero():
                row_op(r, k, -A[r][k] * inv)
    return ExactMatrix(P), ExactMatrix(A)


def signature(M: ExactMatrix) -> SignaturePair:
    """Sylvester signature of a symmetric invertible matrix."""
    if not M.is_symmetric():
        raise NotSymmetricError("signature needs a symmetric matrix")
    if not M.is_invertible():
        raise SingularError("signature needs an invertible matrix")
    _, D = congruence_diagonalize(M)
    p = sum(1 for i in range(M.nrows) if D.rows[i][i].sign() > 0)
    q = sum(1 for i in range(M.nrows) if D.rows[i][i].sign() < 0)
    return SignaturePair(p, q)


def charpoly(M: ExactMatrix) -> Poly:
    return M.charpoly()


@dataclass(frozen=True, eq=False)
class SpectrumClass2:
    """Spectral class of the product D*D' for n = 2."""
    tag: str  # DistinctReal | ImaginaryPair | RepeatedDiagonalizable | RepeatedNonDiagonalizable
    eigenvalues: tuple  # exact eigenvalues, or (re, im) parts for ImaginaryPair


def spectrum2(D: ExactMatrix, Dprime: ExactMatrix) -> SpectrumClass2:
    """Classify the eigenvalues of D*D' for 2x2 symmetric invertible D, D'."""
    if D.nrows != 2 or Dprime.nrows != 2:
        raise DimensionError("spectrum2 requires 2x2 matrices")
    N = D * Dprime
    tr = N.trace()
    det = N.det()
    disc = tr * tr - 4 * det
    s = disc.sign()
    half = Fraction(1, 2)
    if s > 0:
        r = disc.sqrt()
        lam1 = (tr + r) * half
        lam2 = (tr - r) * half
        return SpectrumClass2("DistinctReal", (lam1, lam2))
    if s < 0:
        re = tr * half
        im = (-disc).sqrt() * half
        return SpectrumClass2("ImaginaryPair", (re, im))
    lam = tr * half
    shifted = N - ExactMatrix.diag(lam, lam)
    if shifted.rank() == 0:
        return SpectrumClass2("RepeatedDiagonalizable", (lam,))
    return SpectrumClass2("RepeatedNonDiagonalizable", (lam,))


def solve_linear(A: ExactMatrix, b: Sequence) -> Optional[list[ExactScalar]]:
    """One solution of A x = b, or None if inconsistent (A square or not)."""
    n, m = A.nrows, A.ncols
    aug = [list(A.rows[i]) + [ES(b[i])] for i in range(n)]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = ES(1) / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(n):
            if r != row and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, n):
        if not aug[r][m].is_zero():
            return None
    x = [ES(0)] * m
    for r, col in enumerate(pivots):
        x[col] = aug[r][m]
    return x
