"""Exact scalars and linear-system solving.

Everything downstream reduces to deciding feasibility of a linear system
with rational (occasionally Gaussian-rational) coefficients.  Systems are
stored row-sparse; elimination is Gauss-Jordan with the leftmost nonzero
entry of each incoming row as pivot, so the reduced row space is the
unique reduced echelon form and results do not depend on timing or hash
order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

Rational = Fraction


class InputError(ValueError):
    """Malformed input to a solver (dimension mismatch and the like)."""


class GaussianRational:
    """Element re + im*i of Q(i), with i**2 == -1.

    Only needed by the handful of catalog fixtures that involve the
    imaginary unit.  Mixed arithmetic with int and Fraction is supported;
    results with zero imaginary part collapse back to Fraction.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    @staticmethod
    def make(re, im):
        """Build a scalar, collapsing to Fraction when the imaginary part is 0."""
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return self.make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def _inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if p[1] == 0:
            return self.make(self.re / p[0], self.im / p[0])
        return self * GaussianRational(*p)._inverse()

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self._inverse() * GaussianRational.make(*p)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return self.make(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


def as_scalar(value):
    """Coerce int/Fraction/GaussianRational to an exact scalar."""
    if isinstance(value, GaussianRational):
        return GaussianRational.make(value.re, value.im)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction))


@dataclass(frozen=True)
class QMatrix:
    """Dense row-major matrix of exact scalars."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InputError(
                f"QMatrix expects {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged rows")
        return cls(len(rows), ncols, tuple(as_scalar(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def matvec(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise InputError("vector length does not match column count")
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0))
                for i in range(self.rows)]


@dataclass
class AffineSolveResult:
    """Affine solution set {particular + span(nullspace_basis)} of A x = b.

    ``witness`` is the index of the first equation found inconsistent with
    the ones before it (only set when infeasible).
    """

    feasible: bool
    particular: list | None
    nullspace_basis: list = field(default_factory=list)
    rank: int = 0
    witness: int | None = None


class SparseSystem:
    """Row-sparse linear system over an exact field.

    Rows are dicts column -> coefficient.  ``labels`` carries an optional
    human-readable tag per row, used for obstruction witnesses.
    """

    def __init__(self, ncols: int = 0):
        self.ncols = ncols
        self.rows: list[dict] = []
        self.rhs: list = []
        self.labels: list = []

    def add_column(self) -> int:
        self.ncols += 1
        return self.ncols - 1

    def add_row(self, coeffs: dict, rhs=0, label=None):
        row = {c: v for c, v in coeffs.items() if v != 0}
        for c in row:
            if not 0 <= c < self.ncols:
                raise InputError(f"column {c} out of range")
        self.rows.append(row)
        self.rhs.append(rhs)
        self.labels.append(label)

    def __len__(self):
        return len(self.rows)


class _Reducer:
    """Incremental Gauss-Jordan elimination over a sparse row stream.

    Pivot rows are kept fully reduced: no pivot row contains another
    pivot column.  Hence a single pass over an incoming row's pivot
    columns reduces it completely.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[dict, object]] = {}

    def reduce(self, row: dict, rhs):
        row = dict(row)
        for c in [c for c in row if c in self.pivots]:
            a = row.get(c)
            if not a:
                continue
            prow, prhs = self.pivots[c]
            for k, v in prow.items():
                nv = row.get(k, 0) - a * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rhs = rhs - a * prhs
        return row, rhs

    def insert(self, row: dict, rhs) -> bool:
        """Add a row; return False if it is inconsistent with earlier rows."""
        row, rhs = self.reduce(row, rhs)
        if not row:
            return rhs == 0
        pc = min(row)
        a = row[pc]
        if a != 1:
            row = {k: v / a for k, v in row.items()}
            rhs = rhs / a
        for c, (prow, prhs) in list(self.pivots.items()):
            b = prow.get(pc)
            if not b:
                continue
            for k, v in row.items():
                nv = prow.get(k, 0) - b * v
                if nv:
                    prow[k] = nv
                else:
                    prow.pop(k, None)
            self.pivots[c] = (prow, prhs - b * rhs)
        self.pivots[pc] = (row, rhs)
        return True


def solve_sparse(system: SparseSystem, *, want_nullspace: bool = True) -> AffineSolveResult:
    """Solve a SparseSystem exactly; see AffineSolveResult."""
    red = _Reducer()
    for idx, (row, rhs) in enumerate(zip(system.rows, system.rhs)):
        if not red.insert(row, rhs):
            return AffineSolveResult(False, None, [], len(red.pivots), witness=idx)
    n = system.ncols
    zero = Fraction(0)
    particular = [zero] * n
    for c, (prow, prhs) in red.pivots.items():
        particular[c] = prhs
    basis = []
    if want_nullspace:
        free = [c for c in range(n) if c not in red.pivots]
        # column -> pivot rows that mention it
        touching: dict[int, list[int]] = {}
        for pc in sorted(red.pivots):
            for k in red.pivots[pc][0]:
                if k != pc:
                    touching.setdefault(k, []).append(pc)
        for fc in free:
            v = [zero] * n
            v[fc] = Fraction(1)
            for pc in touching.get(fc, ()):
                v[pc] = -red.pivots[pc][0][fc]
            basis.append(v)
    return AffineSolveResult(True, particular, basis, len(red.pivots))


def _dense_to_sparse(A: QMatrix, b: Sequence) -> SparseSystem:
    if len(b) != A.rows:
        raise InputError(f"right-hand side has {len(b)} entries, matrix has {A.rows} rows")
    sys_ = SparseSystem(A.cols)
    for i in range(A.rows):
        sys_.add_row({j: v for j, v in enumerate(A.row(i)) if v != 0}, as_scalar(b[i]))
    return sys_


def _as_qmatrix(A) -> QMatrix:
    return A if isinstance(A, QMatrix) else QMatrix.from_rows(A)


def solve_affine(A, b: Sequence) -> AffineSolveResult:
    """Solve A x = b exactly.

    Returns one particular solution (free variables set to zero) and a
    basis of ker(A) with one vector per non-pivot column, in column order.
    """
    return solve_sparse(_dense_to_sparse(_as_qmatrix(A), b))


def is_feasible(A, b: Sequence) -> bool:
    """True iff b lies in the column space of A."""
    return solve_sparse(_dense_to_sparse(_as_qmatrix(A), b), want_nullspace=False).feasible

