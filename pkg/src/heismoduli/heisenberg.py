"""The Heisenberg group, its Lie algebra, and metric invariants.

Group elements are written g(x, y, s) with x, y in R^n and s in R; the
algebra carries the standard basis (X_1..X_n, Y_1..Y_n, Z) and splits
as R^{2n} + center.  A normalized metric is a pair (h, g): a Gram
matrix h on the horizontal R^{2n} and a scalar g > 0 on the center.
The symplectic spectrum d_1 <= ... <= d_n of a Gram matrix Y collects
the positive numbers with +-i d_k the eigenvalues of Y^{-1} J; it is
invariant under congruence by symplectic similitudes and drives the
curvature bound and the Heisenberg-type test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    NotOrthonormal,
    NotSimilitude,
    OddDimension,
    PairingFailure,
    Singular,
    UnsupportedPlane,
)
from .lattice import DivisibilityTuple
from .linalg import (
    FLOAT,
    RATIONAL,
    DenseMatrix,
    Scalar,
    SpdMatrix,
    congruence,
    determinant,
    matrix_from_json,
    matrix_to_json,
    scalar_from_json,
    scalar_to_json,
)

PAIRING_TOL = 1e-6
SIMILITUDE_TOL = 1e-9
ORTHONORMAL_TOL = 1e-9


def _coerce_vector(v) -> tuple[Scalar, ...]:
    if any(isinstance(x, (float, np.floating)) for x in v):
        return tuple(float(x) for x in v)
    return tuple(Fraction(x) for x in v)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element g(x, y, s)."""

    x: tuple[Scalar, ...]
    y: tuple[Scalar, ...]
    s: Scalar

    def __post_init__(self):
        object.__setattr__(self, "x", _coerce_vector(self.x))
        object.__setattr__(self, "y", _coerce_vector(self.y))
        if len(self.x) != len(self.y):
            raise DimensionMismatch("x and y must have equal length")

    @property
    def n(self) -> int:
        return len(self.x)

    @staticmethod
    def identity(n: int) -> "HeisenbergElement":
        zero = (Fraction(0),) * n
        return HeisenbergElement(zero, zero, Fraction(0))

    def to_json(self) -> dict:
        return {
            "x": [scalar_to_json(v) for v in self.x],
            "y": [scalar_to_json(v) for v in self.y],
            "s": scalar_to_json(self.s),
        }

    @staticmethod
    def from_json(obj: dict) -> "HeisenbergElement":
        def parse(v):
            return Fraction(v) if isinstance(v, (str, int)) else float(v)

        return HeisenbergElement(
            tuple(parse(v) for v in obj["x"]),
            tuple(parse(v) for v in obj["y"]),
            parse(obj["s"]),
        )


@dataclass(frozen=True)
class LieAlgebraVector:
    """Algebra element X(x, y, s) in the standard basis."""

    x: tuple[Scalar, ...]
    y: tuple[Scalar, ...]
    s: Scalar

    def __post_init__(self):
        object.__setattr__(self, "x", _coerce_vector(self.x))
        object.__setattr__(self, "y", _coerce_vector(self.y))
        if len(self.x) != len(self.y):
            raise DimensionMismatch("x and y must have equal length")

    @property
    def n(self) -> int:
        return len(self.x)

    def horizontal(self) -> tuple[Scalar, ...]:
        return self.x + self.y


def group_mul(p: HeisenbergElement, q: HeisenbergElement) -> HeisenbergElement:
    """g(x,y,s) * g(x',y',s') = g(x+x', y+y', s+s'+<x,y'>)."""
    if p.n != q.n:
        raise DimensionMismatch("group elements of different dimension")
    x = tuple(a + b for a, b in zip(p.x, q.x))
    y = tuple(a + b for a, b in zip(p.y, q.y))
    return HeisenbergElement(x, y, p.s + q.s + _dot(p.x, q.y))


def group_inv(p: HeisenbergElement) -> HeisenbergElement:
    """g(x,y,s)^{-1} = g(-x, -y, -s + <x,y>)."""
    return HeisenbergElement(
        tuple(-a for a in p.x), tuple(-a for a in p.y), -p.s + _dot(p.x, p.y)
    )


def exp_map(v: LieAlgebraVector) -> HeisenbergElement:
    """exp X(x,y,s) = g(x, y, s + <x,y>/2)."""
    half = Fraction(1, 2) if not isinstance(v.s, float) else 0.5
    return HeisenbergElement(v.x, v.y, v.s + half * _dot(v.x, v.y))


def log_map(p: HeisenbergElement) -> LieAlgebraVector:
    """log g(x,y,s) = X(x, y, s - <x,y>/2)."""
    half = Fraction(1, 2) if not isinstance(p.s, float) else 0.5
    return LieAlgebraVector(p.x, p.y, p.s - half * _dot(p.x, p.y))


def bracket(v: LieAlgebraVector, w: LieAlgebraVector) -> LieAlgebraVector:
    """[v, w] = X(0, 0, A(v, w)) with A the standard symplectic form."""
    if v.n != w.n:
        raise DimensionMismatch("algebra vectors of different dimension")
    a = _dot(v.x, w.y) - _dot(v.y, w.x)
    zero = tuple(0 * c for c in v.x)
    return LieAlgebraVector(zero, zero, a)


@dataclass(frozen=True)
class SymplecticFormJ:
    """The standard symplectic structure [[0, Id], [-Id, 0]] on R^{2n}."""

    n: int

    def matrix(self, mode: str = RATIONAL) -> DenseMatrix:
        return symplectic_j(self.n, mode)


def symplectic_j(n: int, mode: str = RATIONAL) -> DenseMatrix:
    one = Fraction(1) if mode == RATIONAL else 1.0
    zero = Fraction(0) if mode == RATIONAL else 0.0
    rows = []
    for i in range(2 * n):
        row = [zero] * (2 * n)
        if i < n:
            row[n + i] = one
        else:
            row[i - n] = -one
        rows.append(tuple(row))
    return DenseMatrix(tuple(rows), mode)


def symplectic_similitude_check(beta: DenseMatrix) -> int | None:
    """Return +1 if beta^T J beta = J, -1 if it equals -J, None otherwise.

    Entrywise exact in rational mode; 1e-9 relative in float mode.
    """
    if not beta.is_square:
        raise OddDimension("matrix must be square of even size")
    if beta.rows % 2:
        raise OddDimension("matrix size must be even")
    n = beta.rows // 2
    J = symplectic_j(n, beta.mode)
    product = congruence(J, beta)
    for eps in (1, -1):
        target = J if eps == 1 else DenseMatrix(
            tuple(tuple(-x for x in r) for r in J.entries), J.mode
        )
        if beta.mode == RATIONAL:
            if product.entries == target.entries:
                return eps
        else:
            scale = max(1.0, max(abs(x) for r in product.entries for x in r))
            if all(
                abs(a - b) <= SIMILITUDE_TOL * scale
                for ra, rb in zip(product.entries, target.entries)
                for a, b in zip(ra, rb)
            ):
                return eps
    return None


@dataclass(frozen=True)
class AutomorphismDescriptor:
    """Automorphism data: scaling a, shear w, similitude beta of sign epsilon."""

    a: Scalar
    w: tuple[Scalar, ...]
    beta: DenseMatrix
    epsilon: int

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("scaling factor a must be nonzero")
        object.__setattr__(self, "w", _coerce_vector(self.w))
        if len(self.w) != self.beta.rows:
            raise DimensionMismatch("w must have length 2n")
        eps = symplectic_similitude_check(self.beta)
        if eps is None or eps != self.epsilon:
            raise NotSimilitude("beta does not scale J by the declared sign")

    @staticmethod
    def from_parts(a: Scalar, w, beta: DenseMatrix) -> "AutomorphismDescriptor":
        eps = symplectic_similitude_check(beta)
        if eps is None:
            raise NotSimilitude("beta does not scale J by +-1")
        return AutomorphismDescriptor(a, tuple(w), beta, eps)


def automorphism_matrix(d: AutomorphismDescriptor) -> DenseMatrix:
    """Matrix of the automorphism on the algebra basis: alpha(a,w) . diag(beta, eps)."""
    two_n = d.beta.rows
    mode = d.beta.mode if not isinstance(d.a, float) else FLOAT
    a = Fraction(d.a) if mode == RATIONAL and not isinstance(d.a, float) else float(d.a)
    beta = d.beta if d.beta.mode == mode else d.beta.to_float()
    w = d.w if mode == RATIONAL else tuple(float(x) for x in d.w)
    zero = Fraction(0) if mode == RATIONAL else 0.0
    rows = []
    for i in range(two_n):
        rows.append(tuple(a * beta.entries[i][j] for j in range(two_n)) + (zero,))
    last = tuple(
        sum(w[i] * beta.entries[i][j] for i in range(two_n)) for j in range(two_n)
    ) + (a * a * d.epsilon,)
    rows.append(last)
    return DenseMatrix(tuple(rows), mode)


def pullback_metric(m: SpdMatrix, phi: DenseMatrix) -> SpdMatrix:
    """phi^T m phi, the pullback of the metric along phi."""
    if phi.rows != m.n or not phi.is_square:
        raise DimensionMismatch("pullback requires a square matrix of matching size")
    det = determinant(phi)
    if det == 0:
        raise Singular("pullback along a singular matrix")
    return SpdMatrix(congruence(m, phi))


def delta_matrix(r: DivisibilityTuple) -> DenseMatrix:
    """diag(r_1, ..., r_n, 1, ..., 1) of size 2n."""
    diag = r.scaling_diagonal()
    n2 = 2 * r.n
    return DenseMatrix.from_rows(
        [[diag[i] if i == j else 0 for j in range(n2)] for i in range(n2)], RATIONAL
    )


def gamma_r_membership(p: HeisenbergElement, r: DivisibilityTuple) -> bool:
    """(x, y) in delta_r Z^{2n} and s in Z."""
    if p.n != r.n:
        raise DimensionMismatch("element dimension does not match tuple length")
    for xi, ri in zip(p.x, r.r):
        q = Fraction(xi) / ri
        if q.denominator != 1:
            return False
    for yi in p.y:
        if Fraction(yi).denominator != 1:
            return False
    return Fraction(p.s).denominator == 1


@dataclass(frozen=True)
class NormalizedMetric:
    """Block-diagonal metric (h, g) on a quotient fixed by the tuple r."""

    h: SpdMatrix
    g: Scalar
    r: DivisibilityTuple

    def __post_init__(self):
        if self.h.n % 2:
            raise OddDimension("horizontal Gram matrix must have even size")
        if self.h.n != 2 * self.r.n:
            raise DimensionMismatch("h must be 2n x 2n for a length-n tuple")
        if self.g <= 0:
            raise ValueError("central scalar g must be positive")

    @property
    def n(self) -> int:
        return self.r.n

    def to_json(self) -> dict:
        return {
            "h": matrix_to_json(self.h),
            "g": scalar_to_json(self.g),
            "r": list(self.r.r),
        }

    @staticmethod
    def from_json(obj: dict) -> "NormalizedMetric":
        h = SpdMatrix(matrix_from_json(obj["h"]))
        g = scalar_from_json(obj["g"], RATIONAL if isinstance(obj["g"], (str, int)) else FLOAT)
        return NormalizedMetric(h, g, DivisibilityTuple(tuple(obj["r"])))


@dataclass(frozen=True)
class KaplanSpectrum:
    """Values d_1 <= ... <= d_n with +-i d_k the eigenvalues of Y^{-1} J."""

    d: tuple[float, ...]

    def __post_init__(self):
        if any(a > b for a, b in zip(self.d, self.d[1:])):
            raise ValueError("spectrum must be sorted ascending")
        if any(v <= 0 for v in self.d):
            raise ValueError("spectrum values must be positive")

    @property
    def d_max(self) -> float:
        return self.d[-1]


def kaplan_matrix(m: NormalizedMetric) -> DenseMatrix:
    """Matrix of the skew map at the unit center vector: -g^{1/2} h^{-1} J.

    Always computed in float mode; the result M satisfies h M = -(h M)^T
    up to roundoff (skew-symmetry with respect to h).
    """
    h = m.h.to_numpy()
    J = symplectic_j(m.n, FLOAT).to_numpy()
    M = -math.sqrt(float(m.g)) * np.linalg.solve(h, J)
    return DenseMatrix.from_rows(M.tolist(), FLOAT)


def d_spectrum(Y: SpdMatrix, pairing_tol: float = PAIRING_TOL) -> KaplanSpectrum:
    """Symplectic spectrum of a Gram matrix of even size.

    Diagonalizes the symmetric matrix -(Y^{-1/2} J Y^{-1/2})^2, whose
    eigenvalues are the d_k^2 in equal pairs; consecutive sorted
    eigenvalues are grouped in twos and a relative mismatch beyond
    ``pairing_tol`` raises ``PairingFailure`` (numerical breakdown).
    """
    if Y.n % 2:
        raise OddDimension("symplectic spectrum requires even size")
    n = Y.n // 2
    A = Y.to_numpy()
    w, V = np.linalg.eigh(A)
    inv_sqrt = (V / np.sqrt(w)) @ V.T
    J = symplectic_j(n, FLOAT).to_numpy()
    S = inv_sqrt @ J @ inv_sqrt
    M = -S @ S
    mu = np.linalg.eigvalsh((M + M.T) / 2.0)
    # mismatch is measured against the spectral scale: tiny paired
    # eigenvalues carry absolute (not relative) roundoff, so a per-pair
    # relative test would flag healthy inputs
    scale = float(max(abs(mu[0]), abs(mu[-1]), 1e-300))
    d = []
    for k in range(n):
        lo, hi = mu[2 * k], mu[2 * k + 1]
        if abs(hi - lo) > pairing_tol * scale:
            raise PairingFailure(
                f"eigenvalue pair {k + 1} mismatch: {lo!r} vs {hi!r}"
            )
        d.append(math.sqrt(max((lo + hi) / 2.0, 0.0)))
    return KaplanSpectrum(tuple(d))


def is_heisenberg_type(m: NormalizedMetric, tol: float = 1e-8) -> bool:
    """True when all d_k(h) equal g^{-1/2} within the relative tolerance."""
    target = 1.0 / math.sqrt(float(m.g))
    spectrum = d_spectrum(m.h)
    return all(abs(dk - target) <= tol * target for dk in spectrum.d)


def same_symplectic_orbit(X: SpdMatrix, Y: SpdMatrix, tol: float = 1e-8) -> bool:
    """True when X and Y have the same symplectic spectrum within tol.

    Equality of all d_k characterizes congruence by a symplectic
    similitude, so this decides orbit membership.
    """
    if X.n != Y.n:
        raise DimensionMismatch("matrices of different size")
    dx = d_spectrum(X).d
    dy = d_spectrum(Y).d
    return all(abs(a - b) <= tol * max(abs(a), abs(b)) for a, b in zip(dx, dy))


def _metric_inner(m: NormalizedMetric, u: LieAlgebraVector, v: LieAlgebraVector) -> float:
    hu = m.h.matrix.to_float().mat_vec([float(c) for c in v.horizontal()])
    horiz = sum(float(a) * b for a, b in zip(u.horizontal(), hu))
    return horiz + float(m.g) * float(u.s) * float(v.s)


def sectional_curvature(m: NormalizedMetric, u: LieAlgebraVector,
                        v: LieAlgebraVector) -> float:
    """Sectional curvature of the plane spanned by an orthonormal pair.

    Supported planes: both vectors horizontal (s = 0), or one horizontal
    and one along the center.  Mixed vectors are rejected: the closed
    curvature formulas only cover these two kinds of plane.
    """
    if u.n != v.n or u.n != m.n:
        raise DimensionMismatch("vector dimensions do not match the metric")
    for a, b, expected in ((u, u, 1.0), (v, v, 1.0), (u, v, 0.0)):
        if abs(_metric_inner(m, a, b) - expected) > ORTHONORMAL_TOL:
            raise NotOrthonormal("vectors are not orthonormal for the metric")

    def kind(w: LieAlgebraVector) -> str:
        horizontal = any(c != 0 for c in w.horizontal())
        central = w.s != 0
        if horizontal and central:
            raise UnsupportedPlane("mixed vector with horizontal and central parts")
        return "central" if central else "horizontal"

    ku, kv = kind(u), kind(v)
    g = float(m.g)
    if ku == "horizontal" and kv == "horizontal":
        a = bracket(u, v).s
        return -0.75 * g * float(a) * float(a)
    if ku == "central":
        u, v = v, u  # put the horizontal vector first
    M = kaplan_matrix(m).to_numpy()
    ubar = np.array([float(c) for c in u.horizontal()])
    w = M @ ubar
    h = m.h.to_numpy()
    return 0.25 * float(w @ h @ w)


def curvature_upper_bound(m: NormalizedMetric) -> float:
    """g^{-1} d_n(h)^2, an upper bound for the sampled sectional curvatures."""
    return d_spectrum(m.h).d_max ** 2 / float(m.g)
