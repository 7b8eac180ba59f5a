"""Complex polynomial and rational arithmetic on the unit circle.

Coefficient convention is degree-0 first throughout.  The workhorses are
FFT transforms between coefficient vectors and samples at roots of unity,
polynomial-matrix determinants by evaluation and interpolation, and a
least-squares rational fit used to recover inner functions from pointwise
ratios.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import FitError, InputError, NotAnalyticError

TRIM_REL = 1e-12
COPRIME_TOL = 1e-10
ROOT_FREE_GRID_FACTOR = 16
ROOT_FREE_GRID_MIN = 1e-8
COMPANION_MAX_DEGREE = 64


def next_pow2(n: int) -> int:
    """Smallest power of two that is >= max(n, 1)."""
    return 1 << max(int(n) - 1, 0).bit_length()


def trim_coeffs(c) -> np.ndarray:
    """Drop trailing coefficients below 1e-12 of the largest modulus.

    The zero polynomial comes back as an empty array.
    """
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        return c
    top = np.abs(c).max()
    if top == 0.0:
        return c[:0]
    keep = np.nonzero(np.abs(c) > TRIM_REL * top)[0]
    if keep.size == 0:
        return c[:0]
    return c[: keep[-1] + 1]


@dataclass(frozen=True, eq=False)
class Poly:
    """Polynomial with complex coefficients, degree-0 coefficient first.

    Normalized on construction: trailing near-zero coefficients (relative
    threshold 1e-12) are removed, so ``coeffs[-1]`` is significant and the
    zero polynomial has an empty coefficient array and degree -1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = trim_coeffs(self.coeffs)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __bool__(self) -> bool:
        return self.coeffs.size > 0

    def __call__(self, z):
        if self.coeffs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return npoly.polyval(z, self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(npoly.polyadd(self._c(), other._c()))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(npoly.polysub(self._c(), other._c()))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self or not other:
                return Poly(np.zeros(0))
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self._c() * complex(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Poly":
        return Poly(-self._c())

    def _c(self) -> np.ndarray:
        return self.coeffs if self.coeffs.size else np.zeros(1, dtype=complex)

    def shifted(self, k: int) -> "Poly":
        """Multiply by z**k."""
        if not self:
            return self
        return Poly(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))

    def conj_coeffs(self) -> "Poly":
        """Coefficient-wise conjugate (the polynomial conj(P)(z))."""
        return Poly(np.conj(self._c()))

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.coeffs)

    @staticmethod
    def one() -> "Poly":
        return Poly(np.ones(1, dtype=complex))

    @staticmethod
    def zero() -> "Poly":
        return Poly(np.zeros(0))

    @staticmethod
    def identity() -> "Poly":
        return Poly(np.array([0.0, 1.0], dtype=complex))


def conj_reflect(p: Poly, d: int) -> Poly:
    """Reflect a polynomial of degree <= d through the unit circle.

    Returns D with D(z) = z**d * conj(p)(1/z): coefficient k of D equals
    the conjugate of coefficient d-k of p.  For a monic Schur polynomial
    this is the normalized denominator of the associated Blaschke product.
    """
    if p.degree > d:
        raise InputError(f"conj_reflect: degree {p.degree} exceeds bound {d}")
    return Poly(np.conj(p.padded(d + 1))[::-1])


def root_free_on_closed_disc(p: Poly, margin: float = 0.0) -> bool:
    """True if p has no root of modulus <= 1 + margin.

    Companion-matrix roots for degree <= 64; above that a cheap guard,
    min |p| over a 16*degree circle grid, must exceed 1e-8.
    """
    if p.degree < 1:
        return bool(p)
    if p.degree <= COMPANION_MAX_DEGREE:
        return bool(np.min(np.abs(p.roots())) > 1.0 + margin)
    m = next_pow2(ROOT_FREE_GRID_FACTOR * p.degree)
    vals = grid_transform(p, m).samples
    return bool(np.min(np.abs(vals)) > ROOT_FREE_GRID_MIN)


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Quotient num/den of polynomials, analytic on the closed unit disc.

    The denominator is normalized to den(0) = 1 and validated to have no
    root of modulus <= 1.  Numerator and denominator are checked to be
    coprime (no common root within 1e-10) unless ``check_coprime`` is
    False; synthesized eigenspace components may share factors with the
    common denominator, so they skip the check.
    """

    num: Poly
    den: Poly
    residual: float | None = field(default=None, compare=False)

    def __init__(self, num: Poly, den: Poly, residual: float | None = None,
                 check_coprime: bool = True):
        if not den:
            raise NotAnalyticError("denominator is identically zero")
        d0 = den.coeffs[0] if den.coeffs.size else 0.0
        if abs(d0) < TRIM_REL * np.abs(den.coeffs).max():
            raise NotAnalyticError("denominator vanishes at z = 0")
        den = den * (1.0 / d0)
        num = num * (1.0 / d0)
        if not root_free_on_closed_disc(den):
            raise NotAnalyticError("denominator has a root on the closed unit disc")
        if check_coprime and num and den.degree >= 1 \
                and max(num.degree, den.degree) <= COMPANION_MAX_DEGREE:
            nr, dr = num.roots(), den.roots()
            if nr.size and dr.size:
                dist = np.abs(nr[:, None] - dr[None, :])
                if dist.min() < COPRIME_TOL:
                    raise InputError("numerator and denominator share a root")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "residual", residual)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def taylor(self, n: int) -> np.ndarray:
        """First n Taylor coefficients at 0 via the standard recurrence."""
        a = self.num.padded(n)
        b = self.den.padded(n)
        c = np.zeros(n, dtype=complex)
        for k in range(n):
            acc = a[k]
            upper = min(k, self.den.degree)
            if upper >= 1:
                acc -= np.dot(b[1: upper + 1], c[k - upper: k][::-1])
            c[k] = acc
        return c

    @staticmethod
    def from_coeff_lists(num, den, check_coprime: bool = True) -> "RationalFunction":
        return RationalFunction(Poly(num), Poly(den), check_coprime=check_coprime)


@dataclass(frozen=True, eq=False)
class CircleGrid:
    """Samples of a function at the M-th roots of unity, M a power of two."""

    size: int
    samples: np.ndarray

    def __post_init__(self):
        m = int(self.size)
        if m < 1 or (m & (m - 1)) != 0:
            raise InputError(f"grid size {m} is not a power of two")
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (m,):
            raise InputError("sample count does not match grid size")
        s.flags.writeable = False
        object.__setattr__(self, "size", m)
        object.__setattr__(self, "samples", s)

    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.size) / self.size)


def grid_transform(p: Poly | np.ndarray, m: int) -> CircleGrid:
    """Evaluate a polynomial at the M-th roots of unity (exactly, via FFT).

    Degrees >= M are handled by folding coefficients modulo M, which is
    exact because z**M = 1 on the grid.
    """
    if m < 1 or (m & (m - 1)) != 0:
        raise InputError(f"grid size {m} is not a power of two")
    c = p.coeffs if isinstance(p, Poly) else np.asarray(p, dtype=complex)
    folded = np.zeros(m, dtype=complex)
    if c.size:
        np.add.at(folded, np.arange(c.size) % m, c)
    return CircleGrid(m, m * np.fft.ifft(folded))


def interpolate(grid: CircleGrid, degree_bound: int) -> Poly:
    """Recover a polynomial of degree <= degree_bound from its grid samples."""
    if degree_bound >= grid.size:
        raise InputError(
            f"degree bound {degree_bound} aliases on a grid of size {grid.size}")
    coeffs = np.fft.fft(grid.samples) / grid.size
    return Poly(coeffs[: degree_bound + 1])


def polymatrix_det_minors(entries, degree_bound: int):
    """Determinant and all first minors of a matrix of polynomials.

    Every scalar determinant is computed at M >= 2*degree_bound + 1 roots
    of unity (a power of two), then interpolated back to coefficients.
    minors[k][j] is the determinant of the matrix with row k and column j
    deleted (the plain minor, no cofactor sign).
    """
    q = len(entries)
    m = next_pow2(2 * degree_bound + 2)
    values = np.empty((m, q, q), dtype=complex)
    for k in range(q):
        if len(entries[k]) != q:
            raise InputError("entry grid is not square")
        for j in range(q):
            values[:, k, j] = grid_transform(entries[k][j], m).samples
    det = interpolate(CircleGrid(m, np.linalg.det(values)), degree_bound)
    minors = []
    for k in range(q):
        row = []
        for j in range(q):
            if q == 1:
                row.append(Poly.one())
                continue
            sub = np.delete(np.delete(values, k, axis=1), j, axis=2)
            row.append(interpolate(CircleGrid(m, np.linalg.det(sub)), degree_bound))
        minors.append(row)
    return det, minors


def fit_rational_samples(points: np.ndarray, values: np.ndarray,
                         num_deg: int, den_deg: int):
    """Least-squares rational fit num/den with den(0) = 1 at given points.

    Solves num(z_k) - values_k * den(z_k) = 0 in the least-squares sense.
    The minimum-norm solution is taken, so when the data has lower true
    degree the spurious common factors collapse to zero.  Returns
    (num, den, residual) with residual = max_k |num(z_k)/den(z_k) - values_k|;
    no analyticity validation is performed here.
    """
    points = np.asarray(points, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if points.size < num_deg + den_deg + 1:
        raise InputError("not enough sample points for the requested degrees")
    pow_num = points[:, None] ** np.arange(num_deg + 1)[None, :]
    cols = [pow_num]
    if den_deg >= 1:
        pow_den = points[:, None] ** np.arange(1, den_deg + 1)[None, :]
        cols.append(-values[:, None] * pow_den)
    a = np.hstack(cols)
    x, *_ = np.linalg.lstsq(a, values, rcond=None)
    num = Poly(x[: num_deg + 1])
    den = Poly(np.concatenate([[1.0], x[num_deg + 1:]]))
    den_vals = den(points)
    bad = np.abs(den_vals) < 1e-14
    if bad.all():
        return num, den, np.inf
    ratio = np.where(bad, np.inf, num(points) / np.where(bad, 1.0, den_vals))
    residual = float(np.max(np.abs(ratio - values)))
    return num, den, residual


def rational_fit(grid: CircleGrid, num_deg: int, den_deg: int,
                 residual_tol: float = 1e-6) -> RationalFunction:
    """Fit a rational function to full-circle samples and validate it.

    Requires M >= 2*(num_deg + den_deg) + 1.  The residual must stay below
    residual_tol times the largest sample modulus, and the fitted
    denominator must be root-free on the closed disc.
    """
    if grid.size < 2 * (num_deg + den_deg) + 1:
        raise InputError("grid too small for the requested rational degrees")
    num, den, residual = fit_rational_samples(grid.points(), grid.samples,
                                              num_deg, den_deg)
    scale = float(np.max(np.abs(grid.samples))) or 1.0
    if not np.isfinite(residual) or residual > residual_tol * scale:
        raise FitError(
            f"rational fit residual {residual:.3e} exceeds {residual_tol:.1e} * {scale:.3e}")
    return RationalFunction(num, den, residual=residual, check_coprime=False)


def szego_project(coeffs, start: int) -> np.ndarray:
    """Keep the nonnegative-frequency part of a two-sided coefficient list.

    ``coeffs[i]`` is the coefficient of frequency ``start + i``.  Returns
    the one-sided list indexed from frequency 0.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    top = start + coeffs.size - 1
    if top < 0:
        return np.zeros(0, dtype=complex)
    out = np.zeros(top + 1, dtype=complex)
    for i, c in enumerate(coeffs):
        n = start + i
        if n >= 0:
            out[n] = c
    return out
