"""Truncated Hankel pairs: the operator of a symbol and of its left shift.

A symbol u(z) = sum c_n z**n is represented by its first N Fourier
coefficients, optionally backed by an exact rational form.  The Hankel
matrix G[n, k] = c_{n+k} acts antilinearly through h -> G conj(h); the
shifted matrix uses c_{n+k+1}.  Squares G G* and G~ G~* are Hermitian
positive semidefinite and satisfy the exact truncation identity

    (shifted square) = (square) - outer(u, conj(u)).

Matvecs run in O(N log N) through circulant embedding, and eigensystems
come from dense decomposition below N = 512 or Lanczos above.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .algebra import RationalFunction, next_pow2
from .errors import ConsistencyError, InputError, NumericalError

DENSE_EIG_MAX = 512
RESOLVED_TAIL_REL = 1e-8
BUILD_TAIL_REL = 1e-10
TRUNCATION_CAP = 8192
EIG_RESIDUAL_REL = 1e-10
ORTHONORMALITY_TOL = 1e-12
KU2_RESIDUAL_REL = 1e-10


@dataclass(frozen=True, eq=False)
class Symbol:
    """Finitely many Fourier coefficients, plus an optional exact rational form."""

    coeffs: np.ndarray
    rational: RationalFunction | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise InputError("symbol needs at least one coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        if self.rational is not None:
            taylor = self.rational.taylor(c.size)
            scale = max(float(np.abs(c).max()), 1e-300)
            if np.max(np.abs(taylor - c)) > 1e-10 * scale:
                raise InputError("rational form disagrees with stored coefficients")

    @property
    def n_modes(self) -> int:
        return self.coeffs.size

    @property
    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    @property
    def resolved(self) -> bool:
        top = float(np.abs(self.coeffs).max())
        if top == 0.0:
            return True
        return abs(self.coeffs[-1]) <= RESOLVED_TAIL_REL * top

    def with_coeffs(self, coeffs) -> "Symbol":
        return Symbol(np.asarray(coeffs, dtype=complex))

    def values_on_grid(self, m: int) -> np.ndarray:
        """Evaluate at the m-th roots of unity (m a power of two)."""
        from .algebra import grid_transform
        return grid_transform(self.coeffs, m).samples

    @staticmethod
    def from_rational(rf: RationalFunction, n_modes: int | None = None) -> "Symbol":
        """Expand a rational symbol to a resolved truncation.

        The starting size is max(4 * rank_bound, 32) with
        rank_bound = max(deg den, deg num + 1); the size doubles (up to
        8192) until the trailing coefficient falls below 1e-10 of the
        largest, which implies the documented 1e-8 resolution bound.
        Polynomial symbols are exact at any size, so no doubling occurs.
        """
        rank_bound = max(rf.den.degree, rf.num.degree + 1)
        n = n_modes if n_modes is not None else max(4 * max(rank_bound, 1), 32)
        n = max(n, rf.num.degree + 1, 2)
        # lacunary series (denominator in z**m) have exact zeros between
        # live coefficients, so the tail is judged over a window of the
        # denominator's period, not the single trailing entry
        window = max(rf.den.degree, 1) + 1
        while True:
            c = rf.taylor(n)
            top = float(np.abs(c).max())
            if n_modes is not None or top == 0.0 or rf.den.degree == 0:
                break
            if np.abs(c[-window:]).max() <= BUILD_TAIL_REL * top or n >= TRUNCATION_CAP:
                break
            n *= 2
        return Symbol(c, rational=rf)


def resize_symbol(u: Symbol, n: int) -> Symbol:
    """Truncate or extend a symbol to exactly n coefficients.

    Extension uses the rational form when available and zero-pads
    otherwise; truncation drops the rational form since it no longer
    matches.
    """
    if n < 1:
        raise InputError("mode count must be positive")
    if n == u.n_modes:
        return u
    if u.rational is not None and n > u.n_modes:
        return Symbol(u.rational.taylor(n), rational=u.rational)
    out = np.zeros(n, dtype=complex)
    take = min(n, u.n_modes)
    out[:take] = u.coeffs[:take]
    return Symbol(out, rational=u.rational if n >= u.n_modes else None)


def shift_symbol(u: Symbol) -> Symbol:
    """Drop the constant term and shift: the symbol of (u - u(0)) / z."""
    if u.n_modes < 2:
        raise InputError("shift needs at least two stored coefficients")
    rat = None
    if u.rational is not None:
        p = u.rational.num - u.coeffs[0] * u.rational.den
        shifted = p.coeffs[1:] if p else p.coeffs
        from .algebra import Poly
        rat = RationalFunction(Poly(shifted), u.rational.den, check_coprime=False)
    return Symbol(u.coeffs[1:], rational=rat)


def hankel_matvec(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y_n = sum_k c_{n+k} x_k via circulant embedding, O(N log N)."""
    c = np.asarray(c, dtype=complex)
    x = np.asarray(x, dtype=complex)
    n = c.size
    if x.size != n:
        raise InputError("vector length does not match symbol truncation")
    if n == 1:
        return c * x
    size = next_pow2(2 * n - 1)
    conv = np.fft.ifft(np.fft.fft(c, size) * np.fft.fft(x[::-1], size))
    return conv[n - 1: 2 * n - 1]


class FastHankel:
    """Reusable FFT plan for repeated matvecs with one coefficient vector."""

    def __init__(self, c: np.ndarray):
        self.c = np.asarray(c, dtype=complex)
        self.n = self.c.size
        self.size = next_pow2(max(2 * self.n - 1, 2))
        self.fc = np.fft.fft(self.c, self.size)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex).reshape(self.n)
        conv = np.fft.ifft(self.fc * np.fft.fft(x[::-1], self.size))
        return conv[self.n - 1: 2 * self.n - 1]


def dense_hankel(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    return scipy.linalg.hankel(c, np.concatenate([c[-1:], np.zeros(c.size - 1)]))


def hankel_section(u: "Symbol", m: int) -> np.ndarray:
    """Exact m x m section H[i, j] = c_{i+j} from 2m - 1 coefficients.

    Unlike the zero-padded matrix of dense_hankel, this section of a
    rational symbol has rank bounded by the true Hankel rank with no
    truncation leakage, so it is the right object for rank certificates.
    """
    if m < 1:
        raise InputError("section size must be at least 1")
    c = resize_symbol(u, 2 * m - 1).coeffs
    return scipy.linalg.hankel(c[:m], c[m - 1:])


def apply_H(u: Symbol, h: np.ndarray) -> np.ndarray:
    """The antilinear Hankel action: project(u * conj(h)) in coefficients."""
    return hankel_matvec(u.coeffs, np.conj(h))


def apply_K(u: Symbol, h: np.ndarray) -> np.ndarray:
    """The shifted action: left-shift of apply_H, exact on the truncation."""
    y = apply_H(u, h)
    return np.concatenate([y[1:], [0.0]])


def shifted_coeffs(u: Symbol) -> np.ndarray:
    """Coefficients of the left-shifted symbol, zero-padded to length N."""
    return np.concatenate([u.coeffs[1:], [0.0]])


@dataclass(frozen=True, eq=False)
class HankelPair:
    """Dense truncated matrices of a symbol and its shift, with squares."""

    symbol: Symbol
    gamma: np.ndarray
    gamma_shift: np.ndarray
    h2: np.ndarray
    k2: np.ndarray
    ku2_residual: float
    h2_norm: float

    @property
    def n(self) -> int:
        return self.symbol.n_modes


def build_pair(u: Symbol) -> HankelPair:
    """Assemble gamma, the shifted gamma, and their Hermitian squares.

    The identity k2 = h2 - outer(u, conj(u)) holds exactly on the
    truncation; its numerical residual is stored and must stay below
    1e-10 times the norm of h2.
    """
    gamma = dense_hankel(u.coeffs)
    gamma_shift = dense_hankel(shifted_coeffs(u))
    h2 = gamma @ gamma.conj().T
    k2 = gamma_shift @ gamma_shift.conj().T
    h2 = 0.5 * (h2 + h2.conj().T)
    k2 = 0.5 * (k2 + k2.conj().T)
    h2_norm = float(np.linalg.norm(h2, 2)) if u.n_modes > 1 else float(abs(h2[0, 0]))
    predicted = h2 - np.outer(u.coeffs, np.conj(u.coeffs))
    residual = float(np.linalg.norm(k2 - predicted))
    if h2_norm > 0.0 and residual > KU2_RESIDUAL_REL * h2_norm:
        raise ConsistencyError(
            f"shifted-square identity residual {residual:.3e} exceeds "
            f"{KU2_RESIDUAL_REL:.1e} * {h2_norm:.3e}")
    return HankelPair(u, gamma, gamma_shift, h2, k2, residual, h2_norm)


def h2_operator(u: Symbol) -> scipy.sparse.linalg.LinearOperator:
    """Matrix-free h2 = gamma conj(gamma) (two FFT matvecs per apply)."""
    fh = FastHankel(u.coeffs)
    n = u.n_modes

    def mv(x):
        return fh.matvec(np.conj(fh.matvec(np.conj(x))))

    return scipy.sparse.linalg.LinearOperator((n, n), matvec=mv, dtype=complex)


def k2_operator(u: Symbol) -> scipy.sparse.linalg.LinearOperator:
    fh = FastHankel(shifted_coeffs(u))
    n = u.n_modes

    def mv(x):
        return fh.matvec(np.conj(fh.matvec(np.conj(x))))

    return scipy.sparse.linalg.LinearOperator((n, n), matvec=mv, dtype=complex)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Descending nonnegative eigenvalues with orthonormal eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray
    max_residual: float
    orthonormality: float
    full: bool = True


def _validate_eigs(apply_a, values, vectors, norm_a) -> tuple[float, float]:
    residual = 0.0
    for i in range(values.size):
        r = np.linalg.norm(apply_a(vectors[:, i]) - values[i] * vectors[:, i])
        residual = max(residual, float(r))
    gram = vectors.conj().T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(values.size))))
    if norm_a > 0.0 and residual > EIG_RESIDUAL_REL * norm_a:
        raise ConsistencyError(
            f"eigen residual {residual:.3e} exceeds {EIG_RESIDUAL_REL:.1e} * {norm_a:.3e}")
    if ortho > ORTHONORMALITY_TOL:
        raise ConsistencyError(f"eigenvector orthonormality off by {ortho:.3e}")
    return residual, ortho


def hermitian_eigs(a, k: int | None = None) -> EigenSystem:
    """Eigendecomposition of a Hermitian PSD matrix or linear operator.

    Dense path (numpy eigh) for matrices of size <= 512 or when all
    eigenvalues are requested on a dense matrix; Lanczos (ARPACK eigsh)
    for the top-k of large matrices and of matrix-free operators.
    Eigenvalues come back descending, clipped at zero; residual and
    orthonormality checks are enforced.
    """
    if isinstance(a, np.ndarray):
        n = a.shape[0]
        herm = float(np.max(np.abs(a - a.conj().T))) if n > 0 else 0.0
        scale = float(np.max(np.abs(a))) or 1.0
        if herm > 1e-12 * scale:
            raise InputError(f"matrix is not Hermitian (asymmetry {herm:.3e})")
        if k is None or n <= DENSE_EIG_MAX:
            vals, vecs = np.linalg.eigh(a)
            order = np.argsort(vals)[::-1]
            vals = np.clip(vals[order], 0.0, None)
            vecs = vecs[:, order]
            if k is not None:
                vals, vecs = vals[:k], vecs[:, :k]
            res, ortho = _validate_eigs(lambda x: a @ x, vals, vecs,
                                        vals[0] if vals.size else 0.0)
            return EigenSystem(vals, vecs, res, ortho, full=(k is None))
        op = scipy.sparse.linalg.aslinearoperator(a)
        apply_a = lambda x: a @ x
    else:
        op = a
        n = op.shape[0]
        if k is None:
            raise InputError("matrix-free eigendecomposition needs an explicit k")
        apply_a = lambda x: op @ x
    try:
        vals, vecs = scipy.sparse.linalg.eigsh(op, k=k, which="LA")
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise NumericalError(f"Lanczos did not converge: {exc}") from exc
    # Lanczos loses orthogonality between vectors of nearly equal
    # eigenvalues; a Rayleigh-Ritz pass in the returned subspace
    # restores it without changing the subspace.
    q_mat = np.linalg.qr(vecs)[0]
    t_mat = q_mat.conj().T @ apply_a(q_mat)
    t_mat = 0.5 * (t_mat + t_mat.conj().T)
    tvals, tvecs = np.linalg.eigh(t_mat)
    order = np.argsort(tvals)[::-1]
    vals = np.clip(tvals[order], 0.0, None)
    vecs = q_mat @ tvecs[:, order]
    res, ortho = _validate_eigs(apply_a, vals, vecs, vals[0] if vals.size else 0.0)
    return EigenSystem(vals, vecs, res, ortho, full=False)
