"""Time evolution on truncated symbols, exact and direct.

The cubic flow i du/dt = P(|u|^2 u) (P = nonnegative-frequency projection)
is integrated two ways: by classical RK4 on the Fourier coefficients with
a dealiased nonlinearity, and exactly through spectral data, where each
inner factor only picks up a rotating phase.  The commuting fields
generated by the resolvent quantities J(y) get the same treatment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bateman
from .algebra import RationalFunction, next_pow2
from .errors import InputError, StepSizeError
from .forward_map import SpectralData, forward
from .hankel import Symbol, dense_hankel, hankel_matvec
from .inverse_map import synthesize

PROBE_YS = (0.1, 1.0, 10.0)
DT_NORM_LIMIT = 0.1
DRIFT_LIMIT = 1e-5


def szego_rhs(u: Symbol) -> Symbol:
    """Right-hand side -i P(|u|^2 u) of the cubic flow, truncated to N modes."""
    return Symbol(_cubic_rhs(u.coeffs))


def _cubic_rhs(c: np.ndarray) -> np.ndarray:
    n = c.size
    m = next_pow2(3 * n)  # |u|^2 u has frequencies down to -(n-1) and up to 2n-2
    vals = m * np.fft.ifft(c, m)
    w = vals * vals * np.conj(vals)
    coeffs = np.fft.fft(w) / m
    return -1j * coeffs[:n]


def hierarchy_field(u: Symbol, y: float) -> Symbol:
    """The commuting field 2i y w H_u(w), w = (I + y H^2)^{-1} e_0.

    The pointwise product of the two analytic factors is a coefficient
    convolution, truncated back to N modes.
    """
    if y <= 0:
        raise InputError("hierarchy parameter y must be positive")
    return Symbol(_hierarchy_rhs(u.coeffs, float(y)))


def _hierarchy_rhs(c: np.ndarray, y: float) -> np.ndarray:
    n = c.size
    gamma = dense_hankel(c)
    h2 = gamma @ np.conj(gamma)
    h2 = 0.5 * (h2 + h2.conj().T)
    e0 = np.zeros(n, dtype=complex)
    e0[0] = 1.0
    w = np.linalg.solve(np.eye(n) + y * h2, e0)
    hw = hankel_matvec(c, np.conj(w))
    prod = np.convolve(w, hw)[:n]
    return 2j * y * prod


@dataclass(frozen=True, eq=False)
class ConservedRecord:
    """Snapshot of the conserved quantities tracked along a flow."""

    l2_sq: float
    momentum: float
    energy: float
    j_probes: np.ndarray
    probe_ys: tuple

    def as_vector(self) -> np.ndarray:
        return np.concatenate([[self.l2_sq, self.momentum, self.energy],
                               self.j_probes])

    def labels(self) -> list:
        return ["l2_sq", "momentum", "energy"] + \
            [f"j_{y:g}" for y in self.probe_ys]


def energy_from_values(u: Symbol) -> float:
    """Quartic energy (1/4) mean |u|^4 over the circle, dealiased."""
    m = next_pow2(max(4 * u.n_modes, 8))
    vals = u.values_on_grid(m)
    return float(0.25 * np.mean(np.abs(vals) ** 4))


def conserved_quantities(u: Symbol, probe_ys=PROBE_YS) -> ConservedRecord:
    """Mass, momentum, quartic energy and the resolvent probes J(y)."""
    c = u.coeffs
    l2 = float(np.sum(np.abs(c) ** 2))
    mom = float(np.sum(np.arange(c.size) * np.abs(c) ** 2))
    energy = energy_from_values(u)
    gamma = dense_hankel(c)
    h2 = gamma @ np.conj(gamma)
    h2 = 0.5 * (h2 + h2.conj().T)
    eye = np.eye(c.size)
    e0 = np.zeros(c.size, dtype=complex)
    e0[0] = 1.0
    probes = np.array([np.linalg.solve(eye + y * h2, e0)[0].real
                       for y in probe_ys])
    return ConservedRecord(l2, mom, energy, probes, tuple(probe_ys))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """RK4 trajectory with conserved-quantity bookkeeping."""

    times: np.ndarray            # recorded times, first is 0, last is t_final
    states: np.ndarray           # (n_records, n_modes) coefficient rows
    conserved: tuple             # ConservedRecord per recorded time
    drift: dict                  # max drift per conserved label, relative
    dt: float
    field_label: str

    @property
    def max_drift(self) -> float:
        return max(self.drift.values())

    def state(self, i: int) -> Symbol:
        return Symbol(self.states[i])

    def final(self) -> Symbol:
        return Symbol(self.states[-1])


def direct_evolve(u0: Symbol, t_final: float, dt: float, y: float | None = None,
                  record_every: int | None = None, probe_ys=PROBE_YS,
                  drift_limit: float = DRIFT_LIMIT) -> Trajectory:
    """Integrate the cubic flow (or the hierarchy field for given y) by RK4.

    Refuses steps with dt * sum |c|^2 > 0.1.  Conserved quantities are
    recorded along the way; if any drifts by more than drift_limit
    (relative to max(initial value, 1)) the step size was too coarse and
    a StepSizeError reports the offenders.
    """
    if t_final < 0 or dt <= 0:
        raise InputError("need t_final >= 0 and dt > 0")
    l2 = float(np.sum(np.abs(u0.coeffs) ** 2))
    if dt * l2 > DT_NORM_LIMIT:
        raise StepSizeError(
            f"dt * |u|^2 = {dt * l2:.3e} exceeds {DT_NORM_LIMIT}; shrink dt")
    steps = max(1, int(round(t_final / dt))) if t_final > 0 else 0
    dt_eff = t_final / steps if steps else 0.0
    if record_every is None:
        record_every = max(1, steps // 100) if steps else 1

    if y is None:
        rhs = _cubic_rhs
        label = "cubic"
    else:
        yv = float(y)
        if yv <= 0:
            raise InputError("hierarchy parameter y must be positive")
        rhs = lambda c: _hierarchy_rhs(c, yv)
        label = f"hierarchy(y={yv:g})"

    c = u0.coeffs.astype(complex).copy()
    times = [0.0]
    states = [c.copy()]
    records = [conserved_quantities(Symbol(c), probe_ys)]
    for step in range(steps):
        k1 = rhs(c)
        k2 = rhs(c + 0.5 * dt_eff * k1)
        k3 = rhs(c + 0.5 * dt_eff * k2)
        k4 = rhs(c + dt_eff * k3)
        c = c + (dt_eff / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % record_every == 0 or step == steps - 1:
            times.append((step + 1) * dt_eff)
            states.append(c.copy())
            records.append(conserved_quantities(Symbol(c), probe_ys))

    base = records[0].as_vector()
    scale = np.maximum(np.abs(base), 1.0)
    worst = np.zeros_like(base)
    for rec in records[1:]:
        worst = np.maximum(worst, np.abs(rec.as_vector() - base) / scale)
    drift = dict(zip(records[0].labels(), worst))
    if worst.size and worst.max() > drift_limit:
        bad = ", ".join(f"{k}={v:.3e}" for k, v in drift.items()
                        if v > drift_limit)
        raise StepSizeError(f"conserved quantities drifted: {bad}")
    return Trajectory(np.array(times), np.array(states), tuple(records),
                      drift, dt_eff, label)


def exact_evolve(data: SpectralData, t: float) -> SpectralData:
    """Push spectral data forward under the cubic flow.

    Each inner factor rotates rigidly: the r-th phase parameter moves as
    psi_r -> psi_r + (-1)^(r-1) s_r^2 t (1-indexed), so plain positions
    advance and shifted positions retreat.
    """
    signs = (-1.0) ** np.arange(data.n)
    return data.with_angles(data.angles() + signs * data.s ** 2 * t)


def hierarchy_exact_evolve(data: SpectralData, y: float, t: float) -> SpectralData:
    """Push spectral data forward under the field generated by J(y).

    The rotation rates are omega_r = (-1)^(r-1) 2 y J / (1 + y s_r^2)
    with J = prod (1 + y sigma^2) / (1 + y rho^2), and
    psi_r -> psi_r - omega_r t.
    """
    if y <= 0:
        raise InputError("hierarchy parameter y must be positive")
    j = bateman.j_of_x(data.interlaced(), -float(y))
    signs = (-1.0) ** np.arange(data.n)
    omega = signs * 2.0 * y * j / (1.0 + y * data.s ** 2)
    return data.with_angles(data.angles() - omega * t)


@dataclass(frozen=True, eq=False)
class FlowComparison:
    """Direct-vs-exact comparison of the same flow."""

    trajectory: Trajectory
    gaps: np.ndarray             # relative coefficient gap per recorded time
    max_gap: float
    drift: dict


def compare_flows(u0: Symbol, t_final: float, dt: float, y: float | None = None,
                  rel_tol: float = 1e-6, record_every: int | None = None) -> FlowComparison:
    """Integrate directly and through spectral data, and measure the gap.

    The exact route analyzes u0 once, rotates the phases to each recorded
    time, synthesizes, and compares Taylor coefficients against the RK4
    state at the truncation size of u0.
    """
    data0 = forward(u0, rel_tol=rel_tol)
    traj = direct_evolve(u0, t_final, dt, y=y, record_every=record_every)
    norm = max(u0.l2_norm, 1e-300)
    gaps = np.zeros(traj.times.size)
    n = u0.n_modes
    for i, t in enumerate(traj.times):
        if y is None:
            data_t = exact_evolve(data0, float(t))
        else:
            data_t = hierarchy_exact_evolve(data0, float(y), float(t))
        exact_c = synthesize(data_t).rational.taylor(n)
        gaps[i] = float(np.linalg.norm(exact_c - traj.states[i])) / norm
    return FlowComparison(traj, gaps, float(gaps.max()), traj.drift)


@dataclass(frozen=True, eq=False)
class TravelingWaveReport:
    """Spectral shape and rigid-rotation check for a traveling-wave symbol."""

    symbol: Symbol
    data: SpectralData
    rho: float
    sigma: float
    speed: float                 # predicted c
    omega: float                 # predicted omega
    fitted_speed: float
    fitted_omega: float
    shape_ok: bool
    shape_failures: tuple
    rotation_residual: float

    @property
    def fit_gap(self) -> float:
        scale = max(abs(self.omega), 1.0)
        return max(abs(self.fitted_speed - self.speed),
                   abs(self.fitted_omega - self.omega)) / scale


def traveling_wave(alpha: complex, ell: int, n_wave: int, p: complex,
                   t_final: float = 0.1, dt: float = 1e-3,
                   rel_tol: float = 1e-6) -> TravelingWaveReport:
    """Build u = alpha z^ell / (1 - p z^n_wave) and verify it travels rigidly.

    Predicted spectrum: rho = |alpha|/(1-|p|^2) with a monomial inner
    factor of degree ell, and (for p != 0) sigma = rho |p| with one of
    degree n_wave - ell - 1.  Mode n then rotates as
    c_n(t) = exp(-i (omega + n c) t) c_n(0) with c = (rho^2 - sigma^2)/n_wave
    and omega = rho^2 - ell c; (c, omega) are refitted from the phase
    drift of the active modes.
    """
    if ell < 0 or n_wave <= ell:
        raise InputError("need 0 <= ell < n_wave")
    if abs(p) >= 1.0:
        raise InputError("wave parameter p must lie inside the unit disc")
    if alpha == 0:
        raise InputError("leading coefficient alpha must be nonzero")
    num = np.zeros(ell + 1, dtype=complex)
    num[ell] = alpha
    den = np.zeros(n_wave + 1, dtype=complex)
    den[0] = 1.0
    den[n_wave] = -p
    u = Symbol.from_rational(RationalFunction.from_coeff_lists(num, den))

    rho = abs(alpha) / (1.0 - abs(p) ** 2)
    sigma = rho * abs(p)
    if p == 0:
        speed = 0.0
        omega = rho ** 2
    else:
        speed = (rho ** 2 - sigma ** 2) / n_wave
        omega = rho ** 2 - ell * speed

    data = forward(u, rel_tol=rel_tol)
    failures = []
    expect_n = 1 if p == 0 else 2
    if data.n != expect_n:
        failures.append(f"expected {expect_n} spectral values, found {data.n}")
    else:
        want_s = [rho] if p == 0 else [rho, sigma]
        for i, (got, want) in enumerate(zip(data.s, want_s)):
            if abs(got - want) > 1e-8 * max(want, 1.0):
                failures.append(f"s_{i + 1} = {got:.12g}, expected {want:.12g}")
        want_deg = [ell] if p == 0 else [ell, n_wave - ell - 1]
        for i, (b, deg) in enumerate(zip(data.psi, want_deg)):
            if b.degree != deg:
                failures.append(
                    f"inner factor {i + 1} has degree {b.degree}, expected {deg}")
                continue
            lower = b.p.padded(deg + 1)[:deg]
            if lower.size and np.max(np.abs(lower)) > 1e-6:
                failures.append(f"inner factor {i + 1} is not a monomial")

    traj = direct_evolve(u, t_final, dt)
    c0 = traj.states[0]
    ct = traj.states[-1]
    t_end = float(traj.times[-1])
    norm = max(u.l2_norm, 1e-300)
    active = np.nonzero(np.abs(c0) > 1e-8 * norm)[0]

    def unwrapped_rate(n_mode: int) -> float:
        theta = -np.angle(ct[n_mode] / c0[n_mode])
        expected = (omega + n_mode * speed) * t_end
        theta += 2.0 * math.pi * round((expected - theta) / (2.0 * math.pi))
        return theta / t_end

    if active.size == 0:
        raise InputError("symbol has no active modes")
    if p == 0 or active.size == 1:
        fitted_speed = 0.0
        fitted_omega = unwrapped_rate(int(active[0]))
    else:
        n1, n2 = int(active[0]), int(active[1])
        r1, r2 = unwrapped_rate(n1), unwrapped_rate(n2)
        fitted_speed = (r2 - r1) / (n2 - n1)
        fitted_omega = r1 - n1 * fitted_speed

    phases = np.exp(-1j * (fitted_omega + np.arange(c0.size) * fitted_speed) * t_end)
    residual = float(np.max(np.abs(ct - phases * c0))) / norm
    return TravelingWaveReport(u, data, rho, sigma, speed, omega,
                               fitted_speed, fitted_omega,
                               not failures, tuple(failures), residual)


@dataclass(frozen=True)
class RecurrenceReport:
    """Closest return of a trajectory to its initial state."""

    best_time: float
    best_gap: float
    searched_from: float


def recurrence_gap(u0: Symbol, t_final: float, dt: float,
                   settle: float | None = None) -> RecurrenceReport:
    """How close the cubic flow returns to u0 after an initial settle time.

    Purely observational: reports min ||u(t) - u0|| / ||u0|| over recorded
    times t >= settle (default t_final / 20).
    """
    traj = direct_evolve(u0, t_final, dt)
    if settle is None:
        settle = t_final / 20.0
    norm = max(u0.l2_norm, 1e-300)
    best_t, best_g = 0.0, np.inf
    for t, state in zip(traj.times, traj.states):
        if t < settle:
            continue
        gap = float(np.linalg.norm(state - traj.states[0])) / norm
        if gap < best_g:
            best_t, best_g = float(t), gap
    return RecurrenceReport(best_t, best_g, float(settle))
