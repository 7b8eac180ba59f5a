"""Acceptance gate: one test (and one pass/fail line under pytest -v) per criterion.

Each criterion pins its own tolerances; nothing here is shared state, so a
failure localizes to exactly one numbered property.
"""

import time

import numpy as np
import scipy.linalg

from szego.aak import best_approx
from szego.algebra import Poly, RationalFunction
from szego.bateman import (InterlacedValues, identity_residuals, j_of_x,
                           kappa_squares, tau_squares)
from szego.blaschke import from_zeros
from szego.forward_map import SpectralData, forward, real_diagnostics
from szego.hankel import (Symbol, dense_hankel, hankel_matvec, resize_symbol)
from szego.inverse_map import compare_spectral, synthesize
from szego.szego_flow import (compare_flows, direct_evolve,
                              energy_from_values, traveling_wave)
from szego.verify import (random_interlaced, random_low_rank,
                          random_real_symbol, random_spectral_data)

HAND = Symbol(np.array([3.0, 2.0], dtype=complex))
RANK_ONE = RationalFunction(Poly([0.75]), Poly([1.0, -0.5]))


def report(num, ok, detail):
    mark = "PASS" if ok else "FAIL"
    print(f"criterion {num}: {mark} ({detail})")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_roundtrip_bijection():
    rng = np.random.default_rng(1)
    t0 = time.monotonic()
    worst_s = worst_angle = worst_p = 0.0
    for _ in range(50):
        data, result = random_spectral_data(rng, n_max=4, d_max=2)
        s_rel, angle, p_gap = compare_spectral(forward(result.u), data)
        worst_s = max(worst_s, s_rel)
        worst_angle = max(worst_angle, angle)
        worst_p = max(worst_p, p_gap)
    elapsed = time.monotonic() - t0
    ok = worst_s < 1e-8 and worst_angle < 1e-6 and worst_p < 1e-6 and elapsed < 30.0
    report(1, ok, f"50 draws: s_rel {worst_s:.2e}, angle {worst_angle:.2e}, "
                  f"P {worst_p:.2e}, {elapsed:.1f}s")


def test_criterion_02_rank_one_closed_form():
    data = forward(Symbol.from_rational(RANK_ONE))
    gap = float(np.max(np.abs(data.s - [1.0, 0.5])))
    report(2, data.n == 2 and gap < 1e-9, f"s = {data.s}, gap {gap:.2e}")


def test_criterion_03_multiplicity_two():
    u = resize_symbol(Symbol(np.array([0.0, 1.0])), 8)
    data, details = forward(u, details=True)
    members = [c for c in details.clusters_h if c.member and not c.is_zero]
    dim = members[0].dim if members else 0
    circle = np.exp(2j * np.pi * np.arange(16) / 16)
    psi_gap = float(np.max(np.abs(data.psi[0](circle) - circle)))
    analyze_ok = (data.n == 1 and abs(data.s[0] - 1.0) < 1e-8
                  and len(members) == 1 and dim == 2
                  and psi_gap < 1e-8)

    monomial = from_zeros(np.array([0.0]), 0.0)
    result = synthesize(SpectralData(np.array([1.0]), (monomial,)))
    target = np.zeros(4, dtype=complex)
    target[1] = 1.0
    synth_gap = float(np.max(np.abs(result.rational.taylor(4) - target)))
    report(3, analyze_ok and synth_gap < 1e-9,
           f"dim {dim}, inner-factor gap {psi_gap:.2e}, "
           f"reconstruction gap {synth_gap:.2e}")


def test_criterion_04_closed_form_identity_suite():
    v = InterlacedValues(np.array([4.0, 1.0]), np.array([2.0, 0.0]))
    hand_gap = max(float(np.max(np.abs(tau_squares(v) - [12.8, 0.2]))),
                   float(np.max(np.abs(kappa_squares(v) - [9.0, 4.0]))))

    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        w = random_interlaced(rng)
        worst = max(worst, identity_residuals(w).max_residual)
        r2, s2, tau2 = w.rho ** 2, w.sigma ** 2, tau_squares(w)
        for x in (-10.0, -1.0, -0.1, 0.5 / w.rho[0] ** 2):
            value = j_of_x(w, x)
            product = float(np.prod((1.0 - x * s2) / (1.0 - x * r2)))
            partial = 1.0 + x * float(np.sum(tau2 / (1.0 - x * r2)))
            scale = max(1.0, abs(value))
            worst = max(worst, abs(value - product) / scale,
                        abs(value - partial) / scale)
    report(4, hand_gap < 1e-12 and worst < 1e-10,
           f"hand gap {hand_gap:.2e}, worst residual over 100 draws {worst:.2e}")


def test_criterion_05_energy_identity():
    u = resize_symbol(HAND, 8)
    grid = energy_from_values(u)
    alternating = forward(u).energy()
    hand_gap = max(abs(grid - 241.0 / 4.0), abs(alternating - 241.0 / 4.0))

    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        w = random_low_rank(rng)
        e_grid = energy_from_values(w)
        e_data = forward(w).energy()
        worst = max(worst, abs(e_grid - e_data) / max(1.0, abs(e_grid)))
    report(5, hand_gap < 1e-10 and worst < 1e-8,
           f"hand gap {hand_gap:.2e}, worst of 20 random {worst:.2e}")


def test_criterion_06_flow_agreement():
    rng = np.random.default_rng(6)
    symbols = [
        Symbol(np.array([0.0, 1.0], dtype=complex)),
        Symbol.from_rational(
            RationalFunction.from_coeff_lists([0.0, 0.75], [1.0, 0.0, -0.5])),
    ]
    for _ in range(3):
        _, result = random_spectral_data(rng, n_max=2, d_max=1, min_root=1.3,
                                         s_range=(0.5, 1.2))
        symbols.append(result.u)
    t0 = time.monotonic()
    worst_gap = worst_drift = 0.0
    for u0 in symbols:
        u = resize_symbol(u0, 128)
        cmp = compare_flows(u, 1.0, 1e-3)
        worst_gap = max(worst_gap, cmp.max_gap * u.l2_norm)
        worst_drift = max(worst_drift, max(cmp.drift.values()))
    elapsed = time.monotonic() - t0
    ok = worst_gap < 1e-6 and worst_drift < 1e-8 and elapsed < 60.0
    report(6, ok, f"5 symbols at 128 modes: gap {worst_gap:.2e}, "
                  f"drift {worst_drift:.2e}, {elapsed:.1f}s")


def test_criterion_07_hierarchy_speeds():
    t = 1e-3
    worst = 0.0
    for u0 in (HAND, Symbol.from_rational(RANK_ONE)):
        u = resize_symbol(u0, 128)
        data0 = forward(u)
        for y in (0.5, 2.0):
            j = j_of_x(data0.interlaced(), -y)
            omega = ((-1.0) ** np.arange(data0.n)
                     * 2.0 * y * j / (1.0 + y * data0.s ** 2))
            traj = direct_evolve(u, t, 1e-5, y=y)
            data_t = forward(traj.state(-1))
            raw = data0.angles() - data_t.angles()
            fd = ((raw + np.pi) % (2.0 * np.pi) - np.pi) / t
            worst = max(worst, float(np.max(np.abs(fd - omega) / np.abs(omega))))
    report(7, worst < 1e-5,
           f"two symbols, y in (0.5, 2): worst relative speed gap {worst:.2e}")


def test_criterion_08_best_rank_one_distance():
    result = best_approx(HAND, 1)
    cert = result.certificate
    ok = abs(cert.op_norm - 1.0) < 1e-7 and cert.rank == 1
    report(8, ok, f"distance {cert.op_norm:.12g}, rank {cert.rank}")


def test_criterion_09_real_symbol_diagnostics():
    rng = np.random.default_rng(9)
    failures = []
    for i in range(20):
        rep = real_diagnostics(random_real_symbol(rng))
        if not rep.passed:
            failures.append((i, rep.failures))
    report(9, not failures, f"20 draws, failures: {failures!r}")


def test_criterion_10_fast_matvec():
    rng = np.random.default_rng(10)
    c = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    x = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    c /= np.linalg.norm(c)
    x /= np.linalg.norm(x)
    gap = float(np.max(np.abs(dense_hankel(c) @ x - hankel_matvec(c, x))))

    n = 4096
    c_big = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x_big = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    dense = dense_hankel(c_big)
    t_dense = min(_timed(lambda: dense @ x_big) for _ in range(5))
    t_fast = min(_timed(lambda: hankel_matvec(c_big, x_big)) for _ in range(5))
    speedup = t_dense / t_fast
    ok = gap < 1e-12 and speedup >= 10.0
    report(10, ok, f"N=256 gap {gap:.2e}; N=4096 dense {t_dense * 1e3:.2f}ms "
                   f"vs fast {t_fast * 1e3:.2f}ms ({speedup:.0f}x)")


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def test_criterion_11_traveling_wave():
    rep = traveling_wave(1.0, 1, 2, 0.5, t_final=0.5, dt=1e-3)
    data, details = forward(rep.symbol, details=True)
    members_h = [c for c in details.clusters_h if c.member and not c.is_zero]
    circle = np.exp(2j * np.pi * np.arange(16) / 16)
    m = members_h[0].dim if members_h else 0
    inner_gap = float(np.max(np.abs(
        np.abs(data.psi[0](circle)) - np.abs(circle ** (m - 1))))) if m else np.inf
    monomial_gap = float(np.max(np.abs(
        data.psi[0].p.padded(m) - np.eye(m)[m - 1]))) if m else np.inf
    ok = (rep.shape_ok and len(members_h) == 1
          and monomial_gap < 1e-8 and inner_gap < 1e-8
          and rep.fit_gap < 1e-6 and rep.rotation_residual < 1e-6)
    report(11, ok, f"one plain cluster of dim {m}, inner factor z^{m - 1} "
                   f"to {monomial_gap:.1e}, rotation fit {rep.fit_gap:.2e}, "
                   f"residual {rep.rotation_residual:.2e}")
