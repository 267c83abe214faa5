"""Acceptance gate: one PASS/FAIL line per primary criterion, at the stated tolerances."""
import itertools
import random
import time

import numpy as np
import pytest
from gmpy2 import mpq

from spinc_surfaces.clifford import (
    E1,
    E2,
    NU1,
    NU2,
    AmbientVec,
    ambient_mul,
    basis_spinors,
    bivector_e12,
    bivector_nu12,
    conjugate,
    form_action,
    hermitian,
    omega_E,
    omega_M,
    times_i,
)
from spinc_surfaces.cp2 import (
    J0,
    FSChart,
    analyze_patch,
    builtin_surface,
    codazzi_convergence,
    curvature_formula,
    fs_metric,
    riemann_numeric,
)
from spinc_surfaces.integrability import (
    AMBIENT_LAGRANGIAN_RICCI,
    DISPLAYED_COEFFICIENTS,
    PRINTED_COMPLEX_LEMMA,
    assemble_T_complex,
    assemble_T_lagrangian,
    compatibility_residual,
    complex_zeroth_order,
    curvature_from_killing,
    extracted_coefficients,
    kernel_rank,
    restricted_aux_curvature,
    solve_compatibility,
    solve_complex_lemma,
    spin_curvature_rhs,
)
from spinc_surfaces.killing import (
    DIRAC_EPSILON,
    PRINTED_DIRAC_EPSILON,
    DegenerateSpinor,
    blr_commutator,
    blr_deta,
    dirac_closed_form,
    dirac_from_killing,
    lemma_item,
    recover_B,
)
from spinc_surfaces.structures import CASES, DerivSlots, NormalVec, PointConfig, random_admissible, random_rational, random_spinor
from spinc_surfaces.suites import discrepancy_flags

SEED = 42


@pytest.fixture
def verdict(capsys):
    def emit(name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {'PASS' if ok else 'FAIL'}  {name}: {detail}")
        assert ok, detail

    return emit


def _rand_vec(rng):
    return AmbientVec.from_components(*(random_rational(rng) for _ in range(4)))


def test_clifford_axioms(verdict):
    t0 = time.perf_counter()
    bad = 0
    frame = [AmbientVec.from_components(*r) for r in np.eye(4, dtype=int).tolist()]
    basis = basis_spinors()
    for v, w, phi in itertools.product(frame, frame, basis):
        bad += ambient_mul(v, ambient_mul(w, phi)) + ambient_mul(w, ambient_mul(v, phi)) != phi * (-2 * v.dot(w))
    for a, b in itertools.product(range(4), repeat=2):
        bad += hermitian(basis[a], basis[b]) != int(a == b)
    for k in range(1000):
        rng = random.Random(f"acceptance-clifford:{SEED + k}")
        v, w = _rand_vec(rng), _rand_vec(rng)
        phi, psi = random_spinor(SEED + k), random_spinor(SEED + k + 10**6)
        bad += ambient_mul(v, ambient_mul(w, phi)) + ambient_mul(w, ambient_mul(v, phi)) != phi * (-2 * v.dot(w))
        bad += times_i(bivector_e12(phi)) != omega_M(phi)
        bad += times_i(bivector_nu12(phi)) != omega_E(phi)
        bad += conjugate(ambient_mul(v, phi)) != -ambient_mul(v, conjugate(phi))
        bad += hermitian(ambient_mul(v, phi), psi) != -hermitian(phi, ambient_mul(v, psi))
        n = hermitian(phi, phi)
        bad += not (n.im == 0 and n.re > 0)
    dt = time.perf_counter() - t0
    verdict("clifford axioms", bad == 0 and dt < 5, f"{bad} nonzero residuals over 64 basis triples + 1000 random; {dt:.2f} s (< 5 s)")


def test_lemma_items(verdict):
    t0 = time.perf_counter()
    bad = 0
    for case in CASES:
        for k in range(1000):
            cfg, deriv = random_admissible(SEED + k, case)
            phi = random_spinor(SEED + k)
            bad += sum(not lemma_item(cfg, deriv, item, phi).is_zero() for item in range(1, 9))
    dt = time.perf_counter() - t0
    verdict("lemma items 1-8", bad == 0 and dt < 30, f"{bad} nonzero of 8 x 1000 x 3 cases; {dt:.1f} s (< 30 s)")


def test_blr_formulas(verdict):
    bad = 0
    for k in range(1000):
        cfg, deriv = random_admissible(SEED + k, CASES[k % 3])
        phi = random_spinor(SEED + k)
        bad += not blr_deta(cfg, deriv, phi).is_zero()
        bad += not blr_commutator(cfg, phi).is_zero()
    verdict("d-eta expansion and eta-commutator", bad == 0, f"{bad} nonzero residuals over 1000 trials")


def test_dirac_contraction(verdict):
    bad = 0
    for case in CASES:
        for k in range(300):
            cfg, _ = random_admissible(SEED + k, case)
            phi = random_spinor(SEED + k)
            bad += dirac_from_killing(cfg, phi) != dirac_closed_form(cfg, phi)
    flagged = any(f.name == "dirac_sign" for f in discrepancy_flags())
    ok = bad == 0 and DIRAC_EPSILON == 1 and flagged
    verdict(
        "Dirac contraction",
        ok,
        f"{bad} mismatches over 900 trials; epsilon = {int(DIRAC_EPSILON):+d} (printed {PRINTED_DIRAC_EPSILON:+d}, reported as flag: {flagged})",
    )


def test_recover_B(verdict):
    bad = 0
    for k in range(500):
        cfg, _ = random_admissible(SEED + k, CASES[k % 3])
        phi = random_spinor(SEED + k)
        for X, Y, xi in itertools.product((E1, E2), (E1, E2), (NU1, NU2)):
            bad += recover_B(cfg, phi, X, Y, xi) != cfg.B(X, Y).dot(xi)
    refused = 0
    for support in ((True, False, False, True), (False, True, True, False), (True, False, False, False)):
        try:
            recover_B(cfg, random_spinor(SEED, support=support), E1, E2, NU1)
        except DegenerateSpinor:
            refused += 1
    verdict("recover_B", bad == 0 and refused == 3, f"{bad} mismatches over 500 x 8 frame triples; {refused}/3 degenerate spinors refused")


def test_kernel_lemma(verdict):
    full = sum(kernel_rank(random_spinor(SEED + k)) == 6 for k in range(500))
    controls = []
    for support in itertools.product((False, True), repeat=4):
        if not ((support[0] or support[3]) and (support[1] or support[2])):
            controls.append(kernel_rank(random_spinor(SEED, support=support)))
    ok = full == 500 and all(r < 6 for r in controls)
    verdict("kernel lemma", ok, f"rank 6 for {full}/500; vanishing-half controls ranks {sorted(set(controls))} over {len(controls)} patterns")


def test_complex_lemma(verdict):
    good = 0
    for k in range(500):
        phi = random_spinor(SEED + k, support=(True, False, True, False))
        t_t, t_n, t_m = solve_complex_lemma(phi)
        good += (
            (t_t, t_n) == (-1, -1)
            and not any(itertools.chain.from_iterable(t_m))
            and t_t + t_n + 1 == -1
            and -t_t + t_n + 1 == 1
        )
    flagged = any(f.name == "complex_lemma_Tn" for f in discrepancy_flags())
    ok = good == 500 and flagged and PRINTED_COMPLEX_LEMMA["T^n"] != -1
    verdict("complex-case lemma", ok, f"(-1, -1, 0) for {good}/500; stated T^n = 0 flagged: {flagged}")


def _bumps(cfg, deriv, K_M, K_N):
    one = NormalVec(mpq(1), mpq(0))
    (d11, d12), (d21, d22) = deriv.D1
    return [
        (K_M + 1, K_N, deriv),
        (K_M, K_N + 1, deriv),
        (K_M, K_N, DerivSlots(((d11, d12 + one), (d21 + one, d22)), deriv.D2)),
        (K_M, K_N, DerivSlots(((d11, d12), (d21, d22 + one)), deriv.D2)),
    ]


def _oriented(cfg):
    one = mpq(1)
    return PointConfig(cfg.c, cfg.B11, NormalVec(-cfg.B11.n2, cfg.B11.n1), -cfg.B11, one, cfg.h, cfg.s, one, "complex")


def test_gluing_and_extraction(verdict):
    bad = 0
    for k in range(100):
        cfg, deriv = random_admissible(SEED + k, "lagrangian")
        phi = random_spinor(SEED + k)
        K_M, K_N, good = solve_compatibility(cfg, deriv)
        for K1, K2, d in [(K_M, K_N, good)] + _bumps(cfg, good, K_M, K_N):
            T = assemble_T_lagrangian(cfg, d, K1, K2)
            holds = compatibility_residual(cfg, d, K1, K2).is_zero()
            gap = curvature_from_killing(cfg, d, phi) - spin_curvature_rhs(K1, K2, 0, phi)
            bad += T.is_zero() != holds or gap != form_action(T, phi) or gap.is_zero() != holds
        cfg, deriv = random_admissible(SEED + k, "complex")
        cfg, phi = _oriented(cfg), random_spinor(SEED + k, support=(True, False, True, False))
        K_M, K_N, good = solve_compatibility(cfg, deriv)
        F = restricted_aux_curvature(cfg)
        for K1, K2, d in [(K_M, K_N, good)] + _bumps(cfg, good, K_M, K_N):
            holds = compatibility_residual(cfg, d, K1, K2).is_zero()
            gap = curvature_from_killing(cfg, d, phi) - spin_curvature_rhs(K1, K2, F, phi)
            calT = assemble_T_complex(cfg, d, K1, K2)
            bad += form_action(calT, phi) - complex_zeroth_order(cfg, phi) != -gap
            bad += gap.is_zero() != holds

    cplx = extracted_coefficients("complex")
    lag = extracted_coefficients("lagrangian")
    as_q = lambda row: {m: mpq(v) for m, v in row.items()}
    cplx_ok = cplx == {eq: as_q(r) for eq, r in DISPLAYED_COEFFICIENTS["complex"].items()}
    gauss_ok = lag["K_M"] == as_q(DISPLAYED_COEFFICIENTS["lagrangian"]["K_M"])
    ricci_ok = lag["K_N"] == as_q(AMBIENT_LAGRANGIAN_RICCI)
    literal = lag["K_N"] == as_q(DISPLAYED_COEFFICIENTS["lagrangian"]["K_N"])
    detail = (
        f"gluing iff: {bad} violations over 100 x 5 data sets per case; "
        f"complex system matches display: {cplx_ok}; Lagrangian Gauss matches: {gauss_ok}; "
        f"Lagrangian Ricci matches ambient-curvature form: {ricci_ok} "
        f"(literal display h-sign: {'matches' if literal else 'MISMATCH, flagged typo'})"
    )
    verdict("gluing / extraction", bad == 0 and cplx_ok and gauss_ok and ricci_ok, detail)


def test_chart_soundness(verdict):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        c = float(rng.choice([0.5, 1.0, 2.0]))
        chart = FSChart(c)
        x = rng.uniform(-1.0, 1.0, 4)
        X, Y, Z, W = rng.normal(size=(4, 4))
        g = fs_metric(chart, x)
        worst = max(worst, abs(riemann_numeric(chart, x, X, Y, Z, W) - curvature_formula(X, Y, Z, W, J0, c, g)))
    hol = 0.0
    for c in (0.5, 1.0, 2.0):
        chart = FSChart(c)
        for _ in range(5):
            x = rng.uniform(-1.0, 1.0, 4)
            X = rng.normal(size=4)
            g = fs_metric(chart, x)
            n = X @ g @ X
            hol = max(hol, abs(riemann_numeric(chart, x, X, J0 @ X, J0 @ X, X) / n**2 - 4 * c))
    verdict("CP^2 chart", worst < 1e-5 and hol < 1e-5, f"max |R_num - R_formula| = {worst:.2e} over 100 points; max |K_hol - 4c| = {hol:.2e}")


def test_surface_suite(verdict):
    t0 = time.perf_counter()
    chart = FSChart()
    lines, ok = [], True
    targets = {"cp1": 4.0, "rp2": 1.0, "clifford_torus": 0.0}
    for name, K in targets.items():
        patch = builtin_surface(name).with_options(grid=32, fd_step=1e-4)
        rep = analyze_patch(chart, patch)
        km = float(np.max(np.abs(rep.K_M[~rep.degenerate] - K)))
        res = rep.max_residuals()
        worst = max(res["gauss"], res["ricci"], res["codazzi"])
        extra = rep.max_abs("H_norm") if name == "clifford_torus" else rep.max_abs("B_norm")
        limit = 1e-4 if name == "clifford_torus" else 1e-6
        conv = codazzi_convergence(chart, patch)
        # no truncation error to halve: the residual sits at the roundoff floor
        conv_ok = conv.halves(0.3) if conv.truncation_dominated else max(conv.residual, conv.residual_half) < 1e-6
        ok &= km < 1e-4 and worst < 1e-4 and extra < limit and conv_ok
        what = "|H|" if name == "clifford_torus" else "|B|"
        state = f"ratio {conv.ratio:.2f}" if conv.truncation_dominated else f"roundoff floor {conv.residual:.1e}"
        lines.append(f"{name}: dK_M {km:.1e}, {what} {extra:.1e}, residual {worst:.1e}, halving {state}")
    slant = codazzi_convergence(chart, builtin_surface("slant").with_options(grid=16))
    ok &= slant.truncation_dominated and slant.halves(0.3)
    lines.append(f"witness slant: ratio {slant.ratio:.2f}")
    dt = time.perf_counter() - t0
    ok &= dt < 30
    verdict("surface suite", ok, "; ".join(lines) + f"; {dt:.1f} s (< 30 s)")
