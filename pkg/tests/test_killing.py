import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from spinc_surfaces.clifford import E1, E2, NU1, NU2, NormalVec, Spinor, conjugate, normal_mul, tangent_mul
from spinc_surfaces.killing import (
    DIRAC_EPSILON,
    HALF,
    LEMMA_TERMS,
    DegenerateSpinor,
    a_term,
    blr_commutator,
    blr_deta,
    dirac_closed_form,
    dirac_from_killing,
    e12_bar_identity,
    killing_rhs,
    killing_rhs_projected,
    lemma_item,
    lemma_lhs,
    lemma_rhs,
    nabla_bar_rhs,
    nabla_h,
    nabla_j,
    nabla_s,
    nabla_t,
    norm_derivative_product_rule,
    norm_derivative_rhs,
    recover_B,
    recover_B_printed,
)
from spinc_surfaces.structures import CASES, PointConfig, random_admissible, random_spinor

from conftest import seeds

cases = st.sampled_from(CASES)
items = st.integers(min_value=1, max_value=8)
FRAME = (E1, E2)


def data(seed, case):
    cfg, deriv = random_admissible(seed, case)
    return cfg, deriv, random_spinor(seed)


@given(seeds, cases, items)
def test_lemma_items_vanish(seed, case, item):
    cfg, deriv, phi = data(seed, case)
    assert lemma_item(cfg, deriv, item, phi).is_zero()


def test_lemma_terms_partition_the_braces():
    used = sorted(k for ks in LEMMA_TERMS.values() for k in ks)
    assert used == list(range(1, 11))


@given(seeds, cases)
def test_items_sum_to_commutator(seed, case):
    cfg, deriv, phi = data(seed, case)
    total = Spinor()
    for k in range(1, 11):
        total = total + a_term(cfg, deriv, k, (1, 2), phi) - a_term(cfg, deriv, k, (2, 1), phi)
    rhs = Spinor()
    for item in range(1, 9):
        rhs = rhs + lemma_rhs(cfg, deriv, item, phi)
    assert total == rhs


def test_item_7_index_matters():
    # swapping j21 for j12 in the h22 term breaks the identity whenever j12 h22 != 0
    hits = 0
    for seed in range(20):
        cfg, deriv, phi = data(seed, "generic")
        if cfg.j12 == 0 or cfg.h[1][1] == 0:
            continue
        bad = lemma_rhs(cfg, deriv, 7, phi) + tangent_mul(E2, normal_mul(NU2, phi)) * (cfg.j12 * cfg.h[1][1])
        assert not (lemma_lhs(cfg, deriv, 7, phi) - bad).is_zero()
        hits += 1
    assert hits > 5


def test_bad_indices_rejected():
    cfg, deriv, phi = data(0, "generic")
    with pytest.raises(ValueError):
        lemma_item(cfg, deriv, 9, phi)
    with pytest.raises(ValueError):
        a_term(cfg, deriv, 11, (1, 2), phi)
    with pytest.raises(ValueError):
        a_term(cfg, deriv, 1, (1, 1), phi)


@given(seeds, cases)
def test_projection_splits_the_equation(seed, case):
    cfg, _, phi = data(seed, case)
    for X in FRAME:
        p, m = killing_rhs_projected(cfg, X, phi)
        assert p + m == killing_rhs(cfg, X, phi)
        assert p.minus.is_zero() and m.plus.is_zero()
        assert nabla_bar_rhs(cfg, X, phi) == conjugate(killing_rhs(cfg, X, phi))


@given(seeds, cases)
def test_parallel_J_derivatives_preserve_relations(seed, case):
    # differentiating j^2 = -id - s h along X must give zero
    cfg, _, _ = data(seed, case)
    for X, Y in itertools.product(FRAME, repeat=2):
        dj = lambda Z: nabla_j(cfg, X, Z)
        lhs = dj(cfg.j_of(Y)) + cfg.j_of(dj(Y))
        rhs = -(nabla_s(cfg, X, cfg.h_of(Y)) + cfg.s_of(nabla_h(cfg, X, Y)))
        assert lhs == rhs
        dt = lambda xi: nabla_t(cfg, X, xi)
        for xi in (NU1, NU2):
            assert dt(cfg.t_of(xi)) + cfg.t_of(dt(xi)) == -(nabla_h(cfg, X, cfg.s_of(xi)) + cfg.h_of(nabla_s(cfg, X, xi)))


@given(seeds, cases)
def test_blr_formulas(seed, case):
    cfg, deriv, phi = data(seed, case)
    assert blr_deta(cfg, deriv, phi).is_zero()
    assert blr_commutator(cfg, phi).is_zero()


def test_blr_commutator_needs_its_normalization():
    cfg, _, phi = data(3, "generic")
    assert not blr_commutator(cfg, phi, normalization=1).is_zero()


@given(seeds, cases)
def test_dirac_contraction(seed, case):
    cfg, _, phi = data(seed, case)
    assert dirac_from_killing(cfg, phi) == dirac_closed_form(cfg, phi)
    assert dirac_from_killing(cfg, phi) != dirac_closed_form(cfg, phi, epsilon=-1)


def test_dirac_epsilon_is_plus_one():
    assert DIRAC_EPSILON == 1


@given(seeds)
def test_e12_bar_identity(seed):
    lhs, rhs = e12_bar_identity(random_spinor(seed))
    assert lhs == rhs


@given(seeds, cases)
def test_recover_B_all_frame_triples(seed, case):
    cfg, _, phi = data(seed, case)
    for X, Y, xi in itertools.product(FRAME, FRAME, (NU1, NU2)):
        assert recover_B(cfg, phi, X, Y, xi) == cfg.B(X, Y).dot(xi)


def test_recover_B_printed_form_fails():
    cfg, _, phi = data(1, "generic")
    misses = sum(
        recover_B_printed(cfg, phi, X, Y, xi) != cfg.B(X, Y).dot(xi)
        for X, Y, xi in itertools.product(FRAME, FRAME, (NU1, NU2))
    )
    assert misses > 0


@pytest.mark.parametrize("support", [(True, False, False, True), (False, True, True, False), (False,) * 4])
def test_recover_B_degenerate(support):
    cfg, _, _ = data(0, "generic")
    with pytest.raises(DegenerateSpinor):
        recover_B(cfg, random_spinor(0, support=support), E1, E2, NU1)


@given(seeds, cases)
def test_norm_condition_factor_two(seed, case):
    cfg, _, phi = data(seed, case)
    for X in FRAME:
        d = norm_derivative_product_rule(cfg, X, phi)
        r = norm_derivative_rhs(cfg, X, phi)
        assert d == (2 * r[0], 2 * r[1])


def test_norm_condition_not_vacuous():
    cfg, _, phi = data(2, "generic")
    assert any(v != 0 for X in FRAME for v in norm_derivative_rhs(cfg, X, phi))
    # the factor is 2, so the displayed value alone is not the derivative
    d = norm_derivative_product_rule(cfg, E1, phi)
    assert d != norm_derivative_rhs(cfg, E1, phi) or d == (0, 0)


def test_killing_rhs_flat_model():
    # B = 0, j = h = 0: nabla_X phi = -1/2 X.phi
    z = mpq(0)
    nz = NormalVec(z, z)
    flat = PointConfig(mpq(1), nz, nz, nz, z, ((z, z), (z, z)), ((z, z), (z, z)), z)
    phi = random_spinor(9)
    for X in FRAME:
        assert killing_rhs(flat, X, phi) == tangent_mul(X, phi) * -HALF
