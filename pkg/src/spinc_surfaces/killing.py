"""Generalized Killing equation on the twisted bundle and its pointwise identities.

The restriction of a Kaehlerian Killing spinor to a surface satisfies

    nabla_X phi = -1/2 eta(X).phi - 1/2 X.phi + i/2 j(X).phibar + i/2 h(X).phibar

Everything below is a pointwise ("closed") statement: wherever a
derivative of ``phi`` appears it is replaced by :func:`killing_rhs`, and
the derivatives of ``j`` and ``h`` are replaced by the parallel-J relations

    (nabla_X j) Y    = S_{h(Y)} X + s(B(X, Y))
    (nabla_X h) Y    = t(B(X, Y)) - B(X, j(Y))

so each identity becomes polynomial in ``(cfg, deriv, phi)`` and is decided
exactly.

Two index conventions need care.  ``a_term(..., order=(a, b))`` is the k-th
brace of ``nabla_{e_a} nabla_{e_b} phi``; the "21" terms are the "12" terms
with e1 and e2 swapped.  The d-eta and eta-commutator formulas hold in the
halved normalization ``eta' = -1/2 eta``; see :func:`blr_commutator`.
"""
from __future__ import annotations

from gmpy2 import mpq

from .clifford import (
    E1,
    E2,
    NU1,
    NU2,
    NormalVec,
    Spinor,
    TangentVec,
    bivector_e12,
    bivector_nu12,
    conjugate,
    hermitian,
    normal_mul,
    tangent_mul,
)
from .scalar import I, gauss
from .structures import (
    DerivSlots,
    PointConfig,
    beta_mul,
    eta_mul,
    mean_curvature,
    weingarten,
)

__all__ = [
    "DegenerateSpinor",
    "HALF",
    "QUARTER",
    "killing_rhs",
    "killing_rhs_projected",
    "nabla_bar_rhs",
    "shape_apply",
    "nabla_j",
    "nabla_h",
    "nabla_s",
    "nabla_t",
    "a_term",
    "lemma_lhs",
    "lemma_rhs",
    "lemma_item",
    "LEMMA_TERMS",
    "bracket_S",
    "blr_deta",
    "blr_commutator",
    "dirac_from_killing",
    "dirac_closed_form",
    "DIRAC_EPSILON",
    "PRINTED_DIRAC_EPSILON",
    "derive_dirac_epsilon",
    "e12_bar_identity",
    "recover_B",
    "recover_B_printed",
    "norm_derivative_rhs",
    "norm_derivative_product_rule",
]

HALF = mpq(1, 2)
QUARTER = mpq(1, 4)
_FRAME = (E1, E2)


class DegenerateSpinor(ValueError):
    """A required half-spinor vanishes, so the requested quantity is undefined."""


def _vec(X: TangentVec, phi: Spinor) -> Spinor:
    return tangent_mul(X, phi)


def _nvec(xi: NormalVec, phi: Spinor) -> Spinor:
    return normal_mul(xi, phi)


def killing_rhs(cfg: PointConfig, X: TangentVec, phi: Spinor) -> Spinor:
    """Right-hand side of the generalized Killing equation along ``X``."""
    pb = conjugate(phi)
    return (
        eta_mul(cfg, X, phi) * -HALF
        - _vec(X, phi) * HALF
        + (_vec(cfg.j_of(X), pb) + _nvec(cfg.h_of(X), pb)) * (I * HALF)
    )


def killing_rhs_projected(cfg: PointConfig, X: TangentVec, phi: Spinor) -> tuple[Spinor, Spinor]:
    """The equation split on ``Sigma^+`` and ``Sigma^-``.

    ``nabla phi^- `` carries ``+ i/2 j(X).phi^+``; the printed display has a
    garbled token there, this is the projection of the full equation.
    """
    p, m = phi.plus, phi.minus
    jX, hX = cfg.j_of(X), cfg.h_of(X)
    plus = (
        eta_mul(cfg, X, p) * -HALF
        - _vec(X, m) * HALF
        - (_vec(jX, m) + _nvec(hX, m)) * (I * HALF)
    )
    minus = (
        eta_mul(cfg, X, m) * -HALF
        - _vec(X, p) * HALF
        + (_vec(jX, p) + _nvec(hX, p)) * (I * HALF)
    )
    return plus, minus


def nabla_bar_rhs(cfg: PointConfig, X: TangentVec, phi: Spinor) -> Spinor:
    """``nabla_X phibar`` as implied by the Killing equation."""
    pb = conjugate(phi)
    return (
        eta_mul(cfg, X, pb) * -HALF
        + _vec(X, pb) * HALF
        - (_vec(cfg.j_of(X), phi) + _nvec(cfg.h_of(X), phi)) * (I * HALF)
    )


# ----------------------------------------------------------------------
# derivative data


def shape_apply(cfg: PointConfig, nu: NormalVec, X: TangentVec) -> TangentVec:
    """``S_nu X``."""
    W = weingarten(cfg, nu)
    return TangentVec(X.x1 * W[0][0] + X.x2 * W[1][0], X.x1 * W[0][1] + X.x2 * W[1][1])


def nabla_j(cfg: PointConfig, X: TangentVec, Y: TangentVec) -> TangentVec:
    """``(nabla_X j) Y = S_{h(Y)} X + s(B(X, Y))``."""
    return shape_apply(cfg, cfg.h_of(Y), X) + cfg.s_of(cfg.B(X, Y))


def nabla_h(cfg: PointConfig, X: TangentVec, Y: TangentVec) -> NormalVec:
    """``(nabla_X h) Y = t(B(X, Y)) - B(X, j(Y))``."""
    return cfg.t_of(cfg.B(X, Y)) - cfg.B(X, cfg.j_of(Y))


def nabla_t(cfg: PointConfig, X: TangentVec, xi: NormalVec) -> NormalVec:
    """``(nabla_X t) xi = -B(s(xi), X) - h(S_xi X)``."""
    return -cfg.B(cfg.s_of(xi), X) - cfg.h_of(shape_apply(cfg, xi, X))


def nabla_s(cfg: PointConfig, X: TangentVec, xi: NormalVec) -> TangentVec:
    """``(nabla_X s) xi = -j(S_xi X) + S_{t(xi)} X``."""
    return -cfg.j_of(shape_apply(cfg, xi, X)) + shape_apply(cfg, cfg.t_of(xi), X)


def _d_eta_mul(cfg: PointConfig, deriv: DerivSlots, a: int, b: int, phi: Spinor) -> Spinor:
    """``(nabla_{e_a} eta(e_b)) . phi`` in a frame normal at the point."""
    return tangent_mul(E1, normal_mul(deriv.d(a, 0, b), phi)) + tangent_mul(
        E2, normal_mul(deriv.d(a, 1, b), phi)
    )


def a_term(
    cfg: PointConfig,
    deriv: DerivSlots,
    k: int,
    order: tuple[int, int],
    phi: Spinor,
) -> Spinor:
    """The k-th brace (1..10) of ``nabla_{e_a} nabla_{e_b} phi``, ``order = (a, b)``."""
    if not 1 <= k <= 10:
        raise ValueError(f"A-term index must be in 1..10, got {k}")
    if tuple(order) not in ((1, 2), (2, 1)):
        raise ValueError(f"order must be (1, 2) or (2, 1), got {order}")
    a, b = order[0] - 1, order[1] - 1
    X, Y = _FRAME[a], _FRAME[b]
    pb = conjugate(phi)
    iq = I * QUARTER

    def eta(Z, psi):
        return eta_mul(cfg, Z, psi)

    jX, jY, hX, hY = cfg.j_of(X), cfg.j_of(Y), cfg.h_of(X), cfg.h_of(Y)
    if k == 1:
        return (
            _d_eta_mul(cfg, deriv, a, b, phi) * -HALF
            + eta(Y, eta(X, phi)) * QUARTER
            + _vec(Y, _vec(X, phi)) * QUARTER
        )
    if k == 2:
        return (eta(Y, _vec(X, phi)) + _vec(Y, eta(X, phi))) * QUARTER
    if k == 3:
        return (_vec(nabla_j(cfg, X, Y), pb) + _nvec(nabla_h(cfg, X, Y), pb)) * (I * HALF)
    if k == 4:
        return (_vec(jY, _vec(X, pb)) - _vec(Y, _vec(jX, pb))) * iq
    if k == 5:
        return (_nvec(hY, _vec(X, pb)) - _vec(Y, _nvec(hX, pb))) * iq
    if k == 6:
        return _vec(jY, _vec(jX, phi)) * QUARTER
    if k == 7:
        return _nvec(hY, _nvec(hX, phi)) * QUARTER
    if k == 8:
        return (_vec(jY, _nvec(hX, phi)) + _nvec(hY, _vec(jX, phi))) * QUARTER
    if k == 9:
        return (eta(Y, _nvec(hX, pb)) + _nvec(hY, eta(X, pb))) * -iq
    return (eta(Y, _vec(jX, pb)) + _vec(jY, eta(X, pb))) * -iq


# which A-terms each lemma item collects
LEMMA_TERMS: dict[int, tuple[int, ...]] = {
    1: (2,),
    2: (5,),
    3: (3, 9, 10),
    4: (6,),
    5: (7,),
    6: (4,),
    7: (8,),
    8: (1,),
}


def lemma_lhs(cfg: PointConfig, deriv: DerivSlots, item: int, phi: Spinor) -> Spinor:
    out = Spinor()
    for k in LEMMA_TERMS[item]:
        out = out + a_term(cfg, deriv, k, (1, 2), phi) - a_term(cfg, deriv, k, (2, 1), phi)
    return out


def bracket_S(cfg: PointConfig):
    """``<[S_nu1, S_nu2] e1, e2>``."""
    W1, W2 = weingarten(cfg, NU1), weingarten(cfg, NU2)
    # W symmetric: <S1 S2 e1, e2> = sum_b W2[0][b] W1[b][1]
    s12 = W2[0][0] * W1[0][1] + W2[0][1] * W1[1][1]
    s21 = W1[0][0] * W2[0][1] + W1[0][1] * W2[1][1]
    return s12 - s21


def _codazzi_lhs(deriv: DerivSlots, j: int) -> NormalVec:
    """``(nabla'_{e1} B)(e2, e_j) - (nabla'_{e2} B)(e1, e_j)``."""
    return deriv.d(0, 1, j) - deriv.d(1, 0, j)


def lemma_rhs(cfg: PointConfig, deriv: DerivSlots, item: int, phi: Spinor) -> Spinor:
    """Closed-form right side of lemma item 1..8."""
    if item in (1, 2, 3):
        return Spinor()
    h = cfg.h
    j12 = cfg.j12
    j21 = -j12
    if item == 4:
        return bivector_e12(phi) * (-HALF * j12 * j12)
    if item == 5:
        return bivector_nu12(phi) * (HALF * (h[1][0] * h[0][1] - h[0][0] * h[1][1]))
    if item == 6:
        return conjugate(phi) * (I * j12)
    if item == 7:
        # the last coefficient is j21 h22 (printed: j12 h22)
        terms = (
            (E1, NU1, j21 * h[0][0]),
            (E1, NU2, j21 * h[0][1]),
            (E2, NU1, j21 * h[1][0]),
            (E2, NU2, j21 * h[1][1]),
        )
        out = Spinor()
        for e, nu, coeff in terms:
            out = out + tangent_mul(e, normal_mul(nu, phi)) * coeff
        return out * HALF
    if item == 8:
        cod = Spinor()
        for j in range(2):
            cod = cod + tangent_mul(_FRAME[j], normal_mul(_codazzi_lhs(deriv, j), phi))
        gauss_coeff = cfg.B12.dot(cfg.B12) - cfg.B11.dot(cfg.B22)
        return (
            cod * -HALF
            + bivector_nu12(phi) * (HALF * bracket_S(cfg))
            + bivector_e12(phi) * (HALF * gauss_coeff)
            - bivector_e12(phi) * HALF
        )
    raise ValueError(f"lemma item must be in 1..8, got {item}")


def lemma_item(cfg: PointConfig, deriv: DerivSlots, item: int, phi: Spinor) -> Spinor:
    """Residual ``LHS - RHS`` of lemma item 1..8; identically zero."""
    if not 1 <= item <= 8:
        raise ValueError(f"lemma item must be in 1..8, got {item}")
    return lemma_lhs(cfg, deriv, item, phi) - lemma_rhs(cfg, deriv, item, phi)


# ----------------------------------------------------------------------
# d-eta and eta-commutator, in the normalization eta' = -1/2 eta


def blr_deta(cfg: PointConfig, deriv: DerivSlots, phi: Spinor) -> Spinor:
    """Residual of ``d eta'(e1, e2) = -1/2 sum_j e_j.(codazzi lhs)_j``."""
    d_eta = (_d_eta_mul(cfg, deriv, 0, 1, phi) - _d_eta_mul(cfg, deriv, 1, 0, phi)) * -HALF
    rhs = Spinor()
    for j in range(2):
        rhs = rhs + tangent_mul(_FRAME[j], normal_mul(_codazzi_lhs(deriv, j), phi))
    return d_eta - rhs * -HALF


def blr_commutator(cfg: PointConfig, phi: Spinor, normalization=-HALF) -> Spinor:
    """Residual of the eta-commutator formula.

    With ``normalization = -1/2`` (the halved eta') the
    residual vanishes identically; with ``1`` (the eta used here) it does not.
    """
    k2 = normalization * normalization
    lhs = (
        eta_mul(cfg, E2, eta_mul(cfg, E1, phi)) - eta_mul(cfg, E1, eta_mul(cfg, E2, phi))
    ) * k2
    rhs = bivector_e12(phi) * (HALF * (cfg.B12.dot(cfg.B12) - cfg.B11.dot(cfg.B22))) + bivector_nu12(
        phi
    ) * (HALF * bracket_S(cfg))
    return lhs - rhs


# ----------------------------------------------------------------------
# Dirac equation


def dirac_from_killing(cfg: PointConfig, phi: Spinor) -> Spinor:
    """``D phi = sum_i e_i . nabla_{e_i} phi`` with the Killing equation substituted."""
    return tangent_mul(E1, killing_rhs(cfg, E1, phi)) + tangent_mul(E2, killing_rhs(cfg, E2, phi))


def derive_dirac_epsilon():
    """Coefficient of ``phi`` in the contraction for ``B = 0, j = h = 0``."""
    from .structures import PointConfig as _PC

    zero = mpq(0)
    nz = NormalVec(zero, zero)
    flat = _PC(mpq(1), nz, nz, nz, zero, ((zero, zero), (zero, zero)), ((zero, zero), (zero, zero)), zero)
    probe = Spinor(gauss(1, 0))
    return dirac_from_killing(flat, probe).psi_pp.re


DIRAC_EPSILON = derive_dirac_epsilon()
PRINTED_DIRAC_EPSILON = -1


def e12_bar_identity(phi: Spinor) -> tuple[Spinor, Spinor]:
    """The two sides of ``i e1.e2.phibar = i nu1.nu2.phi``."""
    return bivector_e12(conjugate(phi)) * I, bivector_nu12(phi) * I


def dirac_closed_form(cfg: PointConfig, phi: Spinor, epsilon=None) -> Spinor:
    """``H.phi + eps phi + i/2 beta.phibar + i j12 e1.e2.phibar``."""
    eps = DIRAC_EPSILON if epsilon is None else epsilon
    pb = conjugate(phi)
    return (
        normal_mul(mean_curvature(cfg), phi)
        + phi * eps
        + beta_mul(cfg, pb) * (I * HALF)
        + bivector_e12(pb) * (I * cfg.j12)
    )


# ----------------------------------------------------------------------
# recovering B from the spinor


def _require_halves(phi: Spinor) -> None:
    if phi.plus.is_zero():
        raise DegenerateSpinor("phi^+ vanishes; |phi^+|^2 appears in a denominator")
    if phi.minus.is_zero():
        raise DegenerateSpinor("phi^- vanishes; |phi^-|^2 appears in a denominator")


def recover_B(
    cfg: PointConfig, phi: Spinor, X: TangentVec, Y: TangentVec, xi: NormalVec
):
    """``<B(X, Y), xi>`` reconstructed from ``phi`` and its derivative along ``Y``.

    Each half contributes ``Re<X.nabla_Y phi^+- + 1/2 X.(Y +- i jY +- i hY).phi^-+,
    xi.phi^+-> / |phi^+-|^2``; their mixed-bivector parts cancel in the sum.
    """
    _require_halves(phi)
    d_plus, d_minus = killing_rhs_projected(cfg, Y, phi)
    p, m = phi.plus, phi.minus
    jY, hY = cfg.j_of(Y), cfg.h_of(Y)

    def shifted(psi, sign):
        return tangent_mul(Y, psi) + (tangent_mul(jY, psi) + normal_mul(hY, psi)) * (I * sign)

    term_p = tangent_mul(X, d_plus) + tangent_mul(X, shifted(m, 1)) * HALF
    term_m = tangent_mul(X, d_minus) + tangent_mul(X, shifted(p, -1)) * HALF
    return (
        hermitian(term_p, normal_mul(xi, p)).real / p.norm2()
        + hermitian(term_m, normal_mul(xi, m)).real / m.norm2()
    )


def recover_B_printed(
    cfg: PointConfig, phi: Spinor, X: TangentVec, Y: TangentVec, xi: NormalVec
):
    """The reconstruction formula exactly as displayed (kept for comparison)."""
    _require_halves(phi)
    d_plus, d_minus = killing_rhs_projected(cfg, Y, phi)
    p, m = phi.plus, phi.minus
    jX, hX = cfg.j_of(X), cfg.h_of(X)

    def op(sign, psi):
        Ypsi = tangent_mul(Y, psi)
        return tangent_mul(X, Ypsi) + (tangent_mul(jX, Ypsi) + normal_mul(hX, Ypsi)) * (I * sign)

    term_p = tangent_mul(X, d_plus) - op(1, m) * HALF
    term_m = tangent_mul(X, d_minus) - op(-1, m) * HALF
    return (
        hermitian(term_p, normal_mul(xi, p)).real / p.norm2()
        + hermitian(term_m, normal_mul(xi, p)).real / m.norm2()
    )


# ----------------------------------------------------------------------
# norm condition


def norm_derivative_rhs(cfg: PointConfig, X: TangentVec, phi: Spinor) -> tuple:
    """The displayed norm-condition right sides for ``(|phi^+|^2, |phi^-|^2)``.

    ``Re< -1/2 X.phi^-+ -+ i/2 j(X).phi^-+ -+ i/2 h(X).phi^-+ , phi^+- >``.
    This is half of the derivative computed by the product rule, see
    :func:`norm_derivative_product_rule`.
    """
    out = []
    for sign, here, there in ((1, phi.plus, phi.minus), (-1, phi.minus, phi.plus)):
        jX, hX = cfg.j_of(X), cfg.h_of(X)
        v = (
            tangent_mul(X, there) * -HALF
            - (tangent_mul(jX, there) + normal_mul(hX, there)) * (I * HALF * sign)
        )
        out.append(hermitian(v, here).real)
    return tuple(out)


def norm_derivative_product_rule(cfg: PointConfig, X: TangentVec, phi: Spinor) -> tuple:
    """``X |phi^+-|^2 = 2 Re<nabla_X phi^+-, phi^+->`` along the Killing equation."""
    d_plus, d_minus = killing_rhs_projected(cfg, X, phi)
    return (2 * hermitian(d_plus, phi.plus).real, 2 * hermitian(d_minus, phi.minus).real)
