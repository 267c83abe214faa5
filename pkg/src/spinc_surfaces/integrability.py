"""Curvature gluing: from the Killing equation to Gauss, Ricci and Codazzi.

The spinorial curvature ``R(e1, e2) phi`` can be computed two ways: by
differentiating the Killing equation twice (:func:`curvature_from_killing`)
and from the intrinsic curvatures of TM, E and the auxiliary line bundle
(:func:`spin_curvature_rhs`).  Their difference is a mixed 2-form acting on
``phi`` (plus, in the complex case, a zeroth-order ``phi + phibar`` term),
and that form's coefficients are exactly the residuals of the frame
compatibility equations.  When both halves of ``phi`` are nonzero the form
is determined by its action (:func:`kernel_rank` = 6), which is how the
equations are extracted.

Conventions fixed here and checked by the test-suite:

* ``K_M = <R(e1,e2)e2, e1>``, ``K_N = <R^perp(e1,e2)nu2, nu1>``;
* spin curvature ``-1/2 K_M e1.e2 - 1/2 K_N nu1.nu2 + 1/2 F``, i.e. the
  tangent sign :data:`SPIN_SIGN` is -1 (derived by :func:`resolve_spin_sign`);
* ``F^{M+E}(e1, e2) = -2 i j12``.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .clifford import (
    E1,
    E2,
    NU1,
    NU2,
    FormT,
    NormalVec,
    Spinor,
    bivector_e12,
    bivector_nu12,
    conjugate,
    form_action,
)
from .killing import HALF, DegenerateSpinor, a_term, bracket_S
from .scalar import GaussQ, I, Q
from .structures import DerivSlots, PointConfig

__all__ = [
    "CompatibilityResidual",
    "DegenerateSpinor",
    "InconsistentSystem",
    "gauss_residual",
    "ricci_residual",
    "codazzi_residual",
    "compatibility_residual",
    "solve_compatibility",
    "restricted_aux_curvature",
    "curvature_from_killing",
    "spin_curvature_rhs",
    "SPIN_SIGN",
    "resolve_spin_sign",
    "assemble_T_lagrangian",
    "assemble_T_complex",
    "complex_zeroth_order",
    "form_matrix",
    "kernel_rank",
    "extract_form",
    "solve_complex_lemma",
    "PRINTED_COMPLEX_LEMMA",
    "ExtractedSystem",
    "extract_system",
    "MONOMIALS",
    "monomials",
    "fit_linear",
    "extraction_sample",
    "extracted_coefficients",
    "DISPLAYED_COEFFICIENTS",
    "AMBIENT_LAGRANGIAN_RICCI",
]


class InconsistentSystem(ValueError):
    """The 8x6 real system ``T.phi = rhs`` has no solution."""

    def __init__(self, message: str, rank_A: int, rank_aug: int):
        super().__init__(message)
        self.rank_A = rank_A
        self.rank_aug = rank_aug


_FRAME = (E1, E2)


@dataclass(frozen=True)
class CompatibilityResidual:
    gauss: object
    ricci: object
    codazzi: tuple  # (NormalVec for k=1, NormalVec for k=2)

    def is_zero(self) -> bool:
        return not self.gauss and not self.ricci and all(
            not v.n1 and not v.n2 for v in self.codazzi
        )

    def max_abs(self):
        vals = [abs(self.gauss), abs(self.ricci)]
        for v in self.codazzi:
            vals += [abs(v.n1), abs(v.n2)]
        return max(vals)


# ----------------------------------------------------------------------
# frame equations


def gauss_residual(cfg: PointConfig, K_M):
    """``K_M - (c + <B22, B11> - |B12|^2 + 3 c j12^2)``."""
    c = cfg.c
    return K_M - (c + cfg.B22.dot(cfg.B11) - cfg.B12.dot(cfg.B12) + 3 * c * cfg.j12 * cfg.j12)


def ricci_residual(cfg: PointConfig, K_N):
    """``K_N - (-<[S1,S2]e1,e2> + c(h11 h22 - h12 h21 + 2 j12 t12))``.

    The h-term sign follows the ambient curvature tensor; the frame display
    it is usually quoted from has ``h21 h12 - h11 h22`` instead.
    """
    h = cfg.h
    return K_N - (
        -bracket_S(cfg)
        + cfg.c * (h[0][0] * h[1][1] - h[0][1] * h[1][0] + 2 * cfg.j12 * cfg.t12)
    )


def codazzi_residual(cfg: PointConfig, deriv: DerivSlots, k: int) -> NormalVec:
    """``(nabla'_{e1}B)(e2,e_k) - (nabla'_{e2}B)(e1,e_k) - c(j_2k h1 - j_1k h2 - 2 j12 h_k)``.

    ``k`` is 1 or 2.
    """
    kk = k - 1
    lhs = deriv.d(0, 1, kk) - deriv.d(1, 0, kk)
    rhs = (
        cfg.h_of(E1) * cfg.jkl(1, kk)
        - cfg.h_of(E2) * cfg.jkl(0, kk)
        - cfg.h_of(_FRAME[kk]) * (2 * cfg.j12)
    ) * cfg.c
    return lhs - rhs


def compatibility_residual(cfg: PointConfig, deriv: DerivSlots, K_M, K_N) -> CompatibilityResidual:
    return CompatibilityResidual(
        gauss_residual(cfg, K_M),
        ricci_residual(cfg, K_N),
        (codazzi_residual(cfg, deriv, 1), codazzi_residual(cfg, deriv, 2)),
    )


def solve_compatibility(cfg: PointConfig, deriv: DerivSlots) -> tuple:
    """``(K_M, K_N, deriv')`` satisfying all frame equations at ``cfg``.

    Gauss and Ricci fix the curvatures; Codazzi is met by shifting the free
    slots ``(nabla'_{e1}B)(e2, e_k)``, which appear in the k-th equation only.
    """
    K_M = -gauss_residual(cfg, 0)
    K_N = -ricci_residual(cfg, 0)
    (d11, d12), (_, d22) = deriv.D1
    d12 = d12 - codazzi_residual(cfg, deriv, 1)
    d22 = d22 - codazzi_residual(cfg, deriv, 2)
    fixed = DerivSlots(((d11, d12), (d12, d22)), deriv.D2)
    return K_M, K_N, fixed


# ----------------------------------------------------------------------
# the two curvature computations


def restricted_aux_curvature(cfg: PointConfig) -> GaussQ:
    """``F^{M+E}(e1, e2) = -2 i g(J e1, e2) = -2 i j12``."""
    return GaussQ(0, -2 * Q(cfg.j12))


def curvature_from_killing(cfg: PointConfig, deriv: DerivSlots, phi: Spinor) -> Spinor:
    """``nabla_{e1} nabla_{e2} phi - nabla_{e2} nabla_{e1} phi`` through the Killing equation."""
    out = Spinor()
    for k in range(1, 11):
        out = out + a_term(cfg, deriv, k, (1, 2), phi) - a_term(cfg, deriv, k, (2, 1), phi)
    return out


def spin_curvature_rhs(K_M, K_E, F, phi: Spinor, sign=None) -> Spinor:
    """``sign/2 K_M e1.e2.phi - 1/2 K_E nu1.nu2.phi + 1/2 F phi``."""
    sigma = SPIN_SIGN if sign is None else sign
    return (
        bivector_e12(phi) * (sigma * HALF * K_M)
        - bivector_nu12(phi) * (HALF * K_E)
        + phi * (F * HALF)
    )


def resolve_spin_sign() -> int:
    """Fix the tangent sign by the totally geodesic Lagrangian point.

    There ``B = 0``, ``nabla'B = 0`` and Gauss forces ``K_M = c = 1``; matching
    the ``e1.e2`` coefficient of both curvature computations leaves one
    admissible sign.
    """
    zero, one = mpq(0), mpq(1)
    nz = NormalVec(zero, zero)
    cfg = PointConfig(one, nz, nz, nz, zero, ((one, zero), (zero, one)),
                      ((-one, zero), (zero, -one)), zero, "lagrangian")
    probe = Spinor(GaussQ(1, 0))  # (++) slot: e1.e2 acts as -i
    lhs = curvature_from_killing(cfg, DerivSlots.zero(zero), probe)
    coeff_e12 = lhs.psi_pp - bivector_nu12(probe).psi_pp * (HALF * (zero - one))
    # coeff_e12 = sigma/2 * K_M * (-i) with K_M = 1
    sigma = coeff_e12 / GaussQ(0, -HALF)
    if sigma not in (1, -1):
        raise AssertionError(f"no admissible spin sign (got {sigma})")
    return int(sigma.re)


SPIN_SIGN = resolve_spin_sign()


# ----------------------------------------------------------------------
# assembled forms


def _mixed_from_codazzi(cfg: PointConfig, deriv: DerivSlots, scale) -> tuple:
    rows = []
    for i in (1, 2):
        r = codazzi_residual(cfg, deriv, i)
        rows.append((r.n1 * scale, r.n2 * scale))
    return tuple(rows)


def assemble_T_lagrangian(cfg: PointConfig, deriv: DerivSlots, K_M, K_E) -> FormT:
    """Form with ``curvature_from_killing = spin_curvature_rhs + T.phi`` (F = 0).

    Coefficients: ``1/2`` Gauss residual on ``e1^e2``, ``1/2`` Ricci residual
    on ``nu1^nu2``, ``-1/2`` Codazzi residuals on ``e_i^nu_l``.
    """
    if cfg.case_tag != "lagrangian" or cfg.j12 != 0 or cfg.t12 != 0:
        raise ValueError("assemble_T_lagrangian needs a Lagrangian configuration (j = t = 0)")
    return FormT(
        HALF * gauss_residual(cfg, K_M),
        _mixed_from_codazzi(cfg, deriv, -HALF),
        HALF * ricci_residual(cfg, K_E),
    )


def complex_zeroth_order(cfg: PointConfig, phi: Spinor) -> Spinor:
    """The non-form part ``i j12 (phi + phibar)`` of the complex-case gluing."""
    return (phi + conjugate(phi)) * (I * cfg.j12)


def assemble_T_complex(cfg: PointConfig, deriv: DerivSlots, K_M, K_N) -> FormT:
    """The form ``calT`` with ``calT.phi - i phi - i phibar = -j12 (killing - spin)``.

    With ``T_c`` the form part of ``killing - spin`` (see
    :func:`complex_zeroth_order`), ``calT = -j12 T_c``.  At a point satisfying
    the complex compatibility system ``T_c = e1^e2 + nu1^nu2`` (for
    ``j12 = t12 = 1``), i.e. ``calT = -e1^e2 - nu1^nu2``.
    """
    if cfg.j12 * cfg.j12 != 1 or any(x for row in cfg.h for x in row):
        raise ValueError("assemble_T_complex needs a complex configuration (h = 0, j12 = +-1)")
    one = mpq(1)
    # e1^e2 : 1/2 (K_M - 4 - <B22,B11> + |B12|^2) + 1
    # nu1^nu2: 1/2 (K_N + bracket - 2 j12 t12) + j12 t12
    t_tan = HALF * gauss_residual(cfg, K_M) + one
    t_nor = HALF * ricci_residual(cfg, K_N) + cfg.j12 * cfg.t12
    Tc = FormT(t_tan, _mixed_from_codazzi(cfg, deriv, -HALF), t_nor)
    return Tc * (-cfg.j12)


# ----------------------------------------------------------------------
# the form map T -> T.phi and its rank


def _basis_forms() -> list[FormT]:
    out = []
    for k in range(6):
        coeffs = [0] * 6
        coeffs[k] = 1
        out.append(FormT.from_coefficients(coeffs))
    return out


_BASIS_FORMS = _basis_forms()


def _realify(psi: Spinor) -> list:
    vals = []
    for z in psi.comps:
        z = z if isinstance(z, GaussQ) else GaussQ(z)
        vals += [z.re, z.im]
    return vals


def form_matrix(phi: Spinor) -> DomainMatrix:
    """The real 8x6 matrix of ``T -> T.phi`` in the coordinates of :meth:`FormT.coefficients`."""
    cols = [_realify(form_action(T, phi)) for T in _BASIS_FORMS]
    rows = [[QQ(cols[j][i]) for j in range(6)] for i in range(8)]
    return DomainMatrix(rows, (8, 6), QQ)


def kernel_rank(phi: Spinor) -> int:
    """Rank of ``T -> T.phi`` (6 iff both total-grading halves of phi are nonzero)."""
    return form_matrix(phi).rank()


def _solve(phi: Spinor, rhs: Spinor) -> tuple:
    A = form_matrix(phi)
    b = DomainMatrix([[QQ(x)] for x in _realify(rhs)], (8, 1), QQ)
    aug = A.hstack(b)
    rA, rAug = A.rank(), aug.rank()
    if rA != rAug:
        raise InconsistentSystem("T.phi = rhs has no solution", rA, rAug)
    if rA < 6:
        raise DegenerateSpinor(f"T.phi = rhs is underdetermined (rank {rA} < 6)")
    R, pivots = aug.rref()
    Rl = R.to_list()
    return tuple(Q(Rl[i][6]) for i in range(6))


def extract_form(phi: Spinor, residual: Spinor) -> FormT:
    """The unique real form ``T`` with ``T.phi = residual``."""
    return FormT.from_coefficients(_solve(phi, residual))


PRINTED_COMPLEX_LEMMA = {"T^t": -1, "T^n": 0, "T^m": 0}


def solve_complex_lemma(phi: Spinor) -> tuple:
    """Solve ``calT.phi = i phi + i phibar`` for ``(T^t, T^n, T^m)``.

    ``phi`` must live in the ``(++) + (-+)`` slots with both nonzero.
    """
    if phi.psi_pm or phi.psi_mm:
        raise ValueError("phi must be supported in the (++) and (-+) slots")
    if not phi.psi_pp or not phi.psi_mp:
        raise DegenerateSpinor("both the (++) and (-+) components must be nonzero")
    rhs = (phi + conjugate(phi)) * I
    T = extract_form(phi, rhs)
    return T.t_tangent, T.t_normal, T.t_mixed


# ----------------------------------------------------------------------
# extracting the frame equations from the spinor side


@dataclass(frozen=True)
class ExtractedSystem:
    """Values forced by ``killing = spin`` at one point.

    ``codazzi`` holds ``-2`` times the mixed part of the residual form; the
    Codazzi equations are the statement that it vanishes.
    """

    K_M: object
    K_N: object
    codazzi: tuple


def _form_residual(cfg: PointConfig, deriv: DerivSlots, phi: Spinor, K_M, K_N, complex_case: bool) -> FormT:
    F = restricted_aux_curvature(cfg) if complex_case else 0
    S = curvature_from_killing(cfg, deriv, phi) - spin_curvature_rhs(K_M, K_N, F, phi)
    if complex_case:
        S = S - complex_zeroth_order(cfg, phi)
    return extract_form(phi, S)


def extract_system(cfg: PointConfig, deriv: DerivSlots, phi: Spinor) -> ExtractedSystem:
    """Solve ``killing = spin`` for ``K_M``, ``K_N`` using only the spinor side.

    Lagrangian points (``j = t = 0``): the residual form must vanish.
    Complex points, frames oriented with ``j12 = t12 = 1`` and ``phi`` in
    the ``(++) + (-+)`` slots: ``-T_c`` must be the solution of
    ``calT.phi = i phi + i phibar``, found by :func:`solve_complex_lemma`.
    """
    complex_case = cfg.case_tag == "complex"
    if complex_case:
        if cfg.j12 != 1 or cfg.t12 != 1:
            raise ValueError("complex extraction expects frames with j12 = t12 = 1")
        t_t, t_n, t_m = solve_complex_lemma(phi)
        target = FormT(-t_t, tuple(tuple(-x for x in r) for r in t_m), -t_n)
    else:
        if cfg.j12 != 0 or cfg.t12 != 0:
            raise ValueError("extraction supports Lagrangian (j = t = 0) or complex points")
        target = FormT(0, ((0, 0), (0, 0)), 0)
    zero, one = mpq(0), mpq(1)
    T0 = _form_residual(cfg, deriv, phi, zero, zero, complex_case)
    dM = _form_residual(cfg, deriv, phi, one, zero, complex_case) - T0
    dN = _form_residual(cfg, deriv, phi, zero, one, complex_case) - T0
    if any(dM.coefficients()[1:]) or any(dN.coefficients()[:5]):
        raise AssertionError("K_M / K_N leak outside their 2-form slots")
    K_M = (target.t_tangent - T0.t_tangent) / dM.t_tangent
    K_N = (target.t_normal - T0.t_normal) / dN.t_normal
    cod = tuple(
        NormalVec(-2 * (T0.t_mixed[i][0] - target.t_mixed[i][0]), -2 * (T0.t_mixed[i][1] - target.t_mixed[i][1]))
        for i in range(2)
    )
    return ExtractedSystem(K_M, K_N, cod)


MONOMIALS = ("1", "<B11,B22>", "|B12|^2", "bracket", "h11h22", "h12h21")


def monomials(cfg: PointConfig) -> dict:
    h = cfg.h
    return {
        "1": cfg.c,
        "<B11,B22>": cfg.B11.dot(cfg.B22),
        "|B12|^2": cfg.B12.dot(cfg.B12),
        "bracket": bracket_S(cfg),
        "h11h22": h[0][0] * h[1][1],
        "h12h21": h[0][1] * h[1][0],
    }


def fit_linear(rows: list, values: list) -> tuple:
    """Exact coefficients ``x`` with ``rows @ x == values``.

    Raises ``ValueError`` when the fit is not exact or not unique.
    """
    n, m = len(rows), len(rows[0])
    A = DomainMatrix([[QQ(Q(x)) for x in r] for r in rows], (n, m), QQ)
    b = DomainMatrix([[QQ(Q(v))] for v in values], (n, 1), QQ)
    At = A.transpose()
    N = At * A
    if N.rank() < m:
        raise ValueError("monomials are linearly dependent on the sample")
    x = N.inv() * (At * b)
    if (A * x - b).to_list() != [[0]] * n:
        raise ValueError("extracted values are not linear in the monomials")
    return tuple(Q(v[0]) for v in x.to_list())


def extraction_sample(seed: int, case: str, bound: int = 10) -> tuple:
    """``(cfg, deriv, phi)`` for extraction: the case's J-blocks with a free B.

    The identities being extracted are algebraic in B, so B is not tied to
    the case's admissibility constraint here; that keeps the monomials
    linearly independent across samples.
    """
    import random

    from .structures import random_admissible, random_rational, random_spinor

    cfg, deriv = random_admissible(seed, case, bound)
    rng = random.Random(f"free-B:{case}:{seed}")
    B = [NormalVec(random_rational(rng, bound), random_rational(rng, bound)) for _ in range(3)]
    cfg = cfg.with_B(*B)
    if case == "complex":
        one = mpq(1)
        cfg = PointConfig(cfg.c, *B, one, cfg.h, cfg.s, one, "complex")
        phi = random_spinor(seed, bound, support=(True, False, True, False))
    else:
        phi = random_spinor(seed, bound)
    return cfg, deriv, phi


def extracted_coefficients(case: str, samples: int = 16, seed: int = 0) -> dict:
    """Exact monomial coefficients of the extracted ``K_M`` and ``K_N`` equations."""
    names = MONOMIALS if case == "lagrangian" else MONOMIALS[:4]
    rows, kms, kns = [], [], []
    for k in range(samples):
        cfg, deriv, phi = extraction_sample(seed + k, case)
        ext = extract_system(cfg, deriv, phi)
        mono = monomials(cfg)
        rows.append([mono[n] for n in names])
        kms.append(ext.K_M)
        kns.append(ext.K_N)
    return {
        "K_M": dict(zip(names, fit_linear(rows, kms))),
        "K_N": dict(zip(names, fit_linear(rows, kns))),
    }


# Coefficients of the displayed compatibility systems (c = 1).
DISPLAYED_COEFFICIENTS = {
    "complex": {
        "K_M": {"1": 4, "<B11,B22>": 1, "|B12|^2": -1, "bracket": 0},
        "K_N": {"1": 2, "<B11,B22>": 0, "|B12|^2": 0, "bracket": -1},
    },
    "lagrangian": {
        "K_M": {"1": 1, "<B11,B22>": 1, "|B12|^2": -1, "bracket": 0, "h11h22": 0, "h12h21": 0},
        "K_N": {"1": 0, "<B11,B22>": 0, "|B12|^2": 0, "bracket": -1, "h11h22": -1, "h12h21": 1},
    },
}
# The same Lagrangian Ricci equation as it comes out of the ambient curvature
# tensor; it differs from the display above in the sign of the h-terms.
AMBIENT_LAGRANGIAN_RICCI = {"1": 0, "<B11,B22>": 0, "|B12|^2": 0, "bracket": -1, "h11h22": 1, "h12h21": -1}
