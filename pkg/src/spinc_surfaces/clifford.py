"""Clifford algebra of the twisted spinor fiber ``Sigma = Sigma_M (x) Sigma_E``.

Both factors are 2-dimensional.  On each factor we use the same pair of
gamma matrices (basis ordered ``(+, -)`` by the volume-element eigenvalue)::

    g1 = [[0, -1],      g2 = [[0, i],
          [1,  0]]            [i, 0]]

so that ``g1^2 = g2^2 = -1``, ``g1 g2 = -g2 g1`` and ``i g1 g2 = diag(1, -1)``.
The twisted product is

    X . (a (x) s) = (X ._M a) (x) sbar       X tangent
    n . (a (x) s) =  a (x) (n ._E s)         n normal

where ``sbar = s+ - s-`` is the grading involution of ``Sigma_E``.  That
sign is applied in :func:`tangent_mul` and nowhere else.

A :class:`Spinor` stores four components ``psi_<M><E>`` indexed by the
eigenvalues of ``omega_M = i e1.e2`` and ``omega_E = i nu1.nu2``.  The
components are ``GaussQ`` (exact mode) or ``complex`` (float mode); every
operation here is written against the shared arithmetic protocol so the
two modes run through the same code.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .scalar import ZERO, I, gauss

__all__ = [
    "Spinor",
    "TangentVec",
    "NormalVec",
    "AmbientVec",
    "FormT",
    "E1",
    "E2",
    "NU1",
    "NU2",
    "tangent_mul",
    "normal_mul",
    "ambient_mul",
    "conjugate",
    "hermitian",
    "form_action",
    "omega_M",
    "omega_E",
    "bivector_e12",
    "bivector_nu12",
    "basis_spinors",
]


@dataclass(frozen=True, slots=True)
class Spinor:
    psi_pp: object = ZERO
    psi_pm: object = ZERO
    psi_mp: object = ZERO
    psi_mm: object = ZERO

    @classmethod
    def of(cls, comps) -> Spinor:
        return cls(*comps)

    @property
    def comps(self) -> tuple:
        return (self.psi_pp, self.psi_pm, self.psi_mp, self.psi_mm)

    def __iter__(self) -> Iterator:
        return iter(self.comps)

    def __add__(self, other: Spinor) -> Spinor:
        return Spinor(
            self.psi_pp + other.psi_pp,
            self.psi_pm + other.psi_pm,
            self.psi_mp + other.psi_mp,
            self.psi_mm + other.psi_mm,
        )

    def __sub__(self, other: Spinor) -> Spinor:
        return Spinor(
            self.psi_pp - other.psi_pp,
            self.psi_pm - other.psi_pm,
            self.psi_mp - other.psi_mp,
            self.psi_mm - other.psi_mm,
        )

    def __neg__(self) -> Spinor:
        return Spinor(-self.psi_pp, -self.psi_pm, -self.psi_mp, -self.psi_mm)

    def __mul__(self, k) -> Spinor:
        return Spinor(k * self.psi_pp, k * self.psi_pm, k * self.psi_mp, k * self.psi_mm)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.comps)

    # total grading omega_M * omega_E: + on (++),(--), - on (+-),(-+)
    @property
    def plus(self) -> Spinor:
        return Spinor(self.psi_pp, ZERO, ZERO, self.psi_mm)

    @property
    def minus(self) -> Spinor:
        return Spinor(ZERO, self.psi_pm, self.psi_mp, ZERO)

    @property
    def bar(self) -> Spinor:
        return conjugate(self)

    def norm2(self):
        return hermitian(self, self).real


@dataclass(frozen=True, slots=True)
class TangentVec:
    x1: object = 0
    x2: object = 0

    def __add__(self, o: TangentVec) -> TangentVec:
        return TangentVec(self.x1 + o.x1, self.x2 + o.x2)

    def __sub__(self, o: TangentVec) -> TangentVec:
        return TangentVec(self.x1 - o.x1, self.x2 - o.x2)

    def __neg__(self) -> TangentVec:
        return TangentVec(-self.x1, -self.x2)

    def __mul__(self, k) -> TangentVec:
        return TangentVec(k * self.x1, k * self.x2)

    __rmul__ = __mul__

    def dot(self, o: TangentVec):
        return self.x1 * o.x1 + self.x2 * o.x2

    def __getitem__(self, k: int):
        return (self.x1, self.x2)[k]


@dataclass(frozen=True, slots=True)
class NormalVec:
    n1: object = 0
    n2: object = 0

    def __add__(self, o: NormalVec) -> NormalVec:
        return NormalVec(self.n1 + o.n1, self.n2 + o.n2)

    def __sub__(self, o: NormalVec) -> NormalVec:
        return NormalVec(self.n1 - o.n1, self.n2 - o.n2)

    def __neg__(self) -> NormalVec:
        return NormalVec(-self.n1, -self.n2)

    def __mul__(self, k) -> NormalVec:
        return NormalVec(k * self.n1, k * self.n2)

    __rmul__ = __mul__

    def dot(self, o: NormalVec):
        return self.n1 * o.n1 + self.n2 * o.n2

    def __getitem__(self, k: int):
        return (self.n1, self.n2)[k]


@dataclass(frozen=True, slots=True)
class AmbientVec:
    t: TangentVec = TangentVec()
    n: NormalVec = NormalVec()

    @classmethod
    def from_components(cls, x1, x2, n1, n2) -> AmbientVec:
        return cls(TangentVec(x1, x2), NormalVec(n1, n2))

    def dot(self, o: AmbientVec):
        return self.t.dot(o.t) + self.n.dot(o.n)


E1 = TangentVec(1, 0)
E2 = TangentVec(0, 1)
NU1 = NormalVec(1, 0)
NU2 = NormalVec(0, 1)


def tangent_mul(X: TangentVec, phi: Spinor) -> Spinor:
    """``X . phi``; flips the omega_M grading, twisted by ``sbar`` on Sigma_E."""
    a = gauss(-X.x1, X.x2)  # (g1 x1 + g2 x2)[+, -]
    b = gauss(X.x1, X.x2)  # (g1 x1 + g2 x2)[-, +]
    # omega_E sign: + on the E+ slots, - on the E- slots
    return Spinor(a * phi.psi_mp, -(a * phi.psi_mm), b * phi.psi_pp, -(b * phi.psi_pm))


def normal_mul(xi: NormalVec, phi: Spinor) -> Spinor:
    """``xi . phi``; flips the omega_E grading, identity on Sigma_M."""
    a = gauss(-xi.n1, xi.n2)
    b = gauss(xi.n1, xi.n2)
    return Spinor(a * phi.psi_pm, b * phi.psi_pp, a * phi.psi_mm, b * phi.psi_mp)


def ambient_mul(v: AmbientVec, phi: Spinor) -> Spinor:
    return tangent_mul(v.t, phi) + normal_mul(v.n, phi)


def conjugate(phi: Spinor) -> Spinor:
    """``phi+ - phi-`` for the total grading ``omega_M omega_E``."""
    return Spinor(phi.psi_pp, -phi.psi_pm, -phi.psi_mp, phi.psi_mm)


def hermitian(phi: Spinor, psi: Spinor):
    """Hermitian product, C-linear in the first slot."""
    return (
        phi.psi_pp * psi.psi_pp.conjugate()
        + phi.psi_pm * psi.psi_pm.conjugate()
        + phi.psi_mp * psi.psi_mp.conjugate()
        + phi.psi_mm * psi.psi_mm.conjugate()
    )


def omega_M(phi: Spinor) -> Spinor:
    return Spinor(phi.psi_pp, phi.psi_pm, -phi.psi_mp, -phi.psi_mm)


def omega_E(phi: Spinor) -> Spinor:
    return Spinor(phi.psi_pp, -phi.psi_pm, phi.psi_mp, -phi.psi_mm)


def bivector_e12(phi: Spinor) -> Spinor:
    """``e1 . e2 . phi``."""
    return tangent_mul(E1, tangent_mul(E2, phi))


def bivector_nu12(phi: Spinor) -> Spinor:
    """``nu1 . nu2 . phi``."""
    return normal_mul(NU1, normal_mul(NU2, phi))


@dataclass(frozen=True, slots=True)
class FormT:
    """Mixed 2-form ``t_tangent e1^e2 + sum t_mixed[i][j] e_i^nu_j + t_normal nu1^nu2``."""

    t_tangent: object = 0
    t_mixed: tuple = ((0, 0), (0, 0))
    t_normal: object = 0

    def __add__(self, o: FormT) -> FormT:
        return FormT(
            self.t_tangent + o.t_tangent,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.t_mixed, o.t_mixed)),
            self.t_normal + o.t_normal,
        )

    def __sub__(self, o: FormT) -> FormT:
        return self + o * -1

    def __mul__(self, k) -> FormT:
        return FormT(
            k * self.t_tangent,
            tuple(tuple(k * a for a in r) for r in self.t_mixed),
            k * self.t_normal,
        )

    __rmul__ = __mul__

    def coefficients(self) -> tuple:
        """The six real coordinates ``(t, m11, m12, m21, m22, n)``."""
        (m11, m12), (m21, m22) = self.t_mixed
        return (self.t_tangent, m11, m12, m21, m22, self.t_normal)

    @classmethod
    def from_coefficients(cls, coeffs) -> FormT:
        t, m11, m12, m21, m22, n = coeffs
        return cls(t, ((m11, m12), (m21, m22)), n)

    def is_zero(self) -> bool:
        return not any(self.coefficients())


_TANGENTS = (E1, E2)
_NORMALS = (NU1, NU2)


def form_action(T: FormT, phi: Spinor) -> Spinor:
    """Clifford action of a mixed 2-form: ``e_a ^ e_b`` acts as ``e_a . e_b``."""
    out = bivector_e12(phi) * T.t_tangent + bivector_nu12(phi) * T.t_normal
    for i in range(2):
        for j in range(2):
            coeff = T.t_mixed[i][j]
            if coeff:
                out = out + tangent_mul(_TANGENTS[i], normal_mul(_NORMALS[j], phi)) * coeff
    return out


def basis_spinors(exact: bool = True) -> list[Spinor]:
    """The four grading basis spinors ``(++), (+-), (-+), (--)``."""
    one = gauss(1, 0) if exact else 1 + 0j
    zero = ZERO if exact else 0j
    out = []
    for k in range(4):
        comps = [zero] * 4
        comps[k] = one
        out.append(Spinor(*comps))
    return out


def times_i(phi: Spinor) -> Spinor:
    return phi * I
