"""Pointwise immersion data: second fundamental form and the blocks of J.

In the orthonormal frames ``(e1, e2)`` of TM and ``(nu1, nu2)`` of E the
ambient complex structure splits as ``J X = j X + h X`` and
``J xi = s xi + t xi``.  Storage conventions (0-based in code)::

    h[k][l] = <h(e_k), nu_l>        s[l][k] = <s(nu_l), e_k>
    j(e1) = j12 e2,  j(e2) = -j12 e1
    t(nu1) = t12 nu2, t(nu2) = -t12 nu1

so the h/s duality reads ``s = -h^T``.  The ambient 4x4 matrix of J in
the basis ``(e1, e2, nu1, nu2)`` has the images of the basis vectors as
columns.

Random admissible configurations are produced constructively (Cayley
rotations of the standard J, constrained B) so no rejection sampling is
needed and everything stays exactly rational.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Literal

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .clifford import E1, E2, NormalVec, Spinor, TangentVec, normal_mul, tangent_mul
from .scalar import GaussQ, Q

CaseTag = Literal["generic", "complex", "lagrangian"]
CASES: tuple[str, ...] = ("generic", "complex", "lagrangian")

__all__ = [
    "CASES",
    "PointConfig",
    "DerivSlots",
    "RelationReport",
    "InadmissibleJ",
    "ambient_J",
    "blocks_from_ambient_J",
    "check_relations",
    "random_admissible",
    "random_spinor",
    "random_rational",
    "eta_mul",
    "mean_curvature",
    "beta_mul",
    "weingarten",
    "cayley",
]


class InadmissibleJ(ValueError):
    """Raised when a 4x4 matrix is not an orthogonal complex structure."""


def _mat(rows):
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class PointConfig:
    c: object
    B11: NormalVec
    B12: NormalVec
    B22: NormalVec
    j12: object
    h: tuple
    s: tuple
    t12: object
    case_tag: CaseTag = "generic"

    # -- tensors as maps ---------------------------------------------
    def B(self, X: TangentVec, Y: TangentVec) -> NormalVec:
        return (
            self.B11 * (X.x1 * Y.x1)
            + self.B12 * (X.x1 * Y.x2 + X.x2 * Y.x1)
            + self.B22 * (X.x2 * Y.x2)
        )

    def Bij(self, i: int, k: int) -> NormalVec:
        """``B(e_{i+1}, e_{k+1})``."""
        if i == k:
            return self.B11 if i == 0 else self.B22
        return self.B12

    def j_of(self, X: TangentVec) -> TangentVec:
        return TangentVec(-self.j12 * X.x2, self.j12 * X.x1)

    def jkl(self, k: int, l: int):
        """``g(j(e_{k+1}), e_{l+1})``."""
        if k == l:
            return 0
        return self.j12 if k == 0 else -self.j12

    def h_of(self, X: TangentVec) -> NormalVec:
        h = self.h
        return NormalVec(X.x1 * h[0][0] + X.x2 * h[1][0], X.x1 * h[0][1] + X.x2 * h[1][1])

    def s_of(self, xi: NormalVec) -> TangentVec:
        s = self.s
        return TangentVec(xi.n1 * s[0][0] + xi.n2 * s[1][0], xi.n1 * s[0][1] + xi.n2 * s[1][1])

    def t_of(self, xi: NormalVec) -> NormalVec:
        return NormalVec(-self.t12 * xi.n2, self.t12 * xi.n1)

    def with_B(self, B11: NormalVec, B12: NormalVec, B22: NormalVec) -> PointConfig:
        return PointConfig(self.c, B11, B12, B22, self.j12, self.h, self.s, self.t12, self.case_tag)


@dataclass(frozen=True)
class DerivSlots:
    """``D[a][i][k] = (nabla'_{e_{a+1}} B)(e_{i+1}, e_{k+1})``, symmetric in (i, k).

    The frame is taken normal at the point, so these are the only first
    order data of B; they are free parameters.
    """

    D1: tuple
    D2: tuple

    def d(self, a: int, i: int, k: int) -> NormalVec:
        return (self.D1, self.D2)[a][i][k]

    @classmethod
    def zero(cls, zero=0) -> DerivSlots:
        z = NormalVec(zero, zero)
        block = ((z, z), (z, z))
        return cls(block, block)

    @classmethod
    def from_upper(cls, d1: tuple, d2: tuple) -> DerivSlots:
        """Build from ``(D11, D12, D22)`` triples of each derivative."""

        def sym(t):
            return ((t[0], t[1]), (t[1], t[2]))

        return cls(sym(d1), sym(d2))


# ----------------------------------------------------------------------
# ambient J <-> blocks


def ambient_J(cfg: PointConfig) -> tuple:
    j, t, h, s = cfg.j12, cfg.t12, cfg.h, cfg.s
    return _mat(
        [
            [0, -j, s[0][0], s[1][0]],
            [j, 0, s[0][1], s[1][1]],
            [h[0][0], h[1][0], 0, -t],
            [h[0][1], h[1][1], t, 0],
        ]
    )


def _dm(rows) -> DomainMatrix:
    return DomainMatrix([[QQ(Q(x)) for x in r] for r in rows], (len(rows), len(rows[0])), QQ)


def _eye(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ)


def blocks_from_ambient_J(J) -> tuple:
    """Split a 4x4 orthogonal complex structure into ``(j12, h, s, t12)``.

    Raises :class:`InadmissibleJ` unless ``J^T J = I``, ``J^2 = -I`` and
    ``J^T = -J`` hold exactly.
    """
    M = _dm(J)
    eye = _eye(4).to_list()
    if M.transpose().to_list() != (-M).to_list():
        raise InadmissibleJ("J is not antisymmetric")
    if (M * M).to_list() != (-_eye(4)).to_list():
        raise InadmissibleJ("J^2 != -id")
    if (M.transpose() * M).to_list() != eye:
        raise InadmissibleJ("J is not orthogonal")
    A = [[Q(x) for x in r] for r in J]
    j12 = A[1][0]
    t12 = A[3][2]
    h = _mat([[A[2 + l][k] for l in range(2)] for k in range(2)])
    s = _mat([[A[k][2 + l] for k in range(2)] for l in range(2)])
    return j12, h, s, t12


# ----------------------------------------------------------------------
# algebraic relations of the J-blocks


@dataclass(frozen=True)
class RelationReport:
    residuals: dict = field(default_factory=dict)

    @property
    def max(self):
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max == 0


def _mm(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def _madd(*Ms):
    return [[sum(M[i][j] for M in Ms) for j in range(2)] for i in range(2)]


def _mmax(M):
    return max(abs(M[i][j]) for i in range(2) for j in range(2))


def check_relations(cfg: PointConfig) -> RelationReport:
    """Max absolute violation of each algebraic relation of the J-blocks."""
    Jm = [[0, -cfg.j12], [cfg.j12, 0]]
    Tm = [[0, -cfg.t12], [cfg.t12, 0]]
    Hm = [[cfg.h[k][l] for k in range(2)] for l in range(2)]  # E <- TM
    Sm = [[cfg.s[l][k] for l in range(2)] for k in range(2)]  # TM <- E
    eye = [[1, 0], [0, 1]]
    res = {
        "j^2 = -id - s h": _mmax(_madd(_mm(Jm, Jm), eye, _mm(Sm, Hm))),
        "t^2 = -id - h s": _mmax(_madd(_mm(Tm, Tm), eye, _mm(Hm, Sm))),
        "j s + s t = 0": _mmax(_madd(_mm(Jm, Sm), _mm(Sm, Tm))),
        "h j + t h = 0": _mmax(_madd(_mm(Hm, Jm), _mm(Tm, Hm))),
        "<h X, xi> = -<X, s xi>": _mmax(
            [[cfg.h[k][l] + cfg.s[l][k] for l in range(2)] for k in range(2)]
        ),
    }
    return RelationReport(res)


# ----------------------------------------------------------------------
# random generators

STANDARD_J = _mat([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])


def random_rational(rng: random.Random, bound: int = 10):
    return mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def _rand_nv(rng, bound) -> NormalVec:
    return NormalVec(random_rational(rng, bound), random_rational(rng, bound))


def cayley(A) -> tuple:
    """``(I - A)(I + A)^{-1}``: a rational rotation from an antisymmetric ``A``."""
    n = len(A)
    M = _dm(A)
    Qm = (_eye(n) - M) * (_eye(n) + M).inv()
    return _mat([[Q(x) for x in r] for r in Qm.to_list()])


def _rotation2(rng, bound):
    a = random_rational(rng, bound)
    d = 1 + a * a
    R = [[(1 - a * a) / d, -2 * a / d], [2 * a / d, (1 - a * a) / d]]
    if rng.random() < 0.5:  # compose with a reflection
        R = [[R[0][0], -R[0][1]], [R[1][0], -R[1][1]]]
    return _mat(R)


def random_admissible(seed: int, case_tag: CaseTag = "generic", bound: int = 10, c=1):
    """Deterministic exact ``(PointConfig, DerivSlots)`` for the requested case."""
    if case_tag not in CASES:
        raise ValueError(f"unknown case_tag {case_tag!r}")
    rng = random.Random(f"{case_tag}:{seed}")
    c = Q(c)
    if case_tag == "generic":
        A = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for k in range(i + 1, 4):
                A[i][k] = random_rational(rng, bound)
                A[k][i] = -A[i][k]
        Qr = _dm(cayley(A))
        if rng.random() < 0.5:  # reach the other orientation class (j12 = -t12)
            Qr = Qr * _dm([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])
        J = Qr * _dm(STANDARD_J) * Qr.transpose()
        j12, h, s, t12 = blocks_from_ambient_J(J.to_list())
        B11, B12, B22 = (_rand_nv(rng, bound) for _ in range(3))
    elif case_tag == "complex":
        j12 = mpq(rng.choice((-1, 1)))
        t12 = mpq(rng.choice((-1, 1)))
        h = s = _mat([[mpq(0), mpq(0)], [mpq(0), mpq(0)]])
        B11 = _rand_nv(rng, bound)
        # t(B(X,Y)) = B(X, jY) forces B12 = j12 t(B11), B22 = -B11
        B12 = NormalVec(-t12 * B11.n2, t12 * B11.n1) * j12
        B22 = -B11
    else:
        j12 = t12 = mpq(0)
        h = _rotation2(rng, bound)
        s = _mat([[-h[k][l] for k in range(2)] for l in range(2)])
        c111, c112, c122, c222 = (random_rational(rng, bound) for _ in range(4))
        C = {(0, 0, 0): c111, (0, 0, 1): c112, (0, 1, 1): c122, (1, 1, 1): c222}

        def sym(a, b, d):
            return C[tuple(sorted((a, b, d)))]

        hv = [NormalVec(h[k][0], h[k][1]) for k in range(2)]

        def Bab(a, b):
            return hv[0] * sym(a, b, 0) + hv[1] * sym(a, b, 1)

        B11, B12, B22 = Bab(0, 0), Bab(0, 1), Bab(1, 1)
    cfg = PointConfig(c, B11, B12, B22, j12, h, s, t12, case_tag)
    deriv = DerivSlots.from_upper(
        tuple(_rand_nv(rng, bound) for _ in range(3)),
        tuple(_rand_nv(rng, bound) for _ in range(3)),
    )
    return cfg, deriv


def random_spinor(seed: int, bound: int = 10, support=(True, True, True, True)) -> Spinor:
    """Exact random spinor; ``support`` masks the ``(++, +-, -+, --)`` slots."""
    rng = random.Random(f"spinor:{seed}")
    comps = []
    for keep in support:
        z = GaussQ(random_rational(rng, bound), random_rational(rng, bound))
        while keep and not z:
            z = GaussQ(random_rational(rng, bound), random_rational(rng, bound))
        comps.append(z if keep else GaussQ(0, 0))
    return Spinor(*comps)


# ----------------------------------------------------------------------
# derived quantities


def eta_mul(cfg: PointConfig, X: TangentVec, phi: Spinor) -> Spinor:
    """``eta(X) . phi`` with ``eta(X) = sum_j e_j . B(e_j, X)``."""
    return tangent_mul(E1, normal_mul(cfg.B(E1, X), phi)) + tangent_mul(
        E2, normal_mul(cfg.B(E2, X), phi)
    )


def mean_curvature(cfg: PointConfig) -> NormalVec:
    return (cfg.B11 + cfg.B22) * mpq(1, 2)


def beta_mul(cfg: PointConfig, phi: Spinor) -> Spinor:
    """``beta . phi`` with ``beta = sum_i e_i . h(e_i)``."""
    return tangent_mul(E1, normal_mul(cfg.h_of(E1), phi)) + tangent_mul(
        E2, normal_mul(cfg.h_of(E2), phi)
    )


def weingarten(cfg: PointConfig, nu: NormalVec) -> tuple:
    """Matrix of the shape operator: ``<S_nu e_a, e_b> = <B_ab, nu>``."""
    b11, b12, b22 = cfg.B11.dot(nu), cfg.B12.dot(nu), cfg.B22.dot(nu)
    return ((b11, b12), (b12, b22))
