"""Fubini-Study geometry in an affine chart of CP^2 and numerical surface checks.

Real coordinates are ``x = (Re z1, Im z1, Re z2, Im z2)`` and ``J`` is
multiplication by ``i``.  The metric is ``1/c`` times the real part of the
Kaehler metric with potential ``log(1 + |z|^2)``, which has holomorphic
sectional curvature ``4c``; :func:`riemann_numeric` checks that against
:func:`curvature_formula` instead of trusting it.

Surface analysis works on whole grids at once.  Three nested levels of
finite differences are used:

* map derivatives and metric derivatives (4th-order central, fixed steps);
* frame derivatives, giving B and the connection forms (4th-order central);
* the outermost derivatives of those fields, giving curvatures, Codazzi and
  the parallel-J relations, with step ``fd_step``.

The outermost level is a 2nd-order central difference by default.  With
``scheme="forward"`` it is first order, and a residual carrying truncation
error then scales linearly in ``fd_step``; :func:`codazzi_convergence` uses
that as a convergence witness.  On the totally geodesic and homogeneous
examples the Codazzi residual has no truncation part at all and sits at the
roundoff floor, which grows like ``1/fd_step``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .clifford import E1, E2, NU1, NU2, NormalVec, TangentVec
from .integrability import (
    CompatibilityResidual,
    codazzi_residual,
    gauss_residual,
    ricci_residual,
)
from .killing import nabla_h, nabla_j, nabla_s, nabla_t
from .structures import DerivSlots, PointConfig

__all__ = [
    "FSChart",
    "SingularMetric",
    "fs_metric",
    "ambient_J",
    "christoffels",
    "nabla_J",
    "riemann_tensor",
    "riemann_numeric",
    "curvature_formula",
    "SurfacePatch",
    "builtin_surface",
    "BUILTIN_SURFACES",
    "PatchReport",
    "analyze_patch",
    "Convergence",
    "codazzi_convergence",
]

J0 = np.array([[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]])
_P = np.array([[1.0, 1j, 0.0, 0.0], [0.0, 0.0, 1.0, 1j]])  # real coords -> C^2

# f'(0) ~ sum w f(s h) / h
_C4 = ((-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0))
_MAP_STEP = 1e-3
_METRIC_STEP = 1e-3
_FRAME_STEP = 1e-3
_CURV_STEP = 5e-3


class SingularMetric(ValueError):
    """The chart metric is not positive definite at the requested point."""


@dataclass(frozen=True)
class FSChart:
    """Affine chart ``Z0 != 0`` of ``CP^2(4c)``."""

    c: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"c must be a positive real, got {self.c}")


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 4:
        raise ValueError("chart points have 4 real coordinates")
    return x


def fs_metric(chart: FSChart, x) -> np.ndarray:
    """Real 4x4 metric at chart point(s) ``x`` (shape ``(..., 4)``)."""
    x = _as_points(x)
    if not np.all(np.isfinite(x)):
        raise SingularMetric("chart point is not finite (outside the affine chart)")
    z = x[..., 0::2] + 1j * x[..., 1::2]
    r = 1.0 + np.sum(np.abs(z) ** 2, axis=-1)
    H = (r[..., None, None] * np.eye(2) - np.conj(z)[..., :, None] * z[..., None, :]) / r[..., None, None] ** 2
    g = np.real(np.einsum("ak,...ab,bl->...kl", _P, H, np.conj(_P))) / chart.c
    if not np.all(np.isfinite(g)):
        raise SingularMetric("metric is not finite")
    return g


def ambient_J(chart: FSChart, x) -> np.ndarray:
    """Complex structure in real chart coordinates (constant: multiplication by i)."""
    x = _as_points(x)
    return np.broadcast_to(J0, x.shape[:-1] + (4, 4)).copy()


def _dcoord(f: Callable, x: np.ndarray, k: int, h: float) -> np.ndarray:
    e = np.zeros(4)
    e[k] = h
    return sum(w * f(x + s * e) for s, w in _C4) / h


def _metric_derivatives(chart: FSChart, x: np.ndarray, step: float) -> np.ndarray:
    """``dg[..., m, i, j] = d_m g_ij``."""
    return np.stack([_dcoord(lambda y: fs_metric(chart, y), x, m, step) for m in range(4)], axis=-3)


def christoffels(chart: FSChart, x, step: float = _METRIC_STEP) -> np.ndarray:
    """``Gamma[..., k, i, j]`` from central differences of the metric."""
    x = _as_points(x)
    g = fs_metric(chart, x)
    eig = np.linalg.eigvalsh(g)
    if np.any(eig <= 0):
        raise SingularMetric("metric is not positive definite")
    ginv = np.linalg.inv(g)
    dg = _metric_derivatives(chart, x, step)
    # d_i g_jl + d_j g_il - d_l g_ij, indexed [i, j, l]
    low = dg + np.swapaxes(dg, -3, -2) - np.moveaxis(dg, -3, -1)
    return 0.5 * np.einsum("...kl,...ijl->...kij", ginv, low)


def nabla_J(chart: FSChart, x, step: float = _METRIC_STEP) -> np.ndarray:
    """``(nabla_k J)`` as ``[..., k, a, b]``; zero for a Kaehler metric."""
    G = christoffels(chart, x, step)
    J = ambient_J(chart, x)
    # (nabla_k J)^a_b = Gamma^a_{k m} J^m_b - J^a_m Gamma^m_{k b}
    return np.einsum("...akm,...mb->...kab", G, J) - np.einsum("...am,...mkb->...kab", J, G)


def riemann_tensor(chart: FSChart, x, step: float = _CURV_STEP) -> np.ndarray:
    """``R[..., l, i, j, k]`` with ``R(d_i, d_j) d_k = R^l_{ijk} d_l``."""
    x = _as_points(x)
    if step < 1e-6:
        raise ValueError("step too small for nested differencing")
    G = christoffels(chart, x)
    dG = np.stack([_dcoord(lambda y: christoffels(chart, y), x, m, step) for m in range(4)], axis=-4)
    # dG[..., m, l, j, k] = d_m Gamma^l_jk
    R = np.einsum("...iljk->...lijk", dG) - np.einsum("...jlik->...lijk", dG)
    R = R + np.einsum("...lim,...mjk->...lijk", G, G) - np.einsum("...ljm,...mik->...lijk", G, G)
    return R


def riemann_numeric(chart: FSChart, x, X, Y, Z, W, step: float = _CURV_STEP) -> float:
    """``<R(X, Y) Z, W>`` by finite differences of the Christoffel symbols."""
    R = riemann_tensor(chart, x, step)
    g = fs_metric(chart, x)
    RXYZ = np.einsum("...lijk,i,j,k->...l", R, X, Y, Z)
    return float(np.einsum("...l,...lm,m->...", RXYZ, g, W))


def curvature_formula(X, Y, Z, W, J, c: float, g=None) -> float:
    """Constant holomorphic curvature tensor ``R(X, Y, Z, W)``.

    ``c[<X,W><Y,Z> - <X,Z><Y,W> + <JX,W><JY,Z> - <JX,Z><JY,W> + 2<X,JY><JZ,W>]``
    with ``<,>`` given by ``g`` (identity if omitted).
    """
    g = np.eye(len(X)) if g is None else np.asarray(g)
    X, Y, Z, W, J = map(np.asarray, (X, Y, Z, W, J))

    def ip(a, b):
        return float(a @ g @ b)

    JX, JY, JZ = J @ X, J @ Y, J @ Z
    return c * (
        ip(X, W) * ip(Y, Z)
        - ip(X, Z) * ip(Y, W)
        + ip(JX, W) * ip(JY, Z)
        - ip(JX, Z) * ip(JY, W)
        + 2 * ip(X, J @ Y) * ip(JZ, W)
    )


# ----------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class SurfacePatch:
    """A parametrized surface ``(u, v) -> (z1, z2)`` in the affine chart.

    ``map`` must accept numpy arrays.  Grid samples are cell centred, so a
    periodic domain like ``[0, 2 pi)`` is sampled without duplicates.
    """

    name: str
    map: Callable
    u_range: tuple
    v_range: tuple
    grid: int = 32
    fd_step: float = 1e-4
    description: str = ""

    def with_options(self, grid: int | None = None, fd_step: float | None = None) -> SurfacePatch:
        return SurfacePatch(
            self.name,
            self.map,
            self.u_range,
            self.v_range,
            self.grid if grid is None else grid,
            self.fd_step if fd_step is None else fd_step,
            self.description,
        )

    def point(self, u, v) -> np.ndarray:
        z1, z2 = self.map(np.asarray(u, float), np.asarray(v, float))
        z1 = np.broadcast_to(np.asarray(z1, complex), np.shape(u))
        z2 = np.broadcast_to(np.asarray(z2, complex), np.shape(u))
        return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)

    def samples(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.grid
        (a, b), (c, d) = self.u_range, self.v_range
        us = a + (np.arange(n) + 0.5) * (b - a) / n
        vs = c + (np.arange(n) + 0.5) * (d - c) / n
        return np.meshgrid(us, vs, indexing="ij")


def _cp1(u, v):
    return u + 1j * v, 0.0 * u


def _rp2(u, v):
    # [cos u cos v : cos u sin v : sin u] in the chart Z0 != 0
    return np.tan(v) + 0j, np.tan(u) / np.cos(v) + 0j


def _clifford_torus(u, v):
    return np.exp(1j * u), np.exp(1j * v)


def _slant(u, v):
    # Kaehler angle pi/3 plane, bent so that nothing is constant
    th = np.pi / 3
    return u + 1j * v * np.cos(th) + 0.3 * v * v, v * np.sin(th) + 0.2j * u * u


BUILTIN_SURFACES = {
    "cp1": SurfacePatch(
        "cp1", _cp1, (-1.0, 1.0), (-1.0, 1.0),
        description="complex line z -> (z, 0); totally geodesic, K = 4c",
    ),
    "rp2": SurfacePatch(
        "rp2", _rp2, (-1.0, 1.0), (-1.0, 1.0),
        description="[cos u cos v : cos u sin v : sin u]; totally geodesic Lagrangian, K = c",
    ),
    "clifford_torus": SurfacePatch(
        "clifford_torus", _clifford_torus, (0.0, 2 * np.pi), (0.0, 2 * np.pi),
        description="(e^{iu}, e^{iv}); flat minimal Lagrangian torus",
    ),
    "slant": SurfacePatch(
        "slant", _slant, (-0.5, 0.5), (-0.5, 0.5),
        description="bent plane of Kaehler angle pi/3; neither complex nor Lagrangian",
    ),
}


def builtin_surface(name: str) -> SurfacePatch:
    key = name.replace("-", "_")
    try:
        return BUILTIN_SURFACES[key]
    except KeyError:
        raise ValueError(f"unknown surface {name!r}; known: {', '.join(BUILTIN_SURFACES)}") from None


# ----------------------------------------------------------------------
# frames and first-level fields


def _ip(G, a, b):
    return np.einsum("...i,...ij,...j->...", a, G, b)


def _dparam(f: Callable, u, v, which: int, h: float):
    if which == 0:
        return sum(w * f(u + s * h, v) for s, w in _C4) / h
    return sum(w * f(u, v + s * h) for s, w in _C4) / h


_AXIS_PAIRS = tuple((a, b) for a in range(4) for b in range(a + 1, 4))


def _normal_seeds(chart: FSChart, patch: SurfacePatch, u, v) -> tuple[np.ndarray, np.ndarray]:
    """Per point, the coordinate axes whose normal projections are best conditioned.

    A single global pair fails where one of its axes turns tangent (the
    Clifford torus at u = 3 pi / 2).  The choice is made at the base points
    and reused over their stencils, so every finite difference sees one
    smooth frame; the residuals are frame covariant.
    """
    fr = _frames(chart, patch, u, v, None)
    vols = []
    for a, b in _AXIS_PAIRS:
        pa = _project_normal(fr, np.eye(4)[a])
        pb = _project_normal(fr, np.eye(4)[b])
        G = fr["G"]
        vols.append(_ip(G, pa, pa) * _ip(G, pb, pb) - _ip(G, pa, pb) ** 2)
    best = np.argmax(np.stack(vols), axis=0)
    pairs = np.array(_AXIS_PAIRS)
    return pairs[best, 0], pairs[best, 1]


def _project_normal(fr: dict, w):
    G, e1, e2 = fr["G"], fr["e1"], fr["e2"]
    w = np.broadcast_to(w, e1.shape)
    return w - _ip(G, w, e1)[..., None] * e1 - _ip(G, w, e2)[..., None] * e2


def _unit(G, w):
    return w / np.sqrt(_ip(G, w, w))[..., None]


def _frames(chart: FSChart, patch: SurfacePatch, u, v, seeds) -> dict:
    x = patch.point(u, v)
    xu = _dparam(patch.point, u, v, 0, _MAP_STEP)
    xv = _dparam(patch.point, u, v, 1, _MAP_STEP)
    G = fs_metric(chart, x)
    e1 = _unit(G, xu)
    e2 = _unit(G, xv - _ip(G, xv, e1)[..., None] * e1)
    fr = {"x": x, "xu": xu, "xv": xv, "G": G, "e1": e1, "e2": e2}
    if seeds is None:
        return fr
    n1 = _unit(G, _project_normal(fr, np.eye(4)[seeds[0]]))
    w = _project_normal(fr, np.eye(4)[seeds[1]])
    n2 = _unit(G, w - _ip(G, w, n1)[..., None] * n1)
    orient = np.sign(np.linalg.det(np.stack([e1, e2, n1, n2], axis=-1)))
    fr["n1"], fr["n2"] = n1, n2 * orient[..., None]
    return fr


_VECS = ("e1", "e2", "n1", "n2")


def _level1(chart: FSChart, patch: SurfacePatch, u, v, seeds) -> dict:
    """B, connection forms, J-blocks and the frame matrix at ``(u, v)``."""
    fr = _frames(chart, patch, u, v, seeds)
    G = fr["G"]
    Gam = christoffels(chart, fr["x"])
    xa = (fr["xu"], fr["xv"])
    # nabla~_{d_alpha} V for each frame vector
    shifted = {}
    for a in range(2):
        stencil = []
        for s, w in _C4:
            if a == 0:
                stencil.append((w, _frames(chart, patch, u + s * _FRAME_STEP, v, seeds)))
            else:
                stencil.append((w, _frames(chart, patch, u, v + s * _FRAME_STEP, seeds)))
        shifted[a] = stencil
    cov = {}
    for name in _VECS:
        for a in range(2):
            dV = sum(w * f[name] for w, f in shifted[a]) / _FRAME_STEP
            cov[name, a] = dV + np.einsum("...kij,...i,...j->...k", Gam, xa[a], fr[name])
    E = (fr["e1"], fr["e2"])
    N = (fr["n1"], fr["n2"])
    M = np.stack([np.stack([_ip(G, xa[al], E[a]) for al in range(2)], -1) for a in range(2)], -2)
    Minv = np.linalg.inv(M)  # Minv[..., alpha, a]: e_a = sum_alpha Minv[alpha, a] d_alpha
    omega = np.stack([_ip(G, cov["e1", al], fr["e2"]) for al in range(2)], -1)
    theta = np.stack([_ip(G, cov["n1", al], fr["n2"]) for al in range(2)], -1)
    beta = np.zeros(u.shape + (2, 2, 2))
    for a in range(2):
        for b in range(2):
            for l in range(2):
                beta[..., a, b, l] = sum(
                    Minv[..., al, a] * _ip(G, cov[_VECS[b], al], N[l]) for al in range(2)
                )
    J = ambient_J(chart, fr["x"])
    JE = [np.einsum("...ij,...j->...i", J, e) for e in E]
    JN = [np.einsum("...ij,...j->...i", J, n) for n in N]
    blocks = {
        "j": np.stack([np.stack([_ip(G, JE[b], E[a]) for b in range(2)], -1) for a in range(2)], -2),
        "h": np.stack([np.stack([_ip(G, JE[b], N[l]) for b in range(2)], -1) for l in range(2)], -2),
        "s": np.stack([np.stack([_ip(G, JN[l], E[a]) for l in range(2)], -1) for a in range(2)], -2),
        "t": np.stack([np.stack([_ip(G, JN[l], N[m]) for l in range(2)], -1) for m in range(2)], -2),
    }
    return {
        "M": M,
        "Minv": Minv,
        "omega": omega,
        "theta": theta,
        "beta": beta,
        "metric_cond": np.linalg.cond(np.einsum("...ai,...ij,...bj->...ab", np.stack(xa, -2), G, np.stack(xa, -2))),
        **blocks,
    }


_DERIVED = ("omega", "theta", "beta", "j", "h", "s", "t")


def _outer_derivatives(chart, patch, u, v, seeds, scheme: str) -> tuple[dict, dict]:
    """Level-1 fields at ``(u, v)`` and their parameter derivatives ``d[name][alpha]``."""
    H = patch.fd_step
    base = _level1(chart, patch, u, v, seeds)
    d = {name: [None, None] for name in _DERIVED}
    for al in range(2):
        du, dv = (H, 0.0) if al == 0 else (0.0, H)
        plus = _level1(chart, patch, u + du, v + dv, seeds)
        if scheme == "forward":
            for name in _DERIVED:
                d[name][al] = (plus[name] - base[name]) / H
        elif scheme == "central":
            minus = _level1(chart, patch, u - du, v - dv, seeds)
            for name in _DERIVED:
                d[name][al] = (plus[name] - minus[name]) / (2 * H)
        else:
            raise ValueError(f"unknown differencing scheme {scheme!r}")
    return base, d


# ----------------------------------------------------------------------
# reports


@dataclass
class PatchReport:
    """Per-point fields (arrays of shape ``(grid, grid)``) plus aggregates."""

    name: str
    c: float
    grid: int
    fd_step: float
    scheme: str
    u: np.ndarray
    v: np.ndarray
    K_M: np.ndarray
    K_N: np.ndarray
    B_norm: np.ndarray
    H_norm: np.ndarray
    j12: np.ndarray
    gauss: np.ndarray
    ricci: np.ndarray
    codazzi: np.ndarray
    relations1: dict
    relations2: dict
    metric_cond: np.ndarray
    degenerate: np.ndarray
    configs: list = field(repr=False, default_factory=list)
    residuals: list = field(repr=False, default_factory=list)

    def _ok(self, a):
        return a[~self.degenerate]

    @property
    def case_tag(self) -> str:
        j = np.abs(self._ok(self.j12))
        if np.max(j) < 1e-6:
            return "lagrangian"
        if np.max(np.abs(j - 1.0)) < 1e-6:
            return "complex"
        return "generic"

    def max_abs(self, name: str) -> float:
        if name in self.relations1:
            arr = self.relations1[name]
        elif name in self.relations2:
            arr = self.relations2[name]
        else:
            arr = getattr(self, name)
        return float(np.max(np.abs(self._ok(arr))))

    def max_residuals(self) -> dict:
        out = {k: self.max_abs(k) for k in ("gauss", "ricci", "codazzi")}
        out["algebraic relations"] = max(self.max_abs(k) for k in self.relations1)
        out["parallel-J relations"] = max(self.max_abs(k) for k in self.relations2)
        return out

    def summary(self) -> dict:
        ok = ~self.degenerate
        return {
            "surface": self.name,
            "c": self.c,
            "grid": self.grid,
            "fd_step": self.fd_step,
            "scheme": self.scheme,
            "case_tag": self.case_tag,
            "degenerate_points": int(np.sum(self.degenerate)),
            "K_M": [float(np.min(self.K_M[ok])), float(np.max(self.K_M[ok]))],
            "K_N": [float(np.min(self.K_N[ok])), float(np.max(self.K_N[ok]))],
            "max_B": self.max_abs("B_norm"),
            "max_H": self.max_abs("H_norm"),
            "max_metric_cond": float(np.max(self.metric_cond[ok])),
            "max_residuals": self.max_residuals(),
        }


def _float_config(c, beta, j, h, s, t) -> PointConfig:
    B11 = NormalVec(float(beta[0, 0, 0]), float(beta[0, 0, 1]))
    B12 = NormalVec(float(beta[0, 1, 0]), float(beta[0, 1, 1]))
    B22 = NormalVec(float(beta[1, 1, 0]), float(beta[1, 1, 1]))
    hh = tuple(tuple(float(h[l, k]) for l in range(2)) for k in range(2))  # h[k][l] = <h e_k, nu_l>
    ss = tuple(tuple(float(s[k, l]) for k in range(2)) for l in range(2))  # s[l][k] = <s nu_l, e_k>
    return PointConfig(float(c), B11, B12, B22, float(j[1, 0]), hh, ss, float(t[1, 0]), "numeric")


def _rot(w):
    return np.array([[0.0, -w], [w, 0.0]])


def _relations1(j, h, s, t) -> dict:
    eye = np.eye(2)
    return {
        "j^2 = -id - s h": np.max(np.abs(j @ j + eye + s @ h)),
        "t^2 = -id - h s": np.max(np.abs(t @ t + eye + h @ s)),
        "j s + s t = 0": np.max(np.abs(j @ s + s @ t)),
        "h j + t h = 0": np.max(np.abs(h @ j + t @ h)),
        "<h X, xi> = -<X, s xi>": np.max(np.abs(h + s.T)),
        "j, t antisymmetric": max(np.max(np.abs(j + j.T)), np.max(np.abs(t + t.T))),
    }


_TV, _NV = (E1, E2), (NU1, NU2)


def _vec(v) -> np.ndarray:
    return np.array([float(v[0]), float(v[1])])


def analyze_patch(chart: FSChart, patch: SurfacePatch, scheme: str = "central") -> PatchReport:
    """Frames, second fundamental form, curvatures and every residual on the grid.

    Points where the immersion degenerates are flagged in ``degenerate``
    and excluded from every maximum; the NaNs they produce are expected.
    """
    with np.errstate(invalid="ignore", divide="ignore"):
        return _analyze(chart, patch, scheme)


def _analyze(chart: FSChart, patch: SurfacePatch, scheme: str) -> PatchReport:
    U, V = patch.samples()
    seeds = _normal_seeds(chart, patch, U, V)
    base, d = _outer_derivatives(chart, patch, U, V, seeds, scheme)
    n = patch.grid
    shape = (n, n)
    K_M, K_N = np.zeros(shape), np.zeros(shape)
    B_norm, H_norm, j12 = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    gauss, ricci, codazzi = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    rel1_names = list(_relations1(np.eye(2), np.eye(2), np.eye(2), np.eye(2)))
    rel1 = {k: np.zeros(shape) for k in rel1_names}
    rel2_names = ("nabla j", "nabla h", "nabla t", "nabla s")
    rel2 = {k: np.zeros(shape) for k in rel2_names}
    degenerate = np.zeros(shape, dtype=bool)
    configs, residuals = [], []
    for p in range(n):
        for q in range(n):
            Minv = base["Minv"][p, q]
            if not np.all(np.isfinite(Minv)) or base["metric_cond"][p, q] > 1e8:
                degenerate[p, q] = True
                configs.append(None)
                residuals.append(None)
                continue

            def e_der(name, a, _p=p, _q=q, _M=Minv):
                """Derivative of a level-1 field along e_a."""
                return sum(_M[al, a] * d[name][al][_p, _q] for al in range(2))

            detc = np.linalg.det(Minv)
            om = base["omega"][p, q]
            th = base["theta"][p, q]
            K_M[p, q] = -detc * (d["omega"][0][p, q][1] - d["omega"][1][p, q][0])
            K_N[p, q] = -detc * (d["theta"][0][p, q][1] - d["theta"][1][p, q][0])
            beta = base["beta"][p, q]
            jm, hm, sm, tm = (base[k][p, q] for k in "jhst")
            cfg = _float_config(chart.c, beta, jm, hm, sm, tm)
            configs.append(cfg)
            B_norm[p, q] = float(np.sqrt(np.sum(beta**2)))
            H_norm[p, q] = float(np.linalg.norm(0.5 * (beta[0, 0] + beta[1, 1])))
            j12[p, q] = jm[1, 0]
            # connection along e_a, in the column convention nabla e_b = sum Om[m, b] e_m
            Om = [_rot(Minv[0, a] * om[0] + Minv[1, a] * om[1]) for a in range(2)]
            Th = [_rot(Minv[0, a] * th[0] + Minv[1, a] * th[1]) for a in range(2)]
            D = np.zeros((2, 2, 2, 2))
            for a in range(2):
                dB = e_der("beta", a)
                D[a] = (
                    dB
                    + np.einsum("lm,ikm->ikl", Th[a], beta)
                    - np.einsum("mi,mkl->ikl", Om[a], beta)
                    - np.einsum("mk,iml->ikl", Om[a], beta)
                )
            deriv = DerivSlots(
                *(
                    tuple(tuple(NormalVec(float(D[a, i, k, 0]), float(D[a, i, k, 1])) for k in range(2)) for i in range(2))
                    for a in range(2)
                )
            )
            res = CompatibilityResidual(
                gauss_residual(cfg, K_M[p, q]),
                ricci_residual(cfg, K_N[p, q]),
                (codazzi_residual(cfg, deriv, 1), codazzi_residual(cfg, deriv, 2)),
            )
            residuals.append(res)
            gauss[p, q] = abs(res.gauss)
            ricci[p, q] = abs(res.ricci)
            codazzi[p, q] = max(abs(x) for vec in res.codazzi for x in (vec.n1, vec.n2))
            for k, val in _relations1(jm, hm, sm, tm).items():
                rel1[k][p, q] = val
            # parallel-J relations: (nabla A) = e_a(A) + Theta_W A - A Theta_V
            r21 = r22 = r23 = r24 = 0.0
            for a in range(2):
                X = _TV[a]
                nj = e_der("j", a) + Om[a] @ jm - jm @ Om[a]
                nh = e_der("h", a) + Th[a] @ hm - hm @ Om[a]
                nt = e_der("t", a) + Th[a] @ tm - tm @ Th[a]
                ns = e_der("s", a) + Om[a] @ sm - sm @ Th[a]
                for b in range(2):
                    r21 = max(r21, np.max(np.abs(nj[:, b] - _vec(nabla_j(cfg, X, _TV[b])))))
                    r22 = max(r22, np.max(np.abs(nh[:, b] - _vec(nabla_h(cfg, X, _TV[b])))))
                    r23 = max(r23, np.max(np.abs(nt[:, b] - _vec(nabla_t(cfg, X, _NV[b])))))
                    r24 = max(r24, np.max(np.abs(ns[:, b] - _vec(nabla_s(cfg, X, _NV[b])))))
            for k, val in zip(rel2_names, (r21, r22, r23, r24)):
                rel2[k][p, q] = val
    return PatchReport(
        patch.name, chart.c, n, patch.fd_step, scheme, U, V, K_M, K_N, B_norm, H_norm, j12,
        gauss, ricci, codazzi, rel1, rel2, base["metric_cond"], degenerate, configs, residuals,
    )


@dataclass(frozen=True)
class Convergence:
    surface: str
    fd_step: float
    residual: float
    residual_half: float
    noise_floor: float

    @property
    def ratio(self) -> float:
        return self.residual / self.residual_half if self.residual_half else math.inf

    @property
    def truncation_dominated(self) -> bool:
        """Residual well above what roundoff alone produces at this step."""
        return self.residual > 100 * self.noise_floor

    def halves(self, rel: float = 0.3) -> bool:
        return abs(self.ratio - 2.0) <= 2.0 * rel


def codazzi_convergence(chart: FSChart, patch: SurfacePatch) -> Convergence:
    """Max Codazzi residual at ``fd_step`` and ``fd_step / 2`` with first-order differences.

    The noise floor is the central-difference residual at the same step,
    whose truncation error is ``O(fd_step^2)`` and hence negligible.
    """
    h = patch.fd_step
    full = analyze_patch(chart, patch, "forward").max_abs("codazzi")
    half = analyze_patch(chart, patch.with_options(fd_step=h / 2), "forward").max_abs("codazzi")
    floor = analyze_patch(chart, patch, "central").max_abs("codazzi")
    return Convergence(patch.name, h, full, half, floor)
