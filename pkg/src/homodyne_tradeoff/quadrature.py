"""Adaptive Gauss-Legendre integration over the complex plane.

Plane integrals use polar coordinates around a chosen centre: a composite
Gauss-Legendre rule in the radius and a uniform (periodic trapezoidal) rule
in the angle, which is spectrally accurate for smooth periodic integrands.
Each direction is refined independently by doubling until two successive
estimates agree to ``QuadratureSpec.tol``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure

__all__ = [
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "integrate_radial",
    "integrate_plane",
    "gaussian_average",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings shared by every numerical integral.

    Attributes
    ----------
    method : str
        ``"gauss-legendre"`` (only supported rule for plane/radial integrals).
    radius : float or None
        Domain cutoff override. ``None`` lets the caller pick a radius from
        the widths of the densities involved.
    nodes : int
        Gauss-Legendre nodes per radial panel.
    panels : int
        Initial number of uniform radial panels.
    angular : int
        Initial number of angular nodes.
    tol : float
        Absolute agreement required between successive refinements.
    max_refine : int
        Maximum number of doublings per direction.
    """

    method: str = "gauss-legendre"
    radius: float | None = None
    nodes: int = 20
    panels: int = 6
    angular: int = 48
    tol: float = 1e-11
    max_refine: int = 7

    def __post_init__(self):
        if self.method != "gauss-legendre":
            raise ValueError(f"unsupported quadrature method {self.method!r}")
        if self.nodes < 2 or self.panels < 1 or self.angular < 4:
            raise ValueError("node counts too small")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _edges(radius: float, panels: int, scales: Iterable[float]) -> np.ndarray:
    # uniform panels plus breakpoints that resolve narrow features near r = 0
    pts = [np.linspace(0.0, radius, panels + 1)]
    for s in scales:
        if s > 0 and math.isfinite(s):
            pts.append(s * np.array([0.25, 0.5, 1.0, 2.0, 4.0]))
    edges = np.unique(np.concatenate(pts))
    return edges[(edges >= 0.0) & (edges <= radius)]


def _split(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def _composite(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _leggauss(n)
    a = edges[:-1, None]
    h = (edges[1:] - edges[:-1])[:, None]
    nodes = a + 0.5 * h * (x + 1.0)
    weights = 0.5 * h * w
    return nodes.ravel(), weights.ravel()


def _converged(new, old, tol) -> bool:
    new = np.asarray(new)
    scale = np.maximum(1.0, np.abs(new))
    return bool(np.all(np.abs(new - old) <= tol * scale))


def integrate_radial(
    f: Callable[[np.ndarray], np.ndarray],
    radius: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scales: Iterable[float] = (),
):
    """Integrate ``f(r)`` over ``[0, radius]``.

    ``f`` receives a 1-D array of radii and may return an array whose last
    axis runs over those radii; the result then has the leading shape.
    """
    edges = _edges(radius, spec.panels, tuple(scales))
    r, w = _composite(edges, spec.nodes)
    old = np.asarray(f(r)) @ w
    for _ in range(spec.max_refine):
        edges = _split(edges)
        r, w = _composite(edges, spec.nodes)
        new = np.asarray(f(r)) @ w
        if _converged(new, old, spec.tol):
            return new[()] if new.ndim == 0 else new
        old = new
    raise QuadratureFailure(
        f"radial quadrature did not converge to {spec.tol:g} "
        f"(last change {np.max(np.abs(new - old)):.3g})"
    )


def _plane_estimate(f, center, edges, n, n_theta):
    r, wr = _composite(edges, n)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    z = center + r[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(f(z))
    return float(np.sum(vals * (wr * r)[:, None]) * (2.0 * np.pi / n_theta))


def integrate_plane(
    f: Callable[[np.ndarray], np.ndarray],
    center: complex,
    radius: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scales: Iterable[float] = (),
) -> float:
    """Integrate ``f(z)`` over the disc ``|z - center| <= radius``.

    ``f`` must accept a complex ndarray and return real values of the same
    shape. Radial and angular resolutions are refined independently.
    """
    if spec.radius is not None:
        radius = spec.radius
    edges = _edges(radius, spec.panels, tuple(scales))
    n_theta = spec.angular
    base = _plane_estimate(f, center, edges, spec.nodes, n_theta)
    for _ in range(spec.max_refine):
        finer_r = _split(edges)
        ir = _plane_estimate(f, center, finer_r, spec.nodes, n_theta)
        it = _plane_estimate(f, center, edges, spec.nodes, 2 * n_theta)
        ok_r = _converged(ir, base, spec.tol)
        ok_t = _converged(it, base, spec.tol)
        if ok_r and ok_t:
            return ir
        if not ok_r:
            edges = finer_r
        if not ok_t:
            n_theta *= 2
        base = _plane_estimate(f, center, edges, spec.nodes, n_theta)
    raise QuadratureFailure(
        f"plane quadrature did not converge to {spec.tol:g} "
        f"(radial panels {len(edges) - 1}, angular nodes {n_theta})"
    )


def gaussian_average(
    f: Callable[[float], float], omega: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Average an isotropic ``f(|beta|)`` over the Gaussian amplitude prior.

    Computes ``int d^2 beta exp(-|beta|^2/omega^2)/(pi omega^2) f(|beta|)``
    after the substitution ``u = |beta|^2 / omega^2``.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(
                lambda u: math.exp(-u) * f(omega * math.sqrt(u)),
                0.0,
                np.inf,
                epsabs=spec.tol,
                epsrel=spec.tol,
                limit=400,
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"Gaussian average failed: {exc}") from exc
    return val
