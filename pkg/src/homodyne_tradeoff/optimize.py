"""Optimal inference rescaling and feed-forward gain.

For Gaussian coherent ensembles the optima are closed form, apart from the
distortion gain which is the best real root of a depressed cubic. Fock and
thermal optima go through :func:`maximize_1d`.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import BracketInvalid, NoRealRootInRange
from .fidelities import FidelityPair, avg_ed_fidelities

__all__ = [
    "Bracket",
    "optimal_kappa_info",
    "optimal_g_disturbance",
    "optimal_avg_id_fidelities",
    "optimal_kappa_estimation",
    "optimal_avg_est_fidelity",
    "distortion_cubic",
    "real_cubic_roots",
    "optimal_g_distortion",
    "golden_section",
    "maximize_1d",
]

INV_PHI = (math.sqrt(5) - 1) / 2
G_MAX = 10.0


class Bracket(NamedTuple):
    lo: float
    hi: float


def optimal_kappa_info(eta: float, phi: float, omega: float) -> float:
    a = eta * omega**2
    s = math.sin(phi)
    return a * s / (1 + a * s * s)


def optimal_g_disturbance(eta: float, phi: float, omega: float) -> float:
    # minimiser of g^2 + eta omega^2 (1 - cos - g sin)^2; tends to (1-cos)/sin
    a = eta * omega**2
    s = math.sin(phi)
    return a * s * (1 - math.cos(phi)) / (1 + a * s * s)


def optimal_avg_id_fidelities(eta: float, phi: float, omega: float) -> FidelityPair:
    """Ensemble (G, F) at the optimal rescaling and gain."""
    w2 = omega**2
    es = eta * math.sin(phi) ** 2
    b = 1 - math.cos(phi)
    num = 1 + w2 * es
    return FidelityPair(num / (num + w2), num / (1 + w2 * (es + b * b)), "ID")


def optimal_kappa_estimation(eta: float, phi: float, omega: float) -> float:
    w2 = omega**2
    return math.sqrt(eta * (2 + w2) / (2 + eta * w2 * math.sin(phi) ** 2))


def optimal_avg_est_fidelity(eta: float, phi: float, omega: float) -> float:
    """Ensemble estimation fidelity at :func:`optimal_kappa_estimation`."""
    w2 = omega**2
    s = math.sin(phi)
    pr = (2 + w2) * (2 + eta * w2 * s * s)
    return 2 * math.sqrt(pr) / (pr - w2 * s * math.sqrt(eta * pr))


def distortion_cubic(eta: float, phi: float, omega: float) -> tuple[float, float]:
    """Monic coefficients ``(p, q)`` of ``g^3 + p g + q = 0``.

    Stationarity of the ensemble distortion fidelity in ``g`` reads
    ``g^3 (2 + a s^2) + g a (2 eta s^2 - b^2) = 2 a eta s b`` with
    ``a = eta omega^2``, ``s = sin(phi)``, ``b = 1 - cos(phi)``.
    """
    a = eta * omega**2
    s = math.sin(phi)
    b = 1 - math.cos(phi)
    lead = 2 + a * s * s
    return a * (2 * eta * s * s - b * b) / lead, -2 * a * eta * s * b / lead


def real_cubic_roots(p: float, q: float) -> list[float]:
    """Real roots of ``x^3 + p x + q``, classified by the discriminant and Newton-polished."""
    disc = (q / 2) ** 2 + (p / 3) ** 3
    if disc > 0:
        sq = math.sqrt(disc)
        # pick the branch without cancellation
        u = np.cbrt(-q / 2 - sq) if q > 0 else np.cbrt(-q / 2 + sq)
        roots = [float(u - p / (3 * u))] if u != 0 else [0.0]
    elif p == 0:
        roots = [0.0]
    else:
        m = 2 * math.sqrt(-p / 3)
        arg = max(-1.0, min(1.0, 3 * q / (p * m)))
        theta = math.acos(arg) / 3
        roots = [m * math.cos(theta - 2 * math.pi * k / 3) for k in range(3)]
    polished = []
    for x in roots:
        for _ in range(3):
            f = x**3 + p * x + q
            d = 3 * x * x + p
            if d == 0 or f == 0:
                break
            step = f / d
            x -= step
            if abs(step) <= 1e-16 * max(1.0, abs(x)):
                break
        polished.append(x)
    return sorted(polished)


def optimal_g_distortion(eta: float, phi: float, omega: float, g_max: float = G_MAX) -> float:
    """Gain maximising the ensemble distortion fidelity."""
    p, q = distortion_cubic(eta, phi, omega)
    cands = [g for g in real_cubic_roots(p, q) if -1e-12 <= g <= g_max]
    if not cands:
        raise NoRealRootInRange(f"no real cubic root in [0, {g_max}] (p={p}, q={q})")
    cands = [max(g, 0.0) for g in cands]
    return max(cands, key=lambda g: avg_ed_fidelities(eta, phi, omega, 0.0, g).y)


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-8) -> float:
    """Argmax of ``f`` on ``[a, b]`` assuming unimodality."""
    if b - a <= tol:
        return 0.5 * (a + b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def maximize_1d(
    f: Callable[[float], float],
    b: Bracket = Bracket(0.0, 10.0),
    tol: float = 1e-8,
    scan: int = 32,
) -> tuple[float, float]:
    """Maximise ``f`` over the bracket; returns ``(argmax, max)``.

    A coarse scan locates the best sample; golden-section search then
    refines between its neighbours. This is exact for unimodal objectives
    and degrades gracefully to a local refinement otherwise.
    """
    lo, hi = b
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise BracketInvalid(f"invalid bracket {b}")
    xs = np.linspace(lo, hi, scan)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmax(ys))
    x = golden_section(f, xs[max(i - 1, 0)], xs[min(i + 1, scan - 1)], tol)
    fx = f(x)
    if fx < ys[i]:
        return float(xs[i]), float(ys[i])
    return float(x), float(fx)
