"""Information, disturbance, estimation and distortion fidelities.

Closed forms cover coherent inputs (single state, universal settings and
Gaussian ensembles). :func:`oracle_fidelity` evaluates the defining
integrals directly from the phase-space densities of :mod:`.scheme` and is
the independent check for every closed form; for Fock inputs it is the
only evaluator.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import OutOfRange, TruncationInsufficient
from .phase_space import (
    N_MAX,
    Coherent,
    Fock,
    InputState,
    _husimi_fock_family,
    wigner_s_fock_family,
)
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    gaussian_average,
    integrate_plane,
    integrate_radial,
)
from .scheme import (
    SchemeParams,
    coherent_gaussian,
    ordering_params,
    outcome_density,
    output_p_density,
    output_q,
)

__all__ = [
    "GaussianCoherent",
    "ThermalFock",
    "Single",
    "Ensemble",
    "FidelityPair",
    "info_fidelity_coherent",
    "disturbance_fidelity_coherent",
    "est_fidelity_coherent",
    "distortion_fidelity_coherent",
    "universal_id_fidelities",
    "universal_id_tradeoff",
    "avg_id_fidelities",
    "avg_id_tradeoff",
    "universal_ed_fidelities",
    "avg_ed_fidelities",
    "oracle_fidelity",
    "oracle_avg_fidelity",
    "fock_ed_fidelities",
    "fock_ed_family",
    "thermal_weights",
    "thermal_truncation",
    "thermal_avg_ed",
]

THERMAL_TAIL = 1e-8


@dataclass(frozen=True)
class GaussianCoherent:
    """Coherent states with amplitudes drawn from a Gaussian of width ``omega``."""

    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError("omega must be positive and finite")


@dataclass(frozen=True)
class ThermalFock:
    """Fock states weighted thermally with mean photon number ``nbar``."""

    nbar: float
    n_trunc: int | None = None

    def __post_init__(self):
        if not self.nbar >= 0:
            raise ValueError("nbar must be nonnegative")


@dataclass(frozen=True)
class Single:
    state: InputState


Ensemble = Union[GaussianCoherent, ThermalFock, Single]


class FidelityPair(NamedTuple):
    """Point on a trade-off plane; ``label`` is ``"ID"`` or ``"ED"``."""

    x: float
    y: float
    label: str


# ---------------------------------------------------------------------------
# coherent inputs: closed forms


def info_fidelity_coherent(p: SchemeParams, beta: complex) -> float:
    k2 = p.kappa**2
    return p.eta / (p.eta + k2) * math.exp(
        -p.eta * (1 - p.kappa * p.sin) ** 2 * abs(beta) ** 2 / (p.eta + k2)
    )


def disturbance_fidelity_coherent(p: SchemeParams, beta: complex) -> float:
    g2 = p.g**2
    return p.eta / (p.eta + g2) * math.exp(
        -p.eta * (1 - p.contraction) ** 2 * abs(beta) ** 2 / (p.eta + g2)
    )


def est_fidelity_coherent(p: SchemeParams, beta: complex) -> float:
    k2 = p.kappa**2
    pref = 2 * p.kappa * math.sqrt(p.eta) / (p.eta + k2)
    return pref * math.exp(
        -p.eta * (1 - p.kappa * p.sin) ** 2 * abs(beta) ** 2 / (2 * (p.eta + k2))
    )


def distortion_fidelity_coherent(p: SchemeParams, beta: complex) -> float:
    """Bhattacharyya overlap of input and output Q-functions (decays in |beta|)."""
    g2 = p.g**2
    pref = 2 * math.sqrt(p.eta * (p.eta + g2)) / (2 * p.eta + g2)
    return pref * math.exp(
        -p.eta * (1 - p.contraction) ** 2 * abs(beta) ** 2 / (2 * (2 * p.eta + g2))
    )


def universal_id_fidelities(eta: float, phi: float) -> FidelityPair:
    """(G, F) with the beta-independent settings kappa = 1/sin, g = (1-cos)/sin."""
    es = eta * math.sin(phi) ** 2
    b = 1 - math.cos(phi)
    return FidelityPair(es / (1 + es), es / (es + b * b), "ID")


SNAP_ULPS = 8


def _one_minus_cos(sin2: float, cos2_num: float, scale: float, den: float) -> float:
    """``1 - cos`` from ``sin^2`` and ``cos^2 = cos2_num / den``.

    F depends on G like a square root near the top of the reachable range,
    so a G within a few ulps of the end is snapped onto it; otherwise its
    rounding alone would move F by ~1e-8.
    """
    if cos2_num <= SNAP_ULPS * sys.float_info.epsilon * scale:
        cos2_num = 0.0
    sin2 = min(1.0, max(0.0, sin2))
    return sin2 / (1 + math.sqrt(cos2_num / den))


def universal_id_tradeoff(eta: float, G: float) -> float:
    """Universal disturbance fidelity as a function of the information fidelity."""
    g_max = eta / (1 + eta)
    if not 0 < G <= g_max * (1 + 1e-12):
        raise OutOfRange(f"G={G} outside the reachable range (0, {g_max}]")
    den = eta * (1 - G)
    b = _one_minus_cos(G / den, eta - G * (1 + eta), eta, den)
    return G / (G + (1 - G) * b * b)


def avg_id_fidelities(eta: float, phi: float, omega: float, kappa: float, g: float) -> FidelityPair:
    s, c = math.sin(phi), math.cos(phi)
    w2 = eta * omega**2
    G = eta / (eta + kappa**2 + w2 * (1 - kappa * s) ** 2)
    F = eta / (eta + g**2 + w2 * (1 - c - g * s) ** 2)
    return FidelityPair(G, F, "ID")


def avg_id_tradeoff(eta: float, omega: float, G: float) -> float:
    """Optimised ensemble disturbance fidelity at a given ensemble information fidelity.

    Obtained by eliminating the angle from the optimised pair; valid for
    ``1/(1+omega^2) <= G <= (1+eta omega^2)/(1+omega^2+eta omega^2)``.
    """
    w2 = omega**2
    lo = 1 / (1 + w2)
    hi = (1 + eta * w2) / (1 + w2 + eta * w2)
    if not lo * (1 - 1e-12) <= G <= hi * (1 + 1e-12):
        raise OutOfRange(f"G={G} outside [{lo}, {hi}]")
    den = eta * w2 * (1 - G)
    num = 1 + eta * w2 - G * (1 + w2 + eta * w2)
    b = _one_minus_cos(((1 + w2) * G - 1) / den, num, 1 + eta * w2, den)
    return G / (G + (1 - G) * b * b)


def universal_ed_fidelities(eta: float, phi: float) -> FidelityPair:
    s = math.sin(phi)
    b = 1 - math.cos(phi)
    H = 2 * math.sqrt(eta) * s / (1 + eta * s * s)
    K = 2 * s * math.sqrt(eta * (eta * s * s + b * b)) / (2 * eta * s * s + b * b)
    return FidelityPair(H, K, "ED")


def avg_ed_fidelities(eta: float, phi: float, omega: float, kappa: float, g: float) -> FidelityPair:
    s, c = math.sin(phi), math.cos(phi)
    w2 = eta * omega**2
    H = 4 * kappa * math.sqrt(eta) / (2 * (eta + kappa**2) + w2 * (1 - kappa * s) ** 2)
    K = 4 * math.sqrt(eta * (eta + g**2)) / (2 * (2 * eta + g**2) + w2 * (1 - c - g * s) ** 2)
    return FidelityPair(H, K, "ED")


# ---------------------------------------------------------------------------
# quadrature oracles


def _bhattacharyya_plane(p_fn, q_fn, narrow: tuple[complex, float], wide_var: float, spec):
    # covering the narrower density's bulk bounds the truncation error by
    # sqrt(its tail mass) (Cauchy-Schwarz)
    centre, var = narrow

    def integrand(z):
        return np.sqrt(np.clip(p_fn(z) * q_fn(z), 0.0, None))

    return integrate_plane(
        integrand, centre, math.sqrt(60.0 * var), spec,
        scales=(math.sqrt(var), math.sqrt(wide_var)),
    )


def _output_is_vacuum(p: SchemeParams) -> bool:
    # full reflection and no feed-forward: the output mode is left in vacuum
    return p.g == 0 and abs(p.contraction) < 1e-12


def _vacuum_q(z):
    return np.exp(-np.abs(z) ** 2) / np.pi


def _oracle_coherent(kind: str, beta: complex, p: SchemeParams, spec) -> float:
    state = Coherent(beta)
    s1 = 1 - 2 / (p.eta * p.sin**2) if p.sin else -math.inf
    if kind == "G":
        centre, var = (0j, 1 / p.eta) if p.sin == 0 else coherent_gaussian(beta, s1, p.sin)

        def integrand(z):
            return outcome_density(state, p, z) * np.exp(-np.abs(p.kappa * z - beta) ** 2)

        scales = (math.sqrt(var),) + ((1 / p.kappa,) if p.kappa > 0 else ())
        return integrate_plane(integrand, centre, math.sqrt(50.0 * var), spec, scales)
    if kind == "F":
        if p.g > 0:
            s2 = ordering_params(p).s2
            centre, var = coherent_gaussian(beta, s2, p.contraction)

            def integrand(xi):
                return output_p_density(state, p, xi) * np.exp(-np.abs(xi - beta) ** 2)

            return integrate_plane(
                integrand, centre, math.sqrt(50.0 * var), spec, (math.sqrt(var), 1.0)
            )
        # no feed-forward: average the overlap of |beta cos + g z> over outcomes
        centre, var = (0j, 1 / p.eta) if p.sin == 0 else coherent_gaussian(beta, s1, p.sin)

        def integrand(z):
            shifted = beta * p.cos + p.g * z
            return outcome_density(state, p, z) * np.exp(-np.abs(shifted - beta) ** 2)

        return integrate_plane(integrand, centre, math.sqrt(50.0 * var), spec, (math.sqrt(var),))
    if kind == "H":
        if p.kappa == 0:
            return 0.0
        k = p.kappa
        t_centre, t_var = (0j, 1 / p.eta) if p.sin == 0 else coherent_gaussian(beta, s1, p.sin)
        s_gauss = (k * t_centre, k * k * t_var)
        q_gauss = (complex(beta), 1.0)
        narrow, wide = sorted([s_gauss, q_gauss], key=lambda cv: cv[1])

        def est(z):
            return outcome_density(state, p, z / k) / (k * k)

        return _bhattacharyya_plane(
            lambda z: np.exp(-np.abs(z - beta) ** 2) / np.pi, est, narrow, wide[1], spec
        )
    if kind == "K":
        q_in = lambda z: np.exp(-np.abs(z - beta) ** 2) / np.pi
        if _output_is_vacuum(p):
            return _bhattacharyya_plane(q_in, _vacuum_q, (0j, 1.0), 1.0, spec)
        o_gauss = coherent_gaussian(beta, ordering_params(p).s3, p.contraction)
        q_gauss = (complex(beta), 1.0)
        narrow, wide = sorted([o_gauss, q_gauss], key=lambda cv: cv[1])
        return _bhattacharyya_plane(q_in, lambda z: output_q(state, p, z), narrow, wide[1], spec)
    raise ValueError(f"unknown fidelity kind {kind!r}")


def _fock_radius(nmax: int) -> float:
    # r^2 of |n> is Gamma(n+1)-distributed; tail beyond this is < 1e-25
    return math.sqrt(nmax + 1 + 14 * math.sqrt(nmax + 1) + 60)


def _outcome_family(nmax: int, p: SchemeParams, z) -> np.ndarray:
    z = np.asarray(z)
    if p.sin == 0:
        row = p.eta / np.pi * np.exp(-p.eta * np.abs(z) ** 2)
        return np.broadcast_to(row, (nmax + 1,) + row.shape)
    s1 = 1 - 2 / (p.eta * p.sin**2)
    return wigner_s_fock_family(nmax, s1, z / p.sin) / p.sin**2


def fock_ed_family(nmax: int, p: SchemeParams, spec: QuadratureSpec = DEFAULT_SPEC, which: str = "HK"):
    """Estimation and distortion fidelities of ``|0>, ..., |nmax>`` at once.

    All integrands are radially symmetric, so each fidelity is a 1-D radial
    integral ``2 pi int r f(r) dr``. Returns ``(H, K)`` arrays of length
    ``nmax + 1``; an entry is ``None`` when not requested in ``which``.
    """
    radius = _fock_radius(nmax) if spec.radius is None else spec.radius
    H = K = None
    if "H" in which:
        k = p.kappa
        if k == 0:
            H = np.zeros(nmax + 1)
        else:
            width = k / math.sqrt(p.eta)

            def h_integrand(r):
                q = _husimi_fock_family(nmax, r * r)
                est = _outcome_family(nmax, p, r / k) / (k * k)
                return 2 * np.pi * r * np.sqrt(np.clip(q * est, 0.0, None))

            H = integrate_radial(h_integrand, radius, spec, scales=(width, width * math.sqrt(nmax + 1)))
    if "K" in which:
        vacuum = _output_is_vacuum(p)
        s3 = None if vacuum else ordering_params(p).s3
        c = p.contraction

        def k_integrand(r):
            q = _husimi_fock_family(nmax, r * r)
            out = _vacuum_q(r) if vacuum else wigner_s_fock_family(nmax, s3, r / c) / (c * c)
            return 2 * np.pi * r * np.sqrt(np.clip(q * out, 0.0, None))

        K = integrate_radial(k_integrand, radius, spec, scales=(1.0,))
    return H, K


def _oracle_fock(kind: str, n: int, p: SchemeParams, spec) -> float:
    if kind not in ("H", "K"):
        raise ValueError("information/disturbance fidelities are not provided for Fock inputs")
    H, K = fock_ed_family(n, p, spec, which=kind)
    return float((H if kind == "H" else K)[n])


def oracle_fidelity(
    kind: str, state: InputState, p: SchemeParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Fidelity of kind ``"G"``, ``"F"``, ``"H"`` or ``"K"`` by direct quadrature.

    G averages the inferred-state overlap over the outcome law; F overlaps the
    input with the output P-function; H and K are Bhattacharyya overlaps of
    the input Q-function with the rescaled outcome law and the output
    Q-function respectively.
    """
    if isinstance(state, Coherent):
        return _oracle_coherent(kind, state.beta, p, spec)
    if isinstance(state, Fock):
        return _oracle_fock(kind, state.n, p, spec)
    raise TypeError(f"unsupported input state {state!r}")


def oracle_avg_fidelity(
    kind: str, p: SchemeParams, omega: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Gaussian-ensemble average of :func:`oracle_fidelity` over coherent inputs.

    The scheme is phase covariant, so the per-state oracle depends on
    ``|beta|`` only and the ensemble average is a 1-D radial integral.
    """
    return gaussian_average(lambda r: oracle_fidelity(kind, Coherent(r), p, spec), omega, spec)


# ---------------------------------------------------------------------------
# Fock and thermal inputs


def fock_ed_fidelities(n: int, p: SchemeParams, spec: QuadratureSpec = DEFAULT_SPEC) -> FidelityPair:
    if not 0 <= n <= N_MAX:
        raise ValueError(f"n must lie in [0, {N_MAX}]")
    H, K = fock_ed_family(n, p, spec)
    return FidelityPair(float(H[n]), float(K[n]), "ED")


def thermal_truncation(nbar: float, tail: float = THERMAL_TAIL) -> int:
    """Smallest cutoff whose neglected thermal weight is below ``tail``."""
    if nbar <= 0:
        return 0
    return math.ceil(math.log(tail) / math.log(nbar / (1 + nbar)))


def thermal_weights(nbar: float, n_trunc: int) -> np.ndarray:
    """Thermal photon-number probabilities ``p_0 ... p_{n_trunc}``."""
    n = np.arange(n_trunc + 1)
    if nbar == 0:
        return (n == 0).astype(float)
    return (nbar / (1 + nbar)) ** n / (1 + nbar)


def _check_tail(nbar: float, n_trunc: int) -> None:
    tail = (nbar / (1 + nbar)) ** (n_trunc + 1) if nbar > 0 else 0.0
    if tail >= THERMAL_TAIL:
        raise TruncationInsufficient(
            f"thermal tail {tail:.3g} beyond n={n_trunc} exceeds {THERMAL_TAIL:g}"
        )
    if n_trunc > N_MAX:
        raise TruncationInsufficient(f"n_trunc={n_trunc} exceeds N_MAX={N_MAX}")


def thermal_avg_ed(
    p: SchemeParams,
    nbar: float,
    n_trunc: int | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    which: str = "HK",
) -> FidelityPair:
    """Thermal average of the Fock estimation and distortion fidelities.

    Components not listed in ``which`` are returned as NaN.
    """
    if n_trunc is None:
        n_trunc = thermal_truncation(nbar)
    _check_tail(nbar, n_trunc)
    w = thermal_weights(nbar, n_trunc)
    H, K = fock_ed_family(n_trunc, p, spec, which=which)
    h = float(w @ H) if H is not None else math.nan
    k = float(w @ K) if K is not None else math.nan
    return FidelityPair(h, k, "ED")
