"""Alternative sign/prefactor forms of several closed-form expressions.

Each function differs from its counterpart in :mod:`.fidelities`,
:mod:`.scheme` or :mod:`.optimize` by one sign, power or prefactor. They
exist so the validation suite can show quadrature rejecting them; nothing
else in the package calls them.
"""

from __future__ import annotations

import math

from .scheme import SchemeParams

__all__ = [
    "distortion_fidelity_positive_exponent",
    "avg_est_fidelity_plus_sign",
    "output_q_ordering_minus_g2",
    "optimal_g_disturbance_sin_squared",
    "avg_id_tradeoff_scaled",
]


def distortion_fidelity_positive_exponent(p: SchemeParams, beta: complex) -> float:
    """Per-state distortion fidelity with a growing exponential in |beta|^2."""
    g2 = p.g**2
    pref = 2 * math.sqrt(p.eta * (p.eta + g2)) / (2 * p.eta + g2)
    return pref * math.exp(
        p.eta * (1 - p.contraction) ** 2 * abs(beta) ** 2 / (2 * (2 * p.eta + g2))
    )


def avg_est_fidelity_plus_sign(eta: float, phi: float, omega: float, kappa: float) -> float:
    """Ensemble estimation fidelity with ``(1 + kappa sin)^2`` in the denominator."""
    return 4 * kappa * math.sqrt(eta) / (
        2 * (eta + kappa**2) + eta * omega**2 * (1 + kappa * math.sin(phi)) ** 2
    )


def output_q_ordering_minus_g2(p: SchemeParams) -> float:
    """Output-Q ordering ``1 - 2 (eta - g^2) / (eta c^2)``."""
    c = p.contraction
    return 1 - 2 * (p.eta - p.g**2) / (p.eta * c * c)


def optimal_g_disturbance_sin_squared(eta: float, phi: float, omega: float) -> float:
    """Disturbance gain with ``sin^2`` in the numerator."""
    a = eta * omega**2
    s = math.sin(phi)
    return a * s * s * (1 - math.cos(phi)) / (1 + a * s * s)


def avg_id_tradeoff_scaled(eta: float, omega: float, G: float) -> float:
    """Ensemble trade-off with the extra ``(1 + omega^2)/omega^2`` prefactor."""
    w2 = omega**2
    sin2 = ((1 + w2) * G - 1) / (eta * w2 * (1 - G))
    b = 1 - math.sqrt(min(1.0, max(0.0, 1 - sin2)))
    return (1 + w2) * G / w2 / (G + (1 - G) * b * b)
