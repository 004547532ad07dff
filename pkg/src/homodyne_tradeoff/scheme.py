"""Outcome statistics and output-state phase-space functions of the scheme.

The input is mixed with vacuum on a beam splitter of transmissivity
``cos(phi)**2``; the reflected beam goes to a double-homodyne detector of
efficiency ``eta`` whose complex outcome ``z`` displaces the transmitted
beam by ``g z``. Everything is expressed through s-ordered functions of
the input state evaluated at rescaled arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateGeometry, DistributionalP, OrderingOutOfRange
from .phase_space import InputState, wigner_s

__all__ = [
    "SchemeParams",
    "OrderingTriple",
    "ordering_params",
    "outcome_density",
    "output_p_density",
    "output_q",
    "coherent_gaussian",
]


@dataclass(frozen=True)
class SchemeParams:
    """Detector efficiency, beam-splitter angle, inference rescaling and gain."""

    eta: float
    phi: float
    kappa: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta={self.eta} must lie in (0, 1]")
        if not 0.0 <= self.phi <= math.pi / 2 + 1e-12:
            raise ValueError(f"phi={self.phi} must lie in [0, pi/2]")
        if not (self.kappa >= 0.0 and self.g >= 0.0):
            raise ValueError("kappa and g must be nonnegative")

    @property
    def sin(self) -> float:
        return math.sin(self.phi)

    @property
    def cos(self) -> float:
        return math.cos(self.phi)

    @property
    def contraction(self) -> float:
        """Net rescaling ``cos(phi) + g sin(phi)`` of the output amplitude."""
        return self.cos + self.g * self.sin

    def replace(self, **changes) -> "SchemeParams":
        fields = dict(eta=self.eta, phi=self.phi, kappa=self.kappa, g=self.g)
        fields.update(changes)
        return SchemeParams(**fields)


class OrderingTriple(NamedTuple):
    s1: float
    s2: float
    s3: float


def ordering_params(p: SchemeParams) -> OrderingTriple:
    """Ordering parameters of the outcome law, output P- and output Q-function.

    ``s1`` is ``-inf`` at ``phi = 0`` (nothing reaches the detector). The
    output Q ordering is ``s2 - 2/c**2``: one unit-variance Gaussian
    smoothing of the output P-function seen through the contraction ``c``.
    """
    s2_sin = p.sin**2
    s1 = 1.0 - 2.0 / (p.eta * s2_sin) if s2_sin > 0 else -math.inf
    c = p.contraction
    # cos(pi/2) evaluates to 6e-17 rather than 0
    if abs(c) < 1e-12:
        raise DegenerateGeometry("cos(phi) + g sin(phi) = 0")
    s2 = 1.0 - 2.0 * p.g**2 / (p.eta * c * c)
    s3 = 1.0 - 2.0 * (p.eta + p.g**2) / (p.eta * c * c)
    return OrderingTriple(s1, s2, s3)


def outcome_density(state: InputState, p: SchemeParams, z):
    """Probability density ``T(z)`` of the raw double-homodyne outcome."""
    z = np.asarray(z)
    sn = p.sin
    if sn == 0.0:
        # only vacuum is reflected: heterodyne law of the vacuum
        return (p.eta / np.pi * np.exp(-p.eta * np.abs(z) ** 2))[()]
    s1 = 1.0 - 2.0 / (p.eta * sn * sn)
    return (wigner_s(state, s1, z / sn) / (sn * sn))[()]


def output_p_density(state: InputState, p: SchemeParams, xi):
    """Glauber P-density of the unconditional output state.

    Raises :class:`DistributionalP` when the output P-function is singular
    (``s2 >= 1``, i.e. no feed-forward gain).
    """
    _, s2, _ = ordering_params(p)
    if s2 >= 1.0:
        raise DistributionalP(f"output P-function is singular (s2={s2})")
    c = p.contraction
    return (wigner_s(state, s2, np.asarray(xi) / c) / (c * c))[()]


def output_q(state: InputState, p: SchemeParams, z):
    """Husimi function of the unconditional output state."""
    _, _, s3 = ordering_params(p)
    if s3 >= 1.0:
        raise OrderingOutOfRange(f"output Q ordering s3={s3} must be < 1")
    c = p.contraction
    return (wigner_s(state, s3, np.asarray(z) / c) / (c * c))[()]


def coherent_gaussian(beta: complex, s: float, scale: float) -> tuple[complex, float]:
    """Centre and variance of ``W_s[|beta>](z/scale)/scale**2`` as a density in z.

    The density is ``exp(-|z - centre|^2 / var) / (pi var)``.
    """
    return scale * beta, scale * scale * (1.0 - s) / 2.0
