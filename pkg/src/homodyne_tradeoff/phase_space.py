"""s-ordered quasi-probability functions of coherent and Fock states.

All densities are normalised so that ``int d^2 xi W_s(xi) = 1`` for every
``s < 1``. Complex amplitudes are plain Python/numpy complex numbers, and
every evaluator broadcasts over arrays of phase-space points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import gammaln

from .errors import OrderingOutOfRange
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_plane

__all__ = [
    "N_MAX",
    "EPS_S",
    "Coherent",
    "Fock",
    "InputState",
    "laguerre",
    "wigner_s_coherent",
    "wigner_s_fock",
    "wigner_s_fock_family",
    "wigner_s",
    "gaussian_smooth",
    "q_function",
]

#: Largest photon number accepted for Fock inputs.
N_MAX = 128
#: Half-width of the window around s = -1 where the exact Husimi limit is used.
EPS_S = 1e-9


@dataclass(frozen=True)
class Coherent:
    """Coherent state with complex amplitude ``beta``."""

    beta: complex = 0j

    def __post_init__(self):
        b = complex(self.beta)
        if not (math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ValueError("coherent amplitude must be finite")
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class Fock:
    """Photon-number state ``|n>``."""

    n: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or not 0 <= self.n <= N_MAX:
            raise ValueError(f"Fock number must be an integer in [0, {N_MAX}]")
        object.__setattr__(self, "n", int(self.n))


InputState = Union[Coherent, Fock]


def _check_order(s: float) -> None:
    if not s < 1:
        raise OrderingOutOfRange(f"ordering parameter s={s} must be < 1")


def laguerre(n: int, x):
    """Laguerre polynomial ``L_n(x)`` by the three-term recurrence."""
    if n < 0 or n > N_MAX:
        raise ValueError(f"degree must lie in [0, {N_MAX}]")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()]
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur[()]


def wigner_s_coherent(beta: complex, s: float, xi):
    """s-ordered Wigner function of the coherent state ``|beta>`` at ``xi``."""
    _check_order(s)
    d2 = np.abs(np.asarray(xi) - beta) ** 2
    return (2.0 / (np.pi * (1.0 - s))) * np.exp(-2.0 * d2 / (1.0 - s))


def _husimi_fock_family(nmax: int, r2: np.ndarray) -> np.ndarray:
    # exp(-r2) r2^n / (pi n!) in log space; r2 = 0 handled by the n = 0 row
    n = np.arange(nmax + 1).reshape((-1,) + (1,) * r2.ndim)
    with np.errstate(divide="ignore", invalid="ignore"):
        expo = n * np.log(r2) - r2 - gammaln(n + 1)
    expo = np.where(n == 0, -r2, expo)
    return np.exp(expo) / np.pi


def wigner_s_fock_family(nmax: int, s: float, xi) -> np.ndarray:
    """``W_s`` of ``|0>, ..., |nmax>`` at ``xi``; shape ``(nmax + 1,) + xi.shape``.

    The Laguerre recurrence is run on ``A_k = (-t)^k L_k(x)`` with
    ``t = (1+s)/(1-s)`` and ``x = 4|xi|^2/(1-s^2)``. Since ``t x`` stays
    finite at ``s = -1`` this form has no 0*inf indeterminacy; inside
    ``EPS_S`` of ``s = -1`` the exact Husimi expression is returned instead.
    """
    _check_order(s)
    if nmax < 0 or nmax > N_MAX:
        raise ValueError(f"nmax must lie in [0, {N_MAX}]")
    r2 = np.abs(np.asarray(xi)) ** 2
    if abs(s + 1.0) < EPS_S:
        return _husimi_fock_family(nmax, r2)
    t = (1.0 + s) / (1.0 - s)
    u = 4.0 * r2 / (1.0 - s) ** 2
    out = np.empty((nmax + 1,) + r2.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = u - t
    for k in range(1, nmax):
        out[k + 1] = ((u - (2 * k + 1) * t) * out[k] - k * t * t * out[k - 1]) / (k + 1)
    out *= (2.0 / (np.pi * (1.0 - s))) * np.exp(-2.0 * r2 / (1.0 - s))
    return out


def wigner_s_fock(n: int, s: float, xi):
    """s-ordered Wigner function of the Fock state ``|n>`` at ``xi``."""
    return wigner_s_fock_family(n, s, xi)[n][()]


def wigner_s(state: InputState, s: float, xi):
    """Dispatch to the coherent or Fock evaluator."""
    if isinstance(state, Coherent):
        return wigner_s_coherent(state.beta, s, xi)
    if isinstance(state, Fock):
        return wigner_s_fock(state.n, s, xi)
    raise TypeError(f"unsupported input state {state!r}")


def gaussian_smooth(
    w: Callable[[np.ndarray], np.ndarray],
    r: float,
    s: float,
    zeta: complex,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scales=(),
) -> float:
    """Transport an r-ordered density ``w`` to ordering ``s < r`` at ``zeta``.

    Evaluates the Gaussian convolution
    ``int d^2 xi 2/(pi (r-s)) exp(-2|xi-zeta|^2/(r-s)) w(xi)``
    by plane quadrature. ``w`` must be vectorised over complex arrays;
    ``scales`` lists widths of narrow features of ``w`` (if any).
    """
    if not r > s:
        raise ValueError("smoothing requires r > s")
    var = 0.5 * (r - s)

    def integrand(xi):
        kern = np.exp(-np.abs(xi - zeta) ** 2 / var) / (np.pi * var)
        return kern * w(xi)

    radius = math.sqrt(50.0 * var)
    return integrate_plane(integrand, zeta, radius, spec, scales=(math.sqrt(var), *scales))


def q_function(state: InputState, z):
    """Husimi function ``<z|rho|z>/pi`` of a coherent or Fock state."""
    z = np.asarray(z)
    if isinstance(state, Coherent):
        return (np.exp(-np.abs(z - state.beta) ** 2) / np.pi)[()]
    if isinstance(state, Fock):
        return _husimi_fock_family(state.n, np.abs(z) ** 2)[state.n][()]
    raise TypeError(f"unsupported input state {state!r}")
