"""Monte Carlo simulation of the measure-and-displace scheme.

Trials are grouped in fixed-size blocks. Block ``i`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(i,))`` and blocks are
merged in index order, so results are bit-for-bit identical whatever the
number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np

from .errors import RejectionStall
from .fidelities import GaussianCoherent
from .phase_space import Coherent, Fock, InputState, q_function
from .scheme import SchemeParams, outcome_density

__all__ = [
    "RunConfig",
    "EstimateWithError",
    "FockOutcomeSampler",
    "sample_outcome",
    "empirical_id_fidelities",
    "EstimateDistribution",
    "empirical_estimate_distribution",
]

STALL_WINDOW = 100_000
STALL_RATE = 1e-3


@dataclass(frozen=True)
class RunConfig:
    trials: int
    seed: int = 0
    workers: int = 1
    block: int = 1 << 14

    def __post_init__(self):
        if self.trials < 1 or self.workers < 1 or self.block < 1:
            raise ValueError("trials, workers and block must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class EstimateWithError(NamedTuple):
    mean: float
    std_error: float
    trials: int


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_blocks(cfg: RunConfig, work: Callable[[np.random.Generator, int], object]) -> list:
    sizes = [cfg.block] * (cfg.trials // cfg.block)
    if cfg.trials % cfg.block:
        sizes.append(cfg.trials % cfg.block)

    def job(i):
        return work(_block_rng(cfg.seed, i), sizes[i])

    if cfg.workers == 1 or len(sizes) == 1:
        return [job(i) for i in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(job, range(len(sizes))))


def _merge_moments(parts: list[tuple[int, float, float]]) -> EstimateWithError:
    # Chan et al. pairwise update of (count, mean, M2), applied in block order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    var = m2 / (n - 1) if n > 1 else 0.0
    return EstimateWithError(mean, math.sqrt(var / n), n)


def _moments(x: np.ndarray) -> tuple[int, float, float]:
    m = float(np.mean(x))
    return len(x), m, float(np.sum((x - m) ** 2))


class FockOutcomeSampler:
    """Rejection sampler for the outcome law of a Fock input.

    Proposals are isotropic complex Gaussians whose variance is the
    vacuum-outcome variance ``1/eta`` inflated by ``n + 1``. The envelope
    constant is the maximum of the density ratio on a fine radial grid,
    padded by 1%.
    """

    def __init__(self, n: int, p: SchemeParams):
        self.state = Fock(n)
        self.p = p
        self.var = (n + 1) / p.eta
        r = np.linspace(0.0, math.sqrt(self.var * (60 + 4 * n)), 8001)
        ratio = outcome_density(self.state, p, r) / self._proposal(r)
        self.bound = 1.01 * float(np.max(ratio))

    @property
    def acceptance(self) -> float:
        return 1.0 / self.bound

    def _proposal(self, z):
        return np.exp(-np.abs(z) ** 2 / self.var) / (np.pi * self.var)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        out = np.empty(size, dtype=complex)
        filled = 0
        proposed = accepted = 0
        sd = math.sqrt(self.var / 2)
        while filled < size:
            m = max(64, int(1.3 * (size - filled) * self.bound))
            z = rng.normal(0.0, sd, m) + 1j * rng.normal(0.0, sd, m)
            u = rng.random(m)
            keep = z[u * self.bound * self._proposal(z) < outcome_density(self.state, self.p, z)]
            take = min(len(keep), size - filled)
            out[filled:filled + take] = keep[:take]
            filled += take
            proposed += m
            accepted += len(keep)
            if proposed >= STALL_WINDOW and accepted < STALL_RATE * proposed:
                raise RejectionStall(f"acceptance {accepted / proposed:.2e} below {STALL_RATE}")
        return out


def sample_outcome(state: InputState, p: SchemeParams, rng: np.random.Generator, size: int = 1):
    """Draw ``size`` double-homodyne outcomes for ``state``."""
    if isinstance(state, Coherent):
        sd = math.sqrt(1 / (2 * p.eta))
        mean = state.beta * p.sin
        return mean + rng.normal(0.0, sd, size) + 1j * rng.normal(0.0, sd, size)
    if isinstance(state, Fock):
        return FockOutcomeSampler(state.n, p).sample(rng, size)
    raise TypeError(f"unsupported input state {state!r}")


def empirical_id_fidelities(
    source: Union[complex, GaussianCoherent], p: SchemeParams, cfg: RunConfig
) -> tuple[EstimateWithError, EstimateWithError]:
    """Monte Carlo information and disturbance fidelities for coherent inputs.

    ``source`` is either a fixed amplitude or a :class:`GaussianCoherent`
    ensemble, in which case a fresh amplitude is drawn every trial. The
    conditional output of input ``|beta>`` after outcome ``z`` is the
    coherent state ``|beta cos(phi) + g z>``, so each trial scores
    ``exp(-|kappa z - beta|^2)`` and ``exp(-|beta (1 - cos) - g z|^2)``.
    """
    sd_z = math.sqrt(1 / (2 * p.eta))

    def work(rng, size):
        if isinstance(source, GaussianCoherent):
            sd_b = source.omega / math.sqrt(2)
            beta = rng.normal(0.0, sd_b, size) + 1j * rng.normal(0.0, sd_b, size)
        else:
            beta = np.full(size, complex(source))
        z = beta * p.sin + rng.normal(0.0, sd_z, size) + 1j * rng.normal(0.0, sd_z, size)
        g_trial = np.exp(-np.abs(p.kappa * z - beta) ** 2)
        f_trial = np.exp(-np.abs(beta * (1 - p.cos) - p.g * z) ** 2)
        return _moments(g_trial), _moments(f_trial)

    parts = _run_blocks(cfg, work)
    return _merge_moments([a for a, _ in parts]), _merge_moments([b for _, b in parts])


class EstimateDistribution(NamedTuple):
    """Histogram of rescaled outcomes and its overlap with the input Q-function."""

    counts: np.ndarray
    edges: np.ndarray
    q_mass: np.ndarray
    statistic: float


def _bin_mass(state: InputState, edges: np.ndarray, order: int = 4) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(order)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + 0.5 * h[:, None] * (x + 1)).ravel()
    wts = (0.5 * h[:, None] * w).ravel()
    zz = nodes[:, None] + 1j * nodes[None, :]
    dens = q_function(state, zz) * wts[:, None] * wts[None, :]
    nb = len(edges) - 1
    return dens.reshape(nb, order, nb, order).sum(axis=(1, 3))


def empirical_estimate_distribution(
    state: InputState,
    p: SchemeParams,
    cfg: RunConfig,
    bins: int = 64,
    half_width: float | None = None,
) -> EstimateDistribution:
    """Histogram ``kappa z`` and compare it with the input Q-function.

    The statistic is the discrete Bhattacharyya sum between the empirical
    bin frequencies and the Q-function mass per bin. The default square
    grid has half-width ``5 + |beta|`` (``5 + sqrt(n)`` for Fock inputs).
    """
    if half_width is None:
        amp = abs(state.beta) if isinstance(state, Coherent) else math.sqrt(state.n)
        half_width = 5.0 + amp
    edges = np.linspace(-half_width, half_width, bins + 1)
    sampler = FockOutcomeSampler(state.n, p) if isinstance(state, Fock) else None

    def work(rng, size):
        z = sampler.sample(rng, size) if sampler else sample_outcome(state, p, rng, size)
        est = p.kappa * z
        h, _, _ = np.histogram2d(est.real, est.imag, bins=[edges, edges])
        return h

    counts = np.zeros((bins, bins))
    for h in _run_blocks(cfg, work):
        counts += h
    q_mass = _bin_mass(state, edges)
    stat = float(np.sum(np.sqrt(counts / cfg.trials * q_mass)))
    return EstimateDistribution(counts, edges, q_mass, stat)
