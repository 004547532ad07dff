"""Trade-off curves swept over the beam-splitter angle, and their export."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import __version__
from .errors import NumericalError
from .fidelities import (
    Ensemble,
    FidelityPair,
    GaussianCoherent,
    Single,
    ThermalFock,
    avg_ed_fidelities,
    avg_id_fidelities,
    fock_ed_family,
    thermal_avg_ed,
    universal_ed_fidelities,
    universal_id_fidelities,
)
from .optimize import (
    Bracket,
    maximize_1d,
    optimal_g_distortion,
    optimal_g_disturbance,
    optimal_kappa_estimation,
    optimal_kappa_info,
)
from .phase_space import Fock
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .scheme import SchemeParams

__all__ = [
    "CURVE_KINDS",
    "TradeoffPoint",
    "CurveSpec",
    "phi_grid",
    "curve_point",
    "generate_curve",
    "y_at_x",
    "export",
    "load_json",
    "curve_filename",
]

CURVE_KINDS = ("id-coherent", "ed-coherent", "ed-fock", "ed-thermal")
CSV_COLUMNS = ("phi", "x_fid", "y_fid", "kappa_opt", "g_opt")


class TradeoffPoint(NamedTuple):
    phi: float
    x_fid: float
    y_fid: float
    kappa_opt: float
    g_opt: float


@dataclass(frozen=True)
class CurveSpec:
    """Which curve to trace and how finely.

    ``limit_row`` prepends the ``phi = 0`` (full transmission) endpoint,
    evaluated as the analytic limit. ``tol`` is the argument tolerance of
    the numerical optimiser used for Fock and thermal curves.
    """

    curve: str
    eta: float
    ensemble: Ensemble
    phi_steps: int = 200
    universal: bool = False
    limit_row: bool = True
    tol: float = 1e-8
    quad: QuadratureSpec = field(default=DEFAULT_SPEC, compare=False)

    def __post_init__(self):
        if self.curve not in CURVE_KINDS:
            raise ValueError(f"unknown curve {self.curve!r}; expected one of {CURVE_KINDS}")
        if self.phi_steps < 2:
            raise ValueError("phi_steps must be >= 2")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        coherent = self.curve in ("id-coherent", "ed-coherent")
        if coherent and not isinstance(self.ensemble, GaussianCoherent):
            raise ValueError(f"{self.curve} needs a GaussianCoherent ensemble")
        if self.curve == "ed-fock" and not (
            isinstance(self.ensemble, Single) and isinstance(self.ensemble.state, Fock)
        ):
            raise ValueError("ed-fock needs Single(Fock(n))")
        if self.curve == "ed-thermal" and not isinstance(self.ensemble, ThermalFock):
            raise ValueError("ed-thermal needs a ThermalFock ensemble")
        if self.universal and not coherent:
            raise ValueError("no universal protocol exists for Fock inputs")


def phi_grid(steps: int) -> np.ndarray:
    """Uniform angles from ``pi/2/steps`` to ``pi/2`` (zero excluded)."""
    return np.linspace(math.pi / 2 / steps, math.pi / 2, steps)


def _universal_limit(phi: float) -> tuple[float, float]:
    if phi == 0:
        return math.inf, 0.0
    s = math.sin(phi)
    return 1 / s, (1 - math.cos(phi)) / s


def _fock_objectives(spec: CurveSpec, phi: float):
    ens = spec.ensemble
    if isinstance(ens, Single):
        n = ens.state.n

        def h(k):
            return fock_ed_family(n, SchemeParams(spec.eta, phi, k, 0.0), spec.quad, "H")[0][n]

        def k_(g):
            return fock_ed_family(n, SchemeParams(spec.eta, phi, 0.0, g), spec.quad, "K")[1][n]

        return h, k_

    def h(k):
        return thermal_avg_ed(SchemeParams(spec.eta, phi, k, 0.0), ens.nbar, ens.n_trunc, spec.quad, "H").x

    def k_(g):
        return thermal_avg_ed(SchemeParams(spec.eta, phi, 0.0, g), ens.nbar, ens.n_trunc, spec.quad, "K").y

    return h, k_


def curve_point(spec: CurveSpec, phi: float) -> TradeoffPoint:
    """Optimised (or universal) fidelity pair at one angle."""
    eta = spec.eta
    if spec.curve in ("id-coherent", "ed-coherent"):
        omega = spec.ensemble.omega
        if spec.universal:
            kappa, g = _universal_limit(phi)
            if phi == 0:
                pair = FidelityPair(0.0, 1.0, "")
            elif spec.curve == "id-coherent":
                pair = universal_id_fidelities(eta, phi)
            else:
                pair = universal_ed_fidelities(eta, phi)
        elif spec.curve == "id-coherent":
            kappa = optimal_kappa_info(eta, phi, omega)
            g = optimal_g_disturbance(eta, phi, omega)
            pair = avg_id_fidelities(eta, phi, omega, kappa, g)
        else:
            kappa = optimal_kappa_estimation(eta, phi, omega)
            g = optimal_g_distortion(eta, phi, omega)
            pair = avg_ed_fidelities(eta, phi, omega, kappa, g)
        return TradeoffPoint(float(phi), pair.x, pair.y, kappa, g)
    h, k_ = _fock_objectives(spec, phi)
    kappa, hx = maximize_1d(h, Bracket(0.0, 10.0), spec.tol)
    if phi == 0:
        g, ky = 0.0, float(k_(0.0))
    else:
        g, ky = maximize_1d(k_, Bracket(0.0, 10.0), spec.tol)
    return TradeoffPoint(float(phi), hx, ky, kappa, g)


def generate_curve(spec: CurveSpec) -> list[TradeoffPoint]:
    """Points of the trade-off curve ordered by angle."""
    phis = list(phi_grid(spec.phi_steps))
    if spec.limit_row:
        phis.insert(0, 0.0)
    points = []
    for phi in phis:
        try:
            points.append(curve_point(spec, phi))
        except NumericalError as exc:
            exc.phi = phi
            exc.args = (f"{exc.args[0] if exc.args else exc} (at phi={phi!r})",)
            raise
    return points


def y_at_x(points: Sequence[TradeoffPoint], xs) -> np.ndarray:
    """Linearly interpolate a curve's ``y_fid`` at the given ``x_fid`` values."""
    x = np.array([pt.x_fid for pt in points])
    y = np.array([pt.y_fid for pt in points])
    order = np.argsort(x, kind="stable")
    return np.interp(xs, x[order], y[order])


def _ensemble_meta(ens: Ensemble) -> dict:
    if isinstance(ens, Single):
        return {"kind": "Single", "state": type(ens.state).__name__, **asdict(ens.state)}
    meta = {"kind": type(ens).__name__, **asdict(ens)}
    return meta


def _spec_meta(spec: CurveSpec) -> dict:
    return {
        "curve": spec.curve,
        "eta": spec.eta,
        "ensemble": _ensemble_meta(spec.ensemble),
        "phi_steps": spec.phi_steps,
        "universal": spec.universal,
        "limit_row": spec.limit_row,
    }


def export(
    points: Sequence[TradeoffPoint],
    fmt: str,
    path,
    spec: CurveSpec | None = None,
    seed: int | None = None,
) -> Path:
    """Write points as CSV (12 significant digits) or JSON with a metadata header."""
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_COLUMNS)
                for pt in points:
                    w.writerow([format(v, ".12g") for v in pt])
        elif fmt == "json":
            meta = {"tool": "homodyne_tradeoff", "version": __version__}
            if spec is not None:
                meta["spec"] = _spec_meta(spec)
            if seed is not None:
                meta["seed"] = seed
            doc = {"metadata": meta, "points": [pt._asdict() for pt in points]}
            path.write_text(json.dumps(doc, indent=1))
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return path


def load_json(path) -> tuple[dict, list[TradeoffPoint]]:
    doc = json.loads(Path(path).read_text())
    return doc["metadata"], [TradeoffPoint(**d) for d in doc["points"]]


def curve_filename(spec: CurveSpec, fmt: str) -> str:
    eta = f"eta{spec.eta:g}"
    ens = spec.ensemble
    if spec.curve == "ed-thermal":
        stem = f"ed_thermal_N{ens.nbar:g}_{eta}"
    elif spec.curve == "ed-fock":
        stem = f"ed_fock_n{ens.state.n}_{eta}"
    else:
        base = spec.curve.replace("-", "_")
        stem = f"{base}_universal_{eta}" if spec.universal else f"{base}_Omega{ens.omega:g}_{eta}"
    return f"{stem}.{fmt}"
