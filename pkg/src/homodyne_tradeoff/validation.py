"""Self-check suite: closed forms against quadrature, optima, identities.

Each check returns a :class:`PropertyResult` holding the worst deviation it
saw. :func:`run_validation` runs them all; the CLI ``validate`` command
prints the report and exits non-zero on any failure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import fidelities as fid
from . import optimize as opt
from . import variants
from .phase_space import Coherent, Fock, gaussian_smooth, wigner_s
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_plane, integrate_radial
from .scheme import SchemeParams, ordering_params, outcome_density, output_p_density, output_q

__all__ = [
    "DEFAULT_TOLERANCES",
    "PropertyResult",
    "ValidationReport",
    "CLOSED_FORMS",
    "check_closed_vs_oracle",
    "check_universal_vs_oracle",
    "check_average_vs_oracle",
    "check_sign_adjudication",
    "check_universality",
    "check_normalization",
    "check_smoothing_bridge",
    "check_optimum_perturbation",
    "check_cubic",
    "check_universal_limit",
    "check_universal_identity",
    "check_ensemble_tradeoff_form",
    "run_validation",
]

DEFAULT_TOLERANCES = {
    "oracle": 1e-6,
    "normalization": 1e-6,
    "smoothing": 1e-6,
    "universality": 1e-10,
    "identity": 1e-10,
    "residual": 1e-10,
    "limit": 1e-3,
    "perturbation": 1e-3,
    "rejection": 1e-3,
}

CLOSED_FORMS: dict[str, Callable[[SchemeParams, complex], float]] = {
    "G": fid.info_fidelity_coherent,
    "F": fid.disturbance_fidelity_coherent,
    "H": fid.est_fidelity_coherent,
    "K": fid.distortion_fidelity_coherent,
}

PI = math.pi
ETAS = (0.8, 0.9, 1.0)
PHIS = (PI / 6, PI / 4, PI / 3, PI / 2)
PARAMS = (0.3, 0.7, 1.0, 1.5)
BETAS = (0j, 1 + 0j, 2 + 1j)


@dataclass
class PropertyResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    points: int = 0
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (
            f"[{mark}] {self.name}: max deviation {self.max_deviation:.3e} "
            f"(tol {self.tolerance:.1e}, {self.points} points){extra}"
        )


@dataclass
class ValidationReport:
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def format(self) -> str:
        lines = [r.line() for r in self.results]
        n_fail = sum(not r.passed for r in self.results)
        lines.append(f"{len(self.results) - n_fail}/{len(self.results)} properties passed")
        return "\n".join(lines)


def _result(name, devs, tol, detail="", above=False) -> PropertyResult:
    devs = np.asarray(devs, dtype=float)
    worst = float(np.max(devs)) if devs.size else 0.0
    if above:
        ok = bool(devs.size) and float(np.min(devs)) > tol
        worst = float(np.min(devs)) if devs.size else 0.0
    else:
        ok = bool(np.all(np.isfinite(devs))) and worst <= tol
    return PropertyResult(name, ok, worst, tol, int(devs.size), detail)


def per_state_grid():
    """(kind, params, beta) over the standard grid; kappa and g share a value."""
    for kind, eta, phi, k, beta in itertools.product("GFHK", ETAS, PHIS, PARAMS, BETAS):
        yield kind, SchemeParams(eta, phi, k, k), beta


def check_closed_vs_oracle(
    closed_forms: Mapping[str, Callable] = CLOSED_FORMS,
    tol: float = DEFAULT_TOLERANCES["oracle"],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> PropertyResult:
    devs = []
    worst = ("", None, None)
    for kind, p, beta in per_state_grid():
        d = abs(closed_forms[kind](p, beta) - fid.oracle_fidelity(kind, Coherent(beta), p, spec))
        if not devs or d > max(devs):
            worst = (kind, p, beta)
        devs.append(d)
    kind, p, beta = worst
    detail = f"worst: {kind} eta={p.eta} phi={p.phi:.4f} k/g={p.kappa} beta={beta}"
    return _result("per-state closed forms vs quadrature", devs, tol, detail)


def check_universal_vs_oracle(tol=DEFAULT_TOLERANCES["oracle"], spec=DEFAULT_SPEC) -> PropertyResult:
    devs = []
    for eta, phi, beta in itertools.product(ETAS, PHIS, BETAS):
        s, c = math.sin(phi), math.cos(phi)
        p = SchemeParams(eta, phi, 1 / s, (1 - c) / s)
        idp = fid.universal_id_fidelities(eta, phi)
        edp = fid.universal_ed_fidelities(eta, phi)
        for kind, val in zip("GFHK", (idp.x, idp.y, edp.x, edp.y)):
            devs.append(abs(val - fid.oracle_fidelity(kind, Coherent(beta), p, spec)))
    return _result("universal closed forms vs quadrature", devs, tol)


AVG_GRID = tuple(itertools.product((0.8, 1.0), (PI / 4, PI / 2), (0.5, 1.0, 5.0)))


def check_average_vs_oracle(tol=DEFAULT_TOLERANCES["oracle"], spec=DEFAULT_SPEC, k=0.7) -> PropertyResult:
    devs = []
    for eta, phi, omega in AVG_GRID:
        p = SchemeParams(eta, phi, k, k)
        idp = fid.avg_id_fidelities(eta, phi, omega, k, k)
        edp = fid.avg_ed_fidelities(eta, phi, omega, k, k)
        for kind, val in zip("GFHK", (idp.x, idp.y, edp.x, edp.y)):
            devs.append(abs(val - fid.oracle_avg_fidelity(kind, p, omega, spec)))
    return _result("Gaussian-averaged closed forms vs quadrature", devs, tol)


def check_sign_adjudication(
    tol=DEFAULT_TOLERANCES["oracle"], spec=DEFAULT_SPEC, reject: float = 1e-3
) -> list[PropertyResult]:
    """Oracle picks the decaying distortion exponent and the (1 - kappa sin) term."""
    k_neg, k_pos = [], []
    for eta, phi, g, beta in itertools.product((0.8, 1.0), (PI / 4, PI / 2), (0.3, 1.5), (1 + 0j, 2 + 1j)):
        p = SchemeParams(eta, phi, 0.0, g)
        o = fid.oracle_fidelity("K", Coherent(beta), p, spec)
        k_neg.append(abs(fid.distortion_fidelity_coherent(p, beta) - o))
        k_pos.append(abs(variants.distortion_fidelity_positive_exponent(p, beta) - o))
    h_minus, h_plus = [], []
    for eta, phi, omega in AVG_GRID:
        p = SchemeParams(eta, phi, 0.7, 0.0)
        o = fid.oracle_avg_fidelity("H", p, omega, spec)
        h_minus.append(abs(fid.avg_ed_fidelities(eta, phi, omega, 0.7, 0.0).x - o))
        h_plus.append(abs(variants.avg_est_fidelity_plus_sign(eta, phi, omega, 0.7) - o))
    return [
        _result("distortion exponent decaying: matches quadrature", k_neg, tol),
        _result("distortion exponent growing: rejected by quadrature", k_pos, reject, above=True),
        _result("ensemble estimation (1 - kappa sin)^2: matches quadrature", h_minus, tol),
        _result("ensemble estimation (1 + kappa sin)^2: rejected by quadrature", h_plus, reject, above=True),
    ]


def check_universality(
    closed_forms: Mapping[str, Callable] = CLOSED_FORMS, tol=DEFAULT_TOLERANCES["universality"]
) -> PropertyResult:
    betas = [0, 0.5, 1 + 1j, 3, 2 - 4j, 10j]
    devs = []
    for eta, phi in itertools.product(ETAS, PHIS):
        s, c = math.sin(phi), math.cos(phi)
        p = SchemeParams(eta, phi, 1 / s, (1 - c) / s)
        for kind in "GFHK":
            vals = [closed_forms[kind](p, b) for b in betas]
            devs.append(max(vals) - min(vals))
    return _result("universal settings are amplitude independent", devs, tol)


def check_normalization(tol=DEFAULT_TOLERANCES["normalization"], spec=DEFAULT_SPEC) -> list[PropertyResult]:
    w_dev = []
    for s in (-3.0, -1.0, -0.5, 0.0, 0.5):
        for beta in (0j, 1 + 1j, 3 + 0j):
            st = Coherent(beta)
            w_dev.append(abs(integrate_plane(lambda z: wigner_s(st, s, z), beta, math.sqrt(25 * (1 - s)), spec) - 1))
        for n in (0, 1, 5, 10):
            st = Fock(n)
            rad = math.sqrt((n + 12 + 8 * math.sqrt(n + 1)) * (1 - s))
            w_dev.append(abs(integrate_radial(lambda r: 2 * PI * r * wigner_s(st, s, r), rad, spec) - 1))
    t_dev, q_dev, q_neg = [], [], []
    for eta, phi in itertools.product(ETAS, (PI / 6, PI / 3, PI / 2)):
        for st in (Coherent(0j), Coherent(1 + 1j), Coherent(3 + 0j), Fock(0), Fock(1), Fock(5)):
            amp = abs(st.beta) if isinstance(st, Coherent) else math.sqrt(st.n)
            p = SchemeParams(eta, phi, 0.0, 0.5)
            rad = amp + 9 / math.sqrt(eta) + math.sqrt(getattr(st, "n", 0) * 2)
            t_dev.append(abs(integrate_plane(lambda z: outcome_density(st, p, z), 0j, rad, spec) - 1))
            c = p.contraction
            rad_q = c * amp + 10 * math.sqrt(1 + p.g**2 / eta) + math.sqrt(getattr(st, "n", 0) * 2)
            q_dev.append(abs(integrate_plane(lambda z: output_q(st, p, z), 0j, rad_q, spec) - 1))
            zz = np.linspace(-6, 6, 41)[:, None] + 1j * np.linspace(-6, 6, 41)[None, :]
            q_neg.append(max(0.0, -float(np.min(output_q(st, p, zz)))))
    return [
        _result("s-ordered functions normalised", w_dev, tol),
        _result("outcome density normalised", t_dev, tol),
        _result("output Q-function normalised", q_dev, tol),
        _result("output Q-function nonnegative", q_neg, 1e-10),
    ]


def check_smoothing_bridge(tol=DEFAULT_TOLERANCES["smoothing"], spec=DEFAULT_SPEC) -> list[PropertyResult]:
    pts = [complex(x, y) for x in (-1.5, -0.5, 0.3, 1.0, 2.0) for y in (-1.0, 0.0, 0.4, 1.2, 2.0)]
    devs = []
    for st, (r, s) in itertools.product(
        (Coherent(0j), Coherent(1 - 0.5j), Fock(1), Fock(3), Fock(5)), ((0.0, -1.0), (0.5, -0.5), (-1.0, -2.5))
    ):
        for z in pts:
            sm = gaussian_smooth(lambda xi: wigner_s(st, r, xi), r, s, z, spec)
            devs.append(abs(sm - wigner_s(st, s, z)))
    out_devs = []
    for st in (Coherent(0.5 + 0.5j), Fock(1), Fock(4)):
        for eta, phi, g in ((1.0, PI / 3, 0.5), (0.9, PI / 4, 0.8), (0.8, PI / 2, 1.2)):
            p = SchemeParams(eta, phi, 0.0, g)
            width = g / math.sqrt(eta)
            for z in pts[::2]:
                sm = gaussian_smooth(lambda xi: output_p_density(st, p, xi), 1.0, -1.0, z, spec, scales=(width,))
                out_devs.append(abs(sm - output_q(st, p, z)))
    return [
        _result("ordering transport by Gaussian smoothing", devs, tol),
        _result("output Q equals smoothed output P", out_devs, tol),
    ]


OPT_GRID = tuple(
    itertools.product(ETAS, (PI / 8, PI / 4, 3 * PI / 8, PI / 2), (0.5, 1.0, 2.0, 5.0, 10.0))
)


def check_optimum_perturbation(delta=DEFAULT_TOLERANCES["perturbation"]) -> PropertyResult:
    """Every closed-form optimum beats its +-delta neighbours; reports the worst margin."""
    margins = []
    for eta, phi, omega in OPT_GRID:
        cases = (
            (opt.optimal_kappa_info(eta, phi, omega), lambda k: fid.avg_id_fidelities(eta, phi, omega, k, 0).x),
            (opt.optimal_g_disturbance(eta, phi, omega), lambda g: fid.avg_id_fidelities(eta, phi, omega, 0, g).y),
            (opt.optimal_kappa_estimation(eta, phi, omega), lambda k: fid.avg_ed_fidelities(eta, phi, omega, k, 0).x),
            (opt.optimal_g_distortion(eta, phi, omega), lambda g: fid.avg_ed_fidelities(eta, phi, omega, 0, g).y),
        )
        for x, f in cases:
            fx = f(x)
            margins.append(min(fx - f(x + delta), fx - f(max(x - delta, 0.0)) if x >= delta else np.inf))
    res = _result("closed-form optima beat +-1e-3 perturbations", margins, 0.0, above=True)
    res.detail = "deviation column = smallest objective drop"
    return res


def check_cubic(tol=DEFAULT_TOLERANCES["residual"]) -> list[PropertyResult]:
    residuals, lower = [], []
    for eta, phi, omega in OPT_GRID:
        p, q = opt.distortion_cubic(eta, phi, omega)
        g = opt.optimal_g_distortion(eta, phi, omega)
        residuals.append(abs(g**3 + p * g + q))
        kbest = fid.avg_ed_fidelities(eta, phi, omega, 0, g).y
        for r in opt.real_cubic_roots(p, q):
            if r >= 0 and abs(r - g) > 1e-9:
                lower.append(kbest - fid.avg_ed_fidelities(eta, phi, omega, 0, r).y)
    out = [_result("distortion cubic residual (monic)", residuals, tol)]
    out.append(
        PropertyResult(
            "other nonnegative cubic roots give lower distortion fidelity",
            all(d > 0 for d in lower), min(lower) if lower else 0.0, 0.0, len(lower),
        )
    )
    return out


def check_universal_limit(omega=1e3, tol=DEFAULT_TOLERANCES["limit"]) -> PropertyResult:
    devs = []
    for eta, phi in itertools.product(ETAS, (PI / 8, PI / 4, 3 * PI / 8, PI / 2)):
        s, c = math.sin(phi), math.cos(phi)
        ku, gu = 1 / s, (1 - c) / s
        devs += [
            abs(opt.optimal_kappa_info(eta, phi, omega) - ku),
            abs(opt.optimal_g_disturbance(eta, phi, omega) - gu),
            abs(opt.optimal_kappa_estimation(eta, phi, omega) - ku),
            abs(opt.optimal_g_distortion(eta, phi, omega) - gu),
        ]
        nu = opt.optimal_avg_id_fidelities(eta, phi, omega)
        un = fid.universal_id_fidelities(eta, phi)
        devs += [abs(nu.x - un.x), abs(nu.y - un.y)]
    return _result(f"optima reach universal values at omega={omega:g}", devs, tol)


def check_universal_identity(tol=DEFAULT_TOLERANCES["identity"], n_phi=100) -> PropertyResult:
    devs = []
    for eta in ETAS:
        for phi in np.linspace(PI / 2 / n_phi, PI / 2, n_phi):
            G, F = fid.universal_id_fidelities(eta, phi)[:2]
            devs.append(abs(fid.universal_id_tradeoff(eta, G) - F))
    return _result("universal (G, F) satisfy the closed trade-off", devs, tol)


def check_ensemble_tradeoff_form(tol=DEFAULT_TOLERANCES["identity"]) -> list[PropertyResult]:
    """Parametric optimised (G, F) against the eliminated trade-off, with and
    without the extra ``(1 + omega^2)/omega^2`` prefactor."""
    good, scaled = [], []
    for eta, omega in itertools.product((0.8, 0.9, 1.0), (0.5, 1.0, 5.0, 10.0)):
        for phi in np.linspace(0.05, PI / 2, 60):
            kap = opt.optimal_kappa_info(eta, phi, omega)
            g = opt.optimal_g_disturbance(eta, phi, omega)
            G, F = fid.avg_id_fidelities(eta, phi, omega, kap, g)[:2]
            good.append(abs(fid.avg_id_tradeoff(eta, omega, G) - F))
            scaled.append(abs(variants.avg_id_tradeoff_scaled(eta, omega, G) - F))
    return [
        _result("ensemble trade-off without prefactor matches parametric curve", good, tol),
        PropertyResult(
            "ensemble trade-off with (1+omega^2)/omega^2 prefactor (reported)",
            True, float(np.max(scaled)), math.nan, len(scaled),
            "deviation reported only; this form exceeds 1 at small omega",
        ),
    ]


def run_validation(
    tolerances: Mapping[str, float] | None = None,
    omega_limit: float = 1e3,
    closed_forms: Mapping[str, Callable] | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    progress: Callable[[PropertyResult], None] | None = None,
) -> ValidationReport:
    """Run every check. ``closed_forms`` overrides the per-state formulas
    (mutation testing)."""
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    forms = dict(CLOSED_FORMS)
    forms.update(closed_forms or {})
    report = ValidationReport()

    def add(res):
        for r in res if isinstance(res, list) else [res]:
            report.results.append(r)
            if progress:
                progress(r)

    add(check_closed_vs_oracle(forms, tol["oracle"], spec))
    add(check_universal_vs_oracle(tol["oracle"], spec))
    add(check_average_vs_oracle(tol["oracle"], spec))
    add(check_sign_adjudication(tol["oracle"], spec, tol["rejection"]))
    add(check_universality(forms, tol["universality"]))
    add(check_normalization(tol["normalization"], spec))
    add(check_smoothing_bridge(tol["smoothing"], spec))
    add(check_optimum_perturbation(tol["perturbation"]))
    add(check_cubic(tol["residual"]))
    add(check_universal_limit(omega_limit, tol["limit"]))
    add(check_universal_identity(tol["identity"]))
    add(check_ensemble_tradeoff_form(tol["identity"]))
    return report
