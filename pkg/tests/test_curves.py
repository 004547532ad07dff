import json
import math

import numpy as np
import pytest

from homodyne_tradeoff.curves import (
    CurveSpec,
    TradeoffPoint,
    curve_filename,
    curve_point,
    export,
    generate_curve,
    load_json,
    phi_grid,
    y_at_x,
)
from homodyne_tradeoff.fidelities import GaussianCoherent, Single, ThermalFock
from homodyne_tradeoff.phase_space import Coherent, Fock

PI = math.pi


def test_phi_grid():
    g = phi_grid(4)
    assert g[0] > 0 and g[-1] == pytest.approx(PI / 2)
    assert len(g) == 4


@pytest.mark.parametrize(
    "kw",
    [
        dict(curve="bogus", eta=1, ensemble=GaussianCoherent(1)),
        dict(curve="id-coherent", eta=1, ensemble=ThermalFock(1)),
        dict(curve="ed-fock", eta=1, ensemble=Single(Coherent(0))),
        dict(curve="ed-thermal", eta=1, ensemble=GaussianCoherent(1)),
        dict(curve="ed-thermal", eta=1, ensemble=ThermalFock(1), universal=True),
        dict(curve="id-coherent", eta=0, ensemble=GaussianCoherent(1)),
        dict(curve="id-coherent", eta=1, ensemble=GaussianCoherent(1), phi_steps=1),
    ],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        CurveSpec(**kw)


def test_id_curve_endpoints():
    pts = generate_curve(CurveSpec("id-coherent", 1.0, GaussianCoherent(1.0), phi_steps=5))
    assert pts[0][1:3] == pytest.approx((0.5, 1.0))
    assert pts[-1][1:3] == pytest.approx((2 / 3, 2 / 3))
    uni = generate_curve(CurveSpec("id-coherent", 1.0, GaussianCoherent(1.0), 5, universal=True))
    assert uni[0] == (0.0, 0.0, 1.0, math.inf, 0.0)
    assert uni[-1][1:3] == pytest.approx((0.5, 0.5))


def test_ed_coherent_curve_spot():
    pt = curve_point(CurveSpec("ed-coherent", 1.0, GaussianCoherent(1.0)), PI / 2)
    assert pt.x_fid == pytest.approx(1.0)
    assert pt.g_opt == pytest.approx(0.7474152504, abs=1e-9)


def test_fock_curves_ordered_right_to_left():
    curves = {
        n: generate_curve(CurveSpec("ed-fock", 0.9, Single(Fock(n)), phi_steps=6, tol=1e-6))
        for n in (1, 2, 5)
    }
    ys = np.linspace(0.75, 0.95, 5)
    def x_at_y(pts):
        y = np.array([p.y_fid for p in pts])
        x = np.array([p.x_fid for p in pts])
        o = np.argsort(y)
        return np.interp(ys, y[o], x[o])
    x1, x2, x5 = (x_at_y(curves[n]) for n in (1, 2, 5))
    assert np.all(x1 > x2) and np.all(x2 > x5)


def test_y_at_x_interpolates():
    pts = [TradeoffPoint(0, 0.0, 1.0, 0, 0), TradeoffPoint(1, 1.0, 0.0, 0, 0)]
    assert y_at_x(pts, 0.25) == pytest.approx(0.75)


def three_points():
    return generate_curve(CurveSpec("id-coherent", 0.9, GaussianCoherent(2.0), phi_steps=3, limit_row=False))


def test_csv_export(tmp_path):
    path = export(three_points(), "csv", tmp_path / "c.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "phi,x_fid,y_fid,kappa_opt,g_opt"


def test_json_round_trip(tmp_path):
    pts = three_points()
    spec = CurveSpec("id-coherent", 0.9, GaussianCoherent(2.0), phi_steps=3)
    meta, back = load_json(export(pts, "json", tmp_path / "c.json", spec=spec, seed=4))
    assert back == pts
    assert meta["seed"] == 4 and meta["spec"]["ensemble"]["omega"] == 2.0


def test_json_round_trip_infinite(tmp_path):
    pts = [TradeoffPoint(0.0, 0.0, 1.0, math.inf, 0.0)]
    _, back = load_json(export(pts, "json", tmp_path / "u.json"))
    assert back == pts


def test_export_errors(tmp_path):
    with pytest.raises(ValueError):
        export(three_points(), "xml", tmp_path / "c.xml")
    with pytest.raises(OSError):
        export(three_points(), "csv", tmp_path / "missing" / "c.csv")


def test_filenames():
    names = [curve_filename(CurveSpec("ed-thermal", 0.9, ThermalFock(n)), "csv") for n in (0.5, 1, 2)]
    assert names == ["ed_thermal_N0.5_eta0.9.csv", "ed_thermal_N1_eta0.9.csv", "ed_thermal_N2_eta0.9.csv"]
    assert curve_filename(CurveSpec("ed-fock", 1, Single(Fock(5))), "json") == "ed_fock_n5_eta1.json"
    assert curve_filename(CurveSpec("id-coherent", 0.8, GaussianCoherent(10)), "csv") == "id_coherent_Omega10_eta0.8.csv"
    uni = CurveSpec("ed-coherent", 0.8, GaussianCoherent(1), universal=True)
    assert curve_filename(uni, "csv") == "ed_coherent_universal_eta0.8.csv"


MATRIX = [
    CurveSpec(kind, eta, ens, phi_steps=10, universal=uni, tol=1e-6)
    for eta in (0.8, 0.9, 1.0)
    for kind, ens, uni in (
        ("id-coherent", GaussianCoherent(1.0), False),
        ("id-coherent", GaussianCoherent(5.0), True),
        ("ed-coherent", GaussianCoherent(0.5), False),
        ("ed-coherent", GaussianCoherent(10.0), True),
        ("ed-fock", Single(Fock(2)), False),
        ("ed-thermal", ThermalFock(1.0), False),
    )
]


@pytest.mark.parametrize("spec", MATRIX, ids=lambda s: f"{s.curve}-{s.eta}-{'u' if s.universal else 'o'}")
def test_curves_monotone(spec):
    pts = generate_curve(spec)
    x = np.array([p.x_fid for p in pts])
    y = np.array([p.y_fid for p in pts])
    assert np.all(np.diff(x) >= -1e-12) and np.all(np.diff(y) <= 1e-12)
    assert np.all((x >= 0) & (x <= 1 + 1e-12) & (y >= 0) & (y <= 1 + 1e-12))


@pytest.mark.parametrize("omega", [5.0, 10.0])
def test_optimised_above_universal(omega):
    opt_pts = generate_curve(CurveSpec("id-coherent", 0.9, GaussianCoherent(omega), phi_steps=200))
    uni_pts = generate_curve(CurveSpec("id-coherent", 0.9, GaussianCoherent(omega), phi_steps=200, universal=True))
    lo = opt_pts[0].x_fid
    xs = np.array([p.x_fid for p in uni_pts if lo < p.x_fid])
    assert np.all(y_at_x(opt_pts, xs) >= y_at_x(uni_pts, xs) - 1e-9)


@pytest.mark.parametrize("curve,omega", [("id-coherent", 1.0), ("ed-coherent", 2.0)])
def test_efficiency_degrades(curve, omega):
    lo = generate_curve(CurveSpec(curve, 0.8, GaussianCoherent(omega), phi_steps=100))
    hi = generate_curve(CurveSpec(curve, 0.9, GaussianCoherent(omega), phi_steps=100))
    x_top = min(lo[-1].x_fid, hi[-1].x_fid)
    xs = np.linspace(max(lo[1].x_fid, hi[1].x_fid), x_top, 20)[:-1]
    assert np.all(y_at_x(hi, xs) > y_at_x(lo, xs))
