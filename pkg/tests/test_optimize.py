import math

import numpy as np
import pytest
from scipy.optimize import brentq

from homodyne_tradeoff import optimize as opt
from homodyne_tradeoff.errors import BracketInvalid
from homodyne_tradeoff.fidelities import avg_ed_fidelities, avg_id_fidelities

PI = math.pi


def test_id_optima_spot():
    assert opt.optimal_kappa_info(1, PI / 2, 1) == pytest.approx(0.5)
    assert opt.optimal_g_disturbance(1, PI / 2, 1) == pytest.approx(0.5)
    assert opt.optimal_avg_id_fidelities(1, PI / 2, 1)[:2] == pytest.approx((2 / 3, 2 / 3))


@pytest.mark.parametrize("phi", [PI / 7, PI / 3, PI / 2])
def test_id_optima_universal_limit(phi):
    s, c = math.sin(phi), math.cos(phi)
    assert opt.optimal_kappa_info(0.9, phi, 1e7) == pytest.approx(1 / s, rel=1e-9)
    assert opt.optimal_g_disturbance(0.9, phi, 1e7) == pytest.approx((1 - c) / s, rel=1e-9)


def test_optima_vanish_at_zero_angle():
    assert opt.optimal_kappa_info(0.9, 0.0, 2.0) == 0.0
    assert opt.optimal_g_disturbance(0.9, 0.0, 2.0) == 0.0
    assert opt.optimal_g_distortion(0.9, 0.0, 2.0) == pytest.approx(0.0, abs=1e-12)
    assert opt.optimal_g_distortion(0.9, 1e-4, 2.0) == pytest.approx(0.0, abs=1e-4)


def test_kappa_estimation_spot():
    assert opt.optimal_kappa_estimation(1, PI / 2, 1) == pytest.approx(1.0)
    assert opt.optimal_kappa_estimation(1, PI / 2, 1e8) == pytest.approx(1.0)


def test_kappa_estimation_is_argmax():
    f = lambda k: avg_ed_fidelities(0.8, PI / 4, 2.0, k, 0).x
    k_num = opt.golden_section(f, 0.0, 5.0, 1e-10)
    assert opt.optimal_kappa_estimation(0.8, PI / 4, 2.0) == pytest.approx(k_num, abs=1e-6)


def test_distortion_root_spot():
    g = opt.optimal_g_distortion(1, PI / 2, 1)
    assert g == pytest.approx(brentq(lambda x: 3 * x**3 + x - 2, 0, 1, xtol=1e-14), abs=1e-10)
    # the commonly quoted 0.74746 is a rounding of 0.747415
    assert g == pytest.approx(0.74746, abs=1e-4)
    f = lambda x: avg_ed_fidelities(1, PI / 2, 1, 0, x).y
    assert f(g) > f(g + 1e-3) and f(g) > f(g - 1e-3)


@pytest.mark.parametrize("phi", [PI / 6, PI / 3, PI / 2])
def test_distortion_universal_limit(phi):
    s, c = math.sin(phi), math.cos(phi)
    assert opt.optimal_g_distortion(0.9, phi, 1e3) == pytest.approx((1 - c) / s, abs=1e-3)


@pytest.mark.parametrize("p,q", [(-3.0, 1.0), (1.0, -2.0), (0.0, -8.0), (-3.0, 2.0), (-1e-8, 1e-13)])
def test_real_cubic_roots(p, q):
    expected = sorted(r.real for r in np.roots([1, 0, p, q]) if abs(r.imag) < 1e-7)
    got = opt.real_cubic_roots(p, q)
    for r in got:
        assert abs(r**3 + p * r + q) < 1e-10 * max(1.0, abs(q))
    assert min(abs(e - g) for g in got for e in expected) < 1e-6


def test_golden_and_maximize_quadratic():
    f = lambda x: -((x - 2) ** 2)
    assert opt.golden_section(f, 0, 4) == pytest.approx(2, abs=1e-7)
    arg, val = opt.maximize_1d(f, opt.Bracket(0, 4))
    assert arg == pytest.approx(2, abs=1e-7)
    assert val == pytest.approx(0, abs=1e-12)


def test_maximize_ensemble_estimation():
    f = lambda k: avg_ed_fidelities(1, PI / 2, 1, k, 0).x
    arg, val = opt.maximize_1d(f, opt.Bracket(0, 10), tol=1e-9)
    assert arg == pytest.approx(1.0, abs=1e-6)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_maximize_endpoint():
    arg, val = opt.maximize_1d(lambda x: -x, opt.Bracket(0, 1))
    assert arg == pytest.approx(0, abs=1e-7)


@pytest.mark.parametrize("b", [opt.Bracket(1, 1), opt.Bracket(2, 1), opt.Bracket(0, math.inf)])
def test_bad_bracket(b):
    with pytest.raises(BracketInvalid):
        opt.maximize_1d(lambda x: x, b)


@pytest.mark.parametrize("eta,phi,omega", [(0.8, 0.3, 0.5), (1.0, 1.0, 5.0), (0.9, PI / 2, 10.0)])
def test_closed_optima_beat_perturbations(eta, phi, omega):
    k, g = opt.optimal_kappa_info(eta, phi, omega), opt.optimal_g_disturbance(eta, phi, omega)
    base = avg_id_fidelities(eta, phi, omega, k, g)
    for d in (-1e-3, 1e-3):
        moved = avg_id_fidelities(eta, phi, omega, k + d, g + d)
        assert moved.x < base.x and moved.y < base.y
