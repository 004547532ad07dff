import math

import numpy as np
import pytest

from homodyne_tradeoff.errors import DegenerateGeometry, DistributionalP
from homodyne_tradeoff.phase_space import Coherent, Fock, q_function
from homodyne_tradeoff.quadrature import integrate_plane, integrate_radial
from homodyne_tradeoff.scheme import (
    SchemeParams,
    coherent_gaussian,
    ordering_params,
    outcome_density,
    output_p_density,
    output_q,
)
from homodyne_tradeoff.variants import output_q_ordering_minus_g2

PI = math.pi


@pytest.mark.parametrize(
    "kw",
    [dict(eta=0.0, phi=1.0), dict(eta=1.1, phi=1.0), dict(eta=1, phi=-0.1),
     dict(eta=1, phi=2.0), dict(eta=1, phi=1, kappa=-1), dict(eta=1, phi=1, g=-0.5)],
)
def test_params_validated(kw):
    with pytest.raises(ValueError):
        SchemeParams(**kw)


def test_ordering_full_reflection_unit_gain():
    s1, s2, s3 = ordering_params(SchemeParams(1.0, PI / 2, g=1.0))
    assert (s1, s2) == pytest.approx((-1.0, -1.0))
    # one vacuum unit of smoothing below s2 through c = 1
    assert s3 == pytest.approx(-3.0)
    assert output_q_ordering_minus_g2(SchemeParams(1.0, PI / 2, g=1.0)) == pytest.approx(1.0)


def test_ordering_s1_scales_with_efficiency():
    assert ordering_params(SchemeParams(0.5, PI / 3, g=0.4)).s1 == pytest.approx(1 - 2 / (0.5 * 0.75))
    assert ordering_params(SchemeParams(1.0, 0.0)).s1 == -math.inf


def test_ordering_no_gain():
    p = SchemeParams(0.7, PI / 3)
    s1, s2, s3 = ordering_params(p)
    assert s2 == 1.0
    assert s3 == pytest.approx(1 - 2 / math.cos(PI / 3) ** 2)


@pytest.mark.parametrize("eta", [0.5, 1.0])
def test_full_reflection_without_gain_is_degenerate(eta):
    with pytest.raises(DegenerateGeometry):
        ordering_params(SchemeParams(eta, PI / 2, g=0.0))


def test_outcome_density_examples():
    assert outcome_density(Coherent(0), SchemeParams(1, 0.4), 0) == pytest.approx(1 / PI)
    assert outcome_density(Fock(0), SchemeParams(1, PI / 3), 0) == pytest.approx(1 / PI)
    assert outcome_density(Fock(1), SchemeParams(1, PI / 2), 1) == pytest.approx(math.exp(-1) / PI)


@pytest.mark.parametrize("eta,phi", [(1.0, PI / 2), (0.8, PI / 5), (0.9, 0.0)])
def test_outcome_density_coherent_closed_form(eta, phi):
    beta = 1.2 - 0.5j
    p = SchemeParams(eta, phi)
    z = np.array([0, 0.5 + 0.5j, beta * math.sin(phi), -1 + 2j])
    expect = eta / PI * np.exp(-eta * np.abs(z - beta * math.sin(phi)) ** 2)
    np.testing.assert_allclose(outcome_density(Coherent(beta), p, z), expect, rtol=1e-12)


def test_outcome_moments_coherent():
    beta, p = 1 + 1j, SchemeParams(0.8, PI / 3)
    dens = lambda z: outcome_density(Coherent(beta), p, z)
    c = beta * p.sin
    mean = integrate_plane(lambda z: z.real * dens(z), c, 10.0)
    mean += 1j * integrate_plane(lambda z: z.imag * dens(z), c, 10.0)
    var = integrate_plane(lambda z: (z.real - c.real) ** 2 * dens(z), c, 10.0)
    assert mean == pytest.approx(c, abs=1e-9)
    assert var == pytest.approx(1 / (2 * p.eta), abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 3, 5])
def test_outcome_density_fock_normalised(n):
    p = SchemeParams(0.9, PI / 6)
    total = integrate_radial(lambda r: 2 * PI * r * outcome_density(Fock(n), p, r), 25.0)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_output_p_vacuum_unit_gain():
    p = SchemeParams(1.0, PI / 2, g=1.0)
    xi = np.array([0, 0.5, 1 + 1j])
    np.testing.assert_allclose(output_p_density(Coherent(0), p, xi), np.exp(-np.abs(xi) ** 2) / PI)


def test_output_p_singular_without_gain():
    for state in (Coherent(0.3), Fock(2)):
        with pytest.raises(DistributionalP):
            output_p_density(state, SchemeParams(1.0, PI / 2 - 0.1, g=0.0), 0)


def test_output_p_universal_gain_centred_at_input():
    phi = PI / 4
    p = SchemeParams(1.0, phi, g=(1 - math.cos(phi)) / math.sin(phi))
    assert p.contraction == pytest.approx(1.0)
    dens = lambda xi: output_p_density(Coherent(1), p, xi)
    assert integrate_plane(dens, 1 + 0j, 12.0) == pytest.approx(1.0, abs=1e-9)
    assert integrate_plane(lambda xi: xi.real * dens(xi), 1 + 0j, 12.0) == pytest.approx(1.0, abs=1e-9)
    assert integrate_plane(lambda xi: xi.imag * dens(xi), 1 + 0j, 12.0) == pytest.approx(0.0, abs=1e-9)


def test_output_q_without_gain_is_contracted_input():
    phi = PI / 3
    p = SchemeParams(0.6, phi)
    beta = 2 + 0j
    z = np.array([0, 1, 1 + 0.5j])
    np.testing.assert_allclose(output_q(Coherent(beta), p, z), q_function(Coherent(beta * math.cos(phi)), z))


def test_output_q_vacuum_centred():
    p = SchemeParams(0.8, 1.1, g=0.9)
    z = np.array([0.3, -0.3, 0.3j, -0.3j])
    vals = output_q(Coherent(0), p, z)
    np.testing.assert_allclose(vals, vals[0], rtol=1e-14)
    assert output_q(Coherent(0), p, 0) > vals[0]


def test_output_q_fock_nonnegative_and_normalised():
    p = SchemeParams(1.0, PI / 3, g=0.5)
    r = np.linspace(0, 12, 2001)
    assert np.min(output_q(Fock(1), p, r)) >= -1e-10
    total = integrate_radial(lambda r: 2 * PI * r * output_q(Fock(1), p, r), 20.0)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_coherent_gaussian():
    assert coherent_gaussian(1 + 1j, -1.0, 0.5) == (0.5 + 0.5j, 0.25)
