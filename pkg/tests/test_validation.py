import math

import pytest

from homodyne_tradeoff import validation as val
from homodyne_tradeoff import variants
from homodyne_tradeoff.fidelities import avg_id_tradeoff


def test_per_state_grid_size():
    assert sum(1 for _ in val.per_state_grid()) >= 200


def test_mutated_distortion_exponent_caught():
    forms = dict(val.CLOSED_FORMS, K=variants.distortion_fidelity_positive_exponent)
    res = val.check_closed_vs_oracle(forms)
    assert not res.passed
    assert res.max_deviation > 1e-3
    assert res.detail.startswith("worst: K")


def test_mutated_forms_break_universality():
    forms = dict(val.CLOSED_FORMS, K=variants.distortion_fidelity_positive_exponent)
    assert val.check_universality(forms).passed
    flipped = dict(val.CLOSED_FORMS, G=lambda p, b: val.CLOSED_FORMS["G"](p, b) * (1 + 1e-3 * abs(b)))
    assert not val.check_universality(flipped).passed


def test_property_line_format():
    r = val.PropertyResult("demo", True, 1.5e-12, 1e-6, 10)
    assert r.line() == "[PASS] demo: max deviation 1.500e-12 (tol 1.0e-06, 10 points)"
    rep = val.ValidationReport([r, val.PropertyResult("bad", False, 1.0, 0.1, 1)])
    assert not rep.passed
    assert rep.format().endswith("1/2 properties passed")


def test_sign_variants_deviate():
    for res in val.check_sign_adjudication():
        assert res.passed, res.line()


def test_cubic_and_limits():
    for res in val.check_cubic():
        assert res.passed, res.line()
    assert val.check_universal_limit(1e3).passed
    assert not val.check_universal_limit(3.0).passed


def test_sin_squared_gain_is_not_optimal():
    from homodyne_tradeoff.fidelities import avg_id_fidelities
    from homodyne_tradeoff.optimize import optimal_g_disturbance

    eta, phi, omega = 0.9, 1.0, 2.0
    good = avg_id_fidelities(eta, phi, omega, 0, optimal_g_disturbance(eta, phi, omega)).y
    other = avg_id_fidelities(eta, phi, omega, 0, variants.optimal_g_disturbance_sin_squared(eta, phi, omega)).y
    assert good - other > 1e-4


def test_scaled_tradeoff_variant_exceeds_one():
    # at the optimal point (2/3, 2/3) the prefactor form returns 4/3
    assert variants.avg_id_tradeoff_scaled(1.0, 1.0, 2 / 3) == pytest.approx(4 / 3, abs=1e-7)
    assert avg_id_tradeoff(1.0, 1.0, 2 / 3) == pytest.approx(2 / 3, abs=1e-7)
    assert avg_id_tradeoff(1.0, 1.0, 0.5) == pytest.approx(1.0)


def test_normalization_and_smoothing_checks():
    for res in val.check_normalization() + val.check_smoothing_bridge():
        assert res.passed, res.line()
