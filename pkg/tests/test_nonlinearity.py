"""Tests for the deformation-function catalog and its spec grammar."""

import pytest

from chargestate.errors import ParameterRangeError, PreconditionError, SpecParseError
from chargestate.nonlinearity import (
    intensity_sqrt,
    parse_spec,
    penson_solomon,
    q_deformed,
    unity,
)

ALL_CATALOG = [unity(), penson_solomon(0.5), intensity_sqrt(), q_deformed(7.0)]


def test_eval_examples():
    assert unity()(7) == 1.0
    assert penson_solomon(0.5)(3) == pytest.approx(4.0, rel=1e-15)
    assert q_deformed(7.0)(1) == pytest.approx(1.0, rel=1e-14)
    assert intensity_sqrt()(4) == 2.0
    assert intensity_sqrt()(0) == 0.0
    assert q_deformed(7.0)(0) == 1.0  # defined as the q -> 1 limit value


def test_penson_parameter_range():
    penson_solomon(1.0)
    penson_solomon(1e-6)
    for bad in (0.0, -0.3, 1.0001, 2.0):
        with pytest.raises(ParameterRangeError):
            penson_solomon(bad)


def test_qdeformed_parameter_range():
    q_deformed(0.2)
    q_deformed(7.0)
    for bad in (0.0, -1.0, 1.0):
        with pytest.raises(ParameterRangeError):
            q_deformed(bad)


def test_negative_occupation_rejected():
    with pytest.raises(PreconditionError):
        unity()(-1)


def test_qdeformed_limit_to_unity():
    f = q_deformed(1.0 + 1e-6)
    assert all(abs(f(n) - 1.0) <= 1e-4 for n in range(31))


def test_penson_p1_is_unity():
    f = penson_solomon(1.0)
    assert all(f(n) == 1.0 for n in range(50))


@pytest.mark.parametrize("f", ALL_CATALOG)
def test_strictly_positive_for_positive_n(f):
    assert all(f(n) > 0.0 for n in range(1, 40))


def test_parse_examples():
    assert parse_spec("ps:0.5").kind == "penson_solomon"
    assert parse_spec("ps:0.5").params["p"] == 0.5
    assert parse_spec("unity").kind == "unity"
    assert parse_spec("qdef:7").params["qq"] == 7.0
    assert parse_spec("sqrt").kind == "intensity_sqrt"
    assert parse_spec(" unity ").kind == "unity"


def test_parse_malformed_names_token():
    with pytest.raises(SpecParseError) as err:
        parse_spec("gauss:2")
    assert "gauss:2" in str(err.value)
    with pytest.raises(SpecParseError) as err:
        parse_spec("ps:zero")
    assert "zero" in str(err.value)


def test_parse_out_of_range_parameter():
    with pytest.raises(ParameterRangeError):
        parse_spec("ps:1.5")
    with pytest.raises(ParameterRangeError):
        parse_spec("qdef:1")


@pytest.mark.parametrize("f", ALL_CATALOG)
def test_label_round_trips(f):
    again = parse_spec(f.label())
    assert again.kind == f.kind
    assert dict(again.params) == dict(f.params)
