import json
import math
import os
import pathlib

import pytest

import posifract

SPECS = pathlib.Path(
    os.environ.get(
        "POSIFRACT_SPEC_DIR",
        pathlib.Path(__file__).resolve().parents[2] / "data" / "specs",
    )
)


def load(name):
    return json.loads((SPECS / f"{name}.json").read_text())


def test_worked_example_dyadic_values():
    r = posifract.fit(load("quadratic_two_pieces"))
    x, f = r["x"], r["fstar"]
    assert len(x) == len(f) == 2049
    assert f[512] == pytest.approx(0.9375, abs=1e-9)
    assert f[1024] == pytest.approx(1.25, abs=1e-9)
    assert max(r["knot_errors"]) <= 1e-8
    assert r["validation"]["passed"]


def test_counterexample_raises_with_kind():
    with pytest.raises(posifract.PosifractError) as info:
        posifract.fit(load("positivity_counterexample"))
    assert info.value.kind == "validation"
    assert "q_nonnegative" in str(info.value)
    report = posifract.validate(load("positivity_counterexample"))
    assert not report["passed"]


def test_contraction_factor_and_config_errors():
    assert posifract.contraction_factor(load("quadratic_two_pieces")) == 0.5
    bad = load("quadratic_two_pieces")
    bad["unexpected"] = 1
    with pytest.raises(posifract.PosifractError) as info:
        posifract.fit(bad)
    assert info.value.kind == "configuration"


def test_attractor_within_bound():
    r = posifract.attractor(load("quadratic_two_pieces"), k=20)
    assert r["points"]
    assert r["hausdorff"] <= r["bound"]


def test_metric_values():
    n = 1025
    x = [k / (n - 1) for k in range(n)]
    assert posifract.metric(x, [t * t for t in x]) == pytest.approx(0.25)
    assert posifract.metric(x, [0.0] * n, p=1) == pytest.approx(0.5)
    assert posifract.metric(x, [0.0] * n, p=2) == pytest.approx(math.sqrt(1 / 3), abs=1e-6)
    with pytest.raises(posifract.PosifractError):
        posifract.metric([1.0, -1.0], [0.0, 0.0])


def test_verify_suite_and_names():
    assert posifract.suite_names() == [
        "metrics",
        "contraction",
        "sandwich",
        "semilinearity",
        "series",
    ]
    report = posifract.verify("metrics")
    assert report["passed"]
    with pytest.raises(posifract.PosifractError):
        posifract.verify("nonsense")
