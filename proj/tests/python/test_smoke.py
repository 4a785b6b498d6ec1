import json
import math
import pathlib

import pytest

import specurve

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "crime.csv"


def small_config(controls):
    c = specurve.RunConfig()
    c.y_cols = ["y"]
    c.x_cols = ["x1"]
    c.z_cols = [f"z{i + 1}" for i in range(controls)]
    c.draws = 20
    c.kfold = 3
    c.seed = 4
    return c


def test_synthetic_run():
    data = specurve.synthetic(n_rows=80, n_controls=3, seed=2)
    assert sorted(data) == ["x1", "y", "z1", "z2", "z3"]
    res = specurve.run(small_config(3), data)
    assert res.n_specs == 8
    assert len(res.estimates) == 8
    assert res.draws.shape == (8, 20)
    assert math.isclose(sum(res.bma_weights), 1.0, abs_tol=1e-12)
    phi, features, names = res.shap
    assert phi.shape == features.shape
    assert names == ["x1", "z1", "z2", "z3"]
    assert "Number of specifications: 8" in res.summary()
    assert json.loads(res.to_json())["version"] == 1


def test_crime_deterministic_block():
    c = specurve.RunConfig()
    c.data_path = str(DATA)
    c.y_cols = ["R"]
    c.x_cols = ["Inequality"]
    c.z_cols = ["Wealth", "Age", "Ed", "N", "Males", "Expenditure", "Unemployment"]
    c.draws = 20
    c.kfold = 5
    res = specurve.run(c)
    assert res.n_specs == 128
    assert abs(res.stouffer.z - 28.2052) < 0.01
    est = sorted(res.estimates)
    assert abs((est[63] + est[64]) / 2 - 0.6976) < 1e-3


def test_round_trip(tmp_path):
    res = specurve.run(small_config(2), specurve.synthetic(n_controls=2, seed=5))
    res.export(tmp_path)
    back = specurve.load_results(tmp_path / "results.json")
    assert back.summary() == res.summary()
    files = res.charts(tmp_path / "charts")
    assert "panel_f.svg" in files


def test_errors():
    c = small_config(2)
    c.kfold = 1
    with pytest.raises(specurve.ConfigError):
        specurve.run(c, specurve.synthetic(n_controls=2))
    with pytest.raises(ValueError):
        c.oos_metric = "nope"
    with pytest.raises(specurve.DataError):
        c = small_config(0)
        c.data_path = "/nonexistent.csv"
        specurve.run(c)


def test_stouffer():
    r = specurve.stouffer([0.5, 0.5, 0.5])
    assert abs(r.z) < 1e-12
    assert abs(r.p - 0.5) < 1e-12
