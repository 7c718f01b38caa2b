import json

import numpy as np
import pytest

import volcap


def identity_frame():
    return volcap.MatrixFunction.constant(np.eye(2))


def test_matrix_function_basics():
    f = volcap.MatrixFunction.polynomial([np.zeros((2, 2)), np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    np.testing.assert_allclose(f(0.5), np.diag([0.5, 0.25]))
    np.testing.assert_allclose(f.derivative()(1.0), np.diag([1.0, 2.0]))
    np.testing.assert_allclose(f.integrate(), np.diag([0.5, 1.0 / 3.0]))
    back = volcap.MatrixFunction.from_json(f.to_json())
    assert back.to_json() == f.to_json()
    with pytest.raises(volcap.VolcapError):
        f(1.5)


def test_projection_records_residual():
    f = volcap.MatrixFunction.project(1, 1, lambda t: np.array([[np.sqrt(t)]]), degree=8)
    assert f.projection_residual > 0
    assert abs(f.integrate()[0, 0] - 2.0 / 3.0) < 1e-2


def test_predicted_and_fitted_capacity_agree():
    Z = identity_frame()
    pred = volcap.predict_capacity(Z)
    assert pred.order == 1 and pred.value == pytest.approx(1.0)
    fit = volcap.fit_capacity(volcap.galerkin_spectrum(Z, N=128))
    assert fit.order == 1
    assert fit.plus.value == pytest.approx(1.0, rel=0.03)
    assert fit.minus.value == pytest.approx(1.0, rel=0.03)
    assert json.loads(pred.to_json())["order"] == 1


def test_skew_factorization_bound():
    f = volcap.skew_factorize(identity_frame(), N=32)
    assert f.rank == 2
    assert f.skew_eigs[0] == pytest.approx(0.5)
    assert f.capacity_bound == pytest.approx(1.0)


def test_model_spectrum_and_merge():
    s = volcap.exact_spectrum(mu=1.0, k=1, count=4)
    assert s.at(1) == pytest.approx(1 / (2 * np.pi) ** 2)
    merged = volcap.merge_direct_sum([s, s], 8)
    assert len(merged.positive) == 8


def test_control_helpers():
    Z = volcap.MatrixFunction.polynomial([np.array([[0.0], [1.0]]), np.array([[1.0], [0.0]])])
    assert volcap.goh_check(Z).passed
    assert not volcap.glc_check(Z).passed
    B, Omega = volcap.realize_lq(Z)
    assert volcap.gauge_equivalent(volcap.vstack(Omega, B), Z)
    H = volcap.MatrixFunction.constant(-np.eye(2))
    assert volcap.hessian_bound(identity_frame(), H) == pytest.approx(1.0)
    np.testing.assert_allclose(volcap.gram(Z), [[1.0]])


def test_cli_run(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"analyses": ["model"], "model": {"mu": 1.0, "k": 1, "count": 5}}))
    code, _ = volcap.run(str(spec), str(tmp_path / "out"))
    assert code == 0
    assert (tmp_path / "out" / "model.csv").exists()
