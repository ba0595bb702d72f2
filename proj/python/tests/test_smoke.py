from pathlib import Path

import numpy as np
import pytest

import duet

FIXTURE = Path(__file__).resolve().parents[2] / "data" / "fixture" / "manifest.txt"


def test_all_ones_two_by_two():
    model = duet.fit(np.ones((2, 2)), lambda1=1.0, method="ease_item")
    np.testing.assert_allclose(model.item_weights, [[0, 2 / 3], [2 / 3, 0]], atol=1e-15)
    assert model.user_weights is None


def test_identity_with_item_side():
    model = duet.fit(np.eye(2), item_sides=[np.array([[1.0, 1.0]])], lambda1=1.0,
                     betas=[1.0], method="duet")
    np.testing.assert_allclose(model.item_weights, [[0, 1 / 3], [1 / 3, 0]], atol=1e-15)


def test_duet_matches_numpy_closed_form():
    rng = np.random.default_rng(0)
    x = (rng.random((12, 9)) < 0.3).astype(float)
    s = (rng.random((5, 9)) < 0.5).astype(float)
    beta, lam = 0.7, 2.0
    p = np.linalg.inv(x.T @ x + beta * s.T @ s + lam * np.eye(9))
    expected = np.eye(9) - p / np.diag(p)
    model = duet.fit(x, item_sides=[s], user_sides=[], lambda1=lam, betas=[beta], gammas=[])
    np.testing.assert_allclose(model.item_weights, expected, atol=1e-12)
    assert np.abs(np.diag(model.item_weights)).max() <= 1e-10
    assert duet.stationarity_residual(x, model.item_weights, [s], lam, [beta]) <= 1e-8
    scores = duet.predict(x, model)
    np.testing.assert_allclose(scores, 0.5 * model.user_weights @ x + 0.5 * x @ model.item_weights,
                               atol=1e-12)


def test_metrics():
    assert duet.aupr([0.9, 0.8, 0.7, 0.1], [1, 0, 1, 0]) == pytest.approx(5 / 6)
    assert duet.ndcg_at_k([0.9, 0.8], [0, 1], 2) == pytest.approx(0.6309297535714575)
    assert duet.precision_at_k([0.9, 0.5, 0.1], [1, 0, 1], 2) == 0.5
    r = duet.welch_t_test([0.1, 0.2, 0.3], [0.4, 0.5, 0.6])
    assert r["p"] == pytest.approx(0.021311641128756727, abs=1e-9)


def test_errors_are_translated():
    with pytest.raises(duet.DuetError, match="UndefinedMetric"):
        duet.aupr([0.1, 0.2], [1, 1])
    with pytest.raises(ValueError):
        duet.fit(np.full((2, 2), 0.5))


def test_dataset_cv_and_model_roundtrip(tmp_path):
    d = duet.load_dataset(FIXTURE)
    assert d["x"].shape == (40, 30)
    folds = duet.cross_validate(d["x"], d["item_sides"], d["user_sides"], lambda1=10.0, rounds=1)
    assert len(folds) == 5
    assert all(0.0 <= f["aupr"] <= 1.0 for f in folds)
    model = duet.fit(d["x"], d["item_sides"], d["user_sides"], lambda1=10.0)
    duet.save_model(model, tmp_path / "m.duet")
    back = duet.load_model(tmp_path / "m.duet")
    assert np.array_equal(back.item_weights, model.item_weights)
    assert np.array_equal(back.user_weights, model.user_weights)
    assert back.fingerprint == model.fingerprint


def test_jaccard():
    sim = duet.jaccard_similarity(np.array([[1, 1, 0], [0, 1, 1], [0, 0, 0]], dtype=float))
    np.testing.assert_allclose(sim, [[1, 1 / 3, 0], [1 / 3, 1, 0], [0, 0, 0]])
