"""Classifier training checked against closed forms and the reference QP."""

import numpy as np
import pytest

import reference_qp as ref
from blogextract import svm
from blogextract.errors import (
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    SingleClassInput,
    TooFewRows,
    UnknownSchema,
    UnknownVersion,
)
from blogextract.layout import Viewport


def test_two_point_closed_form():
    # Symmetric pair at +-1: the dual reduces to one variable with optimum
    # alpha = 1 / (1 - e^-4), bias exactly zero by symmetry.
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    config = svm.TrainConfig(
        c=10.0, gamma=1.0, kkt_tolerance=1e-8, class_weighting="none"
    )
    model = svm.train(X, y, config)
    want = 1.0 / (1.0 - np.exp(-4.0))
    assert np.allclose(np.abs(model.dual_coefs), want, atol=1e-6)
    assert np.allclose(np.sort(model.dual_coefs), [-want, want], atol=1e-6)
    assert abs(model.bias) < 1e-9
    assert model.decision_value([-1.0]) < -0.99
    assert model.decision_value([1.0]) > 0.99
    assert abs(model.decision_value([0.0])) < 1e-9  # symmetry point


def random_problem(rng, trial):
    n = int(rng.integers(6, 31))
    d = int(rng.integers(2, 9))
    X = rng.normal(size=(n, d)) * rng.uniform(0.5, 3.0, size=d)
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    y[0], y[1] = -1.0, 1.0  # force both classes
    c = float(rng.choice([0.5, 1.0, 5.0]))
    gamma = "auto" if trial % 2 else 0.3
    weighting = "balanced" if trial % 3 else "none"
    return X, y, c, gamma, weighting


def test_matches_reference_solver():
    # the full 50-dataset sweep runs in the acceptance suite; this is the
    # fast smoke version of the same cross-check
    rng = np.random.default_rng(77)
    for trial in range(8):
        X, y, c, gamma, weighting = random_problem(rng, trial)
        config = svm.TrainConfig(
            c=c, gamma=gamma, kkt_tolerance=1e-6,
            class_weighting=weighting, rng_seed=trial,
        )
        model = svm.train(X, y, config)
        sol = ref.reference_solve(
            X, y, c=c, gamma=gamma, class_weighting=weighting
        )
        assert abs(svm.dual_objective(model) - sol.objective) < 1e-6
        probes = rng.normal(size=(50, X.shape[1]))
        got = np.sign(model.decision_values(probes))
        want = np.sign(sol.decision_values(probes))
        assert np.array_equal(got, want)


def test_duplicate_rows_leave_the_optimum_unchanged():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(12, 3))
    y = np.where(rng.random(12) < 0.5, -1.0, 1.0)
    y[0], y[1] = -1.0, 1.0
    X_dup = np.vstack([X, X[2:6]])
    y_dup = np.concatenate([y, y[2:6]])
    config = svm.TrainConfig(c=2.0, gamma=0.5, kkt_tolerance=1e-6,
                             class_weighting="none")
    model = svm.train(X_dup, y_dup, config)
    assert len(model.support_vectors) <= 12
    sol = ref.reference_solve(
        X_dup, y_dup, c=2.0, gamma=0.5, class_weighting="none"
    )
    assert abs(svm.dual_objective(model) - sol.objective) < 1e-6
    probes = rng.normal(size=(50, 3))
    assert np.array_equal(
        np.sign(model.decision_values(probes)),
        np.sign(sol.decision_values(probes)),
    )


def test_class_boxes():
    y = np.array([1.0, -1.0, -1.0, -1.0])
    boxes = svm.class_boxes(y, 2.0, "balanced")
    assert np.allclose(boxes, [4.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0])
    # both classes get the same total capacity
    assert np.isclose(boxes[y > 0].sum(), boxes[y < 0].sum())
    assert np.allclose(svm.class_boxes(y, 2.0, "none"), 2.0)


def test_resolve_gamma():
    assert svm.resolve_gamma(0.5, np.zeros((3, 4))) == 0.5
    Xs = np.array([[1.0, 0.0], [-1.0, 0.0]])  # col vars 1 and 0
    assert svm.resolve_gamma("auto", Xs) == 1.0 / (2 * 0.5)
    assert svm.resolve_gamma("auto", np.ones((5, 4))) == 0.25  # 1/d fallback


def test_standardizer_basics():
    rng = np.random.default_rng(0)
    X = rng.normal(loc=5.0, scale=3.0, size=(40, 3))
    X[:, 2] = 7.0  # constant column
    std = svm.fit_standardizer(X)
    assert std.width == 3
    assert std.constant.tolist() == [False, False, True]
    Z = std.transform(X)
    assert np.abs(Z[:, :2].mean(axis=0)).max() < 1e-12
    assert np.abs(Z[:, :2].var(axis=0) - 1.0).max() < 1e-12
    assert np.all(Z[:, 2] == 0.0)
    with pytest.raises(TooFewRows):
        svm.fit_standardizer(X[:1])
    with pytest.raises(DimensionMismatch):
        std.transform(np.zeros((2, 4)))


def test_rbf_kernel_forms():
    a = np.array([1.0, 2.0])
    b = np.array([2.0, 4.0])
    assert svm.rbf_kernel(a, a, 0.7) == 1.0
    assert np.isclose(svm.rbf_kernel(a, b, 0.1), np.exp(-0.1 * 5.0))
    A = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
    K = svm.rbf_kernel(A, A, 0.3)
    assert K.shape == (3, 3)
    assert np.allclose(K, K.T) and np.allclose(np.diag(K), 1.0)
    # agrees with the independently written kernel
    assert np.allclose(K, ref.rbf_matrix(A, A, 0.3), atol=1e-15)
    with pytest.raises(DimensionMismatch):
        svm.rbf_kernel(np.zeros((2, 3)), np.zeros((2, 4)), 1.0)


def test_train_input_validation():
    X = np.array([[0.0], [1.0], [2.0]])
    with pytest.raises(ValueError):
        svm.train(X, [1.0, 2.0, 1.0])  # labels outside -1/+1
    with pytest.raises(SingleClassInput):
        svm.train(X, [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        svm.train(X, [1.0, -1.0])  # length mismatch
    with pytest.raises(ValueError):
        svm.train(np.array([[np.nan], [1.0]]), [1.0, -1.0])
    with pytest.raises(ValueError):
        svm.train(np.array([1.0, 2.0]), [1.0, -1.0])  # 1-D features
    with pytest.raises(DegenerateData):
        svm.train(np.ones((4, 2)), [1.0, -1.0, 1.0, -1.0])


def test_train_config_validation():
    for kwargs in (
        dict(c=0.0),
        dict(gamma=-1.0),
        dict(gamma="scale"),
        dict(kkt_tolerance=0.0),
        dict(max_passes=0),
        dict(class_weighting="heavy"),
    ):
        with pytest.raises(ValueError):
            svm.TrainConfig(**kwargs)


def trained_model(seed=0, schema_id="title_v1"):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(20, 4))
    y = np.where(X[:, 0] + 0.3 * rng.normal(size=20) > 0, 1.0, -1.0)
    y[0], y[1] = 1.0, -1.0
    return svm.train(
        X, y, svm.TrainConfig(rng_seed=seed), schema_id=schema_id,
        viewport=Viewport(1280, 1024),
    ), X


def test_save_load_byte_round_trip():
    model, X = trained_model()
    blob = svm.save_model(model)
    loaded = svm.load_model(blob)
    assert svm.save_model(loaded) == blob
    assert np.array_equal(
        loaded.decision_values(X), model.decision_values(X)
    )
    assert loaded.schema_id == model.schema_id
    assert loaded.viewport == model.viewport
    assert loaded.gamma == model.gamma  # hex floats are exact


def test_training_is_deterministic():
    a, _ = trained_model(seed=5)
    b, _ = trained_model(seed=5)
    assert svm.save_model(a) == svm.save_model(b)


def test_load_rejects_malformed_models():
    model, _ = trained_model()
    blob = svm.save_model(model)

    def tampered(**changes):
        import json
        doc = json.loads(blob)
        doc.update(changes)
        return json.dumps(doc).encode()

    with pytest.raises(CorruptModel):
        svm.load_model(b"{not json")
    with pytest.raises(CorruptModel):
        svm.load_model(b'{"format": "other"}')
    with pytest.raises(UnknownVersion):
        svm.load_model(tampered(version=99))
    with pytest.raises(UnknownSchema):
        svm.load_model(tampered(schema_id="title_v9"))
    with pytest.raises(CorruptModel):
        svm.load_model(tampered(bias="zz"))  # not a hex float
    with pytest.raises(CorruptModel):
        svm.load_model(tampered(bias=0.5))  # hex floats are strings
    with pytest.raises(CorruptModel):
        svm.load_model(tampered(dual_coefs=[]))  # count mismatch
    with pytest.raises(CorruptModel):
        svm.load_model(tampered(c=(-1.0).hex()))
    missing = tampered()
    import json as _json
    doc = _json.loads(missing)
    del doc["standardizer"]
    with pytest.raises(CorruptModel):
        svm.load_model(_json.dumps(doc).encode())


def test_decision_values_shapes():
    model, X = trained_model()
    one = model.decision_values(X[0])
    assert one.shape == (1,)
    assert one[0] == model.decision_value(X[0])
    many = model.decision_values(X)
    assert many.shape == (len(X),)
    with pytest.raises(DimensionMismatch):
        model.decision_values(np.zeros((2, 7)))


def test_dual_objective_matches_reference_formula():
    model, X = trained_model()
    K = ref.rbf_matrix(model.support_vectors, model.support_vectors, model.gamma)
    d = model.dual_coefs
    want = np.abs(d).sum() - 0.5 * (d @ K @ d)
    assert np.isclose(svm.dual_objective(model), want, atol=1e-12)
