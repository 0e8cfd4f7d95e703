import numpy as np
import pytest

from escapade.errors import InputError, ModelDescriptionError, PredictionError
from escapade.models import (
    BilinearModel, CallableModel, DecisionTreeModel, GatedModel,
    KnnRegressor, LinearModel, Predictor, QuadraticLogisticModel
)


def test_predict_batch_counts_queries(bilinear):
    values = bilinear.predict_batch([[1.0, 2.0], [3.0, -1.0], [0.0, 5.0]])

    assert values.tolist() == [2.0, -3.0, 0.0]
    assert bilinear.query_count == 3
    assert bilinear.predict([2.0, 2.0]) == 4.0
    assert bilinear.query_count == 4


def test_empty_batch(bilinear):
    assert bilinear.predict_batch([]).shape == (0,)
    assert bilinear.query_count == 0


@pytest.mark.parametrize('points', [
    [[1.0, 2.0, 3.0]],
    [[np.nan, 1.0]],
    [[[1.0, 2.0]]],
])
def test_invalid_points(bilinear, points):
    with pytest.raises(InputError):
        bilinear.predict_batch(points)


def test_non_finite_predictions():
    predictor = Predictor(CallableModel(
        lambda points: np.full(points.shape[0], np.inf), 2
    ))

    with pytest.raises(PredictionError):
        predictor.predict([0.0, 0.0])


def test_wrong_prediction_count():
    predictor = Predictor(CallableModel(lambda points: np.zeros(1), 2))

    with pytest.raises(PredictionError):
        predictor.predict_batch(np.zeros((3, 2)))


def test_cache_counts_every_query():
    calls = []

    def func(points):
        calls.append(points.shape[0])
        return points.sum(axis=1)

    predictor = Predictor(CallableModel(func, 2), cache=True)
    first = predictor.predict_batch([[1.0, 2.0], [3.0, 4.0]])
    second = predictor.predict_batch([[3.0, 4.0], [5.0, 6.0]])

    assert first.tolist() == [3.0, 7.0]
    assert second.tolist() == [7.0, 11.0]
    assert calls == [2, 1]
    assert predictor.query_count == 4
    assert predictor.cache_hits == 1


def test_scaled_predictor(bilinear):
    scaled = bilinear.scaled([2.0, 3.0])

    assert scaled.predict([1.0, 1.0]) == 6.0
    assert scaled.query_count == 1
    assert scaled.dimension == 2


def test_linear_model_active_features():
    model = LinearModel([0.0, 2.0, 0.0, -1.0], intercept=1.0)

    assert model.active_features == (1, 3)
    values = model.evaluate(np.array([[5.0, 1.0, 7.0, 1.0]]))
    assert values.tolist() == [2.0]


def test_inactive_features_never_change_predictions():
    generator = np.random.default_rng(3)
    points = generator.standard_normal((50, 4))
    moved = points.copy()
    moved[:, 2] += generator.standard_normal(50) * 1e3
    model = QuadraticLogisticModel(
        0.5, [1.0, -2.0, 0.0, 0.5],
        quadratic=[[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]],
    )

    assert 2 not in model.active_features
    assert np.array_equal(model.evaluate(points), model.evaluate(moved))


def test_decision_tree():
    model = DecisionTreeModel(2, [
        {'feature': 0, 'threshold': 0.5, 'left': 1, 'right': 2},
        {'value': -1.0},
        {'feature': 1, 'threshold': 0.0, 'left': 3, 'right': 4},
        {'value': 2.0},
        {'value': 3.0},
    ])

    values = model.evaluate(np.array([
        [0.0, 9.0], [0.5, 9.0], [1.0, -1.0], [1.0, 1.0],
    ]))
    assert values.tolist() == [-1.0, -1.0, 2.0, 3.0]
    assert model.active_features == (0, 1)


@pytest.mark.parametrize('nodes', [
    [],
    [{'feature': 0, 'threshold': 0.0, 'left': 0, 'right': 1},
     {'value': 1.0}],
    [{'feature': 0, 'threshold': 0.0, 'left': 1, 'right': 1},
     {'value': 1.0}],
    [{'feature': 0, 'threshold': 0.0, 'left': 1}, {'value': 1.0}],
    [{'feature': 3, 'threshold': 0.0, 'left': 1, 'right': 2},
     {'value': 1.0}, {'value': 0.0}],
])
def test_invalid_tree(nodes):
    with pytest.raises(ModelDescriptionError):
        DecisionTreeModel(2, nodes)


def test_knn_regressor():
    model = KnnRegressor(
        [[0.0, 0.0], [1.0, 100.0], [10.0, 0.0]], [1.0, 3.0, 5.0],
        k=2, active_features=[0],
    )

    assert model.evaluate(np.array([[0.2, 50.0]])).tolist() == [2.0]
    assert model.evaluate(np.array([[9.0, 0.0]])).tolist() == [4.0]


def test_knn_invalid_k():
    with pytest.raises(ModelDescriptionError):
        KnnRegressor([[0.0]], [1.0], k=2)


def test_gated_model():
    model = GatedModel(
        2, below=LinearModel([1.0, 0.0, 0.0]),
        above=LinearModel([0.0, 10.0, 0.0]), threshold=1.0,
    )
    points = np.array([[1.0, 2.0, 0.0], [1.0, 2.0, 1.0], [3.0, 2.0, 5.0]])

    assert model.active_features == (0, 1, 2)
    assert model.evaluate(points).tolist() == [1.0, 20.0, 20.0]
    assert model.evaluate(points[:1]).tolist() == [1.0]


def test_gated_model_dimensions():
    with pytest.raises(ModelDescriptionError):
        GatedModel(0, below=BilinearModel(2), above=BilinearModel(3))
    with pytest.raises(ModelDescriptionError):
        GatedModel(4, below=BilinearModel(3), above=BilinearModel(3))


def test_bilinear_needs_two_features():
    with pytest.raises(ModelDescriptionError):
        BilinearModel(3, features=(0, 1, 2))


def test_context_manager_closes():
    closed = []

    class Closing(CallableModel):
        def close(self):
            closed.append(True)

    with Predictor(Closing(lambda p: p[:, 0], 1)) as predictor:
        predictor.predict([1.0])

    assert closed == [True]
