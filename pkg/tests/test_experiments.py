import json
import math

import numpy as np
import pandas as pd
import pytest

from escapade import ExplainerConfig, Method
from escapade.errors import InputError, ModelDescriptionError, ParameterError
from escapade.experiments import (
    DIMENSION, BayesScenarioModel, ModelKind, Scenario, bayes_predict,
    fit_knn_model, generate_features, relevant_features, results_frame,
    run_recovery, switch_weight, write_results_csv, write_summary_json
)


def point(**values):
    x = np.zeros(DIMENSION)
    for key, value in values.items():
        x[int(key[1:])] = value
    return x


def test_orange_skin_origin():
    value = bayes_predict(Scenario.ORANGE_SKIN, point())

    assert value.tolist() == pytest.approx([0.98201379])


def test_xor():
    values = bayes_predict(Scenario.XOR, [point(), point(x0=1, x1=1)])

    assert values.tolist() == pytest.approx([0.5, 1 / (1 + math.e)])


def test_literal_xor():
    values = bayes_predict(
        Scenario.XOR, [point(x0=1, x1=1), point(x0=2, x1=0.5)],
        literal_xor=True,
    )

    assert values.tolist() == pytest.approx([0.5, 0.5])


def test_switch_weight():
    assert switch_weight(0.0) == pytest.approx(0.5)
    assert switch_weight(1.0) == pytest.approx(1 / (1 + math.exp(-6)))


def test_switch_follows_mixture():
    positive = point(x0=0.5, x9=5.0)
    negative = point(x0=0.5, x9=-5.0)

    assert bayes_predict(Scenario.SWITCH, positive)[0] == pytest.approx(
        bayes_predict(Scenario.ORANGE_SKIN, positive)[0]
    )
    assert bayes_predict(Scenario.SWITCH, negative)[0] == pytest.approx(
        bayes_predict(
            Scenario.NONLINEAR_ADDITIVE, point(x0=0.0, x9=-5.0)
        )[0],
        abs=1e-6,
    )


def test_wrong_dimension():
    with pytest.raises(InputError):
        bayes_predict(Scenario.XOR, np.zeros((2, 4)))


def test_relevant_features():
    positive = point(x9=2.0)
    negative = point(x9=-2.0)

    assert relevant_features(Scenario.XOR, positive) == (0, 1)
    assert relevant_features(Scenario.NONLINEAR_ADDITIVE, positive) == \
        (0, 1, 2, 3)
    assert relevant_features(Scenario.SWITCH, positive) == (0, 1, 2, 3, 9)
    assert relevant_features(Scenario.SWITCH, negative) == (4, 5, 6, 7, 9)
    assert relevant_features(
        Scenario.SWITCH, positive, literal_switch=True
    ) == (4, 5, 6, 7, 8)
    assert relevant_features(
        Scenario.SWITCH, negative, literal_switch=True
    ) == (0, 1, 2, 3, 8)


def test_generate_features():
    points = generate_features(4000, np.random.default_rng(1))

    assert points.shape == (4000, DIMENSION)
    assert np.abs(points[:, 9]).mean() == pytest.approx(3.0, abs=0.1)
    assert np.mean(points[:, 9] > 0) == pytest.approx(0.5, abs=0.05)
    assert points[:, :9].std() == pytest.approx(1.0, abs=0.05)


def test_bayes_model():
    model = BayesScenarioModel('switch')

    assert model.active_features == (0, 1, 2, 3, 4, 5, 6, 7, 9)
    assert model.describe() == {'scenario': 'switch', 'literal_xor': False}
    with pytest.raises(ModelDescriptionError):
        BayesScenarioModel('checkerboard')


def test_knn_model():
    predictor = fit_knn_model(Scenario.XOR, n_train=200, seed=3)

    assert predictor.dimension == DIMENSION
    assert predictor.active_features == (0, 1)
    values = predictor.predict_batch(generate_features(
        20, np.random.default_rng(0)
    ))
    assert np.all((values >= 0) & (values <= 1))

    with pytest.raises(ParameterError):
        fit_knn_model(Scenario.XOR, n_train=3, k=5)


def test_switch_knn_reads_the_active_block():
    predictor = fit_knn_model(Scenario.SWITCH, n_train=300, seed=1)
    points = generate_features(40, np.random.default_rng(2))

    assert predictor.active_features == (0, 1, 2, 3, 4, 5, 6, 7, 9)
    for inactive, positive in [((4, 5, 6, 7), True), ((0, 1, 2, 3), False)]:
        side = points[(points[:, 9] >= 0) == positive]
        moved = side.copy()
        moved[:, inactive] += 5.0
        assert np.array_equal(
            predictor.predict_batch(moved), predictor.predict_batch(side)
        )


def test_oracle_recovery():
    result = run_recovery(
        Scenario.SWITCH, method=Method.ORACLE, n_targets=6, n_context=50
    )

    assert result.mean_recall == 1.0
    assert result.failures == 0
    assert [row.target_id for row in result.rows] == list(range(6))
    assert all(len(row.selected) == 5 for row in result.rows)


def test_gradient_recovery():
    first = run_recovery(
        Scenario.XOR, method=Method.GRADIENT, n_targets=5, n_context=100,
        seed=4,
    )
    second = run_recovery(
        Scenario.XOR, method=Method.GRADIENT, n_targets=5, n_context=100,
        seed=4,
    )

    assert first.mean_recall == 1.0
    assert first.rows == second.rows


def test_invalid_targets():
    with pytest.raises(ParameterError):
        run_recovery(Scenario.XOR, method=Method.ORACLE, n_targets=0)


@pytest.mark.slow
def test_polytope_recovery():
    config = ExplainerConfig(boundary=0.5, max_splits=5, seed=2)

    result = run_recovery(
        Scenario.XOR, ModelKind.BAYES, Method.POLYTOPE, n_targets=3,
        n_context=200, seed=2, config=config,
    )

    assert len(result.rows) == 3
    for row in result.rows:
        assert row.relevant == (0, 1)
        assert row.recall in (0.0, 0.5, 1.0)
        if not row.failure:
            assert set(row.selected) <= {0, 1}


def test_results_files(tmp_path):
    results = [
        run_recovery(Scenario.XOR, method=Method.ORACLE, n_targets=3,
                     n_context=20),
        run_recovery(Scenario.ORANGE_SKIN, method=Method.ORACLE,
                     n_targets=2, n_context=20),
    ]

    frame = results_frame(results)
    assert frame.shape == (5, 9)
    assert frame['selected'].tolist()[:3] == ['0 1'] * 3
    assert frame['relevant'].tolist()[3:] == ['0 1 2 3'] * 2

    write_results_csv(results, tmp_path / 'results.csv')
    loaded = pd.read_csv(tmp_path / 'results.csv')
    assert loaded['recall'].tolist() == [1.0] * 5
    assert loaded['scenario'].tolist() == ['xor'] * 3 + ['orange-skin'] * 2

    write_summary_json(results, tmp_path / 'summary.json')
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['cells'][1] == {
        'scenario': 'orange-skin',
        'model': 'bayes',
        'method': 'oracle',
        'n_targets': 2,
        'mean_recall': 1.0,
        'failures': 0,
        'resampled': 0,
    }


RECALL_FLOORS = {
    (Scenario.XOR, ModelKind.BAYES): 0.99,
    (Scenario.ORANGE_SKIN, ModelKind.BAYES): 0.99,
    (Scenario.NONLINEAR_ADDITIVE, ModelKind.BAYES): 0.99,
    (Scenario.XOR, ModelKind.KNN): 0.95,
    (Scenario.ORANGE_SKIN, ModelKind.KNN): 0.95,
    (Scenario.NONLINEAR_ADDITIVE, ModelKind.KNN): 0.95,
}


@pytest.mark.slow
@pytest.mark.parametrize('model', list(ModelKind))
@pytest.mark.parametrize('scenario', list(Scenario))
def test_polytope_recall_leads(scenario, model):
    recalls = {
        method: run_recovery(
            scenario, model, method, n_targets=200, seed=0
        ).mean_recall
        for method in (Method.POLYTOPE, Method.GRADIENT, Method.SIMPLE_ESCAPE)
    }

    polytope = recalls[Method.POLYTOPE]
    assert polytope >= RECALL_FLOORS.get((scenario, model), 0.0)
    assert polytope >= recalls[Method.GRADIENT]
    assert polytope >= recalls[Method.SIMPLE_ESCAPE]
