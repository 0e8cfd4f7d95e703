"""Recovery rates of the locally relevant features by each method."""
import logging
import pathlib
import typing
from enum import auto

import numpy as np
import pandas as pd

from .._baselines import (
    ImportanceScores, Method, default_horizon, gradient_importance,
    select_top_m, simple_escape
)
from .._closeness import from_decision_boundary
from .._engine import ExplainerConfig, fit, standardize
from .._immutable import ImmutableDict
from .._tools import AutoNameEnum, dumps_json, rng
from ..errors import DegenerateModelError, EmptyRegionError, ParameterError
from ..models import GatedModel, KnnRegressor, Predictor
from ._scenarios import (
    DIMENSION, SWITCH, BayesScenarioModel, Scenario, bayes_predict,
    generate_features, possibly_relevant, relevant_count, relevant_features
)

__all__ = [
    'ModelKind',
    'BOUNDARY',
    'fit_knn_model',
    'scenario_predictor',
    'RecoveryRow',
    'RecoveryResult',
    'run_recovery',
    'results_frame',
    'write_results_csv',
    'write_summary_json',
]

logger = logging.getLogger(__name__)

BOUNDARY = 0.5
MAX_RESAMPLES = 100


class ModelKind(AutoNameEnum):
    BAYES = auto()
    KNN = auto()


def fit_knn_model(scenario: Scenario, n_train: int = 1000, seed: int = 0,
                  k: int = 5, literal_xor: bool = False) -> Predictor:
    """
    Knn regressor on bernoulli responses of the scenario, looking only at
    the features relevant where the prediction is made.

    The switch scenario gets one regressor per side of the switch, each
    reading the active block and the switch.
    """
    scenario = Scenario(scenario)
    if n_train < k:
        raise ParameterError(f'n_train must be at least k = {k}')
    generator = rng(seed, str(scenario), 'train')
    points = generate_features(n_train, generator)
    means = bayes_predict(scenario, points, literal_xor)
    responses = (generator.random(n_train) < means).astype(float)
    if scenario is not Scenario.SWITCH:
        return Predictor(KnnRegressor(
            points, responses, k, possibly_relevant(scenario)
        ))

    def side(sign):
        switch = np.zeros(DIMENSION)
        switch[SWITCH] = sign
        return KnnRegressor(
            points, responses, k, relevant_features(scenario, switch)
        )

    return Predictor(GatedModel(SWITCH, below=side(-1.0), above=side(1.0)))


def scenario_predictor(scenario: Scenario, model: ModelKind,
                       seed: int = 0, n_train: int = 1000, k: int = 5,
                       literal_xor: bool = False) -> Predictor:
    if ModelKind(model) is ModelKind.KNN:
        return fit_knn_model(scenario, n_train, seed, k, literal_xor)
    return Predictor(BayesScenarioModel(scenario, literal_xor))


class RecoveryRow(ImmutableDict):
    """
    Outcome of one target.

    :param failure: Name of the error preventing any score, the recall is
        zero then.
    """
    def __init__(self,
                 scenario: Scenario,
                 model: ModelKind,
                 method: Method,
                 target_id: int,
                 recall: float,
                 selected: typing.Tuple[int, ...],
                 relevant: typing.Tuple[int, ...],
                 resampled: int = 0,
                 failure: str = None):
        super().__init__(
            scenario=scenario,
            model=model,
            method=method,
            target_id=target_id,
            recall=recall,
            selected=tuple(selected),
            relevant=tuple(relevant),
            resampled=resampled,
            failure=failure,
        )


class RecoveryResult(ImmutableDict):
    def __init__(self, scenario: Scenario, model: ModelKind, method: Method,
                 rows: typing.Tuple[RecoveryRow, ...]):
        super().__init__(
            scenario=scenario, model=model, method=method, rows=tuple(rows)
        )

    @property
    def recalls(self) -> np.ndarray:
        return np.array([row.recall for row in self.rows])

    @property
    def mean_recall(self) -> float:
        return float(self.recalls.mean())

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row.failure)

    @property
    def resampled(self) -> int:
        return sum(row.resampled for row in self.rows)

    def summary(self) -> dict:
        return {
            'scenario': str(self.scenario),
            'model': str(self.model),
            'method': str(self.method),
            'n_targets': len(self.rows),
            'mean_recall': self.mean_recall,
            'failures': self.failures,
            'resampled': self.resampled,
        }


def _draw_target(predictor, scenario, seed, target_id):
    """A target whose prediction is not on the decision boundary."""
    for attempt in range(MAX_RESAMPLES):
        target = generate_features(
            1, rng(seed, str(scenario), 'target', target_id, attempt)
        )[0]
        if predictor.predict(target) != BOUNDARY:
            return target, attempt
    raise ParameterError(  # pragma: no cover
        f'Every draw of target {target_id} lies on the boundary'
    )


def _scores(method, target, predictor, context, config, scenario,
            relevant, target_id):
    if method is Method.ORACLE:
        return ImportanceScores.from_relevant(target.size, relevant)
    if method is Method.POLYTOPE:
        explanation = fit(target, predictor, context, config)
        return ImportanceScores.from_escape(explanation.escape)

    z, z0, scales = standardize(context, target, config.std_convention)
    if method is Method.GRADIENT:
        return gradient_importance(
            target, predictor, config.gradient_params, scales,
            key=(str(scenario), target_id),
        )
    spec = from_decision_boundary(
        predictor.scaled(scales).predict(z0), BOUNDARY
    )
    report = simple_escape(
        target, predictor, spec, scales, default_horizon(z),
        config.iterations, config.seed,
    )
    return ImportanceScores.from_escape(report, Method.SIMPLE_ESCAPE)


def run_recovery(scenario: Scenario,
                 model: ModelKind = ModelKind.BAYES,
                 method: Method = Method.POLYTOPE,
                 n_targets: int = 200,
                 seed: int = 0,
                 config: ExplainerConfig = None,
                 n_context: int = 1000,
                 n_train: int = 1000,
                 knn_neighbors: int = 5,
                 literal_xor: bool = False,
                 literal_switch: bool = False,
                 predictor: Predictor = None) -> RecoveryResult:
    """
    Select the top features of random targets and measure the share of the
    locally relevant features found.

    Targets, context sets and models only depend on ``seed``, the
    scenario and the target number, every method sees the same ones.
    Closeness is the side of the ``0.5`` decision boundary of the target.

    :param config: Explanation parameters, its closeness is replaced.
    :param predictor: Use this model instead of building one.
    """
    scenario = Scenario(scenario)
    model = ModelKind(model)
    method = Method(method)
    if n_targets < 1:
        raise ParameterError('At least one target is needed')
    config = (config or ExplainerConfig(boundary=BOUNDARY, seed=seed)).replace(
        eps_lo=None, eps_hi=None, boundary=BOUNDARY
    )
    if predictor is None:
        predictor = scenario_predictor(
            scenario, model, seed, n_train, knn_neighbors, literal_xor
        )
    m = relevant_count(scenario)

    rows = []
    for target_id in range(n_targets):
        target, resampled = _draw_target(
            predictor, scenario, seed, target_id
        )
        context = generate_features(
            n_context, rng(seed, str(scenario), 'context', target_id)
        )
        relevant = relevant_features(scenario, target, literal_switch)
        failure = None
        try:
            scores = _scores(
                method, target, predictor, context, config, scenario,
                relevant, target_id,
            )
            selected = select_top_m(
                scores, m, seed, key=(str(scenario), target_id)
            )
        except (EmptyRegionError, DegenerateModelError) as err:
            logger.info('Target %d has no scores: %s', target_id, err)
            failure = err.__class__.__name__
            selected = ()
        recall = len(set(selected) & set(relevant)) / m
        rows.append(RecoveryRow(
            scenario, model, method, target_id, recall, selected, relevant,
            resampled, failure,
        ))

    result = RecoveryResult(scenario, model, method, rows)
    logger.info(
        '%s %s %s: mean recall %.3f over %d targets',
        scenario, model, method, result.mean_recall, n_targets
    )
    return result


def results_frame(results: typing.Iterable[RecoveryResult]) -> pd.DataFrame:
    records = [
        {
            'scenario': str(row.scenario),
            'model': str(row.model),
            'method': str(row.method),
            'target_id': row.target_id,
            'recall': row.recall,
            'selected': ' '.join(str(j) for j in row.selected),
            'relevant': ' '.join(str(j) for j in row.relevant),
            'resampled': row.resampled,
            'failure': row.failure or '',
        }
        for result in results for row in result.rows
    ]
    return pd.DataFrame.from_records(records, columns=[
        'scenario', 'model', 'method', 'target_id', 'recall', 'selected',
        'relevant', 'resampled', 'failure',
    ])


def write_results_csv(results: typing.Iterable[RecoveryResult], path):
    results_frame(results).to_csv(path, index=False)


def write_summary_json(results: typing.Iterable[RecoveryResult], path):
    pathlib.Path(path).write_text(
        dumps_json({'cells': [result.summary() for result in results]}),
        encoding='utf-8',
    )
