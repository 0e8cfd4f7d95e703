"""
Importance scores of the comparison methods and the top features
selection shared by every method.
"""
import logging
import typing
from enum import auto

import numpy as np

from ._closeness import ClosenessSpec
from ._gradient import GradientParams, estimate_grad
from ._immutable import ImmutableDict, freeze
from ._polytope import EscapeReport, InfiniteReason
from ._search import scan_first_exit
from ._tools import AutoNameEnum, rng
from .errors import ParameterError, PreconditionError

__all__ = [
    'Method',
    'ImportanceScores',
    'default_horizon',
    'simple_escape',
    'gradient_importance',
    'select_top_m',
]

logger = logging.getLogger(__name__)

SCAN_START = 1e-3


class Method(AutoNameEnum):
    POLYTOPE = auto()
    SIMPLE_ESCAPE = auto()
    GRADIENT = auto()
    ORACLE = auto()


class ImportanceScores(ImmutableDict):
    """
    Per feature scores of a method.

    :param method: The method producing the scores.
    :param values: Escape magnitudes, smaller is more important, or
        gradient magnitudes, larger is more important.
    :param important: Which features have any importance at all.
    :param ascending: Whether smaller values are more important.
    """
    def __init__(self, method: Method, values, important,
                 ascending: bool):
        super().__init__(
            method=method,
            values=freeze(values),
            important=tuple(bool(x) for x in important),
            ascending=bool(ascending),
        )

    @classmethod
    def from_escape(cls, report: EscapeReport,
                    method: Method = Method.POLYTOPE) -> 'ImportanceScores':
        magnitude = report.magnitude
        return cls(method, magnitude, np.isfinite(magnitude), True)

    @classmethod
    def from_gradient(cls, gradient) -> 'ImportanceScores':
        values = np.abs(np.asarray(gradient, dtype=float))
        return cls(Method.GRADIENT, values, values != 0, False)

    @classmethod
    def from_relevant(cls, dimension: int,
                      relevant: typing.Iterable[int]) -> 'ImportanceScores':
        values = np.zeros(dimension)
        values[list(relevant)] = 1.0
        return cls(Method.ORACLE, values, values != 0, False)


def default_horizon(standardized_context) -> float:
    """Ten times the largest norm of a standardized context point."""
    norms = np.linalg.norm(np.atleast_2d(standardized_context), axis=1)
    return 10 * float(norms.max())


def simple_escape(x0,
                  predictor,
                  spec: ClosenessSpec,
                  scales,
                  horizon: float,
                  iterations: int = 50,
                  seed: int = 0) -> EscapeReport:
    """
    Escape distances measured against the close region itself, one line
    search per feature and direction.

    Steps are searched on the standardized scale up to ``horizon``,
    distances with no exit found before it are ``inf``.

    :param x0: The target, original scale.
    :param predictor: Query access to the model.
    :param spec: The close region.
    :param scales: Feature scales of the standardization.
    :param horizon: Largest standardized step searched.
    """
    scales = np.asarray(scales, dtype=float)
    scaled = predictor.scaled(scales)
    z0 = np.asarray(x0, dtype=float) / scales
    if not spec.contains(scaled.predict(z0)):
        raise PreconditionError('The target is not close to itself')
    if not horizon > 0:
        raise ParameterError('The search horizon must be positive')

    dimension = z0.size
    axes = np.eye(dimension)
    directions = np.concatenate([axes, -axes])
    bracket = scan_first_exit(
        lambda batch: spec.contains(scaled.predict_batch(batch)),
        z0, directions, horizon, SCAN_START, iterations,
    )
    exits = bracket.middle
    return EscapeReport(
        exits[:dimension], exits[dimension:], scales,
        seed=seed, horizon=horizon,
        default_reason=InfiniteReason.HORIZON_EXHAUSTED,
    )


def gradient_importance(x0, predictor, params: GradientParams = None,
                        scales=None, key=()) -> ImportanceScores:
    """
    Absolute finite difference gradient at the target, exact zeros have no
    importance. With ``scales`` the gradient is taken on the standardized
    scale, ``key`` names the jitter stream.
    """
    x0 = np.asarray(x0, dtype=float)
    if scales is not None:
        predictor = predictor.scaled(scales)
        x0 = x0 / np.asarray(scales, dtype=float)
    gradient = estimate_grad(x0, predictor, params, key=('target', *key))
    return ImportanceScores.from_gradient(gradient)


def select_top_m(scores: ImportanceScores, m: int, seed: int = 0,
                 key=()) -> typing.Tuple[int, ...]:
    """
    The ``m`` most important features, fewer when less than ``m`` features
    have any importance. Equal scores are ordered at random from ``seed``
    and ``key``.
    """
    dimension = scores.values.size
    if not 1 <= m <= dimension:
        raise ParameterError(f'm must be within 1 and {dimension}')
    values = scores.values if scores.ascending else -scores.values
    ties = rng(seed, 'ties', *key).random(dimension)
    order = np.lexsort((ties, values))
    selected = [int(j) for j in order if scores.important[j]][:m]
    return tuple(sorted(selected))
