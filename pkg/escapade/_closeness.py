"""
Closeness of predictions to the target prediction and the shrinking of
far points onto the boundary of the close region.
"""
import math
import typing
from enum import Enum

import numpy as np

from ._immutable import ImmutableDict, freeze
from ._search import bisect_segments
from .errors import AmbiguousSideError, ParameterError, PreconditionError

__all__ = [
    'ClosenessSpec',
    'Side',
    'ShrunkenPoint',
    'is_eps_close',
    'from_decision_boundary',
    'line_search',
    'shrink_points',
]


def _epsilon(value, name):
    value = float(value)
    if math.isnan(value) or value < 0:
        raise ParameterError(f'{name} must be non negative, got {value}')
    return value


class ClosenessSpec(ImmutableDict):
    """
    Predictions in ``[f0 - eps_lo, f0 + eps_hi]`` are close to the target
    prediction ``f0``.
    """
    def __init__(self, f0: float, eps_lo: float, eps_hi: float):
        f0 = float(f0)
        if not math.isfinite(f0):
            raise ParameterError('The target prediction must be finite')
        eps_lo = _epsilon(eps_lo, 'eps_lo')
        eps_hi = _epsilon(eps_hi, 'eps_hi')
        if math.isinf(eps_lo) and math.isinf(eps_hi):
            raise ParameterError('At most one side can be unbounded')
        super().__init__(f0=f0, eps_lo=eps_lo, eps_hi=eps_hi)

    @property
    def lower(self) -> float:
        return self.f0 - self.eps_lo

    @property
    def upper(self) -> float:
        return self.f0 + self.eps_hi

    def contains(self, values) -> np.ndarray:
        """Closeness of every value of an array."""
        values = np.asarray(values, dtype=float)
        return (values >= self.lower) & (values <= self.upper)

    def side(self, value: float) -> 'Side':
        """Which bound a far prediction exceeds."""
        if value > self.upper:
            return Side.ABOVE
        if value < self.lower:
            return Side.BELOW
        raise PreconditionError(f'{value!r} is close to {self.f0!r}')


def is_eps_close(spec: ClosenessSpec, value: float) -> bool:
    if not math.isfinite(value):
        raise PreconditionError('Cannot compare a non finite prediction')
    return bool(spec.contains(value))


def from_decision_boundary(f0: float, boundary: float) -> ClosenessSpec:
    """Close means on the same side of ``boundary`` as ``f0``."""
    f0 = float(f0)
    boundary = float(boundary)
    if f0 < boundary:
        return ClosenessSpec(f0, math.inf, boundary - f0)
    if f0 > boundary:
        return ClosenessSpec(f0, f0 - boundary, math.inf)
    raise AmbiguousSideError(
        f'Prediction {f0!r} lies on the decision boundary'
    )


class Side(Enum):
    ABOVE = 'above'
    BELOW = 'below'


class ShrunkenPoint(ImmutableDict):
    """
    A far context point moved along its segment from the target to the
    boundary of the close region.

    ``location = x0 + t * (x - x0)``, the target side of the final bracket
    ``[t_low, t_high]`` is close, the other end is far.
    """
    def __init__(self,
                 original_index: int,
                 location: np.ndarray,
                 t: float,
                 t_low: float,
                 t_high: float,
                 distance_to_target: float,
                 side: Side):
        super().__init__(
            original_index=int(original_index),
            location=freeze(location),
            t=float(t),
            t_low=float(t_low),
            t_high=float(t_high),
            distance_to_target=float(distance_to_target),
            side=side,
        )


def shrink_points(points,
                  spec: ClosenessSpec,
                  predictor,
                  x0,
                  iterations: int,
                  far_values,
                  indices: typing.Sequence[int] = None,
                  on_step=None) -> typing.List[ShrunkenPoint]:
    """
    Shrink a batch of far points onto the boundary, ``iterations``
    predictions per point.

    :param points: ``(n, d)`` far points.
    :param spec: The close region.
    :param predictor: Evaluates the points.
    :param x0: The target, close by definition.
    :param iterations: Bisection steps.
    :param far_values: The predictions at ``points``, all far.
    :param indices: Identifiers of the points, their rows by default.
    :param on_step: Bisection hook, see
        :py:func:`~escapade._search.bisect_segments`.
    """
    if iterations < 1:
        raise ParameterError('The line search needs at least one iteration')
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x0 = np.asarray(x0, dtype=float)
    far_values = np.atleast_1d(np.asarray(far_values, dtype=float))
    if indices is None:
        indices = range(points.shape[0])
    if np.any(spec.contains(far_values)):
        raise PreconditionError('Only far points can be shrunk')

    sides = [spec.side(v) for v in far_values]
    directions = points - x0
    count = points.shape[0]

    bracket = bisect_segments(
        lambda batch: spec.contains(predictor.predict_batch(batch)),
        np.broadcast_to(x0, points.shape),
        directions,
        np.zeros(count),
        np.ones(count),
        iterations,
        on_step=on_step,
    )
    steps = (bracket.low + bracket.high) / 2

    shrunk = []
    for i, index in enumerate(indices):
        location = x0 + steps[i] * directions[i]
        shrunk.append(ShrunkenPoint(
            index, location, steps[i], bracket.low[i], bracket.high[i],
            np.linalg.norm(location - x0), sides[i],
        ))
    return shrunk


def line_search(x,
                spec: ClosenessSpec,
                predictor,
                x0,
                iterations: int = 50,
                far_value: float = None,
                on_step=None) -> ShrunkenPoint:
    """
    Shrink the far point ``x`` onto the boundary with ``iterations``
    bisection steps between the target and ``x``.

    ``far_value`` is the prediction at ``x``, it is queried when missing.
    """
    if far_value is None:
        far_value = predictor.predict(x)
    if is_eps_close(spec, far_value):
        raise PreconditionError('The point to shrink is already close')
    return shrink_points(
        [x], spec, predictor, x0, iterations, [far_value], on_step=on_step
    )[0]
