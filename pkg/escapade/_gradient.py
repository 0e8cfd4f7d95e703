"""Central finite differences averaged over jittered points."""
import numpy as np

from ._immutable import ImmutableDict, freeze
from ._tools import rng
from .errors import ParameterError

__all__ = [
    'GradientParams',
    'estimate_grad',
    'difference_points',
]


class GradientParams(ImmutableDict):
    """
    :param delta: Finite difference step.
    :param jitter_radius: Standard deviation of the gaussian jitter.
    :param jitter_samples: Number of jittered points averaged.
    :param seed: Root seed of the jitter draws.
    """
    def __init__(self,
                 delta: float = 0.1,
                 jitter_radius: float = 0.01,
                 jitter_samples: int = 10,
                 seed: int = 0):
        if not delta > 0:
            raise ParameterError(f'delta must be positive, got {delta}')
        if not jitter_radius >= 0:
            raise ParameterError(
                f'jitter_radius must be non negative, got {jitter_radius}'
            )
        if int(jitter_samples) < 1:
            raise ParameterError('At least one jitter sample is needed')
        super().__init__(
            delta=float(delta),
            jitter_radius=float(jitter_radius),
            jitter_samples=int(jitter_samples),
            seed=int(seed),
        )


def difference_points(centers: np.ndarray, delta: float) -> np.ndarray:
    """
    ``(2 * m * d, d)`` batch, for every center and feature ``i`` the center
    moved by ``+delta`` then ``-delta`` along feature ``i`` only.
    """
    count, dimension = centers.shape
    plus = np.repeat(centers, dimension, axis=0)
    minus = plus.copy()
    rows = np.arange(count * dimension)
    features = np.tile(np.arange(dimension), count)
    plus[rows, features] += delta
    minus[rows, features] -= delta
    return np.concatenate([plus, minus])


def estimate_grad(x, predictor, params: GradientParams = None,
                  key=()) -> np.ndarray:
    """
    Average of the central differences at ``jitter_samples`` points drawn
    around ``x``, all ``2 * jitter_samples * d`` predictions in one batch.

    A feature the predictor never reads gets an exact zero component.

    :param x: Where to estimate the gradient.
    :param predictor: The function differentiated.
    :param params: Estimation parameters.
    :param key: Identifies the jitter stream under ``params.seed``, the
        same key always draws the same jitter.
    """
    params = params or GradientParams()
    x = np.asarray(x, dtype=float)
    dimension = x.size
    samples = params.jitter_samples

    noise = rng(params.seed, 'jitter', *key).standard_normal(
        (samples, dimension)
    )
    centers = x + params.jitter_radius * noise

    values = predictor.predict_batch(difference_points(centers, params.delta))
    half = samples * dimension
    differences = (values[:half] - values[half:]).reshape(samples, dimension)
    return freeze(differences.sum(axis=0) / (samples * 2 * params.delta))
