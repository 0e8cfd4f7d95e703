import abc
import threading
import typing

import numpy as np

from ..errors import InputError, PredictionError

__all__ = [
    'Backend',
    'Predictor',
    'ScaledPredictor',
]


class Backend(abc.ABC):
    """Something that evaluates a scalar prediction function on batches."""
    dimension: int
    #: Features the function reads, ``None`` when unknown.
    active_features: typing.Optional[typing.Tuple[int, ...]] = None

    @abc.abstractmethod
    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """
        :param points: ``(n, dimension)`` float array.
        :return: ``(n,)`` float array.
        """

    def close(self):
        """Release the resources held by the backend."""


def as_points(points, dimension) -> np.ndarray:
    array = np.asarray(points, dtype=float)
    if array.size == 0:
        return np.zeros((0, dimension))
    if array.ndim == 1 and dimension is not None and array.size == dimension:
        array = array.reshape(1, -1)
    if array.ndim != 2:
        raise InputError(f'Expected a list of points, got shape {array.shape}')
    if array.shape[0] and array.shape[1] != dimension:
        raise InputError(
            f'Expected points of dimension {dimension},'
            f' got {array.shape[1]}'
        )
    if not np.all(np.isfinite(array)):
        raise InputError('Points must have finite coordinates')
    return array


class Predictor:
    """
    Query access to a scalar prediction function.

    Every evaluated point is counted in :py:attr:`query_count`, cached
    answers included.
    """
    def __init__(self, backend: Backend, cache: bool = False):
        """
        :param backend: The model evaluating the points.
        :param cache: Remember the prediction of every evaluated point,
            keyed on the exact coordinate bytes.
        """
        self.backend = backend
        self.query_count = 0
        self.cache_hits = 0
        self._cache = {} if cache else None
        self._lock = threading.Lock()

    @property
    def dimension(self) -> int:
        return self.backend.dimension

    @property
    def active_features(self):
        return self.backend.active_features

    def predict_batch(self, points) -> np.ndarray:
        """
        Evaluate the model on a batch of points.

        :param points: Sequence of ``dimension`` long vectors.
        :return: One prediction per point, in order.
        """
        array = as_points(points, self.dimension)
        if not array.shape[0]:
            return np.zeros(0)

        if self._cache is None:
            values = self._evaluate(array)
        else:
            values = self._cached(array)

        with self._lock:
            self.query_count += array.shape[0]

        return values

    def predict(self, point) -> float:
        return float(self.predict_batch([point])[0])

    def _evaluate(self, array):
        values = np.asarray(self.backend.evaluate(array), dtype=float)
        if values.shape != (array.shape[0],):
            raise PredictionError(
                f'Expected {array.shape[0]} predictions, got {values.shape}'
            )
        if not np.all(np.isfinite(values)):
            raise PredictionError('The model returned non finite predictions')
        return values

    def _cached(self, array):
        keys = [row.tobytes() for row in array]
        with self._lock:
            missing = [i for i, k in enumerate(keys) if k not in self._cache]
            self.cache_hits += len(keys) - len(missing)
        if missing:
            fresh = self._evaluate(array[missing])
            with self._lock:
                for i, value in zip(missing, fresh):
                    self._cache[keys[i]] = float(value)
        with self._lock:
            return np.array([self._cache[k] for k in keys])

    def scaled(self, scales) -> 'ScaledPredictor':
        return ScaledPredictor(self, scales)

    def close(self):
        self.backend.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


class ScaledPredictor:
    """
    View of a predictor taking points on a standardized scale, every
    coordinate is multiplied by its scale before querying.
    """
    def __init__(self, predictor: Predictor, scales):
        self.predictor = predictor
        self.scales = np.asarray(scales, dtype=float)

    @property
    def dimension(self) -> int:
        return self.predictor.dimension

    @property
    def active_features(self):
        return self.predictor.active_features

    @property
    def query_count(self) -> int:
        return self.predictor.query_count

    def predict_batch(self, points) -> np.ndarray:
        array = as_points(points, self.dimension)
        return self.predictor.predict_batch(array * self.scales)

    def predict(self, point) -> float:
        return float(self.predict_batch([point])[0])
