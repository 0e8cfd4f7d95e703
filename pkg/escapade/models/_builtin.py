"""
Prediction models evaluated in-process.

Every model computes its predictions row by row with element-wise
operations over the features it reads, so changing a feature a model
ignores never changes a prediction, not even in the last bit.
"""
import abc
import itertools
import math
import typing

import numpy as np
from scipy.special import expit

from ..errors import ModelDescriptionError
from ._predictor import Backend

__all__ = [
    'BuiltinModel',
    'LinearModel',
    'BilinearModel',
    'DecisionTreeModel',
    'KnnRegressor',
    'GatedModel',
    'QuadraticLogisticModel',
    'CallableModel',
    'register_variant',
    'model_variants',
]

_variants: typing.Dict[str, typing.Type['BuiltinModel']] = {}


def register_variant(cls):
    """Class decorator making a model loadable from description files."""
    _variants[cls.variant] = cls
    return cls


def model_variants():
    return dict(_variants)


def _required(data, key):
    try:
        return data[key]
    except KeyError as err:
        raise ModelDescriptionError(f'Missing key "{key}"') from err


class BuiltinModel(Backend):
    variant: str = ''

    def __init__(self, dimension: int, active_features=None):
        if dimension < 1:
            raise ModelDescriptionError('dimension must be positive')
        self.dimension = int(dimension)
        if active_features is not None:
            active_features = tuple(sorted(int(x) for x in active_features))
            if any(not 0 <= x < self.dimension for x in active_features):
                raise ModelDescriptionError(
                    f'Active features {active_features} out of range'
                )
        self.active_features = active_features

    @abc.abstractmethod
    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pass  # pragma: no cover

    def describe(self) -> dict:
        """Content of the model description file, without the variant."""
        raise NotImplementedError  # pragma: no cover

    @classmethod
    def from_description(cls, data: dict) -> 'BuiltinModel':
        raise NotImplementedError  # pragma: no cover

    def __repr__(self):  # pragma: no cover
        return f'<{self.__class__.__name__} d={self.dimension}>'


@register_variant
class LinearModel(BuiltinModel):
    """``f(x) = intercept + coefficients . x``"""
    variant = 'linear'

    def __init__(self, coefficients, intercept: float = 0.0):
        self.coefficients = np.array(coefficients, dtype=float)
        self.intercept = float(intercept)
        super().__init__(
            self.coefficients.size,
            np.flatnonzero(self.coefficients).tolist()
        )

    def evaluate(self, points):
        values = np.full(points.shape[0], self.intercept)
        for j in self.active_features:
            values += self.coefficients[j] * points[:, j]
        return values

    def describe(self):
        return {
            'coefficients': self.coefficients.tolist(),
            'intercept': self.intercept,
        }

    @classmethod
    def from_description(cls, data):
        return cls(
            _required(data, 'coefficients'), data.get('intercept', 0.0)
        )


@register_variant
class BilinearModel(BuiltinModel):
    """``f(x) = scale * x_j * x_k``"""
    variant = 'bilinear'

    def __init__(self, dimension: int, features=(0, 1), scale: float = 1.0):
        self.features = tuple(int(x) for x in features)
        if len(self.features) != 2:
            raise ModelDescriptionError('bilinear needs exactly two features')
        self.scale = float(scale)
        super().__init__(dimension, self.features)

    def evaluate(self, points):
        first, second = self.features
        return self.scale * points[:, first] * points[:, second]

    def describe(self):
        return {
            'dimension': self.dimension,
            'features': list(self.features),
            'scale': self.scale,
        }

    @classmethod
    def from_description(cls, data):
        return cls(
            _required(data, 'dimension'),
            data.get('features', (0, 1)),
            data.get('scale', 1.0),
        )


@register_variant
class DecisionTreeModel(BuiltinModel):
    """
    Binary decision tree, node 0 is the root.

    Internal nodes are ``{feature, threshold, left, right}``, points with
    ``x[feature] <= threshold`` go left. Leaves are ``{value}``.
    """
    variant = 'tree'

    def __init__(self, dimension: int, nodes: typing.Sequence[dict]):
        if not nodes:
            raise ModelDescriptionError('A tree needs at least one node')
        count = len(nodes)
        self.is_leaf = np.zeros(count, dtype=bool)
        self.feature = np.zeros(count, dtype=int)
        self.threshold = np.zeros(count)
        self.left = np.zeros(count, dtype=int)
        self.right = np.zeros(count, dtype=int)
        self.value = np.zeros(count)

        for i, node in enumerate(nodes):
            if 'value' in node:
                value = float(node['value'])
                if not math.isfinite(value):
                    raise ModelDescriptionError(f'Leaf {i} is not finite')
                self.is_leaf[i] = True
                self.value[i] = value
                continue
            try:
                self.feature[i] = int(node['feature'])
                self.threshold[i] = float(node['threshold'])
                self.left[i] = int(node['left'])
                self.right[i] = int(node['right'])
            except KeyError as err:
                raise ModelDescriptionError(
                    f'Internal node {i} needs feature, threshold, left and'
                    f' right'
                ) from err
            for child in (self.left[i], self.right[i]):
                if not 0 <= child < count or child == i:
                    raise ModelDescriptionError(
                        f'Node {i} has an invalid child {child}'
                    )

        self._check_reachable()
        used = self.feature[~self.is_leaf]
        super().__init__(dimension, np.unique(used).tolist())
        self.nodes = [dict(n) for n in nodes]

    def _check_reachable(self):
        seen = set()
        stack = [0]
        while stack:
            node = stack.pop()
            if node in seen:
                raise ModelDescriptionError(
                    f'Node {node} is reachable twice, not a tree'
                )
            seen.add(node)
            if not self.is_leaf[node]:
                stack.extend((self.left[node], self.right[node]))

    def evaluate(self, points):
        current = np.zeros(points.shape[0], dtype=int)
        rows = np.arange(points.shape[0])
        while True:
            internal = ~self.is_leaf[current]
            if not internal.any():
                break
            nodes = current[internal]
            go_left = (
                points[rows[internal], self.feature[nodes]]
                <= self.threshold[nodes]
            )
            current[internal] = np.where(
                go_left, self.left[nodes], self.right[nodes]
            )
        return self.value[current]

    def describe(self):
        return {'dimension': self.dimension, 'nodes': self.nodes}

    @classmethod
    def from_description(cls, data):
        return cls(_required(data, 'dimension'), _required(data, 'nodes'))


@register_variant
class KnnRegressor(BuiltinModel):
    """
    Mean response of the ``k`` nearest training points, distances measured
    on the active features only.

    The neighbour search is done here rather than with a library index:
    the squared distances only ever add terms of the active features, so
    an inactive feature never reaches a prediction, not even in the last
    bit.
    """
    variant = 'knn'

    def __init__(self, points, responses, k: int = 5, active_features=None):
        self.points = np.array(points, dtype=float)
        self.responses = np.array(responses, dtype=float)
        if self.points.ndim != 2 or not self.points.shape[0]:
            raise ModelDescriptionError('knn needs a matrix of points')
        if self.responses.shape != (self.points.shape[0],):
            raise ModelDescriptionError('One response per training point')
        self.k = int(k)
        if not 1 <= self.k <= self.points.shape[0]:
            raise ModelDescriptionError(
                f'k must be within 1 and {self.points.shape[0]}'
            )
        if active_features is None:
            active_features = range(self.points.shape[1])
        super().__init__(self.points.shape[1], active_features)

    def evaluate(self, points):
        distances = np.zeros((points.shape[0], self.points.shape[0]))
        for j in self.active_features:
            distances += np.square(
                points[:, j, np.newaxis] - self.points[np.newaxis, :, j]
            )
        if self.k == self.points.shape[0]:
            neighbors = np.broadcast_to(
                np.arange(self.k), (points.shape[0], self.k)
            )
        else:
            neighbors = np.argpartition(
                distances, self.k - 1, axis=1
            )[:, :self.k]
        return self.responses[neighbors].mean(axis=1)

    def describe(self):
        return {
            'k': self.k,
            'active_features': list(self.active_features),
            'points': self.points.tolist(),
            'responses': self.responses.tolist(),
        }

    @classmethod
    def from_description(cls, data):
        return cls(
            _required(data, 'points'),
            _required(data, 'responses'),
            data.get('k', 5),
            data.get('active_features'),
        )


@register_variant
class GatedModel(BuiltinModel):
    """
    ``above`` where ``x[feature] >= threshold``, ``below`` elsewhere.

    Both models share the dimension, a point only ever reaches one of them.
    """
    variant = 'gated'

    def __init__(self, feature: int, below: BuiltinModel,
                 above: BuiltinModel, threshold: float = 0.0):
        if below.dimension != above.dimension:
            raise ModelDescriptionError('Gated models differ in dimension')
        self.feature = int(feature)
        if not 0 <= self.feature < below.dimension:
            raise ModelDescriptionError(
                f'Gate feature {self.feature} out of range'
            )
        self.threshold = float(threshold)
        self.below = below
        self.above = above
        active = None
        if None not in (below.active_features, above.active_features):
            active = set(
                below.active_features + above.active_features
                + (self.feature,)
            )
        super().__init__(below.dimension, active)

    def evaluate(self, points):
        values = np.empty(points.shape[0])
        upper = points[:, self.feature] >= self.threshold
        for model, mask in ((self.above, upper), (self.below, ~upper)):
            if mask.any():
                values[mask] = model.evaluate(points[mask])
        return values

    def describe(self):
        return {
            'feature': self.feature,
            'threshold': self.threshold,
            'below': dict(variant=self.below.variant, **self.below.describe()),
            'above': dict(variant=self.above.variant, **self.above.describe()),
        }

    @classmethod
    def from_description(cls, data):
        return cls(
            _required(data, 'feature'),
            _nested(_required(data, 'below')),
            _nested(_required(data, 'above')),
            data.get('threshold', 0.0),
        )


def _nested(data):
    data = dict(data)
    variant = data.pop('variant', None)
    if variant not in _variants:
        raise ModelDescriptionError(f'Unknown model variant {variant!r}')
    return _variants[variant].from_description(data)


@register_variant
class QuadraticLogisticModel(BuiltinModel):
    """
    ``f(x) = expit(intercept + sum_i w_i z_i + sum_{i<=j} q_ij z_i z_j)``
    where ``z = (x - center) / scale``.
    """
    variant = 'quadratic-logistic'

    def __init__(self, intercept, linear, quadratic=None, center=None,
                 scale=None):
        self.linear = np.array(linear, dtype=float)
        dimension = self.linear.size
        self.intercept = float(intercept)
        if quadratic is None:
            quadratic = np.zeros((dimension, dimension))
        self.quadratic = np.triu(np.array(quadratic, dtype=float))
        if self.quadratic.shape != (dimension, dimension):
            raise ModelDescriptionError('quadratic must be a d x d matrix')
        self.center = np.zeros(dimension) if center is None \
            else np.array(center, dtype=float)
        self.scale = np.ones(dimension) if scale is None \
            else np.array(scale, dtype=float)
        self.pairs = [
            (i, j) for i, j in itertools.combinations_with_replacement(
                range(dimension), 2
            ) if self.quadratic[i, j] != 0.0
        ]
        active = set(np.flatnonzero(self.linear).tolist())
        active.update(itertools.chain(*self.pairs))
        super().__init__(dimension, active)

    def logit(self, points: np.ndarray) -> np.ndarray:
        z = {
            j: (points[:, j] - self.center[j]) / self.scale[j]
            for j in self.active_features
        }
        values = np.full(points.shape[0], self.intercept)
        for j in self.active_features:
            if self.linear[j] != 0.0:
                values += self.linear[j] * z[j]
        for i, j in self.pairs:
            values += self.quadratic[i, j] * z[i] * z[j]
        return values

    def evaluate(self, points):
        return expit(self.logit(points))

    def describe(self):
        return {
            'intercept': self.intercept,
            'linear': self.linear.tolist(),
            'quadratic': self.quadratic.tolist(),
            'center': self.center.tolist(),
            'scale': self.scale.tolist(),
        }

    @classmethod
    def from_description(cls, data):
        return cls(
            data.get('intercept', 0.0),
            _required(data, 'linear'),
            data.get('quadratic'),
            data.get('center'),
            data.get('scale'),
        )


class CallableModel(BuiltinModel):
    """
    Wrap a vectorized python function ``(n, d) array -> (n,) array``.

    The function should only read ``active_features`` when they are given.
    """
    variant = 'callable'

    def __init__(self, func, dimension: int, active_features=None):
        self.func = func
        super().__init__(dimension, active_features)

    def evaluate(self, points):
        return np.asarray(self.func(points), dtype=float)
