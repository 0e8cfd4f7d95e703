"""Features a model never reads get no importance from any method."""
import numpy as np
import pytest

from escapade import (
    ExplainerConfig, GradientParams, default_horizon, fit,
    gradient_importance, simple_escape, standardize
)
from escapade.models import (
    DecisionTreeModel, KnnRegressor, LinearModel, Predictor
)

from .conftest import gaussian_points

DIMENSION = 10


def random_model(seed):
    generator = np.random.default_rng(seed)
    active = sorted(generator.choice(
        DIMENSION, size=generator.integers(1, 4), replace=False
    ).tolist())
    kind = seed % 3
    if kind == 0:
        coefficients = np.zeros(DIMENSION)
        coefficients[active] = generator.uniform(0.5, 2.0, len(active)) \
            * generator.choice([-1.0, 1.0], len(active))
        model = LinearModel(coefficients, generator.normal())
    elif kind == 1:
        model = DecisionTreeModel(DIMENSION, [
            {'feature': active[0], 'threshold': 0.3, 'left': 1, 'right': 2},
            {'value': 0.0},
            {'feature': active[-1], 'threshold': -0.2, 'left': 3,
             'right': 4},
            {'value': 1.0},
            {'value': 2.0},
        ])
    else:
        model = KnnRegressor(
            generator.standard_normal((40, DIMENSION)),
            generator.uniform(0, 1, 40),
            k=3,
            active_features=active,
        )
    inactive = [j for j in range(DIMENSION) if j not in active]
    return Predictor(model), inactive


@pytest.mark.parametrize('seed', range(50))
def test_inactive_features(seed):
    predictor, inactive = random_model(seed)
    context = gaussian_points(200, DIMENSION, seed=seed)
    x0 = np.zeros(DIMENSION)
    config = ExplainerConfig(eps_lo=0.01, eps_hi=0.01, max_splits=5,
                             seed=seed)

    explanation = fit(x0, predictor, context, config)
    escape = explanation.escape
    assert np.all(np.isinf(escape.s_plus[inactive]))
    assert np.all(np.isinf(escape.s_minus[inactive]))

    z, _, scales = standardize(context, x0)
    simple = simple_escape(
        x0, predictor, explanation.closeness, scales, default_horizon(z)
    )
    assert np.all(np.isinf(simple.s_plus[inactive]))
    assert np.all(np.isinf(simple.s_minus[inactive]))

    gradient = gradient_importance(
        x0, predictor, GradientParams(seed=seed), scales
    )
    assert np.all(gradient.values[inactive] == 0.0)
