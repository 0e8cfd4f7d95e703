import math

import numpy as np
import pytest

from escapade import (
    ClosenessSpec, Side, from_decision_boundary, is_eps_close, line_search,
    shrink_points
)
from escapade.errors import (
    AmbiguousSideError, ParameterError, PreconditionError
)
from escapade.models import CallableModel, LinearModel, Predictor


@pytest.fixture
def first_feature():
    return Predictor(LinearModel([1.0, 0.0]))


def test_closeness_interval():
    spec = ClosenessSpec(1.0, 0.25, 0.5)

    assert spec.lower == 0.75
    assert spec.upper == 1.5
    assert spec.contains([0.75, 1.5, 0.7, 1.6]).tolist() == [
        True, True, False, False
    ]
    assert spec.side(2.0) is Side.ABOVE
    assert spec.side(0.0) is Side.BELOW
    with pytest.raises(PreconditionError):
        spec.side(1.0)


@pytest.mark.parametrize('f0, eps_lo, eps_hi', [
    (0.0, -1.0, 1.0),
    (0.0, 1.0, math.nan),
    (0.0, math.inf, math.inf),
    (math.inf, 1.0, 1.0),
])
def test_invalid_closeness(f0, eps_lo, eps_hi):
    with pytest.raises(ParameterError):
        ClosenessSpec(f0, eps_lo, eps_hi)


def test_zero_epsilons():
    spec = ClosenessSpec(0.5, 0.0, 0.0)

    assert is_eps_close(spec, 0.5)
    assert not is_eps_close(spec, 0.5000000001)


def test_is_eps_close_rejects_nan():
    with pytest.raises(PreconditionError):
        is_eps_close(ClosenessSpec(0.0, 1.0, 1.0), math.nan)


def test_decision_boundary_below():
    spec = from_decision_boundary(0.25, 0.5)

    assert spec.eps_lo == math.inf
    assert spec.eps_hi == 0.25
    assert is_eps_close(spec, -100.0)
    assert is_eps_close(spec, 0.5)
    assert not is_eps_close(spec, 0.75)


def test_decision_boundary_above():
    spec = from_decision_boundary(0.75, 0.5)

    assert spec.eps_lo == 0.25
    assert spec.eps_hi == math.inf
    assert not is_eps_close(spec, 0.25)
    assert is_eps_close(spec, 1e6)


def test_decision_boundary_ambiguous():
    with pytest.raises(AmbiguousSideError):
        from_decision_boundary(0.5, 0.5)


def test_line_search(first_feature):
    spec = ClosenessSpec(0.0, 1.0, 1.0)

    point = line_search(
        [4.0, 3.0], spec, first_feature, [0.0, 0.0], iterations=40
    )

    assert point.side is Side.ABOVE
    assert point.t_low <= 0.25 < point.t_high
    assert point.t_high - point.t_low == 2.0 ** -40
    assert point.location[0] == pytest.approx(1.0, abs=1e-10)
    assert point.location[1] == pytest.approx(0.75, abs=1e-10)
    assert point.distance_to_target == pytest.approx(1.25, abs=1e-10)
    assert first_feature.query_count == 41


def test_line_search_known_value(first_feature):
    spec = ClosenessSpec(0.0, 1.0, 1.0)

    line_search(
        [-4.0, 0.0], spec, first_feature, [0.0, 0.0], iterations=10,
        far_value=-4.0,
    )

    assert first_feature.query_count == 10


def test_line_search_close_point(first_feature):
    with pytest.raises(PreconditionError):
        line_search(
            [0.5, 0.0], ClosenessSpec(0.0, 1.0, 1.0), first_feature,
            [0.0, 0.0],
        )


def test_shrink_points_brackets():
    predictor = Predictor(CallableModel(
        lambda p: np.sin(p[:, 0]) + p[:, 1] ** 2, 2
    ))
    spec = ClosenessSpec(0.0, 0.5, 0.5)
    x0 = np.zeros(2)
    points = np.array([[2.0, 0.0], [-1.5, 0.0], [0.0, 3.0], [1.0, -1.0]])
    values = predictor.predict_batch(points)
    start = predictor.query_count

    shrunk = shrink_points(
        points, spec, predictor, x0, 30, values, indices=[7, 3, 5, 1]
    )

    assert predictor.query_count - start == 4 * 30
    assert [p.original_index for p in shrunk] == [7, 3, 5, 1]
    assert [p.side for p in shrunk] == [
        Side.ABOVE, Side.BELOW, Side.ABOVE, Side.ABOVE
    ]
    for point, x in zip(shrunk, points):
        assert point.t_low <= point.t <= point.t_high
        assert spec.contains(predictor.predict(x0 + point.t_low * x))
        assert not spec.contains(predictor.predict(x0 + point.t_high * x))


def test_shrink_points_needs_far_points(first_feature):
    with pytest.raises(PreconditionError):
        shrink_points(
            [[0.5, 0.0]], ClosenessSpec(0.0, 1.0, 1.0), first_feature,
            [0.0, 0.0], 10, [0.5],
        )


def test_shrink_points_needs_iterations(first_feature):
    with pytest.raises(ParameterError):
        shrink_points(
            [[5.0, 0.0]], ClosenessSpec(0.0, 1.0, 1.0), first_feature,
            [0.0, 0.0], 0, [5.0],
        )


def dyadic_crossing(generator, kind):
    """
    Model, far point and exact crossing step along the segment from the
    origin, with values whose products along the segment are exact.
    """
    feature = int(generator.integers(3))
    x = generator.standard_normal(3)
    x[feature] = int(generator.integers(1, 8)) / 8 * generator.choice([-1, 1])
    if kind == 'linear':
        slope = 2.0 ** int(generator.integers(-3, 4))
        coefficients = np.zeros(3)
        coefficients[feature] = slope
        crossing = int(generator.integers(1, 16)) / 16
        eps = abs(slope * x[feature]) * crossing
        return LinearModel(coefficients), x, ClosenessSpec(0.0, eps, eps), \
            crossing
    sign = np.sign(x[feature])
    level = abs(x[feature]) * int(generator.integers(1, 64)) / 64
    model = CallableModel(
        lambda p: (sign * p[:, feature] >= level).astype(float), 3,
        active_features=(feature,),
    )
    return model, x, ClosenessSpec(0.0, 0.5, 0.5), level / abs(x[feature])


@pytest.mark.parametrize('iterations', [10, 30, 50])
@pytest.mark.parametrize('kind', ['linear', 'step'])
def test_line_search_resolution(kind, iterations):
    generator = np.random.default_rng(iterations)
    for _ in range(100):
        model, x, spec, crossing = dyadic_crossing(generator, kind)

        point = line_search(x, spec, Predictor(model), np.zeros(3),
                            iterations=iterations)

        assert point.t_high - point.t_low == 2.0 ** -iterations
        assert abs(point.t - crossing) <= 2.0 ** -iterations


@pytest.mark.parametrize('iterations', [10, 30, 50])
def test_line_search_bilinear(bilinear, iterations):
    spec = ClosenessSpec(0.0, 0.5, 0.5)

    point = line_search(
        [2.0, 2.0], spec, bilinear, [0.0, 0.0], iterations=iterations
    )

    assert abs(point.t - math.sqrt(0.5 / 4)) <= 2.0 ** -iterations
    assert point.location.tolist() == pytest.approx(
        [2 ** -0.5, 2 ** -0.5], abs=2.0 ** (1 - iterations)
    )


def test_shrink_points_keeps_the_bracket_at_every_step():
    predictor = Predictor(CallableModel(
        lambda p: np.sin(3 * p[:, 0]) * np.cos(p[:, 1]) + 0.2 * p[:, 2], 3
    ))
    spec = ClosenessSpec(0.0, 0.3, 0.3)
    x0 = np.zeros(3)
    points = np.random.default_rng(4).uniform(-2.0, 2.0, size=(60, 3))
    values = predictor.predict_batch(points)
    points = points[~spec.contains(values)]
    steps = []

    def on_step(iteration, low, high):
        steps.append((iteration, low.copy(), high.copy()))

    shrink_points(
        points, spec, predictor, x0, 20, predictor.predict_batch(points),
        on_step=on_step,
    )

    assert [iteration for iteration, _, _ in steps] == list(range(20))
    for iteration, low, high in steps:
        assert np.all(high - low == 2.0 ** -(iteration + 1))
        assert spec.contains(predictor.predict_batch(
            low[:, np.newaxis] * points
        )).all()
        assert not spec.contains(predictor.predict_batch(
            high[:, np.newaxis] * points
        )).any()
