import numpy as np

from escapade._search import (
    Bracket, bisect_segments, scan_first_exit, scan_steps
)


def inside_ball(radius):
    def is_inside(points):
        return np.linalg.norm(points, axis=1) < radius
    return is_inside


def test_bisect_segments():
    steps = []
    origins = np.zeros((2, 2))
    directions = np.array([[1.0, 0.0], [0.0, 2.0]])

    bracket = bisect_segments(
        inside_ball(0.75), origins, directions,
        np.zeros(2), np.ones(2), 40,
        on_step=lambda i, low, high: steps.append(i),
    )

    assert steps == list(range(40))
    assert np.all(bracket.high - bracket.low == 2.0 ** -40)
    assert bracket.low[0] < 0.75 <= bracket.high[0]
    assert bracket.low[1] < 0.375 <= bracket.high[1]


def test_bisect_nothing():
    bracket = bisect_segments(
        inside_ball(1.0), np.zeros((0, 2)), np.zeros((0, 2)), [], [], 10
    )

    assert bracket.low.size == 0


def test_scan_steps():
    steps = scan_steps(0.25, 3.0)

    assert steps.tolist() == [0.25, 0.5, 1.0, 2.0, 3.0]


def test_bracket_middle():
    bracket = Bracket(np.array([1.0, 2.0]), np.array([3.0, np.inf]))

    assert bracket.middle.tolist() == [2.0, np.inf]


def test_scan_first_exit():
    directions = np.concatenate([np.eye(3), -np.eye(3)])

    bracket = scan_first_exit(
        inside_ball(2.0), np.zeros(3), directions, 10.0, iterations=45
    )

    assert np.all(bracket.low < 2.0)
    assert np.all(bracket.high >= 2.0)
    assert np.allclose(bracket.middle, 2.0, atol=1e-9)


def test_scan_first_exit_horizons():
    directions = np.eye(2)

    bracket = scan_first_exit(
        inside_ball(2.0), np.zeros(2), directions, [1.5, 0.0]
    )

    assert np.isinf(bracket.high).all()
    assert bracket.low[0] == 1.5


def test_scan_first_exit_batches_queries():
    batches = []

    def is_inside(points):
        batches.append(points.shape[0])
        return inside_ball(1.0)(points)

    scan_first_exit(is_inside, np.zeros(2), np.eye(2), 4.0, iterations=5)

    # One scan batch, then one batch per bisection step.
    assert len(batches) == 6
    assert batches[1:] == [2] * 5
