"""
Batched searches along rays for the first point leaving a region.

Every search advances all of its rays together, each step queries the
region once for the whole batch.
"""
import typing

import numpy as np

__all__ = [
    'Bracket',
    'bisect_segments',
    'scan_first_exit',
]

InsideFunc = typing.Callable[[np.ndarray], np.ndarray]
StepHook = typing.Callable[[int, np.ndarray, np.ndarray], None]


class Bracket(typing.NamedTuple):
    """Per ray ``low`` inside, ``high`` outside, ``inf`` when no exit."""
    low: np.ndarray
    high: np.ndarray

    @property
    def middle(self) -> np.ndarray:
        with np.errstate(invalid='ignore'):
            return np.where(
                np.isinf(self.high), np.inf, (self.low + self.high) / 2
            )


def _along(origins, directions, steps):
    return origins + steps[:, np.newaxis] * directions


def bisect_segments(is_inside: InsideFunc,
                    origins: np.ndarray,
                    directions: np.ndarray,
                    low: np.ndarray,
                    high: np.ndarray,
                    iterations: int,
                    on_step: StepHook = None) -> Bracket:
    """
    Bisect ``origin + t * direction`` between ``low`` (inside) and ``high``
    (outside) for every ray at once.

    :param is_inside: Region membership of a batch of points.
    :param origins: ``(n, d)`` ray origins.
    :param directions: ``(n, d)`` ray directions.
    :param low: Steps known to be inside.
    :param high: Steps known to be outside.
    :param iterations: Number of halvings, one region query per halving.
    :param on_step: Called with ``(iteration, low, high)`` after each step.
    :return: The final brackets, of width ``(high - low) / 2**iterations``.
    """
    low = np.array(low, dtype=float)
    high = np.array(high, dtype=float)
    if not low.size:
        return Bracket(low, high)
    for iteration in range(iterations):
        middle = (low + high) / 2
        inside = np.asarray(
            is_inside(_along(origins, directions, middle)), dtype=bool
        )
        low = np.where(inside, middle, low)
        high = np.where(inside, high, middle)
        if on_step is not None:
            on_step(iteration, low, high)
    return Bracket(low, high)


def scan_steps(start, horizon) -> np.ndarray:
    """Doubling steps from ``start``, the last one is ``horizon`` itself."""
    steps = []
    step = start
    while step < horizon:
        steps.append(step)
        step *= 2
    steps.append(horizon)
    return np.array(steps)


def scan_first_exit(is_inside: InsideFunc,
                    origins: np.ndarray,
                    directions: np.ndarray,
                    horizon,
                    start=1e-3,
                    iterations: int = 50) -> Bracket:
    """
    First detected exit along each ray: a doubling scan of the steps up to
    ``horizon`` locates the first outside step, bisection refines it.

    When the region is not convex along a ray the exit found is the first
    one at the resolution of the scan, not necessarily the infimum.

    :param horizon: Largest step searched, scalar or one per ray.
    :param start: First scanned step, scalar or one per ray.
    :return: Brackets, ``high`` is ``inf`` for rays that stay inside up to
        their horizon.
    """
    origins = np.atleast_2d(np.asarray(origins, dtype=float))
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    count = directions.shape[0]
    origins = np.broadcast_to(origins, directions.shape)
    horizons = np.broadcast_to(np.asarray(horizon, dtype=float), (count,))
    starts = np.broadcast_to(np.asarray(start, dtype=float), (count,))

    low = np.zeros(count)
    high = np.full(count, np.inf)

    rays = []
    steps = []
    for ray in range(count):
        if not horizons[ray] > 0:
            continue
        for step in scan_steps(min(starts[ray], horizons[ray]), horizons[ray]):
            rays.append(ray)
            steps.append(step)
    if not rays:
        return Bracket(low, high)

    rays = np.array(rays)
    steps = np.array(steps)
    inside = np.asarray(
        is_inside(_along(origins[rays], directions[rays], steps)), dtype=bool
    )

    found = np.zeros(count, dtype=bool)
    for ray, step, ok in zip(rays, steps, inside):
        if found[ray]:
            continue
        if ok:
            low[ray] = step
        else:
            high[ray] = step
            found[ray] = True

    exits = np.flatnonzero(found)
    refined = bisect_segments(
        is_inside, origins[exits], directions[exits],
        low[exits], high[exits], iterations
    )
    low[exits] = refined.low
    high[exits] = refined.high
    return Bracket(low, high)
