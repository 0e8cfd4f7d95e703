"""
Greedy construction of the polytope explaining a prediction.

The context is standardized, every far context point is shrunk onto the
boundary of the close region, then halfspaces are added one at a time
through the shrunken point nearest to the target until no shrunken point
is left strictly inside the polytope.
"""
import logging
import math
import typing

import numpy as np

from ._closeness import (
    ClosenessSpec, ShrunkenPoint, Side, from_decision_boundary, shrink_points
)
from ._gradient import GradientParams, estimate_grad
from ._immutable import ImmutableDict, freeze
from ._polytope import (
    EscapeReport, Halfspace, Polytope, escape_report, project, slack
)
from .errors import (
    DegenerateModelError, EmptyRegionError, InputError, ParameterError,
    PredictionError, TransportError
)

__all__ = [
    'ExplainerConfig',
    'IterationRecord',
    'Diagnostics',
    'Explanation',
    'standardize',
    'fit',
]

logger = logging.getLogger(__name__)

STD_CONVENTIONS = ('population', 'sample')


class ExplainerConfig(ImmutableDict):
    """
    Parameters of an explanation.

    Closeness is either the interval ``eps_lo``/``eps_hi`` around the
    target prediction or the side of the decision ``boundary`` the target
    prediction is on.

    :param max_splits: Largest number of halfspaces, ``None`` is unbounded.
    :param gradient: Finite difference parameters, their seed is replaced
        by ``seed``.
    :param iterations: Line search bisection steps.
    :param seed: Root seed of every random draw.
    :param std_convention: ``population`` or ``sample`` standard deviation.
    :param degenerate_tolerance: Gradients with a smaller norm define no
        halfspace.
    """
    def __init__(self,
                 eps_lo: float = None,
                 eps_hi: float = None,
                 boundary: float = None,
                 max_splits: int = None,
                 gradient: GradientParams = None,
                 iterations: int = 50,
                 seed: int = 0,
                 std_convention: str = 'population',
                 degenerate_tolerance: float = 1e-12):
        interval = eps_lo is not None or eps_hi is not None
        if interval == (boundary is not None):
            raise ParameterError(
                'Give either eps_lo and eps_hi or a decision boundary'
            )
        if interval:
            if eps_lo is None or eps_hi is None:
                raise ParameterError('Both eps_lo and eps_hi are needed')
            if not (math.isfinite(eps_lo) and math.isfinite(eps_hi)):
                raise ParameterError('Interval closeness must be finite')
        if max_splits is not None and max_splits < 1:
            raise ParameterError('max_splits must be at least 1')
        if iterations < 1:
            raise ParameterError('iterations must be at least 1')
        if std_convention not in STD_CONVENTIONS:
            raise ParameterError(
                f'std_convention must be one of {STD_CONVENTIONS}'
            )
        super().__init__(
            eps_lo=eps_lo,
            eps_hi=eps_hi,
            boundary=boundary,
            max_splits=max_splits,
            gradient=gradient or GradientParams(),
            iterations=int(iterations),
            seed=int(seed),
            std_convention=std_convention,
            degenerate_tolerance=float(degenerate_tolerance),
        )

    def closeness(self, f0: float) -> ClosenessSpec:
        if self.boundary is not None:
            return from_decision_boundary(f0, self.boundary)
        return ClosenessSpec(f0, self.eps_lo, self.eps_hi)

    @property
    def gradient_params(self) -> GradientParams:
        return self.gradient.replace(seed=self.seed)


class IterationRecord(ImmutableDict):
    """
    :param candidates: Original indices of the shrunken points remaining
        before the selection.
    :param selected: Original index of the selected point.
    :param distance: Its distance to the target.
    :param outcome: ``split``, ``degenerate`` or ``rejected``.
    :param removed: Number of shrunken points leaving the candidates.
    """
    def __init__(self, candidates, selected: int, distance: float,
                 outcome: str, removed: int):
        super().__init__(
            candidates=tuple(candidates),
            selected=selected,
            distance=distance,
            outcome=outcome,
            removed=removed,
        )


class Diagnostics(ImmutableDict):
    def __init__(self,
                 context_total: int,
                 eps_far: int,
                 iterations: int,
                 degenerate: typing.Tuple[int, ...],
                 rejected: typing.Tuple[int, ...],
                 history: typing.Tuple[IterationRecord, ...],
                 queries: int):
        super().__init__(
            context_total=context_total,
            eps_far=eps_far,
            iterations=iterations,
            degenerate=tuple(degenerate),
            rejected=tuple(rejected),
            history=tuple(history),
            queries=queries,
        )

    @property
    def removed_per_iteration(self) -> typing.Tuple[int, ...]:
        return tuple(
            record.removed for record in self.history
            if record.outcome == 'split'
        )


class Explanation(ImmutableDict):
    """
    Result of :py:func:`fit`, every geometric quantity is on the
    standardized scale.

    :param polytope: The halfspaces found, centered on the target.
    :param support_vectors: The shrunken point of each halfspace.
    :param shrunken: Every shrunken far context point.
    :param feature_scales: Standard deviation of each context column.
    :param escape: Escape distances of the target in the polytope.
    :param closeness: The close region.
    :param target: The target on its original scale.
    """
    def __init__(self,
                 polytope: Polytope,
                 support_vectors: typing.Tuple[ShrunkenPoint, ...],
                 shrunken: typing.Tuple[ShrunkenPoint, ...],
                 feature_scales,
                 escape: EscapeReport,
                 closeness: ClosenessSpec,
                 target,
                 diagnostics: Diagnostics):
        super().__init__(
            polytope=polytope,
            support_vectors=tuple(support_vectors),
            shrunken=tuple(shrunken),
            feature_scales=freeze(feature_scales),
            escape=escape,
            closeness=closeness,
            target=freeze(target),
            diagnostics=diagnostics,
        )


def standardize(context, x0, convention: str = 'population'):
    """
    Divide every column by its standard deviation over the context rows,
    constant columns keep a scale of one.

    :return: ``(scaled context, scaled x0, scales)``
    """
    context = np.atleast_2d(np.asarray(context, dtype=float))
    x0 = np.asarray(x0, dtype=float)
    if not context.shape[0]:
        raise InputError('The context needs at least one point')
    if convention not in STD_CONVENTIONS:
        raise ParameterError(f'Unknown std convention {convention!r}')
    ddof = 1 if convention == 'sample' and context.shape[0] > 1 else 0
    scales = context.std(axis=0, ddof=ddof)
    scales = np.where(scales > 0, scales, 1.0)
    return context / scales, x0 / scales, scales


def _nearest(distances, indices):
    """Position of the smallest distance, ties to the lowest index."""
    return int(np.lexsort((indices, distances))[0])


def fit(x0, predictor, context, config: ExplainerConfig) -> Explanation:
    """
    Explain the prediction at ``x0``.

    :param x0: The target, original scale.
    :param predictor: Query access to the model.
    :param context: ``(n, d)`` representative points, original scale.
    :param config: Explanation parameters.
    :raise PredictionError: The target prediction failed.
    :raise EmptyRegionError: No context point is far.
    :raise DegenerateModelError: Every boundary gradient vanished.
    """
    x0 = np.asarray(x0, dtype=float)
    context = np.atleast_2d(np.asarray(context, dtype=float))
    if x0.shape != (predictor.dimension,) \
            or context.shape[1] != predictor.dimension:
        raise InputError(
            f'The model expects {predictor.dimension} features, got target'
            f' {x0.shape} and context {context.shape}'
        )
    if not np.all(np.isfinite(x0)):
        raise InputError('The target must be finite')

    start_queries = predictor.query_count
    z, z0, scales = standardize(context, x0, config.std_convention)
    scaled = predictor.scaled(scales)

    try:
        f0 = scaled.predict(z0)
    except (PredictionError, TransportError) as err:
        raise PredictionError(f'Cannot predict the target: {err}') from err
    spec = config.closeness(f0)

    values = scaled.predict_batch(z)
    far = np.flatnonzero(~spec.contains(values))
    logger.debug(
        'Target prediction %r, %d of %d context points are far',
        f0, far.size, z.shape[0]
    )
    if not far.size:
        raise EmptyRegionError(
            'No context point is far, there is no boundary information'
        )

    shrunken = shrink_points(
        z[far], spec, scaled, z0, config.iterations, values[far], far
    )

    locations = np.array([p.location for p in shrunken])
    distances = np.array([p.distance_to_target for p in shrunken])
    indices = np.array([p.original_index for p in shrunken])
    remaining = np.arange(len(shrunken))

    params = config.gradient_params
    polytope = Polytope((), z0, scales)
    support_vectors = []
    history = []
    degenerate = []
    rejected = []

    while remaining.size and (
            config.max_splits is None
            or len(support_vectors) < config.max_splits):
        position = remaining[
            _nearest(distances[remaining], indices[remaining])
        ]
        point = shrunken[position]
        candidates = indices[remaining]
        gradient = estimate_grad(
            point.location, scaled, params, key=(point.original_index,)
        )

        if np.linalg.norm(gradient) <= config.degenerate_tolerance:
            logger.info(
                'Vanishing gradient at context point %d, discarded',
                point.original_index
            )
            degenerate.append(point.original_index)
            remaining = remaining[remaining != position]
            history.append(IterationRecord(
                candidates, point.original_index, point.distance_to_target,
                'degenerate', 1
            ))
            continue

        normal = gradient if point.side is Side.ABOVE else -gradient
        halfspace = Halfspace.through(point.location, normal)
        normal = halfspace.normal[np.newaxis]

        if project(normal, z0[np.newaxis])[0, 0] > halfspace.intercept:
            logger.info(
                'Halfspace of context point %d excludes the target,'
                ' discarded', point.original_index
            )
            rejected.append(point.original_index)
            remaining = remaining[remaining != position]
            history.append(IterationRecord(
                candidates, point.original_index, point.distance_to_target,
                'rejected', 1
            ))
            continue

        polytope = polytope.with_halfspace(halfspace)
        support_vectors.append(point)

        inside = project(normal, locations[remaining])[0] \
            < halfspace.intercept - slack(halfspace.intercept)
        removed = int(remaining.size - inside.sum())
        remaining = remaining[inside]
        history.append(IterationRecord(
            candidates, point.original_index, point.distance_to_target,
            'split', removed
        ))
        logger.debug(
            'Split %d through context point %d, %d points left',
            len(support_vectors), point.original_index, remaining.size
        )

    if not polytope.halfspaces:
        raise DegenerateModelError(
            'No boundary gradient defines a halfspace'
        )

    escape = escape_report(polytope, z0, scales, seed=config.seed)
    diagnostics = Diagnostics(
        context_total=z.shape[0],
        eps_far=far.size,
        iterations=len(polytope.halfspaces),
        degenerate=degenerate,
        rejected=rejected,
        history=history,
        queries=predictor.query_count - start_queries,
    )
    logger.info(
        'Polytope of %d halfspaces from %d far context points, %d queries',
        diagnostics.iterations, far.size, diagnostics.queries
    )
    return Explanation(
        polytope=polytope,
        support_vectors=support_vectors,
        shrunken=shrunken,
        feature_scales=scales,
        escape=escape,
        closeness=spec,
        target=x0,
        diagnostics=diagnostics,
    )
