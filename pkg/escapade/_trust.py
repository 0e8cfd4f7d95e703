"""
Trustworthy regions: where the context density is high enough compared to
a uniform density over the bounding box of the context.

A classifier separates the context points from uniform draws over their
bounding box, its odds give the density ratio ``r(x)`` up to the class
sizes. Escape paths leaving ``{x : r(x) >= beta}`` before they leave the
polytope are not trusted and their distance becomes infinite.
"""
import logging
import pathlib

import numpy as np
import tomlkit
from sklearn.linear_model import LogisticRegression
from sklearn.preprocessing import PolynomialFeatures
from tomlkit.exceptions import TOMLKitError

from ._immutable import ImmutableDict, freeze
from ._polytope import EscapeReport, InfiniteReason
from ._search import scan_first_exit
from ._tools import rng
from .errors import (
    DegenerateHullError, InputError, ParameterError, UntrustedTargetError
)
from .models import QuadraticLogisticModel

__all__ = [
    'TrustRegion',
    'fit_trust',
    'apply_trust',
    'dump_trust',
    'dumps_trust',
    'load_trust',
    'loads_trust',
]

logger = logging.getLogger(__name__)

SCAN_START = 1e-3


class TrustRegion(ImmutableDict):
    """
    ``{x : r(x) >= beta}`` with ``r(x) = exp(logit(x)) * n_baseline /
    n_context``.

    :param model: Logit of the probability that a point is a context point.
    :param n_context: Number of context points.
    :param n_baseline: Number of uniform baseline draws.
    :param beta: Trust threshold.
    :param lower: Lower corner of the context bounding box.
    :param upper: Upper corner of the context bounding box.
    """
    def __init__(self,
                 model: QuadraticLogisticModel,
                 n_context: int,
                 n_baseline: int,
                 beta: float,
                 lower,
                 upper):
        if not beta >= 0:
            raise ParameterError(f'beta must be non negative, got {beta}')
        super().__init__(
            model=model,
            n_context=int(n_context),
            n_baseline=int(n_baseline),
            beta=float(beta),
            lower=freeze(lower),
            upper=freeze(upper),
        )

    def ratio(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        with np.errstate(over='ignore'):
            odds = np.exp(self.model.logit(points))
        return odds * (self.n_baseline / self.n_context)

    def contains(self, points) -> np.ndarray:
        return self.ratio(points) >= self.beta

    def with_beta(self, beta: float) -> 'TrustRegion':
        return self.replace(beta=beta)


def _classifier_model(classifier, expansion, lower, width):
    dimension = lower.size
    linear = np.zeros(dimension)
    quadratic = np.zeros((dimension, dimension))
    for powers, weight in zip(expansion.powers_, classifier.coef_[0]):
        features = np.flatnonzero(powers)
        if powers.sum() == 1:
            linear[features[0]] = weight
        elif features.size == 1:
            quadratic[features[0], features[0]] = weight
        else:
            quadratic[features[0], features[1]] = weight
    return QuadraticLogisticModel(
        classifier.intercept_[0], linear, quadratic, lower, width
    )


def fit_trust(context,
              n_baseline: int = None,
              seed: int = 0,
              beta: float = 0.0,
              regularization: float = 1.0,
              baseline=None) -> TrustRegion:
    """
    Fit the density ratio of the context against uniform draws over its
    bounding box.

    The classifier is a logistic regression on the degree two monomials of
    the coordinates normalized to the box.

    :param context: ``(n, d)`` context points.
    :param n_baseline: Number of uniform draws, the context size by
        default.
    :param seed: Seed of the uniform draws.
    :param beta: Trust threshold of the region.
    :param regularization: Inverse of the logistic regression ``C``.
    :param baseline: Use these points instead of uniform draws.
    """
    context = np.atleast_2d(np.asarray(context, dtype=float))
    count, dimension = context.shape
    if count < 2:
        raise InputError('A trust region needs at least two context points')
    lower = context.min(axis=0)
    upper = context.max(axis=0)
    if np.all(upper == lower):
        raise DegenerateHullError('Every context point is identical')
    width = np.where(upper > lower, upper - lower, 1.0)

    if baseline is None:
        n_baseline = count if not n_baseline else int(n_baseline)
        if n_baseline < 1:
            raise ParameterError('At least one baseline draw is needed')
        baseline = rng(seed, 'trust-baseline').uniform(
            lower, upper, size=(n_baseline, dimension)
        )
    else:
        baseline = np.atleast_2d(np.asarray(baseline, dtype=float))
        n_baseline = baseline.shape[0]

    expansion = PolynomialFeatures(degree=2, include_bias=False)
    samples = expansion.fit_transform(
        (np.concatenate([context, baseline]) - lower) / width
    )
    labels = np.concatenate([np.ones(count), np.zeros(n_baseline)])
    classifier = LogisticRegression(C=1 / regularization, max_iter=1000)
    classifier.fit(samples, labels)
    logger.debug(
        'Trust classifier fitted in %d iterations', classifier.n_iter_[0]
    )

    return TrustRegion(
        _classifier_model(classifier, expansion, lower, width),
        count, n_baseline, beta, lower, upper,
    )


def apply_trust(report: EscapeReport, region: TrustRegion, x0,
                iterations: int = 50) -> EscapeReport:
    """
    Set to ``inf`` every finite escape distance whose path leaves the
    trustworthy region strictly before it escapes.

    :param report: Escape distances, standardized scale.
    :param region: The trustworthy region, original scale.
    :param x0: The target, original scale.
    :raise UntrustedTargetError: The target is outside of the region.
    """
    x0 = np.asarray(x0, dtype=float)
    if not region.contains(x0)[0]:
        raise UntrustedTargetError(
            f'The target has a density ratio of {region.ratio(x0)[0]!r},'
            f' below beta = {region.beta!r}'
        )
    dimension = report.dimension
    scales = np.asarray(report.feature_scales, dtype=float)
    axes = np.eye(dimension)
    directions = np.concatenate([axes, -axes])
    horizons = np.concatenate(report.original())
    searched = np.flatnonzero(np.isfinite(horizons) & (horizons > 0))

    overridden = np.zeros(2 * dimension, dtype=bool)
    if searched.size:
        bracket = scan_first_exit(
            region.contains,
            x0,
            directions[searched],
            horizons[searched],
            SCAN_START * np.concatenate([scales, scales])[searched],
            iterations,
        )
        overridden[searched] = bracket.high < horizons[searched]

    if overridden.any():
        logger.info(
            'Trust region overrides %d escape distances', overridden.sum()
        )
    return report.override(overridden[:dimension], overridden[dimension:])


def dumps_trust(region: TrustRegion) -> str:
    model = region.model
    document = tomlkit.document()
    document.add(tomlkit.comment(
        'r(x) = exp(logit(x)) * n_baseline / n_context, trusted if >= beta'
    ))
    document['beta'] = region.beta
    document['n_context'] = region.n_context
    document['n_baseline'] = region.n_baseline
    document['lower'] = region.lower.tolist()
    document['upper'] = region.upper.tolist()
    logit = tomlkit.table()
    for key, value in model.describe().items():
        logit[key] = value
    document['logit'] = logit
    return tomlkit.dumps(document)


def loads_trust(text: str) -> TrustRegion:
    try:
        data = tomlkit.parse(text).unwrap()
        return TrustRegion(
            QuadraticLogisticModel.from_description(data['logit']),
            data['n_context'],
            data['n_baseline'],
            data['beta'],
            data['lower'],
            data['upper'],
        )
    except (TOMLKitError, KeyError, TypeError, ParameterError) as err:
        raise InputError(f'Invalid trust region file: {err}') from err


def dump_trust(region: TrustRegion, path):
    pathlib.Path(path).write_text(dumps_trust(region), encoding='utf-8')


def load_trust(path) -> TrustRegion:
    return loads_trust(pathlib.Path(path).read_text(encoding='utf-8'))
