"""
Polytopes as intersections of halfspaces ``{x : x . normal <= intercept}``
and the escape distances of the target along each feature axis.
"""
import math
import pathlib
import typing
from enum import Enum, auto

import numpy as np
import tomlkit
from tomlkit.exceptions import TOMLKitError

from ._immutable import ImmutableDict, freeze
from ._tools import AutoNameEnum, rng
from .errors import InputError, ParameterError, PreconditionError

__all__ = [
    'STRICT_TOLERANCE',
    'Halfspace',
    'Polytope',
    'Direction',
    'InfiniteReason',
    'EscapeReport',
    'contains',
    'ray_exit',
    'escape_report',
    'dump_polytope',
    'dumps_polytope',
    'load_polytope',
    'loads_polytope',
]

STRICT_TOLERANCE = 1e-12


def project(normals: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    ``normals . point`` for every normal and point, ``(k, n)``.

    Each product is summed over its own row so a value never depends on
    the other rows of the batch.
    """
    return (normals[:, np.newaxis, :] * points[np.newaxis, :, :]).sum(axis=2)


def slack(intercepts):
    return STRICT_TOLERANCE * (1 + np.abs(intercepts))


class Halfspace(ImmutableDict):
    def __init__(self, normal, intercept: float):
        normal = freeze(normal)
        if normal.ndim != 1 or not np.any(normal):
            raise ParameterError('A halfspace needs a non zero normal')
        if not np.all(np.isfinite(normal)) or not math.isfinite(intercept):
            raise ParameterError('Halfspaces must be finite')
        super().__init__(normal=normal, intercept=float(intercept))

    @classmethod
    def through(cls, point, normal) -> 'Halfspace':
        """The halfspace whose boundary passes through ``point``."""
        normal = np.asarray(normal, dtype=float)
        point = np.asarray(point, dtype=float)
        intercept = project(normal[np.newaxis], point[np.newaxis])[0, 0]
        return cls(normal, intercept)


class Polytope(ImmutableDict):
    """
    Intersection of ``halfspaces``, the whole space when there is none.

    :param halfspaces: Constraints in construction order.
    :param center: The explained target.
    :param feature_scales: Scale of every feature, ones by default.
    """
    def __init__(self,
                 halfspaces: typing.Sequence[Halfspace],
                 center,
                 feature_scales=None):
        center = freeze(center)
        halfspaces = tuple(halfspaces)
        for halfspace in halfspaces:
            if halfspace.normal.shape != center.shape:
                raise ParameterError('Halfspace and center dimensions differ')
        if feature_scales is None:
            feature_scales = np.ones(center.size)
        super().__init__(
            halfspaces=halfspaces,
            center=center,
            feature_scales=freeze(feature_scales),
        )

    @property
    def dimension(self) -> int:
        return self.center.size

    @property
    def normals(self) -> np.ndarray:
        if not self.halfspaces:
            return np.zeros((0, self.dimension))
        return np.array([h.normal for h in self.halfspaces])

    @property
    def intercepts(self) -> np.ndarray:
        return np.array([h.intercept for h in self.halfspaces], dtype=float)

    def contains_batch(self, points, strict: bool = False) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.halfspaces:
            return np.ones(points.shape[0], dtype=bool)
        values = project(self.normals, points)
        intercepts = self.intercepts[:, np.newaxis]
        if strict:
            inside = values < intercepts - slack(intercepts)
        else:
            inside = values <= intercepts
        return inside.all(axis=0)

    def with_halfspace(self, halfspace: Halfspace) -> 'Polytope':
        return self.replace(halfspaces=self.halfspaces + (halfspace,))


def contains(polytope: Polytope, x, strict: bool = False) -> bool:
    """
    Membership of ``x``, ``strict`` tests the interior of every halfspace
    with a margin of ``STRICT_TOLERANCE * (1 + |intercept|)``.
    """
    return bool(polytope.contains_batch(x, strict)[0])


def ray_exit(polytope: Polytope, origin, direction) -> float:
    """
    Step ``a`` where ``origin + a * direction`` leaves the polytope,
    ``inf`` when no halfspace bounds the ray.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if not contains(polytope, origin):
        raise PreconditionError('The ray origin is outside of the polytope')
    if not polytope.halfspaces:
        return math.inf
    normals = polytope.normals
    rates = project(normals, direction[np.newaxis])[:, 0]
    room = polytope.intercepts - project(normals, origin[np.newaxis])[:, 0]
    bounded = rates > 0
    if not bounded.any():
        return math.inf
    return float(np.min(room[bounded] / rates[bounded]))


class Direction(Enum):
    PLUS = '+'
    MINUS = '-'
    TIE = 'tie'
    NONE = 'none'

    def __str__(self):
        return self.value


class InfiniteReason(AutoNameEnum):
    NO_CONSTRAINT = auto()
    TRUST_OVERRIDE = auto()
    HORIZON_EXHAUSTED = auto()


def _reasons(values, reasons, default):
    if reasons is None:
        reasons = [None] * len(values)
    return tuple(
        (reason or default) if math.isinf(value) else None
        for value, reason in zip(values, reasons)
    )


class EscapeReport(ImmutableDict):
    """
    Escape distances of every feature on the standardized scale.

    ``s_plus[j]`` is the step along ``+e_j`` leaving the region and
    ``s_minus[j]`` along ``-e_j``. Infinite distances come with the reason
    they are infinite. A feature matters more the smaller its magnitude,
    features escaping on neither side have no importance.

    :param feature_scales: Multiply a standardized distance by its feature
        scale to get it on the original scale.
    :param seed: Seed of the random ranking of equal magnitudes.
    :param horizon: Largest step searched when the distances come from a
        bounded search.
    """
    def __init__(self,
                 s_plus,
                 s_minus,
                 feature_scales,
                 reasons_plus=None,
                 reasons_minus=None,
                 seed: int = 0,
                 horizon: float = None,
                 default_reason=InfiniteReason.NO_CONSTRAINT):
        s_plus = freeze(s_plus)
        s_minus = freeze(s_minus)
        if s_plus.shape != s_minus.shape or np.any(s_plus < 0) \
                or np.any(s_minus < 0):
            raise ParameterError('Escape distances must be non negative')
        super().__init__(
            s_plus=s_plus,
            s_minus=s_minus,
            feature_scales=freeze(feature_scales),
            reasons_plus=_reasons(s_plus, reasons_plus, default_reason),
            reasons_minus=_reasons(s_minus, reasons_minus, default_reason),
            seed=int(seed),
            horizon=horizon,
            default_reason=default_reason,
        )

    @property
    def dimension(self) -> int:
        return self.s_plus.size

    @property
    def magnitude(self) -> np.ndarray:
        return np.minimum(self.s_plus, self.s_minus)

    @property
    def important(self) -> np.ndarray:
        return np.isfinite(self.magnitude)

    @property
    def directions(self) -> typing.Tuple[Direction, ...]:
        directions = []
        for plus, minus in zip(self.s_plus, self.s_minus):
            if math.isinf(plus) and math.isinf(minus):
                directions.append(Direction.NONE)
            elif plus < minus:
                directions.append(Direction.PLUS)
            elif minus < plus:
                directions.append(Direction.MINUS)
            else:
                directions.append(Direction.TIE)
        return tuple(directions)

    @property
    def ranking(self) -> typing.Tuple[int, ...]:
        """
        Features with importance, by increasing magnitude, equal
        magnitudes in a random order drawn from ``seed``.
        """
        magnitude = self.magnitude
        ties = rng(self.seed, 'ranking').random(self.dimension)
        order = np.lexsort((ties, magnitude))
        return tuple(int(j) for j in order if np.isfinite(magnitude[j]))

    def original(self) -> typing.Tuple[np.ndarray, np.ndarray]:
        """``(s_plus, s_minus)`` on the original feature scales."""
        return (
            self.s_plus * self.feature_scales,
            self.s_minus * self.feature_scales,
        )

    def override(self, plus_mask, minus_mask,
                 reason: InfiniteReason = InfiniteReason.TRUST_OVERRIDE
                 ) -> 'EscapeReport':
        """Copy with the masked distances set to ``inf``."""
        s_plus = np.where(plus_mask, np.inf, self.s_plus)
        s_minus = np.where(minus_mask, np.inf, self.s_minus)
        reasons_plus = [
            reason if mask and math.isfinite(value) else previous
            for mask, value, previous in zip(
                plus_mask, self.s_plus, self.reasons_plus
            )
        ]
        reasons_minus = [
            reason if mask and math.isfinite(value) else previous
            for mask, value, previous in zip(
                minus_mask, self.s_minus, self.reasons_minus
            )
        ]
        return self.replace(
            s_plus=s_plus, s_minus=s_minus,
            reasons_plus=reasons_plus, reasons_minus=reasons_minus,
        )


def escape_report(polytope: Polytope, x0, feature_scales=None,
                  seed: int = 0) -> EscapeReport:
    """Escape distances of ``x0`` along both directions of every axis."""
    x0 = np.asarray(x0, dtype=float)
    if feature_scales is None:
        feature_scales = polytope.feature_scales
    s_plus = []
    s_minus = []
    for axis in np.eye(x0.size):
        s_plus.append(ray_exit(polytope, x0, axis))
        s_minus.append(ray_exit(polytope, x0, -axis))
    return EscapeReport(s_plus, s_minus, feature_scales, seed=seed)


def dumps_polytope(polytope: Polytope) -> str:
    document = tomlkit.document()
    document.add(tomlkit.comment('Polytope {x : x . normal <= intercept}'))
    document['dimension'] = polytope.dimension
    document['center'] = polytope.center.tolist()
    document['feature_scales'] = polytope.feature_scales.tolist()
    halfspaces = tomlkit.aot()
    for halfspace in polytope.halfspaces:
        table = tomlkit.table()
        table['normal'] = halfspace.normal.tolist()
        table['intercept'] = halfspace.intercept
        halfspaces.append(table)
    document['halfspaces'] = halfspaces
    return tomlkit.dumps(document)


def loads_polytope(text: str) -> Polytope:
    try:
        data = tomlkit.parse(text).unwrap()
        halfspaces = [
            Halfspace(h['normal'], h['intercept'])
            for h in data.get('halfspaces', [])
        ]
        return Polytope(
            halfspaces, data['center'], data.get('feature_scales')
        )
    except (TOMLKitError, KeyError, TypeError, ParameterError) as err:
        raise InputError(f'Invalid polytope file: {err}') from err


def dump_polytope(polytope: Polytope, path):
    pathlib.Path(path).write_text(dumps_polytope(polytope), encoding='utf-8')


def load_polytope(path) -> Polytope:
    return loads_polytope(pathlib.Path(path).read_text(encoding='utf-8'))
