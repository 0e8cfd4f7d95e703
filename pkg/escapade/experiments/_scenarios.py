"""
Synthetic scenarios with known locally relevant features.

Features ``0..8`` are independent standard gaussians, feature ``9`` is an
equal mixture of ``N(3, 1)`` and ``N(-3, 1)``. Each scenario gives the
probability of a positive response and the features it depends on at a
point.
"""
import typing
from enum import auto

import numpy as np
from scipy.special import expit

from .._tools import AutoNameEnum
from ..errors import InputError, ModelDescriptionError
from ..models import BuiltinModel, register_variant

__all__ = [
    'DIMENSION',
    'Scenario',
    'bayes_predict',
    'switch_weight',
    'relevant_features',
    'possibly_relevant',
    'relevant_count',
    'generate_features',
    'BayesScenarioModel',
]

DIMENSION = 10
SWITCH = 9
MIXTURE_MEAN = 3.0

ORANGE_BLOCK = (0, 1, 2, 3)
ADDITIVE_BLOCK = (4, 5, 6, 7)


class Scenario(AutoNameEnum):
    XOR = auto()
    ORANGE_SKIN = auto()
    NONLINEAR_ADDITIVE = auto()
    SWITCH = auto()


def _orange_skin(points, block):
    total = np.zeros(points.shape[0])
    for j in block:
        total += np.square(points[:, j])
    return expit(4 - total)


def _nonlinear_additive(points, block):
    first, second, third, fourth = block
    return expit(
        100 * np.sin(2 * points[:, first])
        - 2 * np.abs(points[:, second])
        - points[:, third]
        - np.exp(-points[:, fourth])
    )


def _xor(points, literal):
    product = points[:, 0] * points[:, 1]
    if literal:
        with np.errstate(divide='ignore', invalid='ignore'):
            return 1 / (1 + product)
    return expit(-product)


def switch_weight(x10) -> np.ndarray:
    """
    Posterior probability that the switch feature comes from ``N(3, 1)``,
    ``expit(6 * x10)`` once the gaussian densities are simplified.
    """
    return expit(2 * MIXTURE_MEAN * np.asarray(x10, dtype=float))


def bayes_predict(scenario: Scenario, points,
                  literal_xor: bool = False) -> np.ndarray:
    """
    Probability of a positive response at every point.

    :param scenario: The scenario.
    :param points: ``(n, 10)`` points.
    :param literal_xor: Evaluate ``1 / (1 + x1 x2)`` instead of
        ``1 / (1 + exp(x1 x2))``, the former is singular on ``x1 x2 = -1``.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != DIMENSION:
        raise InputError(f'Scenario points have {DIMENSION} features')
    scenario = Scenario(scenario)
    if scenario is Scenario.XOR:
        return _xor(points, literal_xor)
    if scenario is Scenario.ORANGE_SKIN:
        return _orange_skin(points, ORANGE_BLOCK)
    if scenario is Scenario.NONLINEAR_ADDITIVE:
        return _nonlinear_additive(points, ORANGE_BLOCK)
    weight = switch_weight(points[:, SWITCH])
    return (
        _orange_skin(points, ORANGE_BLOCK) * weight
        + _nonlinear_additive(points, ADDITIVE_BLOCK) * (1 - weight)
    )


def relevant_features(scenario: Scenario, x,
                      literal_switch: bool = False) -> typing.Tuple[int, ...]:
    """
    The features the prediction depends on locally at ``x``.

    :param literal_switch: Use the index sets as literally stated for the
        switch scenario, ``4..8`` when the switch is non negative and
        ``0..3, 8`` otherwise.
    """
    scenario = Scenario(scenario)
    if scenario is Scenario.XOR:
        return (0, 1)
    if scenario in (Scenario.ORANGE_SKIN, Scenario.NONLINEAR_ADDITIVE):
        return ORANGE_BLOCK
    positive = x[SWITCH] >= 0
    if literal_switch:
        return (4, 5, 6, 7, 8) if positive else (0, 1, 2, 3, 8)
    block = ORANGE_BLOCK if positive else ADDITIVE_BLOCK
    return tuple(sorted(block + (SWITCH,)))


def relevant_count(scenario: Scenario) -> int:
    return {
        Scenario.XOR: 2,
        Scenario.ORANGE_SKIN: 4,
        Scenario.NONLINEAR_ADDITIVE: 4,
        Scenario.SWITCH: 5,
    }[Scenario(scenario)]


def possibly_relevant(scenario: Scenario) -> typing.Tuple[int, ...]:
    """Every feature the scenario reads anywhere."""
    scenario = Scenario(scenario)
    if scenario is Scenario.XOR:
        return (0, 1)
    if scenario is Scenario.SWITCH:
        return ORANGE_BLOCK + ADDITIVE_BLOCK + (SWITCH,)
    return ORANGE_BLOCK


def generate_features(count: int, generator: np.random.Generator
                      ) -> np.ndarray:
    """``count`` draws of the scenario features."""
    points = generator.standard_normal((count, DIMENSION))
    signs = np.where(generator.random(count) < 0.5, 1.0, -1.0)
    points[:, SWITCH] += MIXTURE_MEAN * signs
    return points


@register_variant
class BayesScenarioModel(BuiltinModel):
    """The probability of a positive response of a scenario."""
    variant = 'bayes-scenario'

    def __init__(self, scenario: Scenario, literal_xor: bool = False):
        try:
            self.scenario = Scenario(scenario)
        except ValueError as err:
            raise ModelDescriptionError(
                f'Unknown scenario {scenario!r}'
            ) from err
        self.literal_xor = bool(literal_xor)
        super().__init__(DIMENSION, possibly_relevant(self.scenario))

    def evaluate(self, points):
        return bayes_predict(self.scenario, points, self.literal_xor)

    def describe(self):
        return {
            'scenario': str(self.scenario),
            'literal_xor': self.literal_xor,
        }

    @classmethod
    def from_description(cls, data):
        try:
            scenario = data['scenario']
        except KeyError as err:
            raise ModelDescriptionError('Missing key "scenario"') from err
        return cls(scenario, data.get('literal_xor', False))
