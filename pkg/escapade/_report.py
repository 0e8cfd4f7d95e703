"""
Explanation reports, JSON documents describing the escape distances of
every feature on both scales.

Infinite distances are written as the string ``"inf"`` next to the reason
they are infinite. Reports hold no timestamp so identical runs write
identical files.
"""
import pathlib
import typing

import numpy as np

from ._baselines import ImportanceScores
from ._engine import Explanation
from ._polytope import EscapeReport
from ._tools import dumps_json

__all__ = [
    'REPORT_VERSION',
    'escape_entries',
    'build_report',
    'write_report',
]

REPORT_VERSION = 1


def _number(value):
    value = float(value)
    if np.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


def _reason(reason):
    return None if reason is None else str(reason)


def escape_entries(report: EscapeReport,
                   names: typing.Sequence[str]) -> typing.List[dict]:
    """One entry per feature with its distances on both scales."""
    plus_original, minus_original = report.original()
    magnitude = report.magnitude
    entries = []
    for j, name in enumerate(names):
        entries.append({
            'index': j,
            'name': name,
            'direction': str(report.directions[j]),
            'standardized': {
                'plus': _number(report.s_plus[j]),
                'minus': _number(report.s_minus[j]),
                'magnitude': _number(magnitude[j]),
            },
            'original': {
                'plus': _number(plus_original[j]),
                'minus': _number(minus_original[j]),
                'magnitude': _number(magnitude[j] * report.feature_scales[j]),
            },
            'plus_reason': _reason(report.reasons_plus[j]),
            'minus_reason': _reason(report.reasons_minus[j]),
        })
    return entries


def _escape_section(report: EscapeReport, names):
    section = {
        'features': escape_entries(report, names),
        'ranking': [names[j] for j in report.ranking],
    }
    if report.horizon is not None:
        section['horizon'] = _number(report.horizon)
    return section


def build_report(explanation: Explanation,
                 names: typing.Sequence[str] = None,
                 simple: EscapeReport = None,
                 gradient: ImportanceScores = None,
                 trust: dict = None) -> dict:
    """
    :param explanation: The polytope explanation, trust overrides included.
    :param names: Feature names, ``x0``, ``x1``... by default.
    :param simple: Simple escape distances.
    :param gradient: Gradient scores at the target.
    :param trust: Trust region summary, ``beta`` and target ratio.
    """
    dimension = explanation.target.size
    if names is None:
        names = [f'x{j}' for j in range(dimension)]
    names = list(names)
    spec = explanation.closeness
    diagnostics = explanation.diagnostics

    report = {
        'version': REPORT_VERSION,
        'target': {
            name: float(value)
            for name, value in zip(names, explanation.target)
        },
        'prediction': spec.f0,
        'closeness': {
            'eps_lo': _number(spec.eps_lo),
            'eps_hi': _number(spec.eps_hi),
            'lower': _number(spec.lower),
            'upper': _number(spec.upper),
        },
        'feature_scales': {
            name: float(value)
            for name, value in zip(names, explanation.feature_scales)
        },
        'polytope': _escape_section(explanation.escape, names),
        'diagnostics': {
            'halfspaces': diagnostics.iterations,
            'context_points': diagnostics.context_total,
            'eps_far': diagnostics.eps_far,
            'removed_per_iteration': list(diagnostics.removed_per_iteration),
            'degenerate': list(diagnostics.degenerate),
            'rejected': list(diagnostics.rejected),
            'support_vectors': [
                p.original_index for p in explanation.support_vectors
            ],
            'queries': diagnostics.queries,
        },
    }
    if trust is not None:
        report['trust'] = trust
    if simple is not None:
        report['simple_escape'] = _escape_section(simple, names)
    if gradient is not None:
        report['gradient'] = {
            name: float(value)
            for name, value in zip(names, gradient.values)
        }
    return report


def write_report(report: dict, path):
    pathlib.Path(path).write_text(dumps_json(report), encoding='utf-8')
