from ._version import __version__  # noqa: F401
from ._cli import Command, Argument, OneOf  # noqa: F401
from ._application import Application  # noqa: F401
from ._tools import AutoNameEnum  # noqa: F401
from ._immutable import (  # noqa: F401
    ImmutableProp, ImmutableDict, ImmutableMeta
)
from ._configs import (  # noqa: F401
    ConfigProperty, Config, ConfigFormat, Nestable
)
from ._executor import AsyncExecutor  # noqa: F401
from ._closeness import (  # noqa: F401
    ClosenessSpec, ShrunkenPoint, Side, is_eps_close, from_decision_boundary,
    line_search, shrink_points
)
from ._gradient import GradientParams, estimate_grad  # noqa: F401
from ._polytope import (  # noqa: F401
    Halfspace, Polytope, EscapeReport, Direction, InfiniteReason, contains,
    ray_exit, escape_report, dump_polytope, load_polytope
)
from ._engine import (  # noqa: F401
    ExplainerConfig, Explanation, Diagnostics, standardize, fit
)
from ._baselines import (  # noqa: F401
    Method, ImportanceScores, simple_escape, gradient_importance,
    select_top_m, default_horizon
)
from ._trust import (  # noqa: F401
    TrustRegion, fit_trust, apply_trust, dump_trust, load_trust
)
from ._report import build_report, write_report  # noqa: F401
from ._settings import EscapadeConfig  # noqa: F401
from ._escapade import Escapade, RunConfig, cli  # noqa: F401
from . import models, experiments  # noqa: F401


__all__ = [
    '__version__',
    'Command',
    'Argument',
    'OneOf',
    'Application',
    'AutoNameEnum',
    'ImmutableDict',
    'ImmutableMeta',
    'ImmutableProp',
    'ConfigProperty',
    'Config',
    'ConfigFormat',
    'Nestable',
    'AsyncExecutor',
    'ClosenessSpec',
    'ShrunkenPoint',
    'Side',
    'is_eps_close',
    'from_decision_boundary',
    'line_search',
    'shrink_points',
    'GradientParams',
    'estimate_grad',
    'Halfspace',
    'Polytope',
    'EscapeReport',
    'Direction',
    'InfiniteReason',
    'contains',
    'ray_exit',
    'escape_report',
    'dump_polytope',
    'load_polytope',
    'ExplainerConfig',
    'Explanation',
    'Diagnostics',
    'standardize',
    'fit',
    'Method',
    'ImportanceScores',
    'simple_escape',
    'gradient_importance',
    'select_top_m',
    'default_horizon',
    'TrustRegion',
    'fit_trust',
    'apply_trust',
    'dump_trust',
    'load_trust',
    'build_report',
    'write_report',
    'EscapadeConfig',
    'Escapade',
    'RunConfig',
    'cli',
    'models',
    'experiments',
]
