"""The ``escapade`` command line application."""
import functools
import itertools
import math
import pathlib
import sys

import numpy as np

from ._application import Application
from ._baselines import (
    Method, default_horizon, gradient_importance, simple_escape
)
from ._cli import Argument, Command, OneOf
from ._data import parse_vector, read_context
from ._engine import fit, standardize
from ._immutable import ImmutableDict
from ._polytope import dump_polytope
from ._report import build_report, write_report
from ._settings import EscapadeConfig
from ._tools import rng
from ._trust import apply_trust, dump_trust, fit_trust
from ._version import __version__
from .console import print_table
from .errors import (
    ConfigError, DegenerateHullError, DegenerateModelError, EmptyRegionError,
    InputError, ParameterError, PreconditionError, PredictionError,
    TransportError
)
from .experiments import (
    ModelKind, Scenario, run_recovery, write_results_csv, write_summary_json
)
from .models import Predictor, RemoteConfig, load_model, remote_handshake

__all__ = [
    'RunConfig',
    'Escapade',
    'cli',
]

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_PREDICTION = 3
EXIT_EMPTY_REGION = 4

FULL_SCALE_TARGETS = 1000


class RunConfig(ImmutableDict):
    """
    Where the model, the context and the target of a run come from.

    Exactly one model source and one closeness mode are given.
    """
    def __init__(self,
                 subcommand: str,
                 model_file: str = None,
                 model_command: str = None,
                 endpoint: str = None,
                 context: str = None,
                 target_row: int = None,
                 target: str = None,
                 eps_lo: float = None,
                 eps_hi: float = None,
                 boundary: float = None,
                 beta: float = None,
                 timeout: float = 30.0,
                 cache: bool = False):
        sources = [model_file, model_command, endpoint]
        if sum(x is not None for x in sources) != 1:
            raise InputError(
                'Give exactly one of --model, --model-command or --endpoint'
            )
        if subcommand == 'explain':
            interval = eps_lo is not None or eps_hi is not None
            if interval == (boundary is not None):
                raise InputError(
                    'Give either --eps-lo and --eps-hi or --boundary'
                )
            if interval and (eps_lo is None or eps_hi is None):
                raise InputError('Both --eps-lo and --eps-hi are needed')
            if (target_row is None) == (target is None):
                raise InputError(
                    'Give exactly one of --target-row or --target'
                )
            if context is None:
                raise InputError('--context is required')
        super().__init__(
            subcommand=subcommand,
            model_file=model_file,
            model_command=model_command,
            endpoint=endpoint,
            context=context,
            target_row=target_row,
            target=target,
            eps_lo=eps_lo,
            eps_hi=eps_hi,
            boundary=boundary,
            beta=beta,
            timeout=timeout,
            cache=cache,
        )

    @property
    def closeness(self) -> dict:
        if self.boundary is not None:
            return {'boundary': self.boundary}
        return {'eps_lo': self.eps_lo, 'eps_hi': self.eps_hi}

    def open_predictor(self) -> Predictor:
        if self.model_file is not None:
            return Predictor(load_model(self.model_file), cache=self.cache)
        return remote_handshake(RemoteConfig(
            command=self.model_command,
            url=self.endpoint,
            timeout=self.timeout,
            cache=self.cache,
        ))


def exit_codes(func):
    """Log the errors of a command and turn them into exit codes."""
    @functools.wraps(func)
    async def wrapper(self, *args, **kwargs):
        try:
            return await func(self, *args, **kwargs)
        except (EmptyRegionError, DegenerateModelError) as err:
            self.logger.error(str(err))
            return EXIT_EMPTY_REGION
        except (PredictionError, TransportError) as err:
            self.logger.error(str(err))
            return EXIT_PREDICTION
        except (InputError, ConfigError, ParameterError, PreconditionError,
                DegenerateHullError) as err:
            self.logger.error(str(err))
            return EXIT_INPUT
    return wrapper


def _choices(value, enum, name):
    if value == 'all':
        return list(enum)
    try:
        return [enum(value)]
    except ValueError as err:
        choices = ', '.join(str(x) for x in enum)
        raise InputError(
            f'Unknown {name} {value!r}, expected one of {choices} or all'
        ) from err


def _distance(value):
    return 'inf' if math.isinf(value) else f'{value:.4g}'


model_arguments = (
    OneOf(
        Argument('--model', dest='model_file',
                 help='Builtin model description file.'),
        Argument('--model-command',
                 help='Command serving the model on its stdin/stdout.'),
        Argument('--endpoint', help='Url of a model served over http.'),
    ),
    Argument('--timeout', type=float, default=30.0,
             help='Seconds to wait for a remote model answer.'),
)


class Escapade(Application):
    """
    Explain predictions of black box models with escape distances.
    """
    version = __version__
    prog_name = 'escapade'
    config_class = EscapadeConfig
    config: EscapadeConfig

    def __init__(self, **kwargs):
        kwargs.setdefault('config_file', ['escapade.toml'])
        kwargs.setdefault('add_dump_config_command', True)
        super().__init__(**kwargs)

    @Command(
        *model_arguments,
        Argument('--context', help='Csv file of context points.'),
        OneOf(
            Argument('--target-row', type=int,
                     help='Row of the context file to explain.'),
            Argument('--target', help='Comma separated target to explain.'),
        ),
        Argument('--eps-lo', type=float,
                 help='Close predictions are at most this much lower.'),
        Argument('--eps-hi', type=float,
                 help='Close predictions are at most this much higher.'),
        Argument('--boundary', type=float,
                 help='Close predictions are on the same side of this'
                      ' decision boundary.'),
        Argument('--beta', type=float,
                 help='Trust threshold, untrusted escapes are ignored.'),
        Argument('--output', default='explanation',
                 help='Directory of the report files.'),
        Argument('--with-baselines', action='store_true',
                 help='Add the simple escape distances and the gradient.'),
        Argument('--cache', action='store_true',
                 help='Remember every prediction.'),
    )
    @exit_codes
    async def explain(self, model_file, model_command, endpoint, timeout,
                      context, target_row, target, eps_lo, eps_hi, boundary,
                      beta, output, with_baselines, cache):
        """Explain the prediction of a model at a target point."""
        run = RunConfig(
            'explain', model_file, model_command, endpoint, context,
            target_row, target, eps_lo, eps_hi, boundary, beta, timeout,
            cache,
        )
        names, points = read_context(run.context)
        if run.target_row is not None:
            if not 0 <= run.target_row < points.shape[0]:
                raise InputError(f'No row {run.target_row} in {run.context}')
            x0 = points[run.target_row]
        else:
            x0 = parse_vector(run.target, points.shape[1])

        config = self.config.explainer_config(**run.closeness)

        with run.open_predictor() as predictor:
            if predictor.dimension != points.shape[1]:
                raise InputError(
                    f'The model has {predictor.dimension} features, the'
                    f' context {points.shape[1]}'
                )
            explanation = await self.executor.execute(
                fit, x0, predictor, points, config
            )

            escape = explanation.escape
            simple = gradient = region = trust = None
            if with_baselines:
                simple, gradient = await self.executor.execute(
                    self._baselines, x0, predictor, points, explanation,
                    config,
                )

        if run.beta is not None:
            region = await self.executor.execute(
                fit_trust, points,
                self.config.trust.baseline_samples or None,
                self.config.seed, run.beta, self.config.trust.regularization,
            )
            escape = apply_trust(escape, region, x0, config.iterations)
            if simple is not None:
                simple = apply_trust(simple, region, x0, config.iterations)
            trust = {
                'beta': run.beta,
                'target_ratio': float(region.ratio(x0)[0]),
                'baseline_samples': region.n_baseline,
            }
        explanation = explanation.replace(escape=escape)

        directory = pathlib.Path(output)
        directory.mkdir(parents=True, exist_ok=True)
        write_report(
            build_report(explanation, names, simple, gradient, trust),
            directory / 'report.json',
        )
        dump_polytope(explanation.polytope, directory / 'polytope.toml')
        if region is not None:
            dump_trust(region, directory / 'trust.toml')

        self._print_escape(explanation.escape, names)
        self.logger.info(f'Report written to {directory}')
        return EXIT_OK

    @staticmethod
    def _baselines(x0, predictor, points, explanation, config):
        z, _, scales = standardize(points, x0, config.std_convention)
        simple = simple_escape(
            x0, predictor, explanation.closeness, scales,
            default_horizon(z), config.iterations, config.seed,
        )
        gradient = gradient_importance(
            x0, predictor, config.gradient_params, scales
        )
        return simple, gradient

    @staticmethod
    def _print_escape(escape, names):
        plus, minus = escape.original()
        rows = [
            (
                rank + 1, names[j], str(escape.directions[j]),
                _distance(escape.magnitude[j]),
                _distance(plus[j]), _distance(minus[j]),
            )
            for rank, j in enumerate(escape.ranking)
        ]
        print_table(
            rows,
            ['rank', 'feature', 'direction', 'distance', 'plus', 'minus'],
        )

    @Command(
        Argument('--scenario', default='all',
                 help='xor, orange-skin, nonlinear-additive, switch or all.'),
        Argument('--model', dest='model_kind', default='all',
                 help='bayes, knn or all.'),
        Argument('--method', default='all',
                 help='polytope, simple-escape, gradient, oracle or all.'),
        Argument('--n-targets', type=int,
                 help='Random targets per cell, from the config by'
                      ' default.'),
        Argument('--full-scale', action='store_true',
                 help=f'Run {FULL_SCALE_TARGETS} targets per cell.'),
        Argument('--n-context', type=int,
                 help='Context points per target.'),
        Argument('--n-train', type=int,
                 help='Training points of the knn models.'),
        Argument('--literal-xor', action='store_true',
                 help='Use 1 / (1 + x1 x2) for the xor scenario.'),
        Argument('--literal-switch', action='store_true',
                 help='Use the literal relevant sets of the switch'
                      ' scenario.'),
        Argument('--output-dir', default='results',
                 help='Directory of results.csv and summary.json.'),
    )
    @exit_codes
    async def experiment(self, scenario, model_kind, method, n_targets,
                         full_scale, n_context, n_train, literal_xor,
                         literal_switch, output_dir):
        """Measure how often each method finds the relevant features."""
        scenarios = _choices(scenario, Scenario, 'scenario')
        models = _choices(model_kind, ModelKind, 'model')
        methods = _choices(method, Method, 'method')

        settings = self.config.experiment
        if full_scale:
            n_targets = FULL_SCALE_TARGETS
        n_targets = n_targets or settings.n_targets
        config = self.config.explainer_config(boundary=0.5)

        cells = list(itertools.product(scenarios, models, methods))
        self.logger.info(
            f'Running {len(cells)} cells of {n_targets} targets'
        )

        def run_cell(cell):
            cell_scenario, cell_model, cell_method = cell
            return run_recovery(
                cell_scenario, cell_model, cell_method,
                n_targets=n_targets,
                seed=self.config.seed,
                config=config,
                n_context=n_context or settings.n_context,
                n_train=n_train or settings.n_train,
                knn_neighbors=settings.knn_neighbors,
                literal_xor=literal_xor,
                literal_switch=literal_switch,
            )

        results = await self.executor.map(run_cell, cells)

        directory = pathlib.Path(output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        write_results_csv(results, directory / 'results.csv')
        write_summary_json(results, directory / 'summary.json')

        print_table(
            [
                (
                    str(r.scenario), str(r.model), str(r.method),
                    f'{r.mean_recall:.3f}', r.failures,
                ) for r in results
            ],
            ['scenario', 'model', 'method', 'recall', 'failures'],
        )
        return EXIT_OK

    @Command(
        *model_arguments,
        Argument('--context', help='Csv file of points to evaluate.'),
        Argument('--reference',
                 help='Description file of the model expected remotely.'),
        Argument('--n-points', type=int, default=100,
                 help='Random points evaluated without a context file.'),
        name='serve-check',
    )
    @exit_codes
    async def serve_check(self, model_file, model_command, endpoint,
                          timeout, context, reference, n_points):
        """
        Check a remote model answers the protocol, and that it predicts
        exactly like a reference model.
        """
        run = RunConfig(
            'serve-check', model_file, model_command, endpoint, context,
            timeout=timeout,
        )
        with run.open_predictor() as predictor:
            if context is not None:
                _, points = read_context(context)
            else:
                points = rng(self.config.seed, 'serve-check') \
                    .standard_normal((n_points, predictor.dimension))
            values = await self.executor.execute(
                predictor.predict_batch, points
            )

        mismatches = 0
        if reference is not None:
            local = Predictor(load_model(reference)).predict_batch(points)
            mismatches = int(np.sum(local != values))

        print_table(
            [(predictor.dimension, points.shape[0], mismatches)],
            ['dimension', 'points', 'mismatches'],
        )
        if mismatches:
            self.logger.error(
                f'{mismatches} predictions differ from {reference}'
            )
            return EXIT_MISMATCH
        return EXIT_OK


def cli(args=None):
    sys.exit(Escapade().start(args))
