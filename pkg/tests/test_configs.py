import json

import pytest
from ruamel.yaml import YAML

from escapade import (
    Application, Command, Argument, Config, ConfigProperty, Nestable,
    ConfigFormat, EscapadeConfig
)
from escapade.errors import ConfigError


class RunConfig(Config):
    """Settings of a sample run."""
    label = ConfigProperty(
        comment='Name shown in the report.',
        config_type=str,
        auto_environ=True,
    )
    title = ConfigProperty(default='untitled', auto_environ=True)
    rounds = ConfigProperty(default=10, auto_environ=True)
    ratio = ConfigProperty(
        default=0.75,
        comment='Share of the context kept.',
        auto_environ=True,
    )
    weights = ConfigProperty(default=[1, 2, 3])
    max_calls = ConfigProperty(
        default=333, auto_global=True, comment='Model calls allowed.'
    )

    class Search(Nestable):
        """Search section."""
        strategy = ConfigProperty(default='bisect', comment='How to search.')

        class Refine(Nestable):
            """Refinement subsection."""
            tolerance = ConfigProperty(
                default=0.01, comment='Stop under this width.'
            )


DEFAULTS = {
    'title': 'untitled',
    'rounds': 10,
    'ratio': 0.75,
    'weights': [1, 2, 3],
}

UPDATES = {
    'label': 'second run',
    'title': 'xor',
    'rounds': 22,
    'ratio': 0.5,
    'weights': [5, 4, 5],
    'search': {
        'strategy': 'polytope',
        'refine': {'tolerance': 0.125},
    },
}

SCALARS = [
    (k, v) for k, v in UPDATES.items() if not isinstance(v, (dict, list))
]

COMMENTS = (
    'Settings of a sample run.', 'Name shown in the report.',
    'Share of the context kept.', 'Search section.', 'How to search.',
    'Refinement subsection.', 'Stop under this width.',
)


class RunCli(Application):
    config_class = RunConfig
    result = None

    def __init__(self, **kwargs):
        kwargs.setdefault('config_file', ['run.toml', 'run.yml'])
        kwargs.setdefault('add_dump_config_command', True)
        super().__init__(**kwargs)

    @Command(Argument('name'))
    async def show(self, name):
        self.result = getattr(self.config, name)
        return 0


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def updated():
    config = RunConfig()
    config.read_dict(UPDATES)
    return config


def test_defaults():
    config = RunConfig()

    assert config.label is None
    assert config.search.strategy == 'bisect'
    assert config.search.refine.tolerance == 0.01
    for name, value in DEFAULTS.items():
        assert getattr(config, name) == value


def test_read_dict(updated):
    assert updated.label == 'second run'
    assert updated.weights == [5, 4, 5]
    assert updated.search.refine.tolerance == 0.125


def test_mapping_access(updated):
    assert updated['search']['strategy'] == 'polytope'
    assert updated.search['refine']['tolerance'] == 0.125
    assert list(updated.search) == ['strategy', 'refine']
    with pytest.raises(KeyError):
        # pylint: disable=pointless-statement
        updated['missing']


def test_read_dict_ignores_unknown_keys():
    config = RunConfig()
    config.read_dict({'unknown': 1, 'search': {'other': 2}})

    assert config.to_dict()['search']['strategy'] == 'bisect'


def test_section_must_be_a_table():
    with pytest.raises(ConfigError):
        RunConfig().read_dict({'search': 'polytope'})


def test_set_values():
    config = RunConfig()
    config.label = 'set'
    config.search.refine.tolerance = 0.5

    assert config.label == 'set'
    assert config.search.refine.tolerance == 0.5
    assert config.get_root() is config
    assert config.search.refine.get_root() is config


def test_instances_are_independent():
    first, second = RunConfig(), RunConfig()
    first.label = 'first'
    second.search.strategy = 'gradient'
    first.search.refine.tolerance = 1.0

    assert second.label is None
    assert first.search.strategy == 'bisect'
    assert second.search.refine.tolerance == 0.01


def test_properties_paths():
    paths = {path: value for path, _, value in RunConfig().properties()}

    assert paths[('search', 'refine', 'tolerance')] == 0.01
    assert paths[('rounds',)] == 10
    assert ('search',) not in paths


@pytest.mark.parametrize('config_format', [
    ConfigFormat.TOML, ConfigFormat.YML
])
def test_save_keeps_comments(tmp_path, updated, config_format):
    path = tmp_path / f'run.{config_format}'
    updated.save(str(path))

    text = path.read_text()
    for comment in COMMENTS:
        assert comment in text

    loaded = RunConfig()
    loaded.read_file(str(path))
    assert loaded.to_dict() == updated.to_dict()


def test_save_json(tmp_path):
    path = tmp_path / 'run.json'
    RunConfig(config_format=ConfigFormat.JSON).save(str(path))

    data = json.loads(path.read_text())

    assert data['search']['refine']['tolerance'] == 0.01
    assert data['label'] is None


def test_unset_value_commented_out(tmp_path):
    path = tmp_path / 'run.toml'
    config = RunConfig()
    config.save(str(path))

    assert 'label = # Uncomment to use' in path.read_text()

    config.label = 'kept'
    config.read_file(str(path))
    assert config.label == 'kept'


@pytest.mark.parametrize('name', ['run.ini', 'run'])
def test_unknown_extension(tmp_path, name):
    with pytest.raises(ConfigError):
        RunConfig().read_file(str(tmp_path / name))


def test_invalid_file(tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('rounds = = 1\n')

    with pytest.raises(ConfigError):
        RunConfig().read_file(str(path))


@pytest.mark.parametrize('name, value', SCALARS)
def test_environ(monkeypatch, name, value):
    monkeypatch.setenv(f'ESCAPADE_{name.upper()}', str(value))

    assert getattr(RunConfig(), name) == value


def test_environ_bad_type(monkeypatch):
    monkeypatch.setenv('ESCAPADE_ROUNDS', 'twelve')

    with pytest.raises(ConfigError):
        # pylint: disable=pointless-statement
        RunConfig().rounds


@pytest.mark.parametrize('name, value', list(DEFAULTS.items()))
def test_cli_defaults(workdir, name, value):
    cli = RunCli()
    cli.start(['--quiet', 'show', name])

    assert cli.result == value


@pytest.mark.parametrize('filename', ['run.toml', 'run.yml'])
@pytest.mark.parametrize('name, value', SCALARS)
def test_cli_reads_config_file(workdir, updated, filename, name, value):
    updated.save(filename)

    cli = RunCli()
    cli.start(['--quiet', 'show', name])

    assert cli.result == value


def test_cli_config_file_argument(workdir, updated):
    updated.save('custom.yml')

    cli = RunCli()
    cli.start(['--quiet', '--config-file', 'custom.yml', 'show', 'title'])

    assert cli.result == 'xor'


def test_cli_auto_global(workdir):
    cli = RunCli()
    cli.start(['--quiet', '--max-calls=77', 'show', 'max_calls'])

    assert cli.result == 77


def test_cli_dump_config(workdir, updated):
    updated.save('run.toml')

    cli = RunCli()
    assert cli.start(['--quiet', 'dump-config', 'out/dumped.yml']) == 0

    data = YAML(typ='rt').load((workdir / 'out' / 'dumped.yml').read_text())
    assert data['title'] == 'xor'
    assert data['search']['refine']['tolerance'] == 0.125


def test_precedence(tmp_path):
    config = RunConfig()
    config._app = RunCli()

    config.label = 'set'
    config.read_dict({'label': 'read'})
    assert config.label == 'read'

    other = RunConfig()
    other.title = 'from file'
    other.search.refine.tolerance = 4
    path = str(tmp_path / 'run.toml')
    other.save(path)
    config.read_file(path)

    assert config.title == 'from file'
    assert config.label == 'read'
    assert config.search.refine.tolerance == 4.0

    config._app.cli.globals = {'max_calls': 555}
    config.max_calls = 111
    assert config.max_calls == 555

    config._app.cli.globals = {'max_calls': 333}
    assert config.max_calls == 111


def test_escapade_config_defaults():
    cfg = EscapadeConfig()

    assert cfg.seed == 0
    assert cfg.gradient.delta == 0.1
    assert cfg.gradient.jitter_radius == 0.01
    assert cfg.gradient.jitter_samples == 10
    assert cfg.line_search.iterations == 50
    assert cfg.engine.max_splits == 0
    assert cfg.engine.std_convention == 'population'
    assert cfg.experiment.n_targets == 200
    assert cfg.experiment.n_context == 1000


def test_partial_section_keeps_defaults():
    cfg = EscapadeConfig()
    cfg.read_dict({'gradient': {'delta': 0.5}})

    assert cfg.gradient.delta == 0.5
    assert cfg.gradient.jitter_samples == 10


def test_escapade_explainer_config():
    cfg = EscapadeConfig()
    cfg.read_dict({
        'seed': 4,
        'gradient': {'delta': 0.25},
        'engine': {'max_splits': 3, 'std_convention': 'sample'},
        'line_search': {'iterations': 20},
    })

    config = cfg.explainer_config(boundary=0.5)

    assert config.boundary == 0.5
    assert config.eps_lo is None
    assert config.max_splits == 3
    assert config.iterations == 20
    assert config.seed == 4
    assert config.std_convention == 'sample'
    assert config.gradient_params.delta == 0.25
    assert config.gradient_params.seed == 4


def test_escapade_unlimited_splits():
    config = EscapadeConfig().explainer_config(eps_lo=0.1, eps_hi=0.1)

    assert config.max_splits is None


def test_escapade_seed_environ(monkeypatch):
    monkeypatch.setenv('ESCAPADE_SEED', '12')

    assert EscapadeConfig().seed == 12
