"""
Configuration classes.

A :py:class:`Config` declares :py:class:`ConfigProperty` descriptors and
:py:class:`Nestable` sections, sections are nested classes named after
their snake case key. Every value read or set lives in one nested dict on
the root config.

A property value is, by precedence: its global command line argument when
it differs from the default, its environment variable, the value set or
read from a file, its default.
"""
import abc
import collections.abc
import inspect
import io
import json
import os
import textwrap
import typing
from enum import auto

import stringcase
import tomlkit
from ruamel.yaml import YAML
from ruamel.yaml.comments import CommentedMap
from ruamel.yaml.error import YAMLError
from tomlkit.exceptions import TOMLKitError

from ._tools import AutoNameEnum
from .errors import ConfigError

__all__ = [
    'ConfigProperty',
    'Config',
    'ConfigFormat',
    'Nestable',
]

ENVIRON_PREFIX = 'ESCAPADE_'

_unset = object()


class ConfigProperty:
    def __init__(
            self,
            default=None,
            comment=None,
            config_type=None,
            environ_name=None,
            auto_environ=False,
            auto_global=False,
            global_name=None,
    ):
        """
        :param default: Value when nothing else is set.
        :param comment: Written above the value in dumped config files and
            used as help of the global argument.
        :param config_type: Type to cast the value to, default to the type
            of ``default``.
        :param environ_name: Environment variable overriding the value.
        :param auto_environ: Use ``ESCAPADE_<NAME>`` as ``environ_name``.
        :param auto_global: Add a global cli argument for this property.
        :param global_name: Name of the global argument, default to the
            property name.
        """
        self.default = default
        self.comment = comment
        if config_type is None and default is not None:
            config_type = type(default)
        self.config_type = config_type
        self.environ_name = environ_name
        self.auto_environ = auto_environ
        self.auto_global = auto_global
        self.global_name = global_name
        self.name = None

    def __set_name__(self, owner, name):
        self.name = name
        if self.environ_name is None and self.auto_environ:
            self.environ_name = f'{ENVIRON_PREFIX}{name.upper()}'
        if self.global_name is None and self.auto_global:
            self.global_name = name

    @property
    def global_key(self) -> str:
        return stringcase.snakecase(self.global_name)

    def _override(self, root):
        app = getattr(root, '_app', None)
        if self.auto_global and app is not None:
            value = app.cli.globals.get(self.global_key)
            if value is not None and value != self.default:
                return value
        if self.environ_name:
            return os.environ.get(self.environ_name, _unset)
        return _unset

    def __get__(self, instance, owner):
        if instance is None:
            return self
        value = self._override(instance.get_root())
        if value is _unset:
            value = instance.stored(self.name, self.default)
        if value is None or self.config_type is None:
            return value
        try:
            # pylint: disable=not-callable
            return self.config_type(value)
        except (TypeError, ValueError) as err:
            raise ConfigError(
                f'Expected type {self.config_type!r} for {self.name},'
                f' got {value!r}'
            ) from err

    def __set__(self, instance, value):
        instance.store(self.name, value)

    def __repr__(self):  # pragma: no cover
        return f'<ConfigProperty {self.name}>'


class _Section:
    """Class attribute giving the section instance of a config."""

    def __init__(self, key):
        self.key = key

    def __get__(self, instance, owner):
        if instance is None:
            return self
        # noinspection PyProtectedMember
        return instance._children[self.key]


class NestableMeta(abc.ABCMeta):
    # pylint: disable=arguments-differ
    def __new__(mcs, name, bases, attributes):
        props = [p for b in bases for p in getattr(b, '_props', [])]
        sections = {}
        for base in bases:
            sections.update(getattr(base, '_sections', {}))

        namespace = dict(attributes)
        for key, value in attributes.items():
            if isinstance(value, ConfigProperty):
                props.append(key)
            elif isinstance(value, NestableMeta):
                section_key = stringcase.snakecase(key)
                sections[section_key] = value
                namespace[section_key] = _Section(section_key)
                props.append(section_key)

        namespace['_props'] = props
        namespace['_sections'] = sections
        return super().__new__(mcs, name, bases, namespace)


class Nestable(collections.abc.Mapping, metaclass=NestableMeta):
    """A section of properties, nest it in a config class to use it."""
    _props: typing.List[str] = []
    _sections: typing.Dict[str, type] = {}

    def __init__(self, parent: 'Nestable' = None, key: str = None):
        self._parent = parent
        # noinspection PyProtectedMember
        self._path = () if parent is None else parent._path + (key,)
        self._children = {
            k: cls(self, k) for k, cls in self._sections.items()
        }

    def get_root(self) -> 'Config':
        node = self
        while node._parent is not None:
            node = node._parent
        return node

    def stored(self, name, default=None):
        """The value set or read for ``name``, ``default`` otherwise."""
        # noinspection PyProtectedMember
        values = self.get_root()._values
        for key in self._path:
            values = values.get(key, {})
        return values.get(name, default)

    def store(self, name, value):
        # noinspection PyProtectedMember
        values = self.get_root()._values
        for key in self._path:
            values = values.setdefault(key, {})
        values[name] = value

    def properties(self, prefix=()):
        """
        ``(path, property, value)`` of every property, sections included.
        """
        for key in self._props:
            if key in self._sections:
                yield from self._children[key].properties(prefix + (key,))
            else:
                yield prefix + (key,), getattr(type(self), key), \
                    getattr(self, key)

    def to_dict(self) -> dict:
        return {
            k: v.to_dict() if isinstance(v, Nestable) else v
            for k, v in self.items()
        }

    def __getitem__(self, key):
        if key not in self._props:
            raise KeyError(key)
        return getattr(self, key)

    def __iter__(self):
        return iter(self._props)

    def __len__(self):
        return len(self._props)


def _merge(section: Nestable, data: typing.Mapping):
    # noinspection PyProtectedMember
    for key, value in data.items():
        if key in section._sections:
            if not isinstance(value, collections.abc.Mapping):
                raise ConfigError(f'Section {key} must be a table')
            _merge(section._children[key], value)
        elif key in section._props:
            section.store(key, value)


def _comment_lines(text) -> typing.List[str]:
    return textwrap.wrap(inspect.cleandoc(text)) if text else []


def _split(section: Nestable):
    """Property keys then section keys."""
    # noinspection PyProtectedMember
    keys = section._props
    return (
        [k for k in keys if k not in section._sections],
        [k for k in keys if k in section._sections],
    )


def _toml_fill(section: Nestable, container):
    leaves, tables = _split(section)
    for key in leaves:
        value = getattr(section, key)
        if value is None:
            container.add(tomlkit.comment(f'{key} = # Uncomment to use'))
            continue
        for line in _comment_lines(getattr(type(section), key).comment):
            container.add(tomlkit.comment(line))
        container.add(key, value)
    for key in tables:
        table = tomlkit.table()
        # noinspection PyProtectedMember
        for line in _comment_lines(section._sections[key].__doc__):
            table.add(tomlkit.comment(line))
        _toml_fill(section[key], table)
        container.add(key, table)


def _dumps_toml(config: 'Config') -> str:
    document = tomlkit.document()
    lines = _comment_lines(type(config).__doc__)
    for line in lines:
        document.add(tomlkit.comment(line))
    if lines:
        document.add(tomlkit.nl())
    _toml_fill(config, document)
    return tomlkit.dumps(document)


def _yaml_map(section: Nestable) -> CommentedMap:
    data = CommentedMap()
    leaves, tables = _split(section)
    for position, key in enumerate(leaves + tables):
        if key in tables:
            value = _yaml_map(section[key])
            # noinspection PyProtectedMember
            comment = section._sections[key].__doc__
        else:
            value = getattr(section, key)
            comment = getattr(type(section), key).comment
        data.insert(
            position, key, value,
            comment=' '.join(_comment_lines(comment)) or None,
        )
    return data


def _dumps_yaml(config: 'Config') -> str:
    data = _yaml_map(config)
    lines = _comment_lines(type(config).__doc__)
    if lines:
        data.yaml_set_start_comment('\n'.join(lines))
    stream = io.StringIO()
    YAML().dump(data, stream)
    return stream.getvalue()


def _dumps_json(config: 'Config') -> str:
    return json.dumps(config.to_dict(), indent=2) + '\n'


class ConfigFormat(AutoNameEnum):
    """
    Formats of the config files.

    - TOML with tomlkit, supports comments.
    - YML with ruamel.yaml, supports comments.
    - JSON without comments.
    """
    TOML = auto()
    YML = auto()
    JSON = auto()

    @classmethod
    def from_path(cls, path) -> 'ConfigFormat':
        extension = os.path.splitext(str(path))[1].lstrip('.').lower()
        if extension == 'yaml':
            extension = 'yml'
        try:
            return cls(extension)
        except ValueError as err:
            raise ConfigError(f'Unknown config extension: {path}') from err

    def dumps(self, config: 'Config') -> str:
        if self is ConfigFormat.TOML:
            return _dumps_toml(config)
        if self is ConfigFormat.YML:
            return _dumps_yaml(config)
        return _dumps_json(config)

    def loads(self, text: str) -> typing.Mapping:
        try:
            if self is ConfigFormat.TOML:
                return tomlkit.parse(text).unwrap()
            if self is ConfigFormat.YML:
                return YAML(typ='rt').load(text) or {}
            return json.loads(text)
        except (TOMLKitError, YAMLError, ValueError) as err:
            raise ConfigError(f'Invalid {self} config: {err}') from err


class Config(Nestable):
    """
    Root config class, assign ConfigProperties and Nestable classes as
    class members.
    """

    def __init__(self, config_format: ConfigFormat = ConfigFormat.TOML):
        self._values = {}
        self._app = None
        self.config_format = ConfigFormat(config_format)
        super().__init__()

    def read_dict(self, data: typing.Mapping):
        """Set the values of ``data``, unknown keys are ignored."""
        _merge(self, data)

    def read_file(self, path):
        config_format = ConfigFormat.from_path(path)
        try:
            with open(path, encoding='utf-8') as f:
                text = f.read()
        except OSError as err:
            raise ConfigError(f'Cannot read config {path}: {err}') from err
        data = config_format.loads(text)
        if not isinstance(data, collections.abc.Mapping):
            raise ConfigError(f'{path} is not a table of values')
        self.read_dict(data)

    def save(self, path):
        """Write the current values, the extension picks the format."""
        try:
            config_format = ConfigFormat.from_path(path)
        except ConfigError:
            config_format = self.config_format
        with open(path, 'w', encoding='utf-8') as f:
            f.write(config_format.dumps(self))
