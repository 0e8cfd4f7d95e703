"""
Read only records.

The ``__init__`` parameters of an :py:class:`ImmutableDict` subclass become
attributes reading the values given to ``super().__init__``, the record is
also a mapping of them. Nothing can be assigned once initialized.
"""
import abc
import collections.abc
import inspect
import typing

import numpy as np

from .errors import ImmutableError

__all__ = [
    'ImmutableProp',
    'ImmutableDict',
    'ImmutableMeta',
    'freeze',
]

_SKIPPED = ('self', 'args', 'kwargs')


def freeze(value):
    """Read-only float array copy of ``value``."""
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def _plain(value):
    if isinstance(value, ImmutableDict):
        return value.to_dict()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(x) for x in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


class ImmutableProp:
    """Attribute reading the record value of the same name."""
    name = None

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, instance, owner):
        if instance is None:
            return self
        # noinspection PyProtectedMember
        return instance._data.get(self.name)


class ImmutableMeta(abc.ABCMeta):
    # pylint: disable=arguments-differ
    def __new__(mcs, name, bases, attributes):
        init = attributes.get('__init__', bases[-1].__init__)
        fields = tuple(
            p for p in inspect.signature(init).parameters
            if p not in _SKIPPED
        )
        namespace = dict(attributes, _prop_keys=fields)
        for field in fields:
            namespace[field] = ImmutableProp()
        return super().__new__(mcs, name, bases, namespace)


class ImmutableDict(collections.abc.Mapping, metaclass=ImmutableMeta):
    """
    Read only record, the ``__init__`` parameters of subclasses become
    attributes.
    """
    def __init__(self, **kwargs):
        object.__setattr__(self, '_data', dict(kwargs))

    def __getattr__(self, item):
        if item.startswith('_'):
            raise AttributeError(item)
        try:
            return self._data[item]
        except KeyError:
            raise KeyError(f'Invalid key {item}') from None

    def __setattr__(self, key, value):
        if '_data' in self.__dict__:
            raise ImmutableError(
                f'Property {type(self).__name__}.{key} is immutable'
            )
        object.__setattr__(self, key, value)

    def __getitem__(self, key: str) -> typing.Any:
        return self._data[key]

    def __len__(self) -> int:
        return len(self._data)

    def __iter__(self) -> typing.Iterator[str]:
        return iter(self._data)

    def __repr__(self):  # pragma: no cover
        return f'{type(self).__name__}({self._data})'

    def replace(self, **changes):
        """Copy of the record with some values changed."""
        values = {k: self._data.get(k) for k in self._prop_keys}
        values.update(changes)
        return type(self)(**values)

    def to_dict(self) -> dict:
        """Plain python values, arrays as lists."""
        return {k: _plain(v) for k, v in self._data.items()}
