import json
from enum import Enum

import numpy as np

__all__ = [
    'AutoNameEnum',
    'rng',
    'dumps_json',
]


class AutoNameEnum(Enum):
    # noinspection PyMethodParameters
    # pylint: disable=no-self-argument, unused-argument, no-member
    def _generate_next_value_(name, *args):
        return name.lower().replace('_', '-')

    def __str__(self):
        # pylint: disable=invalid-str-returned
        return self.value


def rng(seed, *keys) -> np.random.Generator:
    """
    Counter based generator for a stream identified by ``seed`` and ``keys``.

    The same key tuple always yields the same draws whatever order the
    streams are created in.

    :param seed: Root seed of the run.
    :param keys: Non negative integers or strings naming the stream.
    :return:
    """
    entropy = [int(seed)]
    for key in keys:
        if isinstance(key, str):
            entropy.extend(key.encode('utf-8'))
        else:
            entropy.append(int(key))
    sequence = np.random.SeedSequence(entropy)
    return np.random.Generator(np.random.Philox(sequence))


def dumps_json(data) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + '\n'
