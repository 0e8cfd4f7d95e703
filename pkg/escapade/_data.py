"""Reading the context points and targets given on the command line."""
import typing

import numpy as np
import pandas as pd

from .errors import InputError

__all__ = [
    'read_context',
    'parse_vector',
]


def _is_number(text) -> bool:
    try:
        float(text)
    except (TypeError, ValueError):
        return False
    return True


def read_context(path) -> typing.Tuple[typing.List[str], np.ndarray]:
    """
    Read a csv file of context points, the header row names the features
    in column order.

    :return: The feature names and the ``(n, d)`` points.
    :raise InputError: Missing header, missing or non numeric values.
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, ValueError, pd.errors.ParserError) as err:
        raise InputError(f'Cannot read {path}: {err}') from err

    names = [str(c) for c in frame.columns]
    if not names or any(_is_number(name) for name in names):
        raise InputError(f'{path} needs a header row naming the features')
    if frame.empty:
        raise InputError(f'{path} has no context point')
    if frame.isnull().values.any():
        raise InputError(f'{path} has missing values')
    try:
        points = frame.apply(pd.to_numeric).to_numpy(dtype=float)
    except (TypeError, ValueError) as err:
        raise InputError(f'{path} has non numeric values: {err}') from err
    if not np.all(np.isfinite(points)):
        raise InputError(f'{path} has non finite values')
    return names, points


def parse_vector(text: str, dimension: int = None) -> np.ndarray:
    """Comma separated numbers, ``"0.5,1,-2"``."""
    try:
        vector = np.array(
            [float(x) for x in text.split(',') if x.strip()], dtype=float
        )
    except ValueError as err:
        raise InputError(f'Invalid vector {text!r}') from err
    if dimension is not None and vector.size != dimension:
        raise InputError(
            f'Expected {dimension} values, got {vector.size} in {text!r}'
        )
    if not np.all(np.isfinite(vector)):
        raise InputError(f'Vector {text!r} is not finite')
    return vector
