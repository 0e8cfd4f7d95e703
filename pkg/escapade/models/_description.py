"""
Model description files, TOML documents with a ``variant`` key and the
keys of the variant::

    variant = "tree"
    dimension = 3

    [[nodes]]
    feature = 0
    threshold = 0.5
    left = 1
    right = 2

    [[nodes]]
    value = 0.0

    [[nodes]]
    value = 1.0
"""
import tomlkit
from tomlkit.exceptions import TOMLKitError

from ..errors import ModelDescriptionError
from ._builtin import BuiltinModel, model_variants

__all__ = [
    'load_model',
    'loads_model',
    'dump_model',
    'dumps_model',
]


def loads_model(text: str) -> BuiltinModel:
    try:
        data = tomlkit.parse(text).unwrap()
    except TOMLKitError as err:
        raise ModelDescriptionError(f'Invalid model description: {err}') \
            from err

    variant = data.pop('variant', None)
    variants = model_variants()
    if variant not in variants:
        raise ModelDescriptionError(
            f'Unknown model variant {variant!r},'
            f' expected one of {sorted(variants)}'
        )
    try:
        return variants[variant].from_description(data)
    except (TypeError, ValueError) as err:
        raise ModelDescriptionError(
            f'Invalid {variant} description: {err}'
        ) from err


def load_model(path: str) -> BuiltinModel:
    """Read a builtin model from its description file."""
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as err:
        raise ModelDescriptionError(f'Cannot read {path}: {err}') from err
    return loads_model(text)


def dumps_model(model: BuiltinModel) -> str:
    doc = tomlkit.document()
    doc.add('variant', model.variant)
    for key, value in model.describe().items():
        if key == 'nodes':
            nodes = tomlkit.aot()
            for node in value:
                table = tomlkit.table()
                for k, v in node.items():
                    table.add(k, v)
                nodes.append(table)
            doc.add('nodes', nodes)
        else:
            doc.add(key, value)
    return tomlkit.dumps(doc)


def dump_model(model: BuiltinModel, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_model(model))
