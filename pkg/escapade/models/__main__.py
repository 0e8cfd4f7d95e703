"""Serve a model description file over stdin/stdout."""
import argparse
import logging
import sys

from .._logger import setup_logger
from ..errors import InputError
from ._description import load_model
from ._server import serve_stdio


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog='python -m escapade.models',
        description='Serve a builtin model with the line protocol.',
    )
    parser.add_argument('description', help='Model description file.')
    args = parser.parse_args(argv)

    # stdout carries the protocol, logs go to stderr only.
    logger = setup_logger('escapade', level=logging.WARNING)
    try:
        model = load_model(args.description)
    except InputError as err:
        logger.error(str(err))
        return 2
    serve_stdio(model)
    return 0


if __name__ == '__main__':
    sys.exit(main())
