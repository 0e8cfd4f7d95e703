"""
Sub command parsing of the ``escapade`` application.

Commands are coroutine methods decorated with :py:class:`Command`, their
:py:class:`Argument` records are registered on an argparse sub parser.
Arguments excluding each other are grouped in a :py:class:`OneOf`.
Parsing errors never exit the process, :py:meth:`Cli.run` returns
:py:data:`USAGE_ERROR` instead.
"""
import argparse
import inspect
import shlex
import sys
import typing

import stringcase

from ._immutable import ImmutableDict
from .errors import UsageError

__all__ = [
    'USAGE_ERROR',
    'Argument',
    'OneOf',
    'Command',
    'HelpFormatter',
    'Cli',
]

USAGE_ERROR = 2

ADD_ARGUMENT_OPTIONS = frozenset((
    'type', 'help', 'choices', 'default', 'nargs', 'action', 'required',
    'metavar', 'dest',
))


class Argument(ImmutableDict):
    """
    A command line argument, positional unless its flags start with ``-``.

    ``Argument('--target-row', type=int)`` is given to the command as
    ``target_row``.

    :param flags: Names of the argument.
    :param options: Keyword arguments of ``ArgumentParser.add_argument``,
        ``None`` values are left out.
    """
    def __init__(self, *flags: str, **options):
        unknown = set(options) - ADD_ARGUMENT_OPTIONS
        if unknown:
            raise TypeError(f'Unknown argument options {sorted(unknown)}')
        super().__init__(
            flags=tuple(flags),
            options={k: v for k, v in options.items() if v is not None},
        )

    @property
    def positional(self) -> bool:
        return not self.flags[0].startswith('-')

    @property
    def key(self) -> str:
        """Keyword of the parsed value."""
        return self.options.get(
            'dest', stringcase.snakecase(self.flags[-1].lstrip('-'))
        )

    def register(self, parser):
        options = dict(self.options)
        if 'default' in options:
            # Without a help the default is not shown.
            options.setdefault('help', '-')
        flags = (self.key,) if self.positional else self.flags
        parser.add_argument(*flags, **options)


class OneOf(ImmutableDict):
    """
    Optional arguments of which at most one may be given, exactly one when
    ``required``.
    """
    def __init__(self, *arguments: Argument, required: bool = False):
        super().__init__(arguments=tuple(arguments), required=required)

    def register(self, parser):
        group = parser.add_mutually_exclusive_group(required=self.required)
        for argument in self.arguments:
            argument.register(group)


class HelpFormatter(argparse.ArgumentDefaultsHelpFormatter,
                    argparse.RawDescriptionHelpFormatter):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f'{self.prog}: error: {message}')


class Command:
    """
    Decorator of the ``Application`` methods answering a sub command.

    The method is called with one keyword per argument and returns the exit
    code. The sub command is named after the method unless ``name`` is
    given, its description is the method docstring.
    """
    # pylint: disable=redefined-builtin
    def __init__(self,
                 *arguments: typing.Union[Argument, OneOf],
                 name: str = None,
                 description: str = None,
                 help: str = None):
        self.arguments = arguments
        self.name = name
        self.description = description
        self.help = help

    def __call__(self, func):
        if not self.name:
            self.name = func.__name__
        self.name = stringcase.spinalcase(self.name)
        if self.description is None:
            self.description = inspect.getdoc(func) or ''
        func.command = self
        return func

    def register(self, subparsers):
        parser = subparsers.add_parser(
            self.name,
            description=self.description,
            help=self.help or self.description.split('\n')[0],
            formatter_class=HelpFormatter,
        )
        for argument in self.arguments:
            argument.register(parser)


def is_command(obj) -> bool:
    return isinstance(getattr(obj, 'command', None), Command)


class Cli:
    """The argparse parser of an application and its dispatch."""

    def __init__(self, *commands,
                 prog='',
                 description='',
                 formatter_class=HelpFormatter,
                 global_arguments=None,
                 default_command=None,
                 on_parse=None):
        """
        :param commands: ``(command, handler)`` of every sub command.
        :param global_arguments: Arguments placed before the sub command.
        :param default_command: Handler called without a sub command.
        :param on_parse: Coroutine called with the namespace once parsed.
        """
        self.parser = _Parser(
            prog=prog,
            description=description,
            formatter_class=formatter_class,
        )
        self.default_command = default_command
        self.global_arguments = list(global_arguments or [])
        self.globals = {}
        self.on_parse = on_parse

        for argument in self.global_arguments:
            argument.register(self.parser)

        subparsers = self.parser.add_subparsers(
            title='Commands', dest='command', metavar=''
        )
        self.commands = {}
        for command, handler in commands:
            command.register(subparsers)
            self.commands[command.name] = handler

    def parse(self, args: typing.Union[str, list] = None):
        if isinstance(args, str):
            args = shlex.split(args)
        return self.parser.parse_args(
            args=sys.argv[1:] if args is None else args
        )

    async def run(self, args: typing.Union[str, list] = None):
        """
        Parse and call the handler of the sub command.

        :param args: Command line, ``sys.argv`` by default.
        :return: The exit code of the handler, :py:data:`USAGE_ERROR` when
            the command line is invalid.
        """
        try:
            namespace = self.parse(args)
        except UsageError as err:
            self.parser.print_usage(sys.stderr)
            print(err, file=sys.stderr)
            return USAGE_ERROR

        values = vars(namespace).copy()
        command = self.commands.get(values.pop('command'))
        for argument in self.global_arguments:
            self.globals[argument.key] = values.pop(argument.key)

        if self.on_parse is not None:
            await self.on_parse(namespace)

        if command is not None:
            return await command(**values)
        return await self.default_command(**values)
