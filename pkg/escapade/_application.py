import argparse
import logging
import os
import sys
import typing

import colorama
import stringcase

from ._cli import (
    USAGE_ERROR, Argument, Cli, Command, HelpFormatter, is_command
)
from ._configs import Config
from ._executor import AsyncExecutor
from ._logger import add_file_handler, setup_logger
from .errors import ConfigError

__all__ = [
    'Application',
]


class ApplicationMeta(type):
    def __new__(mcs, name, bases, attributes):
        commands = [
            key for base in bases for key in getattr(base, '_commands', [])
        ]
        commands.extend(
            key for key, value in attributes.items()
            if is_command(value) and key not in commands
        )
        attributes = dict(attributes, _commands=commands)
        attributes.setdefault('prog_name', stringcase.spinalcase(name))
        return type.__new__(mcs, name, bases, attributes)


def _config_arguments(config: Config) -> typing.List[Argument]:
    """Global arguments of the ``auto_global`` config properties."""
    arguments = []
    for _, prop, _ in config.properties():
        if not prop.auto_global:
            continue
        options = {'default': prop.default, 'help': prop.comment}
        if prop.config_type is bool:
            options['action'] = 'store_false' if prop.default \
                else 'store_true'
        else:
            options['type'] = prop.config_type
        arguments.append(
            Argument(f'--{stringcase.spinalcase(prop.global_name)}', **options)
        )
    return arguments


class Application(metaclass=ApplicationMeta):
    """
    Command line application, every method decorated with ``Command`` is a
    sub command. Commands return the exit code of the program.

    Without a sub command :py:meth:`main` is called with the global
    arguments.
    """
    _commands = []
    prog_name = ''
    global_arguments = []
    version = '0.0.1'
    config_class = Config
    config: Config = None

    def __init__(
            self,
            config_file: typing.Union[str, typing.List[str]] = None,
            executor_max_workers: int = None,
            add_dump_config_command: bool = False,
            logger_level=logging.INFO,
            logger_stream=None,
    ):
        """
        :param config_file: Config files read when present, the first one
            found wins. ``--config-file`` replaces them.
        :param executor_max_workers: Threads of the executor running the
            computations.
        :param add_dump_config_command: Add a ``dump-config`` command.
        :param logger_level: Level of the application logger.
        :param logger_stream: Stream of the logs, stderr by default.
        """
        if isinstance(config_file, str):
            config_file = [config_file]
        self._config_files = list(config_file or [])
        self._user_config = None
        self._log_handler = None

        if sys.platform == 'win32':  # pragma: no cover
            colorama.init()

        self.logger = setup_logger(
            stringcase.snakecase(self.prog_name),
            logger_level,
            stream=logger_stream or sys.stderr,
        )
        self.executor = AsyncExecutor(max_workers=executor_max_workers)
        self.loop = self.executor.loop

        if self.config is None:
            # pylint: disable=not-callable
            self.config = self.config_class()

        commands = [
            (getattr(type(self), name).command, getattr(self, name))
            for name in self._commands
        ]
        if add_dump_config_command:
            commands.append(self._dump_config_command())

        self.cli = Cli(
            *commands,
            prog=self.prog_name,
            description=self.__class__.__doc__ or '',
            global_arguments=[
                Argument('-v', '--verbose', action='store_true',
                         default=False, help='Log debug messages.'),
                Argument('--quiet', action='store_true',
                         help='Only log errors.'),
                Argument('--log-file', type=argparse.FileType('w'),
                         help='Also write the logs to this file.'),
                Argument('-c', '--config-file', type=str,
                         help='Config file path.'),
                *_config_arguments(self.config),
                *self.global_arguments,
            ],
            on_parse=self._on_parse,
            default_command=self.main,
            formatter_class=HelpFormatter,
        )

        setattr(self.config, '_app', self)

    def _dump_config_command(self):
        @Command(
            Argument(
                'outfile',
                type=str,
                help='Write the current configs to this file,'
                     ' the format follows the extension.',
            ),
            description='Dump the current configuration file content.',
        )
        async def dump_config(outfile):
            dirname = os.path.dirname(outfile)
            if dirname:
                os.makedirs(dirname, exist_ok=True)
            self.config.save(outfile)
            return 0

        return dump_config.command, dump_config

    @property
    def config_path(self) -> str:
        if self._user_config:
            return self._user_config
        for path in self._config_files:
            if os.path.exists(path):
                return path
        return ''

    def start(self, args=None) -> int:
        """
        Run the command line.

        :param args: Command line arguments, default to ``sys.argv``.
        :return: The exit code of the command.
        """
        try:
            return self.loop.run_until_complete(self.cli.run(args=args))
        except ConfigError as err:
            self.logger.error(str(err))
            return USAGE_ERROR
        finally:
            if self._log_handler is not None:
                self.logger.removeHandler(self._log_handler)
                self._log_handler.stream.close()
                self._log_handler.close()
                self._log_handler = None

    # pylint: disable=unused-argument
    async def main(self, **kwargs):
        """Called without a sub command, prints the help."""
        self.logger.error('Please enter a command')
        self.cli.parser.print_help()
        return 2

    async def _on_parse(self, args):
        if args.quiet:
            self.logger.setLevel(logging.ERROR)
        elif args.verbose:
            self.logger.setLevel(logging.DEBUG)
        else:
            self.logger.setLevel(logging.INFO)

        if args.log_file:
            self._log_handler = add_file_handler(self.logger, args.log_file)

        if args.config_file:
            self._user_config = args.config_file

        if self.config_path:
            self.logger.info(f'Using config {self.config_path}')
            self.config.read_file(self.config_path)
