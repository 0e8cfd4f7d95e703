"""
Client side of the model wire protocol.

Messages are JSON objects, one per line::

    -> {"type": "hello"}
    <- {"type": "hello", "dimension": 3, "version": 1}
    -> {"type": "predict", "points": [[0.0, 1.0, 2.0]]}
    <- {"type": "prediction", "values": [5.0]}
    <- {"type": "error", "message": "..."}

Floats travel as their shortest round-trip decimal representation so
predictions are bit identical on both ends.
"""
import json
import logging
import queue
import shlex
import subprocess
import threading
import typing

import httpx
import numpy as np

from .._immutable import ImmutableDict
from ..errors import (
    InputError, ProtocolError, TransportError, UnsupportedVersionError
)
from ._predictor import Backend, Predictor

__all__ = [
    'PROTOCOL_VERSION',
    'RemoteBackend',
    'SubprocessBackend',
    'HttpBackend',
    'RemoteConfig',
    'remote_handshake',
    'encode_message',
    'decode_message',
]

PROTOCOL_VERSION = 1

logger = logging.getLogger(__name__)


def encode_message(message: dict) -> str:
    return json.dumps(message, allow_nan=False, separators=(',', ':'))


def decode_message(line: str) -> dict:
    try:
        message = json.loads(line)
    except ValueError as err:
        raise ProtocolError('Invalid message', line) from err
    if not isinstance(message, dict) or 'type' not in message:
        raise ProtocolError('Message without a type', line)
    return message


class RemoteBackend(Backend):
    """Backend talking the wire protocol, one request at a time."""

    def __init__(self):
        self.dimension = None
        self._lock = threading.Lock()

    def _exchange(self, line: str) -> str:
        """Send a request line and return the response line."""
        raise NotImplementedError  # pragma: no cover

    def request(self, message: dict) -> dict:
        line = encode_message(message)
        with self._lock:
            answer = self._exchange(line)
        response = decode_message(answer)
        if response['type'] == 'error':
            raise TransportError(
                f'Model error: {response.get("message", "")}', answer
            )
        return response

    def handshake(self) -> int:
        reply = self.request({'type': 'hello'})
        line = encode_message(reply)
        if reply['type'] != 'hello':
            raise ProtocolError('Expected a hello reply', line)
        version = reply.get('version')
        if version != PROTOCOL_VERSION:
            raise UnsupportedVersionError(
                f'Unsupported protocol version {version!r}', line
            )
        dimension = reply.get('dimension')
        if not isinstance(dimension, int) or isinstance(dimension, bool) \
                or dimension < 1:
            raise ProtocolError('Invalid dimension in hello', line)
        self.dimension = dimension
        return dimension

    def evaluate(self, points):
        reply = self.request({'type': 'predict', 'points': points.tolist()})
        values = reply.get('values')
        if reply['type'] != 'prediction' or not isinstance(values, list) \
                or len(values) != points.shape[0]:
            raise ProtocolError(
                f'Expected {points.shape[0]} predictions',
                encode_message(reply)
            )
        try:
            return np.array(values, dtype=float)
        except (TypeError, ValueError) as err:
            raise ProtocolError(
                'Predictions must be numbers', encode_message(reply)
            ) from err


class SubprocessBackend(RemoteBackend):
    """Model served over the stdin/stdout of a child process."""

    def __init__(self, command: typing.Union[str, typing.List[str]],
                 timeout: float = 30.0):
        """
        :param command: Command line launching the model server.
        :param timeout: Seconds to wait for each response.
        """
        super().__init__()
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = list(command)
        self.timeout = timeout
        try:
            # pylint: disable=consider-using-with
            self.process = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding='utf-8',
                bufsize=1,
            )
        except OSError as err:
            raise TransportError(
                f'Cannot launch model process: {err}', ' '.join(self.command)
            ) from err
        self._broken = False
        self._lines = queue.Queue()
        self._reader = threading.Thread(target=self._read, daemon=True)
        self._reader.start()

    def _read(self):
        for line in self.process.stdout:
            self._lines.put(line.rstrip('\n'))
        self._lines.put(None)

    def _exchange(self, line):
        if self._broken:
            raise TransportError(
                'Model process stopped after a timeout', line
            )
        try:
            self.process.stdin.write(line + '\n')
            self.process.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as err:
            raise TransportError('Model process closed', line) from err
        try:
            answer = self._lines.get(timeout=self.timeout)
        except queue.Empty as err:
            # Replies arriving after a timeout are never read.
            self._broken = True
            self._stop()
            raise TransportError('Timed out waiting for the model', line) \
                from err
        if answer is None:
            # Keep the end of stream for any later request.
            self._lines.put(None)
            raise TransportError('Model process exited', line)
        return answer

    def _stop(self):
        logger.warning('Stopping model process %s', ' '.join(self.command))
        self.process.kill()
        self.process.wait()

    def close(self):
        if self.process.poll() is None:
            try:
                self.process.stdin.close()
            except OSError:  # pragma: no cover
                pass
            try:
                self.process.wait(timeout=self.timeout)
            except subprocess.TimeoutExpired:  # pragma: no cover
                self._stop()


class HttpBackend(RemoteBackend):
    """Model served on a single HTTP endpoint, one message per POST body."""

    def __init__(self, url: str, timeout: float = 30.0,
                 client: httpx.Client = None):
        """
        :param url: The endpoint receiving the messages.
        :param timeout: Seconds to wait for each response.
        :param client: Set to use an existing httpx client.
        """
        super().__init__()
        self.url = url
        self._own_client = client is None
        self.client = client or httpx.Client(timeout=timeout)

    def _exchange(self, line):
        try:
            response = self.client.post(
                self.url,
                content=line.encode('utf-8'),
                headers={'content-type': 'application/json'},
            )
        except httpx.HTTPError as err:
            raise TransportError(f'HTTP request failed: {err}', line) \
                from err
        body = response.text.strip()
        if response.is_error and not body:
            raise TransportError(f'HTTP {response.status_code}', line)
        return body

    def close(self):
        if self._own_client:
            self.client.close()


class RemoteConfig(ImmutableDict):
    """Where to find a remote model, exactly one of command or url."""
    def __init__(self, command=None, url=None, timeout: float = 30.0,
                 cache: bool = False):
        if (command is None) == (url is None):
            raise InputError('Give exactly one of a command or an url')
        super().__init__(
            command=command, url=url, timeout=timeout, cache=cache
        )


def remote_handshake(config: RemoteConfig,
                     client: httpx.Client = None) -> Predictor:
    """
    Connect to a remote model and negotiate its dimension.

    :param config: The remote model location.
    :param client: httpx client to use for url models.
    :return: Predictor querying the remote model.
    """
    if config.command is not None:
        backend = SubprocessBackend(config.command, timeout=config.timeout)
    else:
        backend = HttpBackend(config.url, config.timeout, client=client)
    try:
        dimension = backend.handshake()
    except Exception:
        backend.close()
        raise
    logger.debug('Remote model ready, dimension %d', dimension)
    return Predictor(backend, cache=config.cache)
