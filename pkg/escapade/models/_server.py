"""Server side of the model wire protocol."""
import json
import logging
import sys

import numpy as np
from fastapi import FastAPI, Request, Response

from ._predictor import Backend
from ._remote import PROTOCOL_VERSION, encode_message

__all__ = [
    'ModelServer',
    'serve_stdio',
    'create_http_app',
]

logger = logging.getLogger(__name__)


class ModelServer:
    """Answer wire protocol messages with a local model."""

    def __init__(self, model: Backend):
        self.model = model

    def handle(self, message) -> dict:
        if not isinstance(message, dict):
            return self.error('Messages must be objects')
        kind = message.get('type')
        if kind == 'hello':
            return {
                'type': 'hello',
                'dimension': self.model.dimension,
                'version': PROTOCOL_VERSION,
            }
        if kind == 'predict':
            return self._predict(message.get('points'))
        return self.error(f'Unknown message type {kind!r}')

    def _predict(self, points):
        try:
            array = np.array(points, dtype=float)
        except (TypeError, ValueError):
            return self.error('points must be a list of number lists')
        if array.size == 0:
            return {'type': 'prediction', 'values': []}
        if array.ndim != 2 or array.shape[1] != self.model.dimension:
            return self.error(
                f'points must have dimension {self.model.dimension}'
            )
        if not np.all(np.isfinite(array)):
            return self.error('points must be finite')
        values = np.asarray(self.model.evaluate(array), dtype=float)
        if not np.all(np.isfinite(values)):
            return self.error('the model produced non finite values')
        return {'type': 'prediction', 'values': values.tolist()}

    def handle_line(self, line: str) -> str:
        try:
            message = json.loads(line)
        except ValueError:
            return encode_message(self.error('Invalid JSON'))
        try:
            return encode_message(self.handle(message))
        except Exception as err:  # pylint: disable=broad-except
            logger.exception('Prediction failed')
            return encode_message(self.error(str(err)))

    @staticmethod
    def error(message) -> dict:
        return {'type': 'error', 'message': message}


def serve_stdio(model: Backend, stdin=None, stdout=None):
    """Serve ``model`` line by line until ``stdin`` is exhausted."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    server = ModelServer(model)
    for line in stdin:
        if not line.strip():
            continue
        stdout.write(server.handle_line(line) + '\n')
        stdout.flush()


def create_http_app(model: Backend) -> FastAPI:
    """HTTP application answering one wire message per POST on ``/``."""
    app = FastAPI()
    server = ModelServer(model)

    @app.post('/')
    async def message(request: Request):
        body = await request.body()
        try:
            line = body.decode('utf-8')
        except UnicodeDecodeError:
            answer = encode_message(server.error('Messages must be utf-8'))
        else:
            answer = server.handle_line(line)
        return Response(content=answer, media_type='application/json')

    return app
