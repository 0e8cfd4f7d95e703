from ._predictor import Backend, Predictor, ScaledPredictor, as_points
from ._builtin import (
    BuiltinModel,
    LinearModel,
    BilinearModel,
    DecisionTreeModel,
    KnnRegressor,
    GatedModel,
    QuadraticLogisticModel,
    CallableModel,
    register_variant,
    model_variants,
)
from ._description import load_model, loads_model, dump_model, dumps_model
from ._remote import (
    PROTOCOL_VERSION,
    RemoteBackend,
    SubprocessBackend,
    HttpBackend,
    RemoteConfig,
    remote_handshake,
)
from ._server import ModelServer, serve_stdio, create_http_app

__all__ = [
    'Backend',
    'Predictor',
    'ScaledPredictor',
    'as_points',
    'BuiltinModel',
    'LinearModel',
    'BilinearModel',
    'DecisionTreeModel',
    'KnnRegressor',
    'GatedModel',
    'QuadraticLogisticModel',
    'CallableModel',
    'register_variant',
    'model_variants',
    'load_model',
    'loads_model',
    'dump_model',
    'dumps_model',
    'PROTOCOL_VERSION',
    'RemoteBackend',
    'SubprocessBackend',
    'HttpBackend',
    'RemoteConfig',
    'remote_handshake',
    'ModelServer',
    'serve_stdio',
    'create_http_app',
]
