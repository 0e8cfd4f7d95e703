from ._scenarios import (
    DIMENSION,
    Scenario,
    BayesScenarioModel,
    bayes_predict,
    switch_weight,
    relevant_features,
    relevant_count,
    possibly_relevant,
    generate_features,
)
from ._recovery import (
    BOUNDARY,
    ModelKind,
    RecoveryRow,
    RecoveryResult,
    fit_knn_model,
    scenario_predictor,
    run_recovery,
    results_frame,
    write_results_csv,
    write_summary_json,
)

__all__ = [
    'DIMENSION',
    'Scenario',
    'BayesScenarioModel',
    'bayes_predict',
    'switch_weight',
    'relevant_features',
    'relevant_count',
    'possibly_relevant',
    'generate_features',
    'BOUNDARY',
    'ModelKind',
    'RecoveryRow',
    'RecoveryResult',
    'fit_knn_model',
    'scenario_predictor',
    'run_recovery',
    'results_frame',
    'write_results_csv',
    'write_summary_json',
]
