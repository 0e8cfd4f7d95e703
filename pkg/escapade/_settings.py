from ._configs import Config, ConfigProperty, Nestable
from ._engine import ExplainerConfig
from ._gradient import GradientParams

__all__ = [
    'EscapadeConfig',
]


class EscapadeConfig(Config):
    """Escapade configuration"""

    seed = ConfigProperty(
        default=0,
        comment='Root seed of every random draw.',
        auto_environ=True,
        auto_global=True,
    )

    class Gradient(Nestable):
        """Finite difference gradient estimation."""
        delta = ConfigProperty(
            default=0.1,
            comment='Finite difference step.',
            auto_global=True,
        )
        jitter_radius = ConfigProperty(
            default=0.01,
            comment='Standard deviation of the jitter around each point.',
            auto_global=True,
        )
        jitter_samples = ConfigProperty(
            default=10,
            comment='Number of jittered points averaged.',
            auto_global=True,
        )

    class LineSearch(Nestable):
        """Bisection onto the boundary of the close region."""
        iterations = ConfigProperty(
            default=50,
            comment='Bisection steps of every line search.',
            auto_global=True,
            global_name='line_search_iterations',
        )

    class Engine(Nestable):
        """Polytope construction."""
        max_splits = ConfigProperty(
            default=0,
            comment='Largest number of halfspaces, 0 for no limit.',
            config_type=int,
            auto_global=True,
        )
        std_convention = ConfigProperty(
            default='population',
            comment='Standard deviation of the standardization,'
                    ' population or sample.',
        )
        degenerate_tolerance = ConfigProperty(
            default=1e-12,
            comment='Gradients with a smaller norm define no halfspace.',
        )

    class Trust(Nestable):
        """Trustworthy regions."""
        baseline_samples = ConfigProperty(
            default=0,
            comment='Uniform baseline draws, 0 to draw as many as there are'
                    ' context points.',
        )
        regularization = ConfigProperty(
            default=1.0,
            comment='Inverse strength of the density ratio classifier.',
        )

    class Experiment(Nestable):
        """Synthetic recovery experiments."""
        n_targets = ConfigProperty(
            default=200,
            comment='Random targets per experiment cell.',
        )
        n_context = ConfigProperty(
            default=1000,
            comment='Context points drawn for each target.',
        )
        n_train = ConfigProperty(
            default=1000,
            comment='Training points of the knn models.',
        )
        knn_neighbors = ConfigProperty(
            default=5,
            comment='Neighbors averaged by the knn models.',
        )

    def gradient_params(self) -> GradientParams:
        return GradientParams(
            delta=self.gradient.delta,
            jitter_radius=self.gradient.jitter_radius,
            jitter_samples=self.gradient.jitter_samples,
            seed=self.seed,
        )

    def explainer_config(self, **closeness) -> ExplainerConfig:
        """
        :param closeness: ``eps_lo`` and ``eps_hi`` or ``boundary``.
        """
        return ExplainerConfig(
            max_splits=self.engine.max_splits or None,
            gradient=self.gradient_params(),
            iterations=self.line_search.iterations,
            seed=self.seed,
            std_convention=self.engine.std_convention,
            degenerate_tolerance=self.engine.degenerate_tolerance,
            **closeness,
        )
