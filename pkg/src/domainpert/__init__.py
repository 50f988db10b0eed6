"""Eigenvalues of Schrödinger operators with an inverse-square endpoint
singularity, and the eigenvalue shift caused by truncating the domain there.

The usual workflow::

    from domainpert import bessel, ProblemSpec, solve_eigenvalues, predict_shift
    V = bessel(0.6, (0.0, 1.0))
    eig = solve_eigenvalues(ProblemSpec(V))[0]
    pred = predict_shift(V, eig)          # p, c_n
"""
from .errors import (ClassificationError, ConfigError, DegenerateError, DomainError,
                     DomainPertError, EigenvalueSearchError, EvaluationError,
                     ExprSyntaxError, FitError, GermError, IntegrationError,
                     NonFiniteState, StepSizeUnderflow, SweepError,
                     UnknownIdentifierError)
from .potential import (EndpointClassification, Interval, Potential, ReflectionWarning,
                        SingularityInfo, bessel, classify_endpoint, custom, disc, free,
                        inverse_square, reflect_problem)
from .asymptotics import SolutionGerm, local_germs
from .ode_engine import (PrueferState, SolutionPath, State2, integrate, integrate_pruefer,
                         sign_changes)
from .spectrum import EigenvalueResult, ProblemSpec, eigen_count, miss_distance, solve_eigenvalues
from .perturbation import (NormalizedPair, PerturbationPrediction, build_pair, c_epsilon,
                           greens_apply, greens_residual, predict_shift, trial_eigenvalue,
                           verify_trial_residual, wronskian)
from .sweep_analysis import (ComparisonReport, FitResult, SweepRecord, compare, fit_exponent,
                             run_sweep)

__all__ = [
    "ClassificationError", "ConfigError", "DegenerateError", "DomainError",
    "DomainPertError", "EigenvalueSearchError", "EvaluationError", "ExprSyntaxError",
    "FitError", "GermError", "IntegrationError", "NonFiniteState", "StepSizeUnderflow",
    "SweepError", "UnknownIdentifierError", "EndpointClassification", "Interval",
    "Potential", "ReflectionWarning", "SingularityInfo", "bessel", "classify_endpoint",
    "custom", "disc", "free", "inverse_square", "reflect_problem", "SolutionGerm",
    "local_germs", "PrueferState", "SolutionPath", "State2", "integrate",
    "integrate_pruefer", "sign_changes", "EigenvalueResult", "ProblemSpec", "eigen_count",
    "miss_distance", "solve_eigenvalues", "NormalizedPair", "PerturbationPrediction",
    "build_pair", "c_epsilon", "greens_apply", "greens_residual", "predict_shift",
    "trial_eigenvalue", "verify_trial_residual", "wronskian", "ComparisonReport",
    "FitResult", "SweepRecord", "compare", "fit_exponent", "run_sweep",
]

__version__ = "0.1.0"
