"""Global solution curves for u'' + lam f(u) - mu g(x) = 0 on (-1, 1), u(+-1) = 0.

Solutions are parameterized by their maximum alpha = u(0); for each alpha the
free parameter (lam or mu) is found by Newton shooting, and curves are traced
by continuation in alpha.
"""
from .curve import (ContinuationConfig, Curve, CurveEvent, CurveKind, EventKind,
                    detect_turning_points, find_positivity_loss, trace_lambda_curve, trace_mu_curve)
from .errors import (BadBracket, ConfigError, DerivativeVanished, DomainError, InitialSolveFailed,
                     NoConvergence, NonFinite, SolverError, ValidationError)
from .ivp import SensitivityMode, Trajectory, integrate
from .logistic import EnvelopePoint, eigenvalue, envelope, lambda_bar, mu_bar
from .model import (Polynomial, ProblemSpec, ValidationReport, make_problem, poly_antiderivative,
                    poly_derivative, poly_eval, validate_problem)
from .shoot import NewtonConfig, SolvePoint, find_positive_solution, solve_lambda, solve_mu

__version__ = "0.1.0"
