"""Two-timescale averaging toolkit for ODEs dx/dt = u(x, s, omega*t) with a
fast 2*pi-periodic phase: averaging operators, drift velocities, distinguished
limit diagnosis, averaged systems and convergence verification.
"""

from .averaging import (
    DriftEvaluation,
    TildeClassError,
    commutator,
    drift_v2,
    drift_v3,
    jacobian,
    tau_average,
    tilde_integrate,
    tilde_velocity_value,
)
from .classify import (
    DL,
    DLClassification,
    ScanTable,
    classify,
    degeneracy_scan,
)
from .convergence import ConvergenceReport, epsilon_sweep, fit_slope
from .fields import (
    FieldEvaluationError,
    FourierField,
    HarmonicSeries,
    OscillatoryField,
    SamplingDomain,
    evaluate,
    fit_fourier,
    mean_part,
    osc_part,
    product_mean,
    sample_field,
    tau_grid,
)
from .integrators import (
    IntegrationError,
    SlowTime,
    Trajectory,
    error_norm,
    integrate,
    integrate_full,
)
from .systems import (
    AveragedSystem,
    ClassificationMismatch,
    build_dl1,
    build_dl2,
    build_dl3,
    build_system,
    compose_solution,
)

__version__ = "0.1.0"

__all__ = [
    "DL",
    "AveragedSystem",
    "ClassificationMismatch",
    "ConvergenceReport",
    "DLClassification",
    "DriftEvaluation",
    "FieldEvaluationError",
    "FourierField",
    "HarmonicSeries",
    "IntegrationError",
    "OscillatoryField",
    "SamplingDomain",
    "ScanTable",
    "SlowTime",
    "TildeClassError",
    "Trajectory",
    "build_dl1",
    "build_dl2",
    "build_dl3",
    "build_system",
    "classify",
    "commutator",
    "compose_solution",
    "degeneracy_scan",
    "drift_v2",
    "drift_v3",
    "epsilon_sweep",
    "error_norm",
    "evaluate",
    "fit_fourier",
    "fit_slope",
    "integrate",
    "integrate_full",
    "jacobian",
    "mean_part",
    "osc_part",
    "product_mean",
    "sample_field",
    "tau_average",
    "tau_grid",
    "tilde_integrate",
    "tilde_velocity_value",
]
