"""Simulation and moment estimation for partially observed interacting Hawkes systems."""

from ._accel import BACKEND
from .graph import (
    Graph,
    check_omega_subcritical,
    check_omega_supercritical,
    graph_diagnostics,
    limit_diagnostics,
    operator_norm,
    perron,
    resolvent_vectors,
    sample_graph,
)
from .kernels import BoxKernel, ExponentialKernel, kernel_from_dict, solve_alpha0
from .simulator import (
    EventData,
    SimConfig,
    SimulationOverflow,
    count_in_window,
    intensity_probe,
    rescaling_residuals,
    simulate,
)
from .subcritical import default_delta, estimate_subcritical, psi
from .supercritical import estimate_supercritical

__version__ = "0.1.0"
