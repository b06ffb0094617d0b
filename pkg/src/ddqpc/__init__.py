"""Entanglement dynamics of a double-dot charge qubit watched by a point-contact detector."""

from .channels import apply_one_sided, choi_to_kraus, tomograph, verify_cptp
from .dynamics import (
    DetectorParams,
    GeneratorParams,
    InitialStateParams,
    TimeGrid,
    Trajectory,
    evolve_exact_oracle,
    evolve_pair_one_sided,
    evolve_single,
    initial_state,
    lindblad_derivative,
)
from .entanglement import (
    concurrence,
    entanglement_entropy_series,
    entanglement_rate,
    entropy_of_formation,
    threshold_time,
    von_neumann_entropy,
)
from .errors import InvalidState, NotCompletelyPositive, NumericalFailure
from .experiments import ScenarioConfig, ScenarioResult, collapse_average, default_config, run_scenario
from .linalg import frobenius_distance, hermitian_eigenvalues, partial_trace, singlet, tensor_product

__version__ = "0.1.0"
