"""Exceptional-point structure of periodically driven and damped qubit dynamics.

The package builds one-period propagators of the vectorized master equation,
tracks the coalescence of their transient eigenmatrices across (gamma, omega)
parameter grids, and cross-validates the resulting phase diagrams against the
closed-form Bloch-representation results.
"""

__version__ = "0.1.0"

from .analytic import (
    dissipation_even_resonances,
    ep_contour_square_drive,
    ep_slopes,
    resonance_ladder,
    static_and_highfreq_eps,
)
from .bloch import (
    BlochPropagator,
    BlochSystem,
    bloch_propagator,
    bloch_system,
    spectral_crosscheck,
    trajectory,
)
from .epmetrics import (
    EpObservables,
    classify_damping,
    evaluate_spectrum,
    inner_product_metric,
    is_ep,
)
from .expm import matrix_exponential
from .liouvillian import (
    assemble_liouvillian,
    devectorize,
    postselected_hamiltonian,
    vectorize,
)
from .model import (
    LindbladModel,
    ModelError,
    PeriodicSchedule,
    build_family_model,
    pauli,
    static_model,
    validate_model,
)
from .propagator import (
    PropagatorSpectrum,
    one_period_propagator,
    richardson_propagator,
    spectrum,
)
from .sweep import (
    PhaseDiagram,
    SweepSpec,
    extract_contours,
    overdamped_width,
    run_sweep,
    write_phase_csv,
)
