"""Information-theoretic measures of hyperspherical harmonics.

Densities of the D-dimensional rigid rotator, their entropic moments
(exact for integer order, quadrature otherwise), Shannon/Renyi/Tsallis
entropies, Fisher information and the Fisher-Shannon, Fisher-Renyi and LMC
complexities.
"""

from .entropies import QuadratureSpec, ScalarResult, entropic_moment_quadrature, fisher_numeric, shannon_entropy
from .linearization import SDParams, UnsupportedOrderError, beta0, entropic_moment_exact, sd_coefficient
from .measures import (
    MeasureReport,
    complexity_fisher_renyi,
    complexity_fisher_shannon,
    complexity_lmc,
    disequilibrium,
    entropic_moment,
    fisher_closed,
    measure_report,
    renyi_entropy,
    renyi_power_entropy,
    tsallis_entropy,
)
from .oracle import audit_catalog, brute_force_Wq, closed_form_Wq
from .quantum_state import HyperState, StateError, density_eval, factorize, iter_states, parse_state, validate
from .special_functions import DomainError, LogSigned, PolySpec, gegenbauer_orthonormal, jacobi_norm

__version__ = "0.1.0"
