"""Groupoid of bit-flip transitions on a qubit chain, at finite truncation.

Measures on the outcome space, the modular machinery of the convolution
algebra, the finite matrix bridge, additive transition functionals with
their cohomology, and the induced phase dynamics.  Everything is computed
on depth-D truncations with exhaustive or seeded randomized verification.
"""

from .algebra import (
    AlgebraElement,
    apply,
    canonical_weight,
    convolve,
    element_from_json,
    element_to_json,
    hahn_norm,
    inner_product,
    involution,
    l2_norm,
    max_abs_diff,
    modular_conjugation,
    modular_operator_pow,
    pukanszky_L,
    pukanszky_V,
    unit,
    zero_element,
)
from .dfs import (
    Cochain,
    DfsTable,
    coboundary,
    cochain_delta,
    cochain_to_dfs,
    dfs_build,
    dfs_check,
    dfs_from_json,
    dfs_seed_extend,
    dfs_to_cochain,
    dfs_to_json,
    is_exact,
)
from .errors import (
    DegenerateSpectrum,
    DepthMismatch,
    DepthTooSmall,
    FlipchainError,
    HorizonOverflow,
    InvalidSpec,
    InvariantViolation,
    NotComposable,
    OrderUnsupported,
    SiteOutOfRange,
)
from .groupoid import (
    DEPTH_CAP,
    EMPTY_WORD,
    FlipWord,
    GroupoidElement,
    Prefix,
    axioms_report,
    check_depth,
    compose,
    e,
    enumerate_gamma,
    enumerate_prefixes,
    identity,
    inverse,
    xor,
)
from .ising import (
    ModularHamiltonian,
    NonCocyclePerturbation,
    TransitionEnergy,
    attained_spectrum,
    heisenberg_equivalence_check,
    ising_dfs_coefficients,
    ising_dfs_table,
    ising_energy_brute,
    ising_transition_energy,
    modular_hamiltonian_eval,
    modular_spectrum_points,
    tt_evolve,
)
from .matrices import (
    ID2,
    SIGMA1,
    SIGMA3,
    DenseOperator,
    PauliWord,
    glimm_map,
    gns_compare_random,
    gns_expectation,
    pauli_operator,
    powers_state,
    random_pauli_word,
)
from .measures import (
    Bernoulli,
    CylinderFunction,
    IsingBoltzmann,
    MeasureSpec,
    cylinder_weight,
    integrate,
    ising_bond_coefficients,
    ising_energy_coefficient,
    measure_from_json,
    modular_delta,
    parse_lambda,
    partition_function,
    partition_function_brute,
    partition_function_closed_form,
    partition_report,
    pushforward_projection_check,
    translation_covariance_check,
)
from .sampling import (
    random_algebra_element,
    random_cylinder,
    random_element_of,
    random_word,
    rng_for,
    trial_seed,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
