"""Groupoid quantum mechanics: selective measurements as finite groupoids,
their convolution *-algebra, states, GNS representations, quantum measures,
and Hamiltonian dynamics."""

from .groups import FiniteGroup, GroupTableError, cyclic_group, group_from_table, trivial_group
from .groupoid import (
    AxiomReport,
    AxiomViolation,
    FiniteGroupoid,
    GroupoidAxiomError,
    Outcome,
    Quiver,
    Transition,
    check_axioms,
    cyclic_groupoid,
    from_compose_table,
    generate_from_quiver,
    is_irreducible,
    make_quiver,
    pair_groupoid,
    transition_name,
)
from .algebra import (
    AlgebraElement,
    adjoint,
    convolve,
    delta,
    element,
    incidence_element,
    is_self_adjoint,
    norm,
    random_element,
    random_self_adjoint,
    regular_representation,
    unit_element,
    zero,
)
from .states import (
    ContradictionReport,
    GroupoidFunction,
    PositivityReport,
    State,
    UnitarityReport,
    check_unitarity,
    expectation,
    factorizable_extend,
    is_factorizable_function,
    is_positive_definite,
    state_from_phi,
)
from .gns import (
    GnsSpace,
    fundamental_representation,
    gns_build,
    gram_matrix,
    psi_inner,
    psi_vector,
    represent,
)
from .measure import (
    Event,
    ReproducibilityDefect,
    amplitude_matrix,
    decoherence,
    event,
    fiber_event,
    interference,
    quantum_measure,
    reproducibility_defect,
)
from .dynamics import (
    Hamiltonian,
    TimeGrid,
    amplitude,
    amplitude_grid,
    derivation,
    exponential,
    feynman_vector,
    heisenberg_evolve,
    schrodinger_evolve,
)

__version__ = "0.1.0"
