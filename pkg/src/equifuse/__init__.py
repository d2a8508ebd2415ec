"""Exact K0-level calculus for categorical group actions: character rings,
Mackey/Green functor verification, and fusion rings of equivariantized
group-graded categories (Drinfeld double Grothendieck rings included)."""

__version__ = "0.1.0"

from .chartab import (  # noqa: F401
    CharacterTable,
    ClassFunction,
    ModularContext,
    VirtualCharacter,
    character_table,
    conjugate_cf,
    decompose,
    induce,
    inner_product,
    make_context,
    restrict,
)
from .fusion import (  # noqa: F401
    CoherentDatum,
    FusionRing,
    InvariantVector,
    SimpleLabel,
    eq_conjugate,
    eq_induce,
    eq_restrict,
    fuse,
    fuse_via_M,
    fusion_ring,
    invariant_basis,
    m_product,
    normalize_label,
    simples,
    verify_coherent_axioms,
)
from .mackey import (  # noqa: F401
    MackeyFamily,
    char_ring_family,
    equivariant_k0_family,
    mackey_rhs,
    verify_green_axioms,
    verify_mackey_axioms,
)
from .permgrp import (  # noqa: F401
    Group,
    GroupAction,
    Perm,
    Subgroup,
    build_group,
    centralizer,
    conjugacy_classes,
    double_coset_reps,
    left_coset_reps,
    orbits,
    subgroup_lattice,
    transporter,
)
from .presets import (  # noqa: F401
    Scenario,
    classical_scenario,
    drinfeld_double_scenario,
    group_preset,
)
from .reports import AxiomReport  # noqa: F401
