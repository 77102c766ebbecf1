"""Commutator theory and congruential uniformities on finite algebras."""

from .algebra import (AlgebraError, CapExceeded, FiniteAlgebra, Homomorphism, Signature, a_alpha,
                      eval_term, l_f_base, load_algebra, parse_algebra, parse_term, power,
                      preimage_filter, subalgebra_generate)
from .catalog import (acceptance_catalog, bare_set, boolean_lattice, chain_lattice, cyclic_group,
                      dihedral_group, klein_group, symmetric_group, zn_ring)
from .commutator import (all_routes, c_commutator, centralizes, commutator, commutator_via_delta, commutator_via_xm,
                         delta_alpha_beta, equivalence_suite, m_matrices, property_suite,
                         weak_c_commutator, weak_centralizes, x_m_extract)
from .congruence import cg, con_all, kernel, lattice_law_check, pushforward, quotient, ug, ug_saturate
from .partition import Partition, format_partition, parse_partition
from .relations import BitRelation, RelationFilter, check_axioms, compose, inverse, parse_relation
from .terms import (auto_day_witness, clone_generate, day_from_maltsev, day_witness_from_terms,
                    find_day, find_jonsson, find_maltsev)
from .unif import (CongruenceFilter, ZIdealFilter, cucommu_inequality_check, filter_commutator,
                   z_commutator, z_join, z_meet, z_parse)

__all__ = [
    "AlgebraError",
    "BitRelation",
    "CapExceeded",
    "CongruenceFilter",
    "FiniteAlgebra",
    "Homomorphism",
    "Partition",
    "RelationFilter",
    "Signature",
    "ZIdealFilter",
    "a_alpha",
    "acceptance_catalog",
    "all_routes",
    "auto_day_witness",
    "bare_set",
    "boolean_lattice",
    "c_commutator",
    "centralizes",
    "cg",
    "chain_lattice",
    "check_axioms",
    "clone_generate",
    "commutator_via_delta",
    "commutator_via_xm",
    "compose",
    "con_all",
    "cucommu_inequality_check",
    "cyclic_group",
    "day_from_maltsev",
    "day_witness_from_terms",
    "delta_alpha_beta",
    "dihedral_group",
    "equivalence_suite",
    "eval_term",
    "filter_commutator",
    "find_day",
    "find_jonsson",
    "find_maltsev",
    "format_partition",
    "inverse",
    "kernel",
    "klein_group",
    "l_f_base",
    "lattice_law_check",
    "load_algebra",
    "m_matrices",
    "parse_algebra",
    "parse_partition",
    "parse_relation",
    "parse_term",
    "power",
    "preimage_filter",
    "property_suite",
    "pushforward",
    "quotient",
    "subalgebra_generate",
    "symmetric_group",
    "ug",
    "ug_saturate",
    "weak_c_commutator",
    "weak_centralizes",
    "x_m_extract",
    "z_commutator",
    "z_join",
    "z_meet",
    "z_parse",
    "zn_ring",
]
