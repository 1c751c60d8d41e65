"""Semantic models of BIP and Reo connectors and the bridges between them.

The package provides port automata and constraint automata on the Reo
side, architectures and interaction models on the BIP side, a shared
labeled-transition-system semantics with bisimulation checking, the four
translations between the models, a textual surface syntax, and a CLI.
"""

from .values import VOID, Assignment, FiniteDataDomain, domain_union
from .constraints import (
    And,
    BOTTOM,
    DataConstraint,
    EqConst,
    EqPort,
    Exists,
    FunEq,
    InSet,
    Not,
    TOP,
    Top,
    dc_and,
    dc_eliminate_quantifiers,
    dc_equivalent,
    dc_eval,
    dc_hide,
    dc_or,
    dc_solutions,
    delta_set,
    free_ports,
    register_function,
)
from .lts import (
    AssignmentAlphabet,
    BisimulationWitness,
    LabeledTransitionSystem,
    PortSetAlphabet,
    bisimilar,
    check_unreachable,
    lts_identical,
    reachable_part,
    verify_witness,
)
from .reo import (
    ConstraintAutomaton,
    PolarizedCA,
    PortAutomaton,
    SINGLETON_DOMAIN,
    ca_hide,
    ca_product,
    ca_reachable_part,
    ca_to_pa,
    fifo1,
    interpret_ca,
    interpret_pa,
    is_port_automaton,
    is_stateless,
    lossy_sync,
    merge_replicate_node,
    pa_hide,
    pa_isomorphic,
    pa_product,
    pa_reachable_part,
    pa_to_ca,
    polarize,
    primitive,
    sync,
    sync_drain,
)
from .bip import (
    BipArchitecture,
    BipComponent,
    GammaSet,
    arch_apply,
    arch_compose,
    component_to_lts,
    dummy_component,
    interpret_arch,
)
from .interactions import (
    InteractionExpression,
    InteractionModel,
    SimpleConnector,
    connector_from_functions,
    delta_alpha,
    identity_connector,
    interpret_im,
    max_connector,
    validate_simple,
)
from .translate import (
    ClassReport,
    TheoremVerdict,
    add_empty_selfloops,
    bip_a,
    bip_b,
    check_commutation_arch,
    check_commutation_pa,
    check_lemma_1,
    check_theorem_1,
    check_theorem_2,
    check_theorem_3,
    check_theorem_4_ca,
    check_theorem_4_im,
    component_to_pa,
    decouple_shared_port,
    gamma_automaton,
    in_arch_prime,
    in_pa_prime,
    pa_to_component,
    reo_a,
    reo_b,
)
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
