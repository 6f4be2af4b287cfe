"""Workbench for a two-sorted term-modal logic with non-rigid designators.

Parse and type-check formulas, evaluate them in finite standard and
extension-keyed Kripke models, check Hilbert-style proofs, search for
bounded countermodels, and run the deterministic verification suite.
"""

from .errors import (
    BoundsTooLarge,
    CaptureRisk,
    ModelError,
    ParseError,
    SideConditionViolated,
    TmlError,
    TooManyAtoms,
    TypeMismatch,
    TypingError,
    UnboundVariable,
)
from .syntax import (
    AGT,
    AGTOBJ,
    OBJ,
    App,
    Atom,
    Conj,
    Const,
    Forall,
    Formula,
    Know,
    Neg,
    Signature,
    Term,
    TypeTag,
    Var,
    bound_vars,
    check_formula,
    disj,
    eq,
    exists,
    format_formula,
    format_term,
    free_vars,
    iff,
    implies,
    is_subtype,
    neq,
    substitute,
    substitute_term,
    term_vars,
    type_of_term,
)
from .parser import parse_formula, parse_signature, parse_term
from .semantics import (
    Countermodel,
    DomainElement,
    Frame,
    SearchBounds,
    SearchResult,
    StandardModel,
    enumerate_countermodel,
    extension_std,
    find_falsifying_std,
    satisfies_std,
    valid_in_model_std,
)
from .nonstandard import (
    EMPTY_EXTENSION,
    NonStandardModel,
    RelExtension,
    build_lewis_model,
    build_transfer_countermodel,
    extension_ns,
    find_falsifying_ns,
    j_lookup,
    lift_standard,
    satisfies_ns,
    valid_in_model_ns,
)
from .modelio import load_model, parse_model, parse_valuation, serialize_model
from .hilbert import (
    CheckResult,
    Proof,
    ProofLine,
    check_proof,
    instantiate_axiom,
    is_tautology,
    load_proof,
    parse_proof,
    propositional_skeleton,
)
from .resources import data_path
from .suite import (
    FuzzBounds,
    FuzzConfig,
    Report,
    demonstrate_incompleteness,
    fuzz_agreement,
    fuzz_soundness,
    fuzz_substitution_lemmas,
    transfer_formula,
    verify_bounded_validity,
    verify_lewis,
    verify_nonstandard_countermodel,
)

__version__ = "0.1.0"
