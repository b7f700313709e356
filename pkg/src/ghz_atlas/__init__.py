"""Classification and verification of GHZ-Mermin experiments on few qubits."""

from .pauli import (
    Axis,
    GeneralObservable,
    LemmaVerdict,
    PauliString,
    Phase,
    commutes,
    commutes_general,
    lemma_verdict,
    parse_string,
    subset_product,
)
from .experiment import (
    Experiment,
    InvalidExperiment,
    InvariantRecord,
    c_invariant,
    invariants,
    parse_experiment,
    r_invariant,
    triad_profile,
    validate,
)
from .symmetry import SymmetryElement, act, canonical_form, equivalent
from .lhv import (
    IdentitySubset,
    TrivialityVerdict,
    ValueAssignment,
    check_assignment,
    classify,
    identity_subsets,
)
from .enumerator import ClassificationResult, enumerate_classes, find_class_of, max_experiment_size
from .hilbert import (
    achievable_vectors,
    bell_analysis,
    is_ghz_form,
    joint_eigenspace,
    to_operator,
    verify_bsquared_identity,
)

__version__ = "0.1.0"
