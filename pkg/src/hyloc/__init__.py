"""hyloc: hybridised logics over propositional and rigid first-order bases.

Specifications with nominals, n-ary modalities and rigid symbols can be
parsed, model-checked on finite Kripke models, searched for countermodels
and encoded into first-order TPTP problems for external provers.
"""
from .base import (
    PROP,
    RFOL,
    App,
    BaseModel,
    BaseSignature,
    Eq,
    OpDecl,
    Prop,
    RelAtom,
    RelDecl,
    SignatureMorphism,
    Sort,
    Var,
    base_satisfies,
)
from .encoder import (
    EncodedTask,
    EncodingError,
    encode_sentence,
    encode_signature,
    encode_task,
    induced_fol_model,
    unsort,
)
from .hybrid import (
    WORLD,
    And,
    At,
    Atom,
    Box,
    Diamond,
    ExistsNom,
    ExistsRigid,
    ForallNom,
    ForallRigid,
    HybridMorphism,
    HybridSignature,
    HybridTheory,
    Iff,
    Implies,
    Modality,
    Nom,
    Not,
    Or,
    check_wellformed,
    translate_hybrid,
)
from .kripke import (
    ConstraintSet,
    KripkeModel,
    check_constraints,
    check_theory,
    find_countermodel,
    sat_global,
    sat_local,
)
from .parser import Diagnostic, ParseError, parse_model, parse_sentence, parse_spec
from .printer import print_model, print_spec, show
from .prover import Bounds, ProverConfig, ProverVerdict, Status, prove_goal, run_prover
from .tptp import emit_tptp, parse_szs_status

__version__ = "0.1.0"
