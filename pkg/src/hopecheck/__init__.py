"""Model checking for the multi-agent logic of knowledge and hope.

Core pieces: the formula language (:mod:`hopecheck.formula`), legal Kripke
frames with dual K/H accessibility (:mod:`hopecheck.kripke`), truth and
bounded validity checking plus the axiom suite (:mod:`hopecheck.checker`),
runs-and-systems compilation (:mod:`hopecheck.runs`), and typed-communication
interpretation with a knights-and-knaves solver (:mod:`hopecheck.creed`).
The package is also exposed as a FastAPI service (:mod:`hopecheck.service`)
with a thin-client CLI (:mod:`hopecheck.cli`).
"""

__version__ = "0.1.0"

from .errors import (
    DesugarError,
    EnumerationLimitError,
    EvalError,
    FormulaSyntaxError,
    FrameConditionError,
    HopecheckError,
    ModelError,
    PuzzleError,
    RunSystemError,
    TypeSystemError,
    UnknownAgentError,
)
from .formula import (
    Agent,
    AgentGroup,
    And,
    Atom,
    B,
    Bot,
    Byz,
    CorrectAtom,
    Formula,
    FormulaInfo,
    H,
    Iff,
    Implies,
    K,
    MutualHope,
    Not,
    Or,
    Top,
    TypeAtom,
    analyze,
    byz_expansion,
    desugar,
    is_core,
    parse,
    print_formula,
    type_atom_name,
)
from .kripke import (
    FrameViolation,
    KripkeModel,
    RawModel,
    bell_number,
    canonicalize,
    enumerate_models,
    hope_from_correctness,
    model_from_document,
    model_space_size,
    model_to_document,
    raw_from_model,
    raw_model_from_document,
    set_partitions,
    validate,
)
from .checker import (
    AxiomReport,
    AxiomSchema,
    DEFAULT_SCHEMAS,
    DERIVED_SCHEMAS,
    KH_SCHEMAS,
    SatResult,
    Verdict,
    axiom_suite,
    axiom_sweep,
    bounded_satisfiability,
    bounded_validity,
    default_samples,
    evaluate,
    sat_in_model,
    valid_in_model,
)
from .runs import (
    Claim,
    Run,
    RunSystem,
    brain_in_vat_example,
    compile_run_system,
    run_system_from_document,
    run_system_to_document,
    world_id,
)
from .creed import (
    KNAVE,
    KNIGHT,
    Transformer,
    TypeAssignment,
    TypeSystem,
    Utterance,
    byzantine_types,
    creed_formula,
    exactly_one_type_constraints,
    informational_content,
    knights_and_knaves,
    puzzle_from_document,
    smullyan_puzzle_28,
    solve_puzzle,
)
from .client import ServiceClient, ServiceError

__all__ = [name for name in dir() if not name.startswith("_")]
