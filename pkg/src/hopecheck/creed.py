"""Interpretation of messages from typed agents.

A type system registers, per (listener type, speaker type) pair, the
precondition transformer the listener applies to an utterance.  The creed of
an utterance is "speaker has that type -> speaker knew the transformed
content"; conjoined over all candidate types it is the utterance's full
informational content.  A brute-force solver handles the classic two-type
knights-and-knaves puzzles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import PuzzleError, TypeSystemError
from .formula import (
    Agent,
    And,
    B,
    Bot,
    Byz,
    CorrectAtom,
    Formula,
    H,
    Iff,
    Implies,
    K,
    MutualHope,
    Not,
    Or,
    TypeAtom,
    Top,
    agent_universe,
    as_agent,
    conjoin,
    disjoin,
    parse,
)

KNIGHT = "knight"
KNAVE = "knave"


@dataclass(frozen=True)
class Transformer:
    """Named precondition map; ``apply(speaker, content)`` is pure."""

    name: str
    apply: Callable[[Agent, Formula], Formula]


#: The speaker asserted exactly what it knows.
IDENTITY = Transformer("statement-is-known", lambda speaker, content: content)
#: The speaker knows the opposite of what it asserted.
NEGATION = Transformer("negation-is-known", lambda speaker, content: Not(content))
#: The speaker knows the content holds whenever it is correct.
BELIEF_GUARD = Transformer(
    "known-if-correct", lambda speaker, content: Implies(CorrectAtom(speaker), content)
)
#: The utterance carries no information.
TRIVIAL = Transformer("no-information", lambda speaker, content: Top())


@dataclass(frozen=True)
class TypeSystem:
    """Agent types plus a transformer for every (listener, speaker) type pair."""

    type_names: tuple[str, ...]
    transformers: Mapping[tuple[str, str], Transformer]
    constraints: tuple[Formula, ...] = ()

    def __post_init__(self):
        names = tuple(self.type_names)
        if len(set(names)) != len(names):
            raise TypeSystemError("duplicate type names")
        if not names:
            raise TypeSystemError("a type system needs at least one type")
        for listener in names:
            for speaker in names:
                if (listener, speaker) not in self.transformers:
                    raise TypeSystemError(
                        f"no transformer registered for listener {listener!r} / speaker {speaker!r}"
                    )
        object.__setattr__(self, "type_names", names)
        object.__setattr__(self, "transformers", dict(self.transformers))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def require_type(self, name: str) -> str:
        if name not in self.type_names:
            raise TypeSystemError(f"unknown type {name!r} (declared: {', '.join(self.type_names)})")
        return name

    def transformer(self, listener_type: str, speaker_type: str) -> Transformer:
        self.require_type(listener_type)
        self.require_type(speaker_type)
        return self.transformers[(listener_type, speaker_type)]


def knights_and_knaves() -> TypeSystem:
    """Truth-tellers and liars; every listener interprets both the same way."""
    names = (KNIGHT, KNAVE)
    transformers = {}
    for listener in names:
        transformers[(listener, KNIGHT)] = IDENTITY
        transformers[(listener, KNAVE)] = NEGATION
    return TypeSystem(names, transformers)


def byzantine_types() -> TypeSystem:
    """The correct/faulty dichotomy; its informational content matches hope."""
    names = ("correct", "faulty")
    transformers = {}
    for listener in names:
        transformers[(listener, "correct")] = BELIEF_GUARD
        transformers[(listener, "faulty")] = TRIVIAL
    return TypeSystem(names, transformers)


@dataclass(frozen=True)
class Utterance:
    speaker: Agent
    content: Formula

    def __post_init__(self):
        object.__setattr__(self, "speaker", as_agent(self.speaker))


def creed_formula(
    ts: TypeSystem,
    listener_type: str,
    speaker: "Agent | str",
    speaker_type: str,
    content: Formula,
) -> Formula:
    """"Speaker is of that type -> speaker knew the type's precondition"."""
    speaker = as_agent(speaker)
    transformer = ts.transformer(listener_type, speaker_type)
    return Implies(TypeAtom(speaker, speaker_type), K(speaker, transformer.apply(speaker, content)))


def informational_content(
    ts: TypeSystem,
    listener_type: str,
    utterance: Utterance,
    candidate_types: Sequence[str],
) -> Formula:
    """Conjoined creed over every type the listener thinks the speaker may have."""
    if not candidate_types:
        raise TypeSystemError("candidate type list must be non-empty")
    parts = [
        creed_formula(ts, listener_type, utterance.speaker, t, utterance.content)
        for t in candidate_types
    ]
    return conjoin(parts)


def exactly_one_type_constraints(
    ts: TypeSystem, agents: Iterable["Agent | str"]
) -> tuple[Formula, ...]:
    """A-priori axioms: every agent has exactly one of the declared types.

    With two types this is the classic biconditional (first type iff not the
    second); with more, a disjunction plus pairwise exclusions per agent.
    """
    out: list[Formula] = []
    for agent in sorted(agent_universe(agents)):
        atoms = [TypeAtom(agent, t) for t in ts.type_names]
        if len(atoms) == 2:
            out.append(Iff(atoms[0], Not(atoms[1])))
            continue
        out.append(disjoin(atoms))
        for left, right in combinations(atoms, 2):
            out.append(Not(And(left, right)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Knights-and-knaves puzzle solver


@dataclass(frozen=True)
class TypeAssignment:
    """A total map from puzzle agents to type names."""

    assignment: Mapping[Agent, str]

    def __post_init__(self):
        object.__setattr__(
            self, "assignment", {as_agent(a): str(t) for a, t in self.assignment.items()}
        )

    def type_of(self, agent: "Agent | str") -> str:
        return self.assignment[as_agent(agent)]

    def to_document(self) -> dict[str, str]:
        return {a.name: t for a, t in sorted(self.assignment.items())}

    def __str__(self) -> str:
        return " ".join(f"{a.name}={t}" for a, t in sorted(self.assignment.items()))

    def __eq__(self, other):
        return isinstance(other, TypeAssignment) and self.assignment == other.assignment

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items())))


def _check_propositional(f: Formula, agents: frozenset[Agent]):
    if isinstance(f, (Bot, Top)):
        return
    if isinstance(f, TypeAtom):
        if f.type_name not in (KNIGHT, KNAVE):
            raise PuzzleError(f"unknown type {f.type_name!r} in utterance (expected knight/knave)")
        if f.agent not in agents:
            raise PuzzleError(f"utterance mentions non-puzzle agent {f.agent}")
        return
    if isinstance(f, Not):
        _check_propositional(f.operand, agents)
        return
    if isinstance(f, (And, Or, Implies, Iff)):
        _check_propositional(f.left, agents)
        _check_propositional(f.right, agents)
        return
    if isinstance(f, (K, H, B, MutualHope, Byz)):
        raise PuzzleError("modal operators are not supported inside puzzle utterances")
    raise PuzzleError(
        f"puzzle utterances must be boolean combinations of type atoms, found {str(f)!r}"
    )


def _eval_propositional(f: Formula, assignment: Mapping[Agent, str]) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Top):
        return True
    if isinstance(f, TypeAtom):
        return assignment[f.agent] == f.type_name
    if isinstance(f, Not):
        return not _eval_propositional(f.operand, assignment)
    if isinstance(f, And):
        return _eval_propositional(f.left, assignment) and _eval_propositional(f.right, assignment)
    if isinstance(f, Or):
        return _eval_propositional(f.left, assignment) or _eval_propositional(f.right, assignment)
    if isinstance(f, Implies):
        return (not _eval_propositional(f.left, assignment)) or _eval_propositional(
            f.right, assignment
        )
    if isinstance(f, Iff):
        return _eval_propositional(f.left, assignment) == _eval_propositional(f.right, assignment)
    raise PuzzleError(f"cannot evaluate {str(f)!r} propositionally")


def solve_puzzle(
    agents: Sequence["Agent | str"], utterances: Sequence[Utterance]
) -> list[TypeAssignment]:
    """All knight/knave assignments consistent with the utterances.

    Knights' statements must be true under the assignment and knaves' false;
    contents must be boolean combinations of type atoms over the puzzle
    agents (the solver is propositional).
    """
    agent_list = [as_agent(a) for a in agents]
    if len(set(agent_list)) != len(agent_list):
        raise PuzzleError("duplicate puzzle agents")
    agent_set = frozenset(agent_list)
    for utt in utterances:
        if utt.speaker not in agent_set:
            raise PuzzleError(f"utterance by non-puzzle agent {utt.speaker}")
        _check_propositional(utt.content, agent_set)

    solutions = []
    for combo in product((KNIGHT, KNAVE), repeat=len(agent_list)):
        assignment = dict(zip(agent_list, combo))
        if all(
            _eval_propositional(utt.content, assignment) == (assignment[utt.speaker] == KNIGHT)
            for utt in utterances
        ):
            solutions.append(TypeAssignment(assignment))
    return solutions


def smullyan_puzzle_28() -> tuple[list[Agent], list[Utterance]]:
    """Two islanders; a says "at least one of us two is a knave"."""
    a, b = Agent("a"), Agent("b")
    statement = Or(TypeAtom(a, KNAVE), TypeAtom(b, KNAVE))
    return [a, b], [Utterance(a, statement)]


# ---------------------------------------------------------------------------
# JSON documents


def puzzle_from_document(doc: Mapping) -> tuple[list[Agent], list[Utterance]]:
    for key in ("agents", "utterances"):
        if key not in doc:
            raise PuzzleError(f"puzzle document is missing {key!r}")
    types = doc.get("types", [KNIGHT, KNAVE])
    if sorted(types) != sorted((KNIGHT, KNAVE)):
        raise PuzzleError('the puzzle solver supports exactly the types ["knight", "knave"]')
    agents = [as_agent(a) for a in doc["agents"]]
    utterances = []
    for entry in doc["utterances"]:
        if "speaker" not in entry or "formula" not in entry:
            raise PuzzleError("every utterance needs 'speaker' and 'formula'")
        utterances.append(
            Utterance(as_agent(entry["speaker"]), parse(entry["formula"], agents))
        )
    return agents, utterances
