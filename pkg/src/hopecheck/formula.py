"""Syntax of the knowledge-and-hope language.

AST node types, the text grammar (parser and printer), and the expansion of
all derived operators into the {bot, atom, not, and, K, H} core.

Grammar, loosest binding first (``->`` is right-associative, ``<->`` and the
other binary connectives left-associative)::

    iff      : implies ('<->' implies)*
    implies  : or ('->' implies)?
    or       : and ('|' and)*
    and      : unary ('&' unary)*
    unary    : '!' unary | MODAL unary | primary
    MODAL    : 'K[i]' | 'H[i]' | 'B[i]' | 'EH[i,j,...]'
    primary  : 'bot' | 'top' | 'correct' '(' agent ')'
             | 'type' '(' agent ',' name ')' | 'byz' '(' int ')'
             | atom | '(' iff ')'

Agent names are identifiers or bare numerals; ``bot``, ``top``, ``correct``,
``type`` and ``byz`` are reserved words, and ``K``/``H``/``B``/``EH`` must be
followed by a bracketed agent list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Callable, Iterable, Union

from .errors import DesugarError, FormulaSyntaxError, UnknownAgentError

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_NUMERAL_RE = re.compile(r"[0-9]+\Z")
_RESERVED_ATOM_RE = re.compile(r"type\$[^$]+\$[^$]+\Z")

_RESERVED_WORDS = frozenset({"bot", "top", "correct", "type", "byz"})
_MODAL_WORDS = frozenset({"K", "H", "B", "EH"})


def _is_name(text: str) -> bool:
    return bool(_NAME_RE.match(text))


def _is_agent_id(text: str) -> bool:
    return bool(_NAME_RE.match(text) or _NUMERAL_RE.match(text))


@dataclass(frozen=True, order=True)
class Agent:
    """A named agent; equality and ordering are by name.

    Names are identifiers (letter, then letters/digits/underscores) or bare
    numerals, so classic numbered agents 1..n work directly.
    """

    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _is_agent_id(self.name):
            raise ValueError(f"invalid agent name {self.name!r}")

    def __str__(self) -> str:
        return self.name


def as_agent(value: "Agent | str") -> Agent:
    return value if isinstance(value, Agent) else Agent(value)


def agent_universe(values: Iterable["Agent | str"]) -> frozenset[Agent]:
    return frozenset(as_agent(v) for v in values)


@dataclass(frozen=True)
class AgentGroup:
    """A duplicate-free set of agents, used by the mutual-hope operator."""

    members: frozenset[Agent]

    def __init__(self, members: Iterable["Agent | str"]):
        object.__setattr__(self, "members", agent_universe(members))

    def sorted(self) -> tuple[Agent, ...]:
        return tuple(sorted(self.members))

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.members)


class Formula:
    """Base class for formula nodes; all nodes are immutable values."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def implies(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def iff(self, other: "Formula") -> "Formula":
        return Iff(self, other)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not (_is_name(self.name) or _RESERVED_ATOM_RE.match(self.name)):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class CorrectAtom(Formula):
    """Truth of the agent's correctness; definable as ``!H[i] bot``."""

    agent: Agent

    def __post_init__(self):
        object.__setattr__(self, "agent", as_agent(self.agent))


@dataclass(frozen=True)
class TypeAtom(Formula):
    """Atom stating that an agent belongs to a named type."""

    agent: Agent
    type_name: str

    def __post_init__(self):
        object.__setattr__(self, "agent", as_agent(self.agent))
        if not _is_name(self.type_name):
            raise ValueError(f"invalid type name {self.type_name!r}")


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class K(Formula):
    """Knowledge: truth in every world the agent cannot distinguish."""

    agent: Agent
    operand: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", as_agent(self.agent))


@dataclass(frozen=True)
class H(Formula):
    """Hope: the informational content of a message from the agent."""

    agent: Agent
    operand: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", as_agent(self.agent))


@dataclass(frozen=True)
class B(Formula):
    """Belief as defeasible knowledge: ``K[i](correct(i) -> ...)``."""

    agent: Agent
    operand: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", as_agent(self.agent))


@dataclass(frozen=True)
class MutualHope(Formula):
    """Conjunction of hope over every member of a group."""

    group: AgentGroup
    operand: Formula

    def __post_init__(self):
        if not isinstance(self.group, AgentGroup):
            object.__setattr__(self, "group", AgentGroup(self.group))


@dataclass(frozen=True)
class Byz(Formula):
    """Hypothesis that at most ``max_faulty`` agents of the universe are faulty."""

    max_faulty: int

    def __post_init__(self):
        if not isinstance(self.max_faulty, int) or self.max_faulty < 0:
            raise ValueError(f"byz bound must be a non-negative integer, got {self.max_faulty!r}")


#: Constructors permitted in desugared output.
CoreFormula = Union[Bot, Atom, Not, And, K, H]


def type_atom_name(agent: "Agent | str", type_name: str) -> str:
    """Reserved ordinary-atom name a type atom expands to."""
    return f"type${as_agent(agent).name}${type_name}"


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-fold conjunction; the empty conjunction is ``top``."""
    parts = list(parts)
    if not parts:
        return Top()
    return reduce(And, parts)


def disjoin(parts: Iterable[Formula]) -> Formula:
    """Left-fold disjunction; the empty disjunction is ``bot``."""
    parts = list(parts)
    if not parts:
        return Bot()
    return reduce(Or, parts)


# ---------------------------------------------------------------------------
# Parser


_SINGLE_CHAR_TOKENS = {
    "!": "BANG",
    "&": "AMP",
    "|": "PIPE",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACK",
    "]": "RBRACK",
    ",": "COMMA",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(("IFF", "<->", i))
            i += 3
        elif text.startswith("->", i):
            tokens.append(("ARROW", "->", i))
            i += 2
        elif c in _SINGLE_CHAR_TOKENS:
            tokens.append((_SINGLE_CHAR_TOKENS[c], c, i))
            i += 1
        elif c.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("IDENT", text[i:j], i))
            i = j
        elif c.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: frozenset[Agent]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.universe = universe

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def agent(self) -> Agent:
        tok = self.next()
        if tok[0] not in ("IDENT", "INT"):
            raise FormulaSyntaxError(f"expected an agent name, found {tok[1] or 'end of input'!r}", tok[2])
        agent = Agent(tok[1])
        if agent not in self.universe:
            raise UnknownAgentError(tok[1], self.universe)
        return agent

    def formula(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "EOF":
            raise FormulaSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek()[0] == "IFF":
            self.next()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.peek()[0] == "ARROW":
            self.next()
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "PIPE":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "AMP":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "BANG":
            self.next()
            return Not(self.unary())
        if kind == "IDENT" and text in _MODAL_WORDS:
            self.next()
            self.expect("LBRACK", "'[' after modal operator")
            if text == "EH":
                agents = [self.agent()]
                while self.peek()[0] == "COMMA":
                    self.next()
                    agents.append(self.agent())
                self.expect("RBRACK", "']'")
                return MutualHope(AgentGroup(agents), self.unary())
            agent = self.agent()
            self.expect("RBRACK", "']'")
            ctor = {"K": K, "H": H, "B": B}[text]
            return ctor(agent, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, text, pos = self.next()
        if kind == "LPAREN":
            f = self.iff()
            self.expect("RPAREN", "')'")
            return f
        if kind == "IDENT":
            if text == "bot":
                return Bot()
            if text == "top":
                return Top()
            if text == "correct":
                self.expect("LPAREN", "'(' after correct")
                agent = self.agent()
                self.expect("RPAREN", "')'")
                return CorrectAtom(agent)
            if text == "type":
                self.expect("LPAREN", "'(' after type")
                agent = self.agent()
                self.expect("COMMA", "','")
                name = self.expect("IDENT", "a type name")
                self.expect("RPAREN", "')'")
                return TypeAtom(agent, name[1])
            if text == "byz":
                self.expect("LPAREN", "'(' after byz")
                bound = self.expect("INT", "a non-negative integer")
                self.expect("RPAREN", "')'")
                return Byz(int(bound[1]))
            if text in _MODAL_WORDS:
                raise FormulaSyntaxError(f"modal operator {text!r} requires a bracketed agent list", pos)
            return Atom(text)
        raise FormulaSyntaxError(f"expected a formula, found {text or 'end of input'!r}", pos)


def parse(text: str, universe: Iterable["Agent | str"]) -> Formula:
    """Parse ``text`` against the declared agent universe.

    Raises :class:`FormulaSyntaxError` with a position on bad syntax and
    :class:`UnknownAgentError` when an agent is not in ``universe``.
    """
    return _Parser(text, agent_universe(universe)).formula()


# ---------------------------------------------------------------------------
# Printer

_PREC_IFF = 1
_PREC_IMPLIES = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_UNARY = 5
_PREC_ATOM = 6


def print_formula(formula: Formula) -> str:
    """Render with minimal parentheses; re-parsing yields an equal AST."""
    return _print(formula, 0)


def _print(f: Formula, min_prec: int) -> str:
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, CorrectAtom):
        return f"correct({f.agent})"
    if isinstance(f, TypeAtom):
        return f"type({f.agent},{f.type_name})"
    if isinstance(f, Byz):
        return f"byz({f.max_faulty})"
    if isinstance(f, Not):
        return _wrap(f"!{_print(f.operand, _PREC_UNARY)}", _PREC_UNARY, min_prec)
    if isinstance(f, (K, H, B)):
        op = type(f).__name__
        return _wrap(f"{op}[{f.agent}] {_print(f.operand, _PREC_UNARY)}", _PREC_UNARY, min_prec)
    if isinstance(f, MutualHope):
        names = ",".join(a.name for a in f.group)
        return _wrap(f"EH[{names}] {_print(f.operand, _PREC_UNARY)}", _PREC_UNARY, min_prec)
    if isinstance(f, And):
        text = f"{_print(f.left, _PREC_AND)} & {_print(f.right, _PREC_AND + 1)}"
        return _wrap(text, _PREC_AND, min_prec)
    if isinstance(f, Or):
        text = f"{_print(f.left, _PREC_OR)} | {_print(f.right, _PREC_OR + 1)}"
        return _wrap(text, _PREC_OR, min_prec)
    if isinstance(f, Implies):
        text = f"{_print(f.left, _PREC_IMPLIES + 1)} -> {_print(f.right, _PREC_IMPLIES)}"
        return _wrap(text, _PREC_IMPLIES, min_prec)
    if isinstance(f, Iff):
        text = f"{_print(f.left, _PREC_IFF)} <-> {_print(f.right, _PREC_IFF + 1)}"
        return _wrap(text, _PREC_IFF, min_prec)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(text: str, prec: int, min_prec: int) -> str:
    return f"({text})" if prec < min_prec else text


# ---------------------------------------------------------------------------
# Desugaring


def _core_implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def byz_expansion(universe: Iterable["Agent | str"], max_faulty: int) -> Formula:
    """Disjunction over all (n - max_faulty)-sized groups of jointly correct agents."""
    agents = sorted(agent_universe(universe))
    n = len(agents)
    if max_faulty > n:
        raise DesugarError(f"byz bound {max_faulty} exceeds the universe size {n}")
    groups = combinations(agents, n - max_faulty)
    return disjoin(conjoin(CorrectAtom(a) for a in group) for group in groups)


def desugar(formula: Formula, universe: Iterable["Agent | str"] | None = None) -> CoreFormula:
    """Expand every derived operator into the {bot, atom, not, and, K, H} core.

    ``universe`` is required only when the formula contains ``byz(...)``,
    whose expansion depends on the number of declared agents.
    """
    uni = agent_universe(universe) if universe is not None else None

    def rec(f: Formula) -> Formula:
        if isinstance(f, (Bot, Atom)):
            return f
        if isinstance(f, Top):
            return Not(Bot())
        if isinstance(f, CorrectAtom):
            return Not(H(f.agent, Bot()))
        if isinstance(f, TypeAtom):
            return Atom(type_atom_name(f.agent, f.type_name))
        if isinstance(f, Not):
            return Not(rec(f.operand))
        if isinstance(f, And):
            return And(rec(f.left), rec(f.right))
        if isinstance(f, Or):
            return Not(And(Not(rec(f.left)), Not(rec(f.right))))
        if isinstance(f, Implies):
            return _core_implies(rec(f.left), rec(f.right))
        if isinstance(f, Iff):
            left, right = rec(f.left), rec(f.right)
            return And(_core_implies(left, right), _core_implies(right, left))
        if isinstance(f, K):
            return K(f.agent, rec(f.operand))
        if isinstance(f, H):
            return H(f.agent, rec(f.operand))
        if isinstance(f, B):
            return K(f.agent, _core_implies(Not(H(f.agent, Bot())), rec(f.operand)))
        if isinstance(f, MutualHope):
            if not f.group.members:
                raise DesugarError("mutual hope over an empty group is not allowed")
            operand = rec(f.operand)
            return reduce(And, [H(a, operand) for a in f.group])
        if isinstance(f, Byz):
            if uni is None:
                raise DesugarError("byz(...) needs an explicit agent universe")
            return rec(byz_expansion(uni, f.max_faulty))
        raise TypeError(f"not a formula: {f!r}")

    return rec(formula)


def is_core(formula: Formula) -> bool:
    """True iff the formula uses core constructors only."""
    if isinstance(formula, (Bot, Atom)):
        return True
    if isinstance(formula, Not):
        return is_core(formula.operand)
    if isinstance(formula, And):
        return is_core(formula.left) and is_core(formula.right)
    if isinstance(formula, (K, H)):
        return is_core(formula.operand)
    return False


# ---------------------------------------------------------------------------
# Analysis


@dataclass(frozen=True)
class FormulaInfo:
    """Agents, atoms and modal depth of a formula's core expansion."""

    agents: frozenset[Agent]
    atoms: frozenset[str]
    modal_depth: int


def analyze(formula: Formula, universe: Iterable["Agent | str"] | None = None) -> FormulaInfo:
    """Agents and atoms occurring in ``desugar(formula)``, plus max K/H nesting."""
    core = desugar(formula, universe)
    agents: set[Agent] = set()
    atoms: set[str] = set()

    def depth(f: Formula) -> int:
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Atom):
            atoms.add(f.name)
            return 0
        if isinstance(f, Not):
            return depth(f.operand)
        if isinstance(f, And):
            return max(depth(f.left), depth(f.right))
        agents.add(f.agent)
        return 1 + depth(f.operand)

    d = depth(core)
    return FormulaInfo(frozenset(agents), frozenset(atoms), d)


def occurring_agents(formula: Formula) -> frozenset[Agent]:
    """Agents literally mentioned by the formula (before desugaring)."""
    found: set[Agent] = set()

    def walk(f: Formula):
        if isinstance(f, (CorrectAtom, TypeAtom)):
            found.add(f.agent)
        elif isinstance(f, Not):
            walk(f.operand)
        elif isinstance(f, (And, Or, Implies, Iff)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (K, H, B)):
            found.add(f.agent)
            walk(f.operand)
        elif isinstance(f, MutualHope):
            found.update(f.group.members)
            walk(f.operand)

    walk(formula)
    return frozenset(found)
