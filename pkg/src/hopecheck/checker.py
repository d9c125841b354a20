"""Truth evaluation, bounded validity search, and the axiom self-test suite.

``evaluate`` is the direct recursive reading of the truth clauses.  The
bounded searches and axiom sweeps additionally use a compiled evaluator that
computes, per model, the extension bitmask of every distinct subformula; both
paths are checked against each other in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Callable, Iterable, Sequence

from .errors import EnumerationLimitError, EvalError, HopecheckError
from .formula import (
    Agent,
    And,
    Atom,
    B,
    Bot,
    CorrectAtom,
    Formula,
    H,
    Iff,
    Implies,
    K,
    Not,
    Top,
    agent_universe,
    analyze,
    desugar,
    occurring_agents,
    print_formula,
)
from .kripke import (
    KripkeModel,
    enumeration_worlds,
    iter_frames,
    model_from_frame,
    model_space_size,
    model_to_document,
    resolve_model_ceiling,
)

# ---------------------------------------------------------------------------
# Direct evaluation


def evaluate(model: KripkeModel, world: str, formula: Formula) -> bool:
    """Truth of ``formula`` at ``world``; derived operators are desugared first.

    Knowledge quantifies over the world's partition block, hope over the
    block's intersection with the agent's domain (empty, hence vacuously
    true, when the world itself is outside the domain).
    """
    model.require_world(world)
    core = desugar(formula, model.agents)
    for agent in analyze(core).agents:
        if agent not in model.agents:
            raise EvalError(f"unknown agent {agent.name!r}")
    return _eval(model, world, core)


def _eval(model: KripkeModel, world: str, f: Formula) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return world in model.atom_worlds(f.name)
    if isinstance(f, Not):
        return not _eval(model, world, f.operand)
    if isinstance(f, And):
        return _eval(model, world, f.left) and _eval(model, world, f.right)
    if isinstance(f, K):
        return all(_eval(model, t, f.operand) for t in model.k_block(f.agent, world))
    if isinstance(f, H):
        return all(_eval(model, t, f.operand) for t in model.h_successors(f.agent, world))
    raise TypeError(f"not a core formula: {f!r}")


def valid_in_model(model: KripkeModel, formula: Formula) -> bool:
    """True iff the formula holds at every world."""
    return all(evaluate(model, w, formula) for w in model.worlds)


def sat_in_model(model: KripkeModel, formula: Formula) -> str | None:
    """First world (in model order) satisfying the formula, or None."""
    for w in model.worlds:
        if evaluate(model, w, formula):
            return w
    return None


# ---------------------------------------------------------------------------
# Compiled evaluation over frame bitmasks

_OP_BOT, _OP_ATOM, _OP_NOT, _OP_AND, _OP_K, _OP_H = range(6)


@dataclass(frozen=True)
class _Compiled:
    """Shared post-order instruction list for a batch of core formulas."""

    ops: tuple[tuple, ...]
    roots: tuple[int, ...]
    agents: tuple[Agent, ...]
    atoms: tuple[str, ...]


def _compile(cores: Sequence[Formula]) -> _Compiled:
    index: dict[Formula, int] = {}
    ops: list[tuple] = []
    agents: list[Agent] = []
    atoms: list[str] = []
    agent_slot: dict[Agent, int] = {}
    atom_slot: dict[str, int] = {}

    def slot_of_agent(agent: Agent) -> int:
        if agent not in agent_slot:
            agent_slot[agent] = len(agents)
            agents.append(agent)
        return agent_slot[agent]

    def slot_of_atom(name: str) -> int:
        if name not in atom_slot:
            atom_slot[name] = len(atoms)
            atoms.append(name)
        return atom_slot[name]

    def visit(f: Formula) -> int:
        i = index.get(f)
        if i is not None:
            return i
        if isinstance(f, Bot):
            op = (_OP_BOT,)
        elif isinstance(f, Atom):
            op = (_OP_ATOM, slot_of_atom(f.name))
        elif isinstance(f, Not):
            op = (_OP_NOT, visit(f.operand))
        elif isinstance(f, And):
            op = (_OP_AND, visit(f.left), visit(f.right))
        elif isinstance(f, K):
            op = (_OP_K, slot_of_agent(f.agent), visit(f.operand))
        elif isinstance(f, H):
            op = (_OP_H, slot_of_agent(f.agent), visit(f.operand))
        else:
            raise TypeError(f"not a core formula: {f!r}")
        index[f] = i = len(ops)
        ops.append(op)
        return i

    roots = tuple(visit(core) for core in cores)
    return _Compiled(tuple(ops), roots, tuple(agents), tuple(atoms))


def _eval_ops(
    compiled: _Compiled,
    full: int,
    blocks: Sequence[Sequence[int]],
    domains: Sequence[int],
    atom_masks: Sequence[int],
) -> list[int]:
    """Extension bitmask of every instruction, worlds indexed by bit position."""
    vals = [0] * len(compiled.ops)
    for i, op in enumerate(compiled.ops):
        tag = op[0]
        if tag == _OP_ATOM:
            v = atom_masks[op[1]]
        elif tag == _OP_NOT:
            v = full & ~vals[op[1]]
        elif tag == _OP_AND:
            v = vals[op[1]] & vals[op[2]]
        elif tag == _OP_K:
            x = vals[op[2]]
            v = 0
            for b in blocks[op[1]]:
                if b & x == b:
                    v |= b
        elif tag == _OP_H:
            x = vals[op[2]]
            dom = domains[op[1]]
            v = full & ~dom
            for b in blocks[op[1]]:
                m = b & dom
                if m & x == m:
                    v |= m
        else:
            v = 0
        vals[i] = v
    return vals


def _model_masks(model: KripkeModel, compiled: _Compiled):
    order = {w: i for i, w in enumerate(model.worlds)}
    full = (1 << len(model.worlds)) - 1

    def mask(ws: Iterable[str]) -> int:
        return sum(1 << order[w] for w in ws)

    blocks = []
    domains = []
    for agent in compiled.agents:
        if agent not in model.agents:
            raise EvalError(f"unknown agent {agent.name!r}")
        blocks.append([mask(block) for block in model.k_partition[agent]])
        domains.append(mask(model.h_domain[agent]))
    atom_masks = [mask(model.atom_worlds(name)) for name in compiled.atoms]
    return full, blocks, domains, atom_masks


# ---------------------------------------------------------------------------
# Bounded validity / satisfiability


@dataclass(frozen=True)
class Verdict:
    """Result of a bounded validity search.

    ``model``/``world`` hold a concrete countermodel when one was found;
    otherwise the formula is valid on every enumerated model up to ``bound``
    worlds (no claim is made beyond the bound).
    """

    bound: int
    model: KripkeModel | None = None
    world: str | None = None

    @property
    def has_counterexample(self) -> bool:
        return self.model is not None

    def to_document(self) -> dict:
        if self.model is None:
            return {"verdict": "valid-up-to", "bound": self.bound}
        return {
            "verdict": "counterexample",
            "model": model_to_document(self.model),
            "world": self.world,
        }


@dataclass(frozen=True)
class SatResult:
    """Result of a bounded satisfiability search."""

    bound: int
    model: KripkeModel | None = None
    world: str | None = None

    @property
    def found(self) -> bool:
        return self.model is not None

    def to_document(self) -> dict:
        if self.model is None:
            return {"verdict": "unsat-up-to", "bound": self.bound}
        return {
            "verdict": "sat-found",
            "model": model_to_document(self.model),
            "world": self.world,
        }


def bounded_validity(
    formula: Formula,
    max_worlds: int,
    universe: Iterable["Agent | str"] | None = None,
    max_models: int | None = None,
) -> Verdict:
    """Scan all enumerated models with 1..max_worlds worlds for a countermodel.

    The scan order is deterministic: world count ascending, then enumeration
    order, then world order inside the model; the first falsifying (model,
    world) pair is returned.  ``universe`` defaults to the agents occurring
    in the formula and must be given explicitly for ``byz(...)``.
    """
    if max_worlds < 1:
        raise HopecheckError("max_worlds must be at least 1")
    uni = agent_universe(universe) if universe is not None else occurring_agents(formula)
    core = desugar(formula, uni)
    info = analyze(core)
    agents = sorted(info.agents)
    atoms = sorted(info.atoms)
    compiled = _compile([core])
    root = compiled.roots[0]
    limit = resolve_model_ceiling(max_models)
    n = len(agents)
    # compiled slots are in first-occurrence order; remap to enumeration order
    agent_map = [agents.index(a) for a in compiled.agents]
    atom_map = [atoms.index(a) for a in compiled.atoms]

    for w in range(1, max_worlds + 1):
        size = model_space_size(n, len(atoms), w)
        if size > limit:
            raise EnumerationLimitError(size, limit)
        full = (1 << w) - 1
        worlds = enumeration_worlds(w)
        for frame in iter_frames(n, len(atoms), w):
            blocks = [frame[j] for j in agent_map]
            domains = [frame[n + j] for j in agent_map]
            atom_masks = [frame[2 * n + j] for j in atom_map]
            ext = _eval_ops(compiled, full, blocks, domains, atom_masks)[root]
            if ext != full:
                witness = next(i for i in range(w) if not ext >> i & 1)
                model = model_from_frame(worlds, agents, atoms, frame)
                return Verdict(w, model, worlds[witness])
    return Verdict(max_worlds)


def bounded_satisfiability(
    formula: Formula,
    max_worlds: int,
    universe: Iterable["Agent | str"] | None = None,
    max_models: int | None = None,
) -> SatResult:
    """Search for a (model, world) satisfying the formula, via the dual search."""
    verdict = bounded_validity(Not(formula), max_worlds, universe, max_models)
    if verdict.has_counterexample:
        return SatResult(verdict.bound, verdict.model, verdict.world)
    return SatResult(max_worlds)


# ---------------------------------------------------------------------------
# Axiom schemas


@dataclass(frozen=True)
class AxiomSchema:
    """A named axiom shape; ``build(agent, *samples)`` yields one instance."""

    name: str
    arity: int
    build: Callable[..., Formula]


KH_SCHEMAS = (
    AxiomSchema("hopes-own-correctness", 0, lambda i: H(i, CorrectAtom(i))),
    AxiomSchema(
        "knowledge-distribution",
        2,
        lambda i, p, q: Implies(K(i, Implies(p, q)), Implies(K(i, p), K(i, q))),
    ),
    AxiomSchema(
        "knowledge-positive-introspection", 1, lambda i, p: Implies(K(i, p), K(i, K(i, p)))
    ),
    AxiomSchema(
        "knowledge-negative-introspection",
        1,
        lambda i, p: Implies(Not(K(i, p)), K(i, Not(K(i, p)))),
    ),
    AxiomSchema("knowledge-factivity", 1, lambda i, p: Implies(K(i, p), p)),
    AxiomSchema(
        "hope-knowledge-equivalence",
        1,
        lambda i, p: Iff(H(i, p), Implies(CorrectAtom(i), K(i, Implies(CorrectAtom(i), p)))),
    ),
)

DERIVED_SCHEMAS = (
    AxiomSchema("hope-symmetry", 1, lambda i, p: Implies(p, H(i, Not(H(i, Not(p)))))),
    AxiomSchema("hope-positive-introspection", 1, lambda i, p: Implies(H(i, p), H(i, H(i, p)))),
    AxiomSchema(
        "hope-negative-introspection",
        1,
        lambda i, p: Implies(Not(H(i, p)), H(i, Not(H(i, p)))),
    ),
    AxiomSchema(
        "hope-factivity-when-correct",
        1,
        lambda i, p: Implies(CorrectAtom(i), Implies(H(i, p), p)),
    ),
    AxiomSchema(
        "belief-factivity-when-correct",
        1,
        lambda i, p: Implies(CorrectAtom(i), Implies(B(i, p), p)),
    ),
    AxiomSchema("believes-own-correctness", 0, lambda i: B(i, CorrectAtom(i))),
    AxiomSchema(
        "faulty-agent-hopes-everything",
        1,
        lambda i, p: Implies(Not(CorrectAtom(i)), H(i, p)),
    ),
    AxiomSchema("belief-implies-hope", 1, lambda i, p: Implies(B(i, p), H(i, p))),
    AxiomSchema(
        "message-content-equivalence",
        1,
        lambda i, p: Iff(
            And(Implies(CorrectAtom(i), B(i, p)), Implies(Not(CorrectAtom(i)), Top())),
            H(i, p),
        ),
    ),
)

DEFAULT_SCHEMAS = KH_SCHEMAS + DERIVED_SCHEMAS

KH_SCHEMA_NAMES = tuple(s.name for s in KH_SCHEMAS)
DERIVED_SCHEMA_NAMES = tuple(s.name for s in DERIVED_SCHEMAS)


def default_samples(agents: Iterable["Agent | str"], atoms: Iterable[str]) -> tuple[Formula, ...]:
    """Metavariable instantiations: p, !p, p & q, and K/H of p per agent."""
    agents_sorted = sorted(agent_universe(agents))
    atoms_sorted = sorted(set(atoms))
    p: Formula = Atom(atoms_sorted[0]) if atoms_sorted else Bot()
    q: Formula = Atom(atoms_sorted[1]) if len(atoms_sorted) > 1 else p
    samples: list[Formula] = [p, Not(p), And(p, q)]
    for agent in agents_sorted:
        samples.append(K(agent, p))
        samples.append(H(agent, p))
    seen: set[Formula] = set()
    out = []
    for s in samples:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class SchemaFailure:
    """A falsifying instance; re-evaluating it at the world reproduces False."""

    schema: str
    agent: Agent
    formula: Formula
    world: str
    model: KripkeModel

    def to_document(self) -> dict:
        return {
            "schema": self.schema,
            "agent": self.agent.name,
            "formula": print_formula(self.formula),
            "world": self.world,
            "model": model_to_document(self.model),
        }


@dataclass(frozen=True)
class SchemaResult:
    name: str
    checks: int
    failure_count: int
    first_failure: SchemaFailure | None = None

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failure_count,
            "firstFailure": self.first_failure.to_document() if self.first_failure else None,
        }


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[SchemaResult, ...]
    models_checked: int

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> SchemaResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_document(self) -> dict:
        return {
            "allPassed": self.all_passed,
            "modelsChecked": self.models_checked,
            "schemas": [r.to_document() for r in self.results],
        }


@dataclass(frozen=True)
class _Instance:
    schema: str
    agent: Agent
    formula: Formula


class _SuiteChecker:
    """Axiom instances compiled once, checkable against many models or frames."""

    def __init__(
        self,
        agents: Sequence[Agent],
        samples: Sequence[Formula],
        schemas: Sequence[AxiomSchema],
    ):
        self.agents = tuple(agents)
        self.schemas = tuple(schemas)
        instances = []
        for schema in schemas:
            for agent in self.agents:
                if schema.arity == 0:
                    instances.append(_Instance(schema.name, agent, schema.build(agent)))
                elif schema.arity == 1:
                    for p in samples:
                        instances.append(_Instance(schema.name, agent, schema.build(agent, p)))
                else:
                    for p in samples:
                        for q in samples:
                            instances.append(
                                _Instance(schema.name, agent, schema.build(agent, p, q))
                            )
        self.instances = instances
        self.compiled = _compile([desugar(inst.formula, self.agents) for inst in instances])

    def failing_instances(self, full, blocks, domains, atom_masks) -> list[tuple[int, int]]:
        """(instance index, first falsifying world bit) pairs on one frame."""
        vals = _eval_ops(self.compiled, full, blocks, domains, atom_masks)
        out = []
        for idx, root in enumerate(self.compiled.roots):
            ext = vals[root]
            if ext != full:
                bit = next(i for i in range(full.bit_length()) if not ext >> i & 1)
                out.append((idx, bit))
        return out


class _SuiteTally:
    """Aggregates per-schema pass/fail counts across many models."""

    def __init__(self, schemas: Sequence[AxiomSchema]):
        self.schemas = tuple(schemas)
        self.checks = {s.name: 0 for s in schemas}
        self.fail_counts = {s.name: 0 for s in schemas}
        self.first_failures: dict[str, SchemaFailure] = {}
        self.models = 0

    def record_model(self, checker: _SuiteChecker, failures, model_factory, worlds):
        self.models += 1
        for inst in checker.instances:
            self.checks[inst.schema] += 1
        if not failures:
            return
        model = model_factory()
        for idx, bit in failures:
            inst = checker.instances[idx]
            self.fail_counts[inst.schema] += 1
            if inst.schema not in self.first_failures:
                self.first_failures[inst.schema] = SchemaFailure(
                    inst.schema, inst.agent, inst.formula, worlds[bit], model
                )

    def report(self) -> AxiomReport:
        results = tuple(
            SchemaResult(
                s.name,
                self.checks[s.name],
                self.fail_counts[s.name],
                self.first_failures.get(s.name),
            )
            for s in self.schemas
        )
        return AxiomReport(results, self.models)


def axiom_suite(
    model: KripkeModel,
    samples: Sequence[Formula] | None = None,
    schemas: Sequence[AxiomSchema] = DEFAULT_SCHEMAS,
) -> AxiomReport:
    """Evaluate every schema instance, for every agent and sample, at every world."""
    agents = sorted(model.agents)
    if samples is None:
        samples = default_samples(agents, sorted(model.valuation))
    if not samples:
        raise HopecheckError("sample formula list must be non-empty")
    checker = _SuiteChecker(agents, samples, schemas)
    tally = _SuiteTally(schemas)
    masks = _model_masks(model, checker.compiled)
    failures = checker.failing_instances(*masks)
    tally.record_model(checker, failures, lambda: model, model.worlds)
    return tally.report()


def axiom_sweep(
    agents: Iterable["Agent | str"],
    atoms: Iterable[str],
    max_worlds: int,
    schemas: Sequence[AxiomSchema] = DEFAULT_SCHEMAS,
    model_cap: int = 100_000,
) -> AxiomReport:
    """Run the suite over enumerated models for every prefix configuration.

    Sweeps agent-count 1..len(agents), atom-count 0..len(atoms) and world
    count 1..max_worlds with the default sample set per configuration.
    Configurations larger than their share of ``model_cap`` are sampled
    deterministically with a fixed stride.
    """
    agents_sorted = sorted(agent_universe(agents))
    atoms_sorted = sorted(set(atoms))
    if not agents_sorted:
        raise HopecheckError("axiom sweep needs at least one agent")
    configs = [
        (na, ka, w)
        for na in range(1, len(agents_sorted) + 1)
        for ka in range(0, len(atoms_sorted) + 1)
        for w in range(1, max_worlds + 1)
    ]
    per_config = max(1, model_cap // len(configs))
    tally = _SuiteTally(schemas)

    for na, ka, w in configs:
        config_agents = agents_sorted[:na]
        config_atoms = atoms_sorted[:ka]
        checker = _SuiteChecker(
            config_agents, default_samples(config_agents, config_atoms), schemas
        )
        size = model_space_size(na, ka, w)
        stride = max(1, ceil(size / per_config))
        full = (1 << w) - 1
        worlds = enumeration_worlds(w)
        agent_map = [config_agents.index(a) for a in checker.compiled.agents]
        atom_map = [config_atoms.index(a) for a in checker.compiled.atoms]
        for frame in iter_frames(na, ka, w, stride=stride):
            blocks = [frame[j] for j in agent_map]
            domains = [frame[na + j] for j in agent_map]
            atom_masks = [frame[2 * na + j] for j in atom_map]
            failures = checker.failing_instances(full, blocks, domains, atom_masks)
            tally.record_model(
                checker,
                failures,
                lambda f=frame: model_from_frame(worlds, config_agents, config_atoms, f),
                worlds,
            )
    return tally.report()
