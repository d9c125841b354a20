"""Kripke models with dual knowledge/hope accessibility.

A legal frame stores, per agent, an equivalence partition for knowledge and a
domain subset for hope; the hope relation is derived as
``H_i = K_i intersected with (domain x domain)``.  The frame conditions
(K an equivalence; H a partial equivalence contained in K; K-related worlds
that are both H-defined must be H-related) hold exactly for relations of this
shape, so models built through :class:`KripkeModel` are legal by construction.
Raw relational input goes through :func:`validate` / :func:`canonicalize`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationLimitError, EvalError, FrameConditionError, ModelError
from .formula import Agent, agent_universe, as_agent

DEFAULT_MODEL_CEILING = 10_000_000

VIOLATION_KINDS = (
    "K-not-reflexive",
    "K-not-symmetric",
    "K-not-transitive",
    "H-not-symmetric",
    "H-not-transitive",
    "H-not-subset-of-K",
    "mixed-condition-violated",
)


@dataclass(frozen=True)
class FrameViolation:
    """One failed frame condition with a concrete witness tuple."""

    kind: str
    agent: Agent
    witness: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.kind} for agent {self.agent}: ({', '.join(self.witness)})"

    def to_document(self) -> dict:
        return {"kind": self.kind, "agent": self.agent.name, "witness": list(self.witness)}


def _normalize_worlds(worlds: Iterable[str]) -> tuple[str, ...]:
    ws = tuple(str(w) for w in worlds)
    if not ws:
        raise ModelError("a model needs at least one world")
    if len(set(ws)) != len(ws):
        raise ModelError("duplicate world ids")
    return ws


@dataclass(frozen=True)
class KripkeModel:
    """A legal knowledge-and-hope model.

    ``k_partition`` maps each agent to the blocks of its knowledge partition;
    ``h_domain`` to the subset of worlds where the agent is correct.  Atoms
    absent from ``valuation`` are false everywhere.
    """

    worlds: tuple[str, ...]
    agents: frozenset[Agent]
    k_partition: Mapping[Agent, tuple[frozenset[str], ...]]
    h_domain: Mapping[Agent, frozenset[str]]
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        worlds = _normalize_worlds(self.worlds)
        agents = agent_universe(self.agents)
        order = {w: i for i, w in enumerate(worlds)}

        partition = {}
        for agent, blocks in self.k_partition.items():
            agent = as_agent(agent)
            if agent not in agents:
                raise ModelError(f"partition given for undeclared agent {agent}")
            norm = tuple(
                sorted((frozenset(b) for b in blocks), key=lambda b: min(order.get(w, -1) for w in b))
            )
            partition[agent] = norm
        missing = agents - partition.keys()
        if missing:
            raise ModelError(f"missing K-partition for agents: {', '.join(sorted(a.name for a in missing))}")

        domain = {as_agent(a): frozenset(d) for a, d in self.h_domain.items()}
        for agent in domain:
            if agent not in agents:
                raise ModelError(f"hope domain given for undeclared agent {agent}")
        for agent in agents:
            domain.setdefault(agent, frozenset())

        valuation = {str(atom): frozenset(ws) for atom, ws in self.valuation.items()}

        world_set = set(worlds)
        for agent in sorted(agents):
            blocks = partition[agent]
            seen: set[str] = set()
            for block in blocks:
                if not block:
                    raise ModelError(f"empty partition block for agent {agent}")
                if not block <= world_set:
                    raise ModelError(f"partition block for agent {agent} mentions unknown worlds")
                if block & seen:
                    raise ModelError(f"overlapping partition blocks for agent {agent}")
                seen |= block
            if seen != world_set:
                raise ModelError(f"partition for agent {agent} does not cover all worlds")
            if not domain[agent] <= world_set:
                raise ModelError(f"hope domain for agent {agent} mentions unknown worlds")
        for atom, ws in valuation.items():
            if not ws <= world_set:
                raise ModelError(f"valuation of {atom!r} mentions unknown worlds")

        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "k_partition", partition)
        object.__setattr__(self, "h_domain", domain)
        object.__setattr__(self, "valuation", valuation)

    @cached_property
    def _world_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    @cached_property
    def _block_by_world(self) -> dict[Agent, dict[str, frozenset[str]]]:
        return {
            agent: {w: block for block in blocks for w in block}
            for agent, blocks in self.k_partition.items()
        }

    def _require_agent(self, agent: Agent) -> Agent:
        agent = as_agent(agent)
        if agent not in self.agents:
            raise EvalError(f"unknown agent {agent.name!r}")
        return agent

    def require_world(self, world: str) -> str:
        if world not in self._world_index:
            raise EvalError(f"unknown world {world!r}")
        return world

    def k_block(self, agent: Agent, world: str) -> frozenset[str]:
        return self._block_by_world[self._require_agent(agent)][self.require_world(world)]

    def k_related(self, agent: Agent, s: str, t: str) -> bool:
        return t in self.k_block(agent, s)

    def h_successors(self, agent: Agent, world: str) -> frozenset[str]:
        """Worlds reachable by hope; empty when ``world`` is outside the domain."""
        agent = self._require_agent(agent)
        dom = self.h_domain[agent]
        if self.require_world(world) not in dom:
            return frozenset()
        return self.k_block(agent, world) & dom

    def h_related(self, agent: Agent, s: str, t: str) -> bool:
        return t in self.h_successors(agent, s)

    def h_relation(self, agent: Agent) -> frozenset[tuple[str, str]]:
        agent = self._require_agent(agent)
        dom = self.h_domain[agent]
        pairs = set()
        for block in self.k_partition[agent]:
            members = block & dom
            pairs.update((s, t) for s in members for t in members)
        return frozenset(pairs)

    def k_relation(self, agent: Agent) -> frozenset[tuple[str, str]]:
        agent = self._require_agent(agent)
        pairs = set()
        for block in self.k_partition[agent]:
            pairs.update((s, t) for s in block for t in block)
        return frozenset(pairs)

    def atom_worlds(self, atom: str) -> frozenset[str]:
        return self.valuation.get(atom, frozenset())

    def to_document(self) -> dict:
        order = self._world_index
        return {
            "worlds": list(self.worlds),
            "agents": [a.name for a in sorted(self.agents)],
            "K": {
                a.name: [sorted(block, key=order.__getitem__) for block in self.k_partition[a]]
                for a in sorted(self.agents)
            },
            "Hdom": {
                a.name: sorted(self.h_domain[a], key=order.__getitem__) for a in sorted(self.agents)
            },
            "valuation": {
                atom: sorted(ws, key=order.__getitem__) for atom, ws in sorted(self.valuation.items())
            },
        }


@dataclass(frozen=True)
class RawModel:
    """Relational input before frame validation; only syntactic shape is checked."""

    worlds: tuple[str, ...]
    agents: frozenset[Agent]
    k_relation: Mapping[Agent, frozenset[tuple[str, str]]]
    h_relation: Mapping[Agent, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        worlds = _normalize_worlds(self.worlds)
        agents = agent_universe(self.agents)
        world_set = set(worlds)

        def norm(relation: Mapping, label: str) -> dict[Agent, frozenset[tuple[str, str]]]:
            out = {}
            for agent, pairs in relation.items():
                agent = as_agent(agent)
                if agent not in agents:
                    raise ModelError(f"{label} relation given for undeclared agent {agent}")
                pairs = frozenset((str(s), str(t)) for s, t in pairs)
                for s, t in pairs:
                    if s not in world_set or t not in world_set:
                        raise ModelError(f"{label} relation for agent {agent} mentions unknown worlds")
                out[agent] = pairs
            for agent in agents:
                out.setdefault(agent, frozenset())
            return out

        valuation = {str(atom): frozenset(str(w) for w in ws) for atom, ws in self.valuation.items()}
        for atom, ws in valuation.items():
            if not ws <= world_set:
                raise ModelError(f"valuation of {atom!r} mentions unknown worlds")

        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "k_relation", norm(self.k_relation, "K"))
        object.__setattr__(self, "h_relation", norm(self.h_relation, "H"))
        object.__setattr__(self, "valuation", valuation)


def raw_from_model(model: KripkeModel) -> RawModel:
    """Expand a legal model back into explicit accessibility relations."""
    return RawModel(
        worlds=model.worlds,
        agents=model.agents,
        k_relation={a: model.k_relation(a) for a in model.agents},
        h_relation={a: model.h_relation(a) for a in model.agents},
        valuation=model.valuation,
    )


def validate(raw: RawModel) -> list[FrameViolation]:
    """Check the frame conditions, reporting one witness per failed family.

    Violations are data, not errors; an empty list means the raw model is a
    legal knowledge-and-hope frame.
    """
    violations: list[FrameViolation] = []
    worlds = raw.worlds

    def first_non_reflexive(rel):
        for s in worlds:
            if (s, s) not in rel:
                return (s,)
        return None

    def first_non_symmetric(rel):
        for s, t in sorted(rel):
            if (t, s) not in rel:
                return (s, t)
        return None

    def first_non_transitive(rel):
        successors: dict[str, list[str]] = {}
        for s, t in sorted(rel):
            successors.setdefault(s, []).append(t)
        for s in worlds:
            for t in successors.get(s, ()):
                for u in successors.get(t, ()):
                    if (s, u) not in rel:
                        return (s, t, u)
        return None

    for agent in sorted(raw.agents):
        k = raw.k_relation[agent]
        h = raw.h_relation[agent]

        witness = first_non_reflexive(k)
        if witness:
            violations.append(FrameViolation("K-not-reflexive", agent, witness))
        witness = first_non_symmetric(k)
        if witness:
            violations.append(FrameViolation("K-not-symmetric", agent, witness))
        witness = first_non_transitive(k)
        if witness:
            violations.append(FrameViolation("K-not-transitive", agent, witness))
        witness = first_non_symmetric(h)
        if witness:
            violations.append(FrameViolation("H-not-symmetric", agent, witness))
        witness = first_non_transitive(h)
        if witness:
            violations.append(FrameViolation("H-not-transitive", agent, witness))
        for pair in sorted(h):
            if pair not in k:
                violations.append(FrameViolation("H-not-subset-of-K", agent, pair))
                break
        defined = {s for s, _ in h}
        mixed = next(
            (
                (s, t)
                for s in worlds
                if s in defined
                for t in worlds
                if t in defined and (s, t) in k and (s, t) not in h
            ),
            None,
        )
        if mixed:
            violations.append(FrameViolation("mixed-condition-violated", agent, mixed))
    return violations


def canonicalize(raw: RawModel) -> KripkeModel:
    """Convert a violation-free raw model into the canonical representation.

    The derived hope relation of the result equals the input relation exactly;
    raw models with violations are rejected, echoing the violations.
    """
    violations = validate(raw)
    if violations:
        raise FrameConditionError(violations)

    k_partition = {}
    h_domain = {}
    for agent in sorted(raw.agents):
        k = raw.k_relation[agent]
        blocks = []
        seen: set[str] = set()
        for s in raw.worlds:
            if s in seen:
                continue
            block = frozenset(t for t in raw.worlds if (s, t) in k)
            seen |= block
            blocks.append(block)
        k_partition[agent] = tuple(blocks)
        h_domain[agent] = frozenset(s for s in raw.worlds if (s, s) in raw.h_relation[agent])

    model = KripkeModel(raw.worlds, raw.agents, k_partition, h_domain, raw.valuation)
    for agent in raw.agents:
        if model.h_relation(agent) != raw.h_relation[agent]:
            raise ModelError(f"internal: hope relation for agent {agent} not reproduced")
    return model


def hope_from_correctness(
    k_partition: Mapping[Agent, tuple[frozenset[str], ...]],
    correct_worlds: Mapping[Agent, Iterable[str]],
) -> dict[Agent, frozenset[str]]:
    """Hope domains making ``!H[i] bot`` hold exactly on the declared correct worlds."""
    domains = {}
    for agent, blocks in k_partition.items():
        agent = as_agent(agent)
        worlds = {w for block in blocks for w in block}
        correct = frozenset(str(w) for w in correct_worlds.get(agent, ()))
        if not correct <= worlds:
            raise ModelError(f"correct worlds for agent {agent} are not worlds of the partition")
        domains[agent] = correct
    return domains


# ---------------------------------------------------------------------------
# Enumeration


def bell_number(n: int) -> int:
    """Number of partitions of an n-element set."""
    if n < 0:
        raise ValueError("bell_number needs n >= 0")
    if n == 0:
        return 1
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[-1]


def set_partitions(items: Sequence) -> Iterator[tuple[tuple, ...]]:
    """All partitions of ``items`` into non-empty blocks, in a fixed order.

    Each item is assigned to an existing block or starts a new one, so the
    order matches lexicographic restricted-growth strings; the block holding
    the first item always comes first.
    """
    items = list(items)
    if not items:
        yield ()
        return

    def rec(i: int, blocks: list[list]):
        if i == len(items):
            yield tuple(tuple(b) for b in blocks)
            return
        item = items[i]
        for block in blocks:
            block.append(item)
            yield from rec(i + 1, blocks)
            block.pop()
        blocks.append([item])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def model_space_size(num_agents: int, num_atoms: int, world_count: int) -> int:
    """Closed form for the number of enumerated models."""
    return (
        bell_number(world_count) ** num_agents
        * 2 ** (world_count * num_agents)
        * 2 ** (world_count * num_atoms)
    )


def resolve_model_ceiling(max_models: int | None = None) -> int:
    if max_models is not None:
        return max_models
    env = os.environ.get("HOPECHECK_MAX_MODELS")
    if env is not None:
        return int(env)
    return DEFAULT_MODEL_CEILING


def partitions_as_masks(world_count: int) -> list[tuple[int, ...]]:
    """Every partition of ``world_count`` indexed worlds, blocks as bitmasks."""
    out = []
    for blocks in set_partitions(range(world_count)):
        out.append(tuple(sum(1 << i for i in block) for block in blocks))
    return out


def iter_frames(
    num_agents: int, num_atoms: int, world_count: int, stride: int = 1
) -> Iterator[tuple[tuple, ...]]:
    """Stream the combinatorial core of every model with ``world_count`` worlds.

    Yields ``(partition_masks..., domain_mask..., atom_mask...)`` tuples in a
    fixed order: per-agent partitions vary slowest, then per-agent hope
    domains (subset masks ascending), then per-atom valuations.  ``stride``
    keeps every stride-th frame, for deterministic sampling.
    """
    partitions = partitions_as_masks(world_count)
    subsets = range(1 << world_count)
    pools = [partitions] * num_agents + [subsets] * (num_agents + num_atoms)
    for index, combo in enumerate(product(*pools)):
        if index % stride:
            continue
        yield combo


def enumeration_worlds(world_count: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(world_count))


def mask_to_worlds(mask: int, worlds: Sequence[str]) -> frozenset[str]:
    return frozenset(w for i, w in enumerate(worlds) if mask >> i & 1)


def model_from_frame(
    worlds: Sequence[str],
    agents: Sequence[Agent],
    atoms: Sequence[str],
    frame: tuple,
) -> KripkeModel:
    """Materialize one :func:`iter_frames` tuple as a full model."""
    n = len(agents)
    parts = frame[:n]
    doms = frame[n : 2 * n]
    vals = frame[2 * n :]
    return KripkeModel(
        worlds=tuple(worlds),
        agents=frozenset(agents),
        k_partition={
            agent: tuple(mask_to_worlds(m, worlds) for m in masks)
            for agent, masks in zip(agents, parts)
        },
        h_domain={agent: mask_to_worlds(m, worlds) for agent, m in zip(agents, doms)},
        valuation={atom: mask_to_worlds(m, worlds) for atom, m in zip(atoms, vals)},
    )


def enumerate_models(
    agents: Iterable["Agent | str"],
    atoms: Iterable[str],
    world_count: int,
    max_models: int | None = None,
) -> Iterator[KripkeModel]:
    """Every model with exactly ``world_count`` worlds named w0..w{n-1}.

    Covers all (partition, hope domain, valuation) combinations per agent and
    atom; every yielded model is legal by construction.  Raises
    :class:`EnumerationLimitError` if the space exceeds the ceiling.
    """
    agents_sorted = sorted(agent_universe(agents))
    atoms_sorted = sorted(set(atoms))
    if world_count < 1:
        raise ModelError("world_count must be at least 1")
    size = model_space_size(len(agents_sorted), len(atoms_sorted), world_count)
    limit = resolve_model_ceiling(max_models)
    if size > limit:
        raise EnumerationLimitError(size, limit)
    worlds = enumeration_worlds(world_count)

    def gen():
        for frame in iter_frames(len(agents_sorted), len(atoms_sorted), world_count):
            yield model_from_frame(worlds, agents_sorted, atoms_sorted, frame)

    return gen()


# ---------------------------------------------------------------------------
# JSON documents


def model_to_document(model: KripkeModel) -> dict:
    return model.to_document()


def _agent_keyed(doc_section: Mapping, agents: frozenset[Agent], what: str) -> dict[Agent, object]:
    out = {}
    for name, value in doc_section.items():
        agent = as_agent(name)
        if agent not in agents:
            raise ModelError(f"{what} mentions undeclared agent {name!r}")
        out[agent] = value
    return out


def raw_model_from_document(doc: Mapping) -> RawModel:
    """Read the raw relational form ({"Krel": ..., "Hrel": ...})."""
    for key in ("worlds", "agents"):
        if key not in doc:
            raise ModelError(f"model document is missing {key!r}")
    agents = agent_universe(doc["agents"])
    krel = _agent_keyed(doc.get("Krel", {}), agents, '"Krel"')
    hrel = _agent_keyed(doc.get("Hrel", {}), agents, '"Hrel"')

    def pairs(value) -> frozenset[tuple[str, str]]:
        out = set()
        for entry in value:
            if len(entry) != 2:
                raise ModelError("relation entries must be [source, target] pairs")
            out.add((str(entry[0]), str(entry[1])))
        return frozenset(out)

    return RawModel(
        worlds=tuple(doc["worlds"]),
        agents=agents,
        k_relation={a: pairs(v) for a, v in krel.items()},
        h_relation={a: pairs(v) for a, v in hrel.items()},
        valuation={str(k): frozenset(map(str, v)) for k, v in doc.get("valuation", {}).items()},
    )


def model_from_document(doc: Mapping) -> KripkeModel:
    """Read either model form; the raw form is routed through validation."""
    if doc.get("Krel") is not None or doc.get("Hrel") is not None:
        return canonicalize(raw_model_from_document(doc))
    for key in ("worlds", "agents"):
        if key not in doc:
            raise ModelError(f"model document is missing {key!r}")
    if doc.get("K") is None:
        raise ModelError('model document needs "K" blocks or "Krel" pairs')
    agents = agent_universe(doc["agents"])
    k_doc = _agent_keyed(doc["K"], agents, '"K"')
    h_doc = _agent_keyed(doc.get("Hdom", {}), agents, '"Hdom"')
    return KripkeModel(
        worlds=tuple(doc["worlds"]),
        agents=agents,
        k_partition={
            a: tuple(frozenset(map(str, block)) for block in blocks) for a, blocks in k_doc.items()
        },
        h_domain={a: frozenset(map(str, ws)) for a, ws in h_doc.items()},
        valuation={str(k): frozenset(map(str, v)) for k, v in doc.get("valuation", {}).items()},
    )
