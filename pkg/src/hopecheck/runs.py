"""Compile finite run systems into knowledge-and-hope models.

Global states (run, time) become worlds, equality of an agent's local state
induces its knowledge partition, and per-run correctness flags choose the
hope domains.  Local states are opaque tokens compared by equality only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import RunSystemError
from .formula import Agent, Atom, B, CorrectAtom, Formula, K, agent_universe, as_agent
from .kripke import KripkeModel, hope_from_correctness


@dataclass(frozen=True)
class Run:
    """One execution: per-agent local states over time, correctness flags,
    and the truth of ordinary atoms per time step."""

    run_id: str
    local_states: Mapping[Agent, tuple]
    correct: Mapping[Agent, bool]
    atom_truth: Mapping[str, tuple[bool, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "local_states",
            {as_agent(a): tuple(tokens) for a, tokens in self.local_states.items()},
        )
        object.__setattr__(
            self, "correct", {as_agent(a): bool(v) for a, v in self.correct.items()}
        )
        object.__setattr__(
            self,
            "atom_truth",
            {str(atom): tuple(bool(v) for v in row) for atom, row in self.atom_truth.items()},
        )


@dataclass(frozen=True)
class RunSystem:
    """A finite set of runs over discrete times 0..time_bound-1."""

    agents: frozenset[Agent]
    time_bound: int
    runs: tuple[Run, ...]

    def __post_init__(self):
        agents = agent_universe(self.agents)
        runs = tuple(self.runs)
        if not runs:
            raise RunSystemError("a run system needs at least one run")
        if self.time_bound < 1:
            raise RunSystemError("time_bound must be at least 1")
        ids = [r.run_id for r in runs]
        if len(set(ids)) != len(ids):
            raise RunSystemError("duplicate run ids")
        for run in runs:
            for agent in agents:
                states = run.local_states.get(agent)
                if states is None:
                    raise RunSystemError(f"run {run.run_id!r} has no local states for agent {agent}")
                if len(states) != self.time_bound:
                    raise RunSystemError(
                        f"run {run.run_id!r} declares {len(states)} local states for agent "
                        f"{agent}, expected {self.time_bound}"
                    )
                if agent not in run.correct:
                    raise RunSystemError(f"run {run.run_id!r} has no correctness flag for agent {agent}")
            for agent in run.local_states:
                if agent not in agents:
                    raise RunSystemError(f"run {run.run_id!r} mentions undeclared agent {agent}")
            for atom, row in run.atom_truth.items():
                if len(row) != self.time_bound:
                    raise RunSystemError(
                        f"run {run.run_id!r} declares {len(row)} truth values for atom {atom!r}, "
                        f"expected {self.time_bound}"
                    )
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "runs", runs)


def world_id(run_id: str, time: int) -> str:
    """World naming used by the compiler: ``<run id>@<time>``."""
    return f"{run_id}@{time}"


def compile_run_system(system: RunSystem) -> KripkeModel:
    """Build the model whose worlds are the system's global states.

    Two worlds share an agent's partition block iff the agent's local states
    are equal; the agent's hope domain is the set of worlds of runs where it
    is flagged correct.
    """
    worlds = tuple(
        world_id(run.run_id, t) for run in system.runs for t in range(system.time_bound)
    )
    states = {
        world_id(run.run_id, t): run
        for run in system.runs
        for t in range(system.time_bound)
    }

    k_partition = {}
    correct_worlds = {}
    for agent in sorted(system.agents):
        by_token: dict[object, list[str]] = {}
        for run in system.runs:
            for t in range(system.time_bound):
                by_token.setdefault(run.local_states[agent][t], []).append(
                    world_id(run.run_id, t)
                )
        k_partition[agent] = tuple(frozenset(block) for block in by_token.values())
        correct_worlds[agent] = frozenset(
            w for w, run in states.items() if run.correct[agent]
        )
    h_domain = hope_from_correctness(k_partition, correct_worlds)

    def atom_holds(run: Run, atom: str, t: int) -> bool:
        row = run.atom_truth.get(atom)
        return bool(row[t]) if row else False

    atoms = sorted({atom for run in system.runs for atom in run.atom_truth})
    valuation = {
        atom: frozenset(
            world_id(run.run_id, t)
            for run in system.runs
            for t in range(system.time_bound)
            if atom_holds(run, atom, t)
        )
        for atom in atoms
    }
    return KripkeModel(worlds, system.agents, k_partition, h_domain, valuation)


@dataclass(frozen=True)
class Claim:
    """An expected truth value at a world of the compiled model."""

    world: str
    formula: Formula
    expected: bool


def brain_in_vat_example() -> tuple[RunSystem, tuple[Claim, ...]]:
    """Two runs that differ only outside agent a's local state.

    In run ``r`` the event ``e`` happened and a is correct; in run ``rv`` a's
    identical observation is fake: nothing happened and a is faulty.  At
    ``r@0`` agent a therefore cannot know ``e``, although it believes it.
    """
    a, b = Agent("a"), Agent("b")
    real = Run(
        "r",
        local_states={a: ("observed_e",), b: ("witnessed",)},
        correct={a: True, b: True},
        atom_truth={"e": (True,)},
    )
    vat = Run(
        "rv",
        local_states={a: ("observed_e",), b: ("nothing",)},
        correct={a: False, b: True},
        atom_truth={"e": (False,)},
    )
    system = RunSystem(frozenset({a, b}), 1, (real, vat))
    claims = (
        Claim(world_id("r", 0), K(a, Atom("e")), False),
        Claim(world_id("r", 0), B(a, Atom("e")), True),
        Claim(world_id("r", 0), Atom("e"), True),
        Claim(world_id("rv", 0), CorrectAtom(a), False),
    )
    return system, claims


# ---------------------------------------------------------------------------
# JSON documents


def run_system_to_document(system: RunSystem) -> dict:
    return {
        "agents": [a.name for a in sorted(system.agents)],
        "timeBound": system.time_bound,
        "runs": [
            {
                "id": run.run_id,
                "local": {a.name: list(run.local_states[a]) for a in sorted(run.local_states)},
                "correct": {a.name: run.correct[a] for a in sorted(run.correct)},
                "atoms": {atom: list(row) for atom, row in sorted(run.atom_truth.items())},
            }
            for run in system.runs
        ],
    }


def run_system_from_document(doc: Mapping) -> RunSystem:
    for key in ("agents", "timeBound", "runs"):
        if key not in doc:
            raise RunSystemError(f"run system document is missing {key!r}")
    runs = []
    for entry in doc["runs"]:
        if "id" not in entry:
            raise RunSystemError("every run needs an 'id'")
        runs.append(
            Run(
                run_id=str(entry["id"]),
                local_states={a: tuple(tokens) for a, tokens in entry.get("local", {}).items()},
                correct=dict(entry.get("correct", {})),
                atom_truth={a: tuple(row) for a, row in entry.get("atoms", {}).items()},
            )
        )
    return RunSystem(
        agents=agent_universe(doc["agents"]),
        time_bound=int(doc["timeBound"]),
        runs=tuple(runs),
    )
