"""The metacognitive governor.

Verifies proposer output, renders template feedback, generates worked
subgraph examples, tracks improvement trends, and decides when to stop
trusting the fast path and hand the instance to the exact solver.  The
three entry points are solve_sofai_v2 (full loop), solve_sofai_v1
(one shot then fallback), and solve_mc_s1_iN (capped loop, no fallback).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .dsatur import SolveOutcome, solve_decision
from .graphs import ColorAssignment, Conflict, Graph, parse_dimacs, serialize_dimacs, verdict
from .memory import EpisodicRecord, MemoryRejected, MemoryStore, retrieve_memory, update_memory
from .proposer import (
    NOT_SOLVABLE,
    PromptExample,
    ProposerConfig,
    make_proposer,
    format_assignment,
    render_prompt,
)

CONFLICT_TEMPLATE = "Error: Vertices {u} and {v} are adjacent but have the same color."
OVER_COLOR_TEMPLATE = "Error: Only {k} colors are allowed. {used} colors were used."
UNPARSEABLE_MESSAGE = (
    "Error: The response could not be parsed into vertex color assignments. "
    "Provide one (Vertex Color) pair per line."
)
NOT_SOLVABLE_REJECTED_MESSAGE = (
    "Error: The problem has not been proven unsolvable. "
    "Provide a color assignment using the format (Vertex Color)."
)


@dataclass(frozen=True)
class FeedbackItem:
    """One structured correction; kind is conflict, over_color, or unparseable."""

    kind: str
    message: str
    conflicts: tuple[Conflict, ...] = ()


def format_feedback(graph: Graph, assignment: ColorAssignment, k: int) -> list[FeedbackItem]:
    """Template feedback for an assignment: conflicts in edge order, then budget."""
    result = verdict(graph, assignment, k)
    items = [
        FeedbackItem(
            kind="conflict",
            message=CONFLICT_TEMPLATE.format(u=c.u, v=c.v),
            conflicts=(c,),
        )
        for c in result.conflicts
    ]
    if result.colors_used > k:
        items.append(
            FeedbackItem(
                kind="over_color",
                message=OVER_COLOR_TEMPLATE.format(k=k, used=result.colors_used),
            )
        )
    return items


@dataclass(frozen=True)
class GeneratedExample:
    """A small solved subgraph shown to the proposer as a worked example."""

    subgraph: Graph
    coloring: ColorAssignment

    def as_prompt_example(self) -> PromptExample:
        return PromptExample(
            problem_dimacs=serialize_dimacs(self.subgraph),
            solution=dict(self.coloring),
            vertex_order=self.subgraph.vertices,
        )


def generate_example(graph: Graph, k: int, seed: Optional[int] = None) -> GeneratedExample:
    """Greedily color the subgraph induced by the min(3, n) highest-degree vertices.

    Selection and coloring are deterministic (degree, ties by vertex
    order), so the same problem always yields the same example; the seed
    parameter is accepted for interface stability but unused.  Greedy is
    unbounded: the example may use more than k colors on dense cores.
    """
    del seed
    if not graph.vertices:
        raise ValueError("graph must have at least one vertex")
    ranked = sorted(graph.vertices, key=lambda v: (-graph.degree(v), graph.vertices.index(v)))
    chosen = ranked[: min(3, len(graph.vertices))]
    sub = graph.induced_subgraph(chosen)
    coloring: ColorAssignment = {}
    for v in sub.vertices:
        used = {coloring[u] for u in sub.adjacency[v] if u in coloring}
        color = 1
        while color in used:
            color += 1
        coloring[v] = color
    return GeneratedExample(subgraph=sub, coloring=coloring)


@dataclass
class TrendState:
    """Per-iteration correctness scores and feedback signatures, in order."""

    scores: list[float] = field(default_factory=list)
    signatures: list[tuple] = field(default_factory=list)

    def record(self, score: float, signature: tuple) -> None:
        self.scores.append(score)
        self.signatures.append(signature)


def trend_improved(scores: list[float]) -> bool:
    """True iff the score sequence is strictly increasing throughout."""
    if not scores:
        raise ValueError("scores must be nonempty")
    return all(b > a for a, b in zip(scores, scores[1:]))


def escalation_rule(trend: TrendState, t: int, T: int) -> bool:
    """Stop iterating S1 when the budget is spent or progress has stalled.

    Fires at t >= T, on no strict score improvement between the last two
    iterations, or on two identical consecutive feedback signatures.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t >= T:
        return True
    if len(trend.scores) >= 2 and trend.scores[-1] <= trend.scores[-2]:
        return True
    if len(trend.signatures) >= 2 and trend.signatures[-1] == trend.signatures[-2]:
        return True
    return False


def _signature(kind: str, conflicts: tuple[Conflict, ...]) -> tuple:
    if kind == "assignment":
        edges = sorted(tuple(sorted((c.u, c.v))) for c in conflicts)
        return ("conflicts", tuple(edges))
    return (kind,)


@dataclass(frozen=True)
class OrchestratorConfig:
    """Loop parameters; theta is fixed at 1.0 (only perfect colorings pass)."""

    proposer: ProposerConfig = ProposerConfig()
    max_iterations: int = 5
    theta: float = 1.0
    alpha: float = 0.1
    memory_limit: int = 1
    time_limit: float = 200.0
    store: Optional[MemoryStore] = None
    accept_s1_unsat: bool = False

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.theta != 1.0:
            raise ValueError("theta is fixed at 1.0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass(frozen=True)
class IterationRecord:
    """What one S1 round produced, for post-hoc analysis."""

    index: int
    kind: str  # assignment | not_solvable | unparseable
    score: float
    feedback: tuple[str, ...]
    signature: Optional[tuple]
    elapsed: float
    conflict_subgraph: Optional[Graph] = None


@dataclass(frozen=True)
class SolveTrace:
    iterations: tuple[IterationRecord, ...]
    s2_invoked: bool
    source: Optional[str]  # S1 | S2 | None
    s1_declared_unsat: bool
    total_time: float

    @property
    def s1_calls(self) -> int:
        return len(self.iterations)


@dataclass
class _LoopResult:
    status: str  # valid | declared_unsat | exhausted | timeout
    assignment: Optional[ColorAssignment] = None
    iterations: list[IterationRecord] = field(default_factory=list)
    declared_unsat: bool = False


def _s1_loop(
    graph: Graph,
    k: int,
    cfg: OrchestratorConfig,
    max_iters: int,
    deadline: float,
    *,
    escalate: bool,
    use_memory: bool,
) -> _LoopResult:
    """The shared S1 iteration engine.

    escalate=True applies the escalation rule after each failed round
    (the full-loop behavior); escalate=False runs every round (the
    capped ablation variants).  use_memory controls retrieval seeding.
    """
    proposer = make_proposer(cfg.proposer)
    examples: list[PromptExample] = []
    if use_memory and cfg.store is not None:
        for rec in retrieve_memory(cfg.store, graph, k, cfg.alpha, cfg.memory_limit):
            order = parse_dimacs(rec.dimacs).vertices
            examples.append(PromptExample(rec.dimacs, rec.solution, order))
    history: list[tuple[str, tuple[str, ...]]] = []
    trend = TrendState()
    result = _LoopResult(status="exhausted")
    generated_added = False

    for t in range(1, max_iters + 1):
        now = time.monotonic()
        if now >= deadline:
            result.status = "timeout"
            return result
        prompt = render_prompt(graph, k, examples, history)
        response = proposer.propose(prompt, timeout=deadline - now)
        elapsed = time.monotonic() - now

        if response.is_assignment:
            v = verdict(graph, response.assignment, k)
            score = float(v.score)
            if v.valid:
                result.iterations.append(
                    IterationRecord(t, "assignment", score, (), None, elapsed)
                )
                result.status = "valid"
                result.assignment = dict(response.assignment)
                return result
            conflict_vertices = {u for c in v.conflicts for u in (c.u, c.v)}
            conflict_subgraph = graph.induced_subgraph(conflict_vertices)
            items = format_feedback(graph, response.assignment, k)
            messages = tuple(item.message for item in items)
            signature = _signature("assignment", v.conflicts)
            attempt_text = format_assignment(response.assignment, graph.vertices)
            kind = "assignment"
        elif response.is_not_solvable:
            result.declared_unsat = True
            if cfg.accept_s1_unsat:
                score = float(verdict(graph, {}, k).score)
                result.iterations.append(
                    IterationRecord(t, "not_solvable", score, (), _signature("not_solvable", ()), elapsed)
                )
                result.status = "declared_unsat"
                return result
            score = float(verdict(graph, {}, k).score)
            conflict_subgraph = None
            messages = (NOT_SOLVABLE_REJECTED_MESSAGE,)
            signature = _signature("not_solvable", ())
            attempt_text = response.raw or NOT_SOLVABLE
            kind = "not_solvable"
        else:
            score = float(verdict(graph, {}, k).score)
            conflict_subgraph = None
            messages = (UNPARSEABLE_MESSAGE,)
            signature = _signature("unparseable", ())
            attempt_text = response.raw or "(no response)"
            kind = "unparseable"

        trend.record(score, signature)
        history.append((attempt_text, messages))
        result.iterations.append(
            IterationRecord(t, kind, score, messages, signature, elapsed, conflict_subgraph)
        )
        if not generated_added and graph.vertices:
            examples.append(generate_example(graph, k).as_prompt_example())
            generated_added = True
        if time.monotonic() >= deadline:
            result.status = "timeout"
            return result
        if escalate and escalation_rule(trend, t, max_iters):
            return result
    return result


def _record_success(cfg: OrchestratorConfig, graph: Graph, k: int, assignment: ColorAssignment, solver: str) -> None:
    if cfg.store is None:
        return
    try:
        update_memory(cfg.store, EpisodicRecord.make(graph, k, assignment, solver))
    except MemoryRejected:
        pass  # already known; nothing to add


def _finish_with_s2(
    graph: Graph,
    k: int,
    cfg: OrchestratorConfig,
    deadline: float,
    iterations: list[IterationRecord],
    declared_unsat: bool,
    start: float,
    update_store: bool,
) -> tuple[SolveOutcome, SolveTrace]:
    remaining = deadline - time.monotonic()
    if remaining <= 0:
        outcome = SolveOutcome.timeout()
        source = None
    else:
        outcome = solve_decision(graph, k, time_limit=remaining)
        source = "S2" if not outcome.is_timeout else None
        if outcome.is_sat and update_store:
            _record_success(cfg, graph, k, outcome.assignment, "S2")
    trace = SolveTrace(
        iterations=tuple(iterations),
        s2_invoked=remaining > 0,
        source=source,
        s1_declared_unsat=declared_unsat,
        total_time=time.monotonic() - start,
    )
    return outcome, trace


def solve_sofai_v2(graph: Graph, k: int, cfg: OrchestratorConfig) -> tuple[SolveOutcome, SolveTrace]:
    """Full loop: memory-seeded iterative S1 with feedback, then exact fallback."""
    if k < 1:
        raise ValueError("k must be >= 1")
    start = time.monotonic()
    deadline = start + cfg.time_limit
    loop = _s1_loop(
        graph, k, cfg, cfg.max_iterations, deadline, escalate=True, use_memory=True
    )
    if loop.status == "valid":
        _record_success(cfg, graph, k, loop.assignment, "S1")
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source="S1",
            s1_declared_unsat=loop.declared_unsat,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.sat(loop.assignment), trace
    if loop.status == "timeout":
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source=None,
            s1_declared_unsat=loop.declared_unsat,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.timeout(), trace
    if loop.status == "declared_unsat":
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source="S1",
            s1_declared_unsat=True,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.unsat(), trace
    return _finish_with_s2(
        graph, k, cfg, deadline, loop.iterations, loop.declared_unsat, start, update_store=True
    )


def solve_sofai_v1(graph: Graph, k: int, cfg: OrchestratorConfig) -> tuple[SolveOutcome, SolveTrace]:
    """One S1 shot, no feedback, no memory; anything short of valid goes to S2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    start = time.monotonic()
    deadline = start + cfg.time_limit
    loop = _s1_loop(graph, k, cfg, 1, deadline, escalate=True, use_memory=False)
    if loop.status == "valid":
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source="S1",
            s1_declared_unsat=loop.declared_unsat,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.sat(loop.assignment), trace
    if loop.status == "timeout":
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source=None,
            s1_declared_unsat=loop.declared_unsat,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.timeout(), trace
    if loop.status == "declared_unsat":
        trace = SolveTrace(
            iterations=tuple(loop.iterations),
            s2_invoked=False,
            source="S1",
            s1_declared_unsat=True,
            total_time=time.monotonic() - start,
        )
        return SolveOutcome.unsat(), trace
    return _finish_with_s2(
        graph, k, cfg, deadline, loop.iterations, loop.declared_unsat, start, update_store=False
    )


def solve_mc_s1_iN(
    graph: Graph, k: int, cfg: OrchestratorConfig, n_iterations: int
) -> tuple[SolveOutcome, SolveTrace]:
    """The capped ablation: exactly N feedback rounds, no exact fallback.

    Runs all N rounds even when the trend has stalled (there is no S2 to
    escalate to), and reports Failure("s1-exhausted") if none succeeded.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 1 <= n_iterations <= cfg.max_iterations:
        raise ValueError(f"n_iterations must be in 1..{cfg.max_iterations}")
    start = time.monotonic()
    deadline = start + cfg.time_limit
    loop = _s1_loop(
        graph, k, cfg, n_iterations, deadline, escalate=False, use_memory=True
    )
    if loop.status == "valid":
        _record_success(cfg, graph, k, loop.assignment, "S1")
        outcome = SolveOutcome.sat(loop.assignment)
        source = "S1"
    elif loop.status == "timeout":
        outcome = SolveOutcome.timeout()
        source = None
    elif loop.status == "declared_unsat":
        outcome = SolveOutcome.unsat()
        source = "S1"
    else:
        outcome = SolveOutcome.failure("s1-exhausted")
        source = None
    trace = SolveTrace(
        iterations=tuple(loop.iterations),
        s2_invoked=False,
        source=source,
        s1_declared_unsat=loop.declared_unsat,
        total_time=time.monotonic() - start,
    )
    return outcome, trace
