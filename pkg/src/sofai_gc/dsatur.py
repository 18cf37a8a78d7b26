"""Exact decision solver: DSATUR vertex ordering with exhaustive backtracking.

Answers "is the graph k-colorable?" with a certificate.  Sat outcomes
carry a verified proper coloring; Unsat means the full search space was
exhausted, so the answer is a proof, not a guess.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .graphs import ColorAssignment, Graph, verdict


class DeadlineExceeded(Exception):
    """Raised when a computation runs past its wall-clock budget."""


class _DeadlineHit(Exception):
    # Internal unwind signal for the recursive search; never escapes.
    pass


@dataclass(frozen=True)
class SolveOutcome:
    """Terminal result of a decision attempt.

    status: "sat" (assignment holds a verified coloring), "unsat"
    (search space exhausted), "timeout", or "failure" (reason says why).
    """

    status: str
    assignment: Optional[ColorAssignment] = None
    reason: Optional[str] = None

    @classmethod
    def sat(cls, assignment: ColorAssignment) -> "SolveOutcome":
        return cls("sat", assignment=dict(assignment))

    @classmethod
    def unsat(cls) -> "SolveOutcome":
        return cls("unsat")

    @classmethod
    def timeout(cls) -> "SolveOutcome":
        return cls("timeout")

    @classmethod
    def failure(cls, reason: str) -> "SolveOutcome":
        return cls("failure", reason=reason)

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"

    @property
    def is_unsat(self) -> bool:
        return self.status == "unsat"

    @property
    def is_timeout(self) -> bool:
        return self.status == "timeout"

    @property
    def is_failure(self) -> bool:
        return self.status == "failure"


class _SearchState:
    """Mutable search state: partial assignment plus saturation bookkeeping.

    saturation[v] is the set of colors already used on v's neighbors; it
    is only maintained for uncolored vertices, which is all the selector
    and the feasibility check ever read.
    """

    __slots__ = ("assignment", "saturation")

    def __init__(self, graph: Graph) -> None:
        self.assignment: ColorAssignment = {}
        self.saturation: dict[str, set[int]] = {v: set() for v in graph.vertices}

    def assign(self, graph: Graph, v: str, color: int) -> list[str]:
        """Color v, returning the neighbors whose saturation gained `color`."""
        self.assignment[v] = color
        changed = []
        for u in graph.adjacency[v]:
            if u not in self.assignment and color not in self.saturation[u]:
                self.saturation[u].add(color)
                changed.append(u)
        return changed

    def unassign(self, v: str, color: int, changed: list[str]) -> None:
        # Undo is exact because search unwinds LIFO: every saturation entry
        # added by this assign call is still attributable to it alone.
        del self.assignment[v]
        for u in changed:
            self.saturation[u].discard(color)


def select_vertex(state: _SearchState, graph: Graph) -> str:
    """Next vertex to color: max saturation, then max degree, then stable order."""
    best: str | None = None
    best_key: tuple[int, int, int] | None = None
    for idx, v in enumerate(graph.vertices):
        if v in state.assignment:
            continue
        key = (len(state.saturation[v]), graph.degree(v), -idx)
        if best_key is None or key > best_key:
            best, best_key = v, key
    if best is None:
        raise ValueError("all vertices are already colored")
    return best


def solve_decision(graph: Graph, k: int, time_limit: float = 200.0) -> SolveOutcome:
    """Decide whether the graph admits a proper coloring with at most k colors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if time_limit <= 0:
        return SolveOutcome.timeout()
    deadline = time.monotonic() + time_limit
    if not graph.vertices:
        return SolveOutcome.sat({})

    state = _SearchState(graph)
    n = len(graph.vertices)

    def search(depth: int) -> bool:
        if time.monotonic() > deadline:
            raise _DeadlineHit
        if depth == n:
            return True
        v = select_vertex(state, graph)
        # The first vertex colored may take color 1 only: color classes are
        # interchangeable, so any solution can be relabeled to comply.
        limit = 1 if depth == 0 else k
        for color in range(1, limit + 1):
            if color in state.saturation[v]:
                continue
            changed = state.assign(graph, v, color)
            if search(depth + 1):
                return True
            state.unassign(v, color, changed)
        return False

    try:
        found = search(0)
    except _DeadlineHit:
        return SolveOutcome.timeout()
    if not found:
        return SolveOutcome.unsat()
    assert verdict(graph, state.assignment, k).valid
    return SolveOutcome.sat(state.assignment)


def chromatic_number(graph: Graph, time_limit: float = 200.0) -> int:
    """Smallest k for which the graph is k-colorable; 0 for the empty graph.

    The whole sweep shares one deadline; DeadlineExceeded is raised if it
    cannot finish in time.
    """
    n = len(graph.vertices)
    if n == 0:
        return 0
    deadline = time.monotonic() + time_limit
    for k in range(1, n + 1):
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise DeadlineExceeded(f"chromatic number search exceeded {time_limit}s")
        outcome = solve_decision(graph, k, time_limit=remaining)
        if outcome.is_timeout:
            raise DeadlineExceeded(f"chromatic number search exceeded {time_limit}s")
        if outcome.is_sat:
            return k
    raise AssertionError("graph not n-colorable with n vertices")  # unreachable
