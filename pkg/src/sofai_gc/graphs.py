"""Graph types, DIMACS-style parsing/serialization, and coloring verification.

Everything else in the package is built on the value types here: an
immutable labeled graph, partial color assignments, conflict detection,
and the correctness verdict used to accept or reject proposed colorings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

# Vertex label -> color index (>= 1).  May be partial.
ColorAssignment = dict[str, int]

_LABELS = ("SAT", "UNSAT")


class DimacsError(ValueError):
    """Malformed DIMACS-style text."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with labeled vertices.

    Vertex order is stable (source or generator order) and edges keep
    their insertion order and endpoint orientation; equality compares
    both tuples, so a parse/serialize round trip is exact.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    adjacency: dict[str, frozenset[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        vset = set(self.vertices)
        seen: set[frozenset[str]] = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u!r}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r}, {v!r}) references unknown vertex")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u!r}, {v!r})")
            seen.add(key)
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adjacency", {v: frozenset(ns) for v, ns in adj.items()})

    @property
    def density(self) -> float:
        """Edge density 2e / (n * (n - 1)); 0.0 for graphs with < 2 vertices."""
        n = len(self.vertices)
        if n < 2:
            return 0.0
        return 2.0 * len(self.edges) / (n * (n - 1))

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def induced_subgraph(self, keep: Iterable[str]) -> Graph:
        """Subgraph induced by `keep`, preserving the stable vertex/edge order."""
        kept = set(keep)
        unknown = kept - set(self.vertices)
        if unknown:
            raise ValueError(f"unknown vertices: {sorted(unknown)}")
        vertices = tuple(v for v in self.vertices if v in kept)
        edges = tuple((u, v) for u, v in self.edges if u in kept and v in kept)
        return Graph(vertices, edges)


@dataclass(frozen=True)
class Conflict:
    """An edge whose endpoints are both assigned the same color."""

    u: str
    v: str
    color: int


@dataclass(frozen=True)
class Verdict:
    """Correctness verdict for a (graph, assignment, k) triple.

    `score` is the fraction of edges whose two endpoints are assigned and
    differently colored; an edge with an unassigned endpoint counts as
    violated, so score 1 on a nonempty graph implies a full proper
    coloring.  `valid` additionally requires the color budget to hold.
    """

    score: Fraction
    conflicts: tuple[Conflict, ...]
    colors_used: int
    complete: bool
    valid: bool


def _check_assignment(graph: Graph, assignment: Mapping[str, int]) -> None:
    for v, c in assignment.items():
        if v not in graph.adjacency:
            raise ValueError(f"assignment references unknown vertex {v!r}")
        if not isinstance(c, int) or c < 1:
            raise ValueError(f"color for vertex {v!r} must be an integer >= 1, got {c!r}")


def detect_conflicts(graph: Graph, assignment: Mapping[str, int]) -> list[Conflict]:
    """Edges whose endpoints are both assigned and share a color, in edge order.

    Edges with an unassigned endpoint are not conflicts; they surface
    through the verdict's `complete` flag instead.
    """
    _check_assignment(graph, assignment)
    out = []
    for u, v in graph.edges:
        cu = assignment.get(u)
        cv = assignment.get(v)
        if cu is not None and cu == cv:
            out.append(Conflict(u, v, cu))
    return out


def verdict(graph: Graph, assignment: Mapping[str, int], k: int) -> Verdict:
    """Score an assignment against the graph and the color budget k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    conflicts = detect_conflicts(graph, assignment)
    m = len(graph.edges)
    if m == 0:
        score = Fraction(1)
    else:
        satisfied = 0
        for u, v in graph.edges:
            cu = assignment.get(u)
            cv = assignment.get(v)
            if cu is not None and cv is not None and cu != cv:
                satisfied += 1
        score = Fraction(satisfied, m)
    complete = all(v in assignment for v in graph.vertices)
    colors_used = len(set(assignment.values())) if assignment else 0
    valid = score == 1 and complete and colors_used <= k
    return Verdict(score, tuple(conflicts), colors_used, complete, valid)


def _first_appearance(edges: Sequence[tuple[str, str]]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for u, v in edges:
        seen.setdefault(u)
        seen.setdefault(v)
    return tuple(seen)


_INT_RE = re.compile(r"^[0-9]+$")


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS-style text (`c` comments, `p edge nv ne`, `e u v` lines)."""
    graph, _, _ = parse_dimacs_instance(text)
    return graph


def parse_dimacs_instance(text: str) -> tuple[Graph, int | None, str | None]:
    """Parse DIMACS-style text plus the structured `c k` / `c label` comments.

    Vertex tokens are arbitrary non-whitespace strings kept verbatim.  The
    vertex list is taken from a `c vertices ...` comment when present;
    otherwise from edge-endpoint first-appearance order; otherwise, for
    classic integer instances with isolated vertices, it is filled in as
    1..nv.
    """
    counts: tuple[int, int] | None = None
    edges: list[tuple[str, str]] = []
    seen_edges: set[frozenset[str]] = set()
    declared: list[str] | None = None
    k: int | None = None
    label: str | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens:
            continue
        tag = tokens[0]
        if tag == "c":
            if len(tokens) == 3 and tokens[1] == "k" and _INT_RE.match(tokens[2]):
                k = int(tokens[2])
            elif len(tokens) == 3 and tokens[1] == "label" and tokens[2] in _LABELS:
                label = tokens[2]
            elif len(tokens) >= 2 and tokens[1] == "vertices":
                declared = (declared or []) + tokens[2:]
            continue
        if tag == "p":
            if counts is not None:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] != "edge":
                raise DimacsError(f"line {lineno}: expected 'p edge <nv> <ne>'")
            try:
                nv, ne = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer counts in problem line") from None
            if nv < 0 or ne < 0:
                raise DimacsError(f"line {lineno}: negative counts in problem line")
            counts = (nv, ne)
        elif tag == "e":
            if counts is None:
                raise DimacsError(f"line {lineno}: edge line before problem line")
            if len(tokens) != 3:
                raise DimacsError(f"line {lineno}: expected 'e <u> <v>'")
            u, v = tokens[1], tokens[2]
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop at {u!r}")
            key = frozenset((u, v))
            if key in seen_edges:
                raise DimacsError(f"line {lineno}: duplicate edge ({u!r}, {v!r})")
            seen_edges.add(key)
            edges.append((u, v))
        else:
            raise DimacsError(f"line {lineno}: unrecognized line {raw!r}")

    if counts is None:
        raise DimacsError("missing problem line")
    nv, ne = counts
    if len(edges) != ne:
        raise DimacsError(f"problem line declares {ne} edges, found {len(edges)}")

    endpoints = _first_appearance(edges)
    if declared is not None:
        if len(declared) != nv:
            raise DimacsError(f"problem line declares {nv} vertices, 'c vertices' lists {len(declared)}")
        missing = set(endpoints) - set(declared)
        if missing:
            raise DimacsError(f"edge endpoints not in 'c vertices' list: {sorted(missing)}")
        vertices = tuple(declared)
    elif len(endpoints) == nv:
        vertices = endpoints
    elif len(endpoints) < nv and all(
        _INT_RE.match(t) and t == str(int(t)) and 1 <= int(t) <= nv for t in endpoints
    ):
        # Classic integer DIMACS: isolated vertices are implied by the header.
        vertices = tuple(str(i) for i in range(1, nv + 1))
    else:
        raise DimacsError(f"problem line declares {nv} vertices, edges mention {len(endpoints)}")

    try:
        graph = Graph(vertices, tuple(edges))
    except ValueError as exc:
        raise DimacsError(str(exc)) from None
    return graph, k, label


def serialize_dimacs(graph: Graph, k: int | None = None, label: str | None = None) -> str:
    """Serialize a graph to DIMACS-style text that round-trips exactly.

    k and label, when given, are carried in `c k <int>` and
    `c label <SAT|UNSAT>` comment lines.  A `c vertices ...` comment is
    emitted only when the vertex list is not recoverable from the edge
    lines alone (isolated vertices or a non-edge-order vertex list).
    """
    lines: list[str] = []
    if k is not None:
        if k < 1:
            raise ValueError("k must be >= 1")
        lines.append(f"c k {k}")
    if label is not None:
        if label not in _LABELS:
            raise ValueError(f"label must be one of {_LABELS}, got {label!r}")
        lines.append(f"c label {label}")
    if graph.vertices and _first_appearance(graph.edges) != graph.vertices:
        lines.append("c vertices " + " ".join(graph.vertices))
    lines.append(f"p edge {len(graph.vertices)} {len(graph.edges)}")
    lines.extend(f"e {u} {v}" for u, v in graph.edges)
    return "\n".join(lines)
