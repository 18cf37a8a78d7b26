"""Episodic memory: solved instances stored by attribute, retrieved by similarity.

Records live in an append-only JSONL file (or purely in memory for
tests).  Retrieval compares (n, e, density, k) attribute vectors; the
raw chromatic number of a fresh instance is unknown before solving, so
the color bound k stands in for it.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .graphs import ColorAssignment, Graph, parse_dimacs, serialize_dimacs, verdict

_SOLVERS = ("S1", "S2")


class MemoryRejected(ValueError):
    """Record refused: invalid solution or duplicate id."""


@dataclass(frozen=True)
class EpisodicRecord:
    id: str
    n: int
    e: int
    density: float
    k: int
    dimacs: str
    solution: Optional[ColorAssignment]
    solver: str
    timestamp: float

    @classmethod
    def make(
        cls,
        graph: Graph,
        k: int,
        solution: Optional[ColorAssignment],
        solver: str,
        timestamp: Optional[float] = None,
    ) -> "EpisodicRecord":
        """Build a record from a graph; the id is a digest of (text, k)."""
        if solver not in _SOLVERS:
            raise ValueError(f"solver must be one of {_SOLVERS}")
        dimacs = serialize_dimacs(graph)
        digest = hashlib.sha256(f"{dimacs}\nk={k}".encode()).hexdigest()[:16]
        return cls(
            id=digest,
            n=len(graph.vertices),
            e=len(graph.edges),
            density=graph.density,
            k=k,
            dimacs=dimacs,
            solution=dict(solution) if solution is not None else None,
            solver=solver,
            timestamp=time.time() if timestamp is None else timestamp,
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "n": self.n,
                "e": self.e,
                "density": self.density,
                "k": self.k,
                "dimacs": self.dimacs,
                "solution": self.solution,
                "solver": self.solver,
                "timestamp": self.timestamp,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "EpisodicRecord":
        obj = json.loads(line)
        solution = obj["solution"]
        if solution is not None:
            solution = {str(v): int(c) for v, c in solution.items()}
        return cls(
            id=obj["id"],
            n=int(obj["n"]),
            e=int(obj["e"]),
            density=float(obj["density"]),
            k=int(obj["k"]),
            dimacs=obj["dimacs"],
            solution=solution,
            solver=obj["solver"],
            timestamp=float(obj["timestamp"]),
        )


class MemoryStore:
    """Append-only store of episodic records.

    With a path, every accepted record is appended to the JSONL file
    before the call returns, and existing lines are loaded eagerly.
    Reads are lock-free snapshots; appends are serialized.
    """

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._records: list[EpisodicRecord] = []
        self._ids: set[str] = set()
        if self.path is not None and self.path.exists():
            for line in self.path.read_text().splitlines():
                if not line.strip():
                    continue
                rec = EpisodicRecord.from_json(line)
                self._records.append(rec)
                self._ids.add(rec.id)

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> tuple[EpisodicRecord, ...]:
        return tuple(self._records)

    def append(self, record: EpisodicRecord) -> None:
        with self._lock:
            if record.id in self._ids:
                raise MemoryRejected(f"duplicate record id {record.id}")
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a") as fh:
                    fh.write(record.to_json() + "\n")
            self._records.append(record)
            self._ids.add(record.id)


def update_memory(store: MemoryStore, record: EpisodicRecord) -> str:
    """Validate and durably append a record; returns its id.

    A record carrying a solution must re-verify as a proper coloring of
    its own instance within its k, otherwise it is rejected.
    """
    if record.solution is not None:
        graph = parse_dimacs(record.dimacs)
        if not verdict(graph, record.solution, record.k).valid:
            raise MemoryRejected(f"record {record.id} carries an invalid solution")
    store.append(record)
    return record.id


def retrieve_memory(
    store: MemoryStore,
    graph: Graph,
    k: int,
    alpha: float = 0.1,
    limit: int = 1,
) -> list[EpisodicRecord]:
    """Records whose attribute distance to (graph, k) is below alpha, nearest first.

    Distance is the mean of per-attribute |difference| over (n, e,
    density, k), each scaled by the store's observed max for that
    attribute (density is already in [0, 1]; scales floor at 1 so a
    degenerate store cannot divide by zero).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    records = store.records()
    if not records:
        return []
    query = (len(graph.vertices), len(graph.edges), graph.density, k)
    scales = (
        max(1.0, max(r.n for r in records)),
        max(1.0, max(r.e for r in records)),
        1.0,
        max(1.0, max(r.k for r in records)),
    )
    scored: list[tuple[float, int, EpisodicRecord]] = []
    for idx, rec in enumerate(records):
        attrs = (rec.n, rec.e, rec.density, rec.k)
        d = sum(abs(q - a) / s for q, a, s in zip(query, attrs, scales)) / len(query)
        if d < alpha:
            scored.append((d, idx, rec))
    scored.sort(key=lambda item: (item[0], item[1]))
    return [rec for _, _, rec in scored[:limit]]
