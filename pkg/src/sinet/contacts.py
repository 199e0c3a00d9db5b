"""Proximity events, contact sessionization and interaction graphs.

Raw tag-to-tag proximity detections are folded into contact sessions
(a contact must last at least ``min_duration`` seconds and ends once the
tags miss each other for more than ``open_gap`` seconds), and sessions
are aggregated into weighted undirected interaction graphs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import OrderingError, UnknownActorError, ValidationError

Pair = tuple[str, str]
Selector = tuple[str, str]

DEFAULT_OPEN_GAP = 60
DEFAULT_MIN_DURATION = 20


def canonical_pair(a: str, b: str) -> Pair:
    """Order an actor pair lexicographically so (a, b) == (b, a)."""
    if a == b:
        raise ValidationError(f"self-pair not allowed: {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, order=True)
class ProximityEvent:
    """One raw pairwise proximity detection."""

    actor_a: str
    actor_b: str
    time: int
    strength: float | None = field(default=None, compare=False)

    def __post_init__(self):
        a, b = canonical_pair(self.actor_a, self.actor_b)
        object.__setattr__(self, "actor_a", a)
        object.__setattr__(self, "actor_b", b)
        object.__setattr__(self, "time", int(self.time))
        if self.time < 0:
            raise ValidationError(f"negative event time: {self.time}")

    @property
    def pair(self) -> Pair:
        return (self.actor_a, self.actor_b)


@dataclass(frozen=True, order=True)
class ContactSession:
    """A maximal face-to-face contact interval for one actor pair."""

    actor_a: str
    actor_b: str
    start: int
    end: int

    def __post_init__(self):
        a, b = canonical_pair(self.actor_a, self.actor_b)
        object.__setattr__(self, "actor_a", a)
        object.__setattr__(self, "actor_b", b)
        if self.end < self.start:
            raise ValidationError(f"session ends before it starts: {self}")
        if self.start < 0:
            raise ValidationError(f"negative session start: {self.start}")

    @property
    def pair(self) -> Pair:
        return (self.actor_a, self.actor_b)

    @property
    def duration(self) -> int:
        return self.end - self.start


class AttributeTable:
    """Descriptive selectors per actor.

    A selector is an (attribute, value) string pair; an actor may carry
    several values of a multi-valued attribute (tags) and holds at most
    one value of naturally single-valued ones (status, country).
    """

    def __init__(self, selectors: Mapping[str, Iterable[Selector]] | None = None):
        self._table: dict[str, frozenset[Selector]] = {}
        if selectors:
            for actor, sels in selectors.items():
                self._table[actor] = frozenset((str(a), str(v)) for a, v in sels)

    def add(self, actor: str, attribute: str, value: str) -> None:
        current = self._table.get(actor, frozenset())
        self._table[actor] = current | {(str(attribute), str(value))}

    def ensure_actor(self, actor: str) -> None:
        self._table.setdefault(actor, frozenset())

    def selectors(self, actor: str) -> frozenset[Selector]:
        return self._table.get(actor, frozenset())

    def actors(self) -> set[str]:
        return set(self._table)

    def all_selectors(self) -> set[Selector]:
        out: set[Selector] = set()
        for sels in self._table.values():
            out |= sels
        return out

    def __contains__(self, actor: str) -> bool:
        return actor in self._table

    def __len__(self) -> int:
        return len(self._table)

    def __iter__(self) -> Iterator[str]:
        return iter(self._table)


class WeightingMode(Enum):
    COUNT = "count"
    DURATION = "duration"
    DURATION_NORMALIZED = "duration_normalized"


class InteractionGraph:
    """Undirected weighted actor graph; immutable after construction.

    Zero-weight edges are never stored, so all weights are positive.
    """

    def __init__(
        self,
        nodes: Iterable[str],
        edges: Mapping[Pair, float],
        weighting_mode: WeightingMode = WeightingMode.COUNT,
    ):
        self._nodes: set[str] = set(nodes)
        self._edges: dict[Pair, float] = {}
        self._adj: dict[str, dict[str, float]] = {n: {} for n in self._nodes}
        for (a, b), w in edges.items():
            a, b = canonical_pair(a, b)
            if w < 0:
                raise ValidationError(f"negative edge weight for {(a, b)}: {w}")
            if w == 0:
                continue
            self._nodes.add(a)
            self._nodes.add(b)
            self._adj.setdefault(a, {})[b] = w
            self._adj.setdefault(b, {})[a] = w
            self._edges[(a, b)] = w
        self.weighting_mode = weighting_mode
        self._total_weight = sum(self._edges.values())

    @property
    def nodes(self) -> set[str]:
        return set(self._nodes)

    @property
    def edges(self) -> dict[Pair, float]:
        return dict(self._edges)

    def __contains__(self, actor: str) -> bool:
        return actor in self._nodes

    def num_nodes(self) -> int:
        return len(self._nodes)

    def num_edges(self) -> int:
        return len(self._edges)

    def total_weight(self) -> float:
        """Sum of edge weights (the m in all weight-ratio measures)."""
        return self._total_weight

    def weight(self, a: str, b: str) -> float:
        return self._adj.get(a, {}).get(b, 0.0)

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, {})

    def neighbors(self, actor: str) -> dict[str, float]:
        if actor not in self._nodes:
            raise UnknownActorError(f"unknown actor: {actor!r}")
        return dict(self._adj[actor])

    def degree(self, actor: str, weighted: bool = True) -> float:
        if actor not in self._nodes:
            raise UnknownActorError(f"unknown actor: {actor!r}")
        nbrs = self._adj[actor]
        return sum(nbrs.values()) if weighted else float(len(nbrs))

    def scaled(self, factor: float) -> "InteractionGraph":
        """Copy with every edge weight multiplied by ``factor`` > 0."""
        if factor <= 0:
            raise ValidationError(f"scale factor must be positive: {factor}")
        return InteractionGraph(
            self._nodes,
            {p: w * factor for p, w in self._edges.items()},
            self.weighting_mode,
        )


def sessionize(
    events: Iterable[ProximityEvent],
    open_gap: int = DEFAULT_OPEN_GAP,
    min_duration: int = DEFAULT_MIN_DURATION,
) -> list[ContactSession]:
    """Fold a time-sorted detection stream into contact sessions.

    Per pair, maximal runs of detections with inter-detection gaps
    <= ``open_gap`` form candidate sessions spanning first to last
    detection; candidates shorter than ``min_duration`` are dropped.
    Duplicate (pair, time) detections are ignored. Raises
    OrderingError if the stream is not sorted by time.
    """
    last_time: int | None = None
    open_runs: dict[Pair, tuple[int, int]] = {}  # pair -> (run start, last seen)
    sessions: list[ContactSession] = []

    def close(pair: Pair, start: int, end: int) -> None:
        if end - start >= min_duration:
            sessions.append(ContactSession(pair[0], pair[1], start, end))

    for event in events:
        if last_time is not None and event.time < last_time:
            raise OrderingError(
                f"events not sorted by time: {event.time} after {last_time}"
            )
        last_time = event.time
        run = open_runs.get(event.pair)
        if run is None:
            open_runs[event.pair] = (event.time, event.time)
        else:
            start, last_seen = run
            if event.time == last_seen:
                continue  # duplicate detection
            if event.time - last_seen <= open_gap:
                open_runs[event.pair] = (start, event.time)
            else:
                close(event.pair, start, last_seen)
                open_runs[event.pair] = (event.time, event.time)

    for pair, (start, last_seen) in open_runs.items():
        close(pair, start, last_seen)

    sessions.sort(key=lambda s: (s.start, s.pair, s.end))
    return sessions


def build_graph(
    sessions: Sequence[ContactSession],
    mode: WeightingMode = WeightingMode.COUNT,
    min_session_duration: int = 0,
) -> InteractionGraph:
    """Aggregate sessions into a weighted interaction graph.

    Sessions shorter than ``min_session_duration`` are discarded; the
    graph contains exactly the actors of the surviving sessions.
    """
    counts: dict[Pair, int] = defaultdict(int)
    durations: dict[Pair, int] = defaultdict(int)
    for s in sessions:
        if s.duration < min_session_duration:
            continue
        counts[s.pair] += 1
        durations[s.pair] += s.duration

    nodes = {a for p in counts for a in p}
    if mode is WeightingMode.COUNT:
        edges = {p: float(c) for p, c in counts.items()}
    elif mode is WeightingMode.DURATION:
        edges = {p: float(d) for p, d in durations.items()}
    elif mode is WeightingMode.DURATION_NORMALIZED:
        max_sum = max(durations.values(), default=0)
        if max_sum == 0:
            edges = {}
        else:
            edges = {p: d / max_sum for p, d in durations.items()}
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown weighting mode: {mode}")
    return InteractionGraph(nodes, edges, mode)


def threshold_sweep(
    sessions: Sequence[ContactSession],
    thresholds: Sequence[int],
    mode: WeightingMode = WeightingMode.COUNT,
) -> list[tuple[int, InteractionGraph]]:
    """One graph per minimal conversation length, thresholds ascending."""
    if list(thresholds) != sorted(thresholds):
        raise ValidationError(f"thresholds must be ascending: {list(thresholds)}")
    return [(t, build_graph(sessions, mode, min_session_duration=t)) for t in thresholds]
