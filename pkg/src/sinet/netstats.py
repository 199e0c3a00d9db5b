"""Network statistics and community quality measures.

Implements the three community measures used throughout the analysis
(local modularity, segregation index, inverted conductance), the
duration-weighted intra-community contact probability indicator, the
cumulative contact length distribution and the ambassador role
indicator.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .contacts import ContactSession, InteractionGraph
from .errors import UndefinedMeasureError, ValidationError

Partition = Mapping[str, str]


class Measure(Enum):
    MODULARITY_LOCAL = "modularity"
    SEGREGATION = "segregation"
    INV_CONDUCTANCE = "conductance"


@dataclass(frozen=True)
class CommunityScore:
    measure: Measure
    value: float


@dataclass(frozen=True)
class CommunityStats:
    """Sufficient statistics of a community within a fixed graph.

    All three measures are functions of (size, degree_sum, intra_weight)
    plus the graph constants (n, m); this is what makes tree-based
    pattern mining possible without touching the graph per pattern.
    """

    size: int
    degree_sum: float   # sum of weighted degrees over members
    intra_weight: float  # total edge weight with both endpoints inside
    graph_nodes: int
    total_weight: float

    @property
    def cross_weight(self) -> float:
        return self.degree_sum - 2.0 * self.intra_weight


def community_stats(graph: InteractionGraph, members: Iterable[str]) -> CommunityStats:
    member_set = set(members)
    unknown = member_set - graph.nodes
    if unknown:
        raise ValidationError(f"members not in graph: {sorted(unknown)[:5]}")
    degree_sum = sum(graph.degree(a) for a in member_set)
    intra = sum(
        w for (a, b), w in graph.edges.items() if a in member_set and b in member_set
    )
    return CommunityStats(
        size=len(member_set),
        degree_sum=degree_sum,
        intra_weight=intra,
        graph_nodes=graph.num_nodes(),
        total_weight=graph.total_weight(),
    )


def score_from_stats(stats: CommunityStats, measure: Measure) -> float:
    """Evaluate a community measure from sufficient statistics."""
    m = stats.total_weight
    if m <= 0:
        raise UndefinedMeasureError("graph has no edge weight")
    n = stats.graph_nodes
    size = stats.size
    if size == 0:
        raise UndefinedMeasureError("empty community")

    if measure is Measure.MODULARITY_LOCAL:
        return stats.intra_weight / m - (stats.degree_sum / (2.0 * m)) ** 2

    if size >= n:
        raise UndefinedMeasureError(f"{measure.value} needs a proper subset of nodes")

    if measure is Measure.SEGREGATION:
        expected_cross = 2.0 * m * size * (n - size) / (n * (n - 1))
        return (expected_cross - stats.cross_weight) / expected_cross

    if measure is Measure.INV_CONDUCTANCE:
        vol = stats.degree_sum
        vol_rest = 2.0 * m - vol
        denom = min(vol, vol_rest)
        if denom <= 0:
            raise UndefinedMeasureError("conductance undefined: a side has zero volume")
        return 1.0 - stats.cross_weight / denom

    raise ValueError(f"unknown measure: {measure}")  # pragma: no cover


def community_quality(
    graph: InteractionGraph, members: Iterable[str], measure: Measure
) -> CommunityScore:
    """Score one community against the rest of the graph."""
    stats = community_stats(graph, members)
    return CommunityScore(measure, score_from_stats(stats, measure))


def partition_quality(
    graph: InteractionGraph, partition: Partition, measure: Measure
) -> float:
    """Aggregate a measure over a partition of (a subset of) the nodes.

    Local modularities add up to the Newman-Girvan partition modularity;
    segregation and inverted conductance aggregate as a size-weighted
    mean so tiny communities cannot dominate.
    """
    communities: dict[str, set[str]] = defaultdict(set)
    for actor, community in partition.items():
        if actor in graph:
            communities[community].add(actor)
    communities = {c: ms for c, ms in communities.items() if ms}
    if len(communities) < 2:
        raise ValidationError("partition must cover at least 2 non-empty communities")

    values = {
        c: score_from_stats(community_stats(graph, ms), measure)
        for c, ms in communities.items()
    }
    if measure is Measure.MODULARITY_LOCAL:
        return sum(values.values())
    total = sum(len(ms) for ms in communities.values())
    return sum(len(communities[c]) * v for c, v in values.items()) / total


def cumulative_contact_lengths(
    sessions: Sequence[ContactSession],
) -> list[tuple[int, int]]:
    """(min_length, number of contacts lasting at least that long) pairs."""
    counts = Counter(s.duration for s in sessions)
    result: list[tuple[int, int]] = []
    remaining = len(sessions)
    for d in sorted(counts):
        result.append((d, remaining))
        remaining -= counts[d]
    return result


def intra_contact_probability(
    sessions: Sequence[ContactSession],
    partition: Partition,
    thresholds: Sequence[int],
) -> list[tuple[int, float]]:
    """Duration share of intra-community contacts per minimal length.

    Only sessions with both endpoints assigned to a community count;
    thresholds with no surviving sessions are omitted from the output.
    """
    if list(thresholds) != sorted(thresholds):
        raise ValidationError(f"thresholds must be ascending: {list(thresholds)}")
    out: list[tuple[int, float]] = []
    for t in thresholds:
        intra = 0.0
        total = 0.0
        for s in sessions:
            if s.duration < t:
                continue
            ca = partition.get(s.actor_a)
            cb = partition.get(s.actor_b)
            if ca is None or cb is None:
                continue
            total += s.duration
            if ca == cb:
                intra += s.duration
        if total > 0:
            out.append((t, intra / total))
    return out


def ambassadors(
    graph: InteractionGraph,
    partition: Partition,
    degree_quantile: float = 0.8,
    min_communities: int = 2,
    weighted: bool = True,
) -> set[str]:
    """Actors with high degree whose neighbors span several communities.

    An ambassador's (weighted) degree reaches the given quantile of all
    node degrees and its neighbors cover at least ``min_communities``
    communities different from the actor's own.
    """
    if not 0 < degree_quantile < 1:
        raise ValidationError(f"degree_quantile must be in (0,1): {degree_quantile}")
    if not graph.nodes:
        return set()
    degrees = {a: graph.degree(a, weighted=weighted) for a in graph.nodes}
    cutoff = float(np.quantile(list(degrees.values()), degree_quantile))
    result: set[str] = set()
    for actor, deg in degrees.items():
        if deg < cutoff:
            continue
        own = partition.get(actor)
        foreign = {
            partition[nbr]
            for nbr in graph.neighbors(actor)
            if nbr in partition and partition[nbr] != own
        }
        if len(foreign) >= min_communities:
            result.add(actor)
    return result
