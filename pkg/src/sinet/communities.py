"""Top-k description-based community mining with branch-and-bound search.

Attribute selectors describe candidate communities; the induced actor
sets are scored with a community quality measure. The search runs
depth-first over conditional community pattern trees and prunes
branches whose optimistic estimate cannot reach the current top-k.

The community pattern tree holds two transaction kinds: one per actor
(carrying actor count and weighted degree) and one per edge, whose
itemset is the intersection of the endpoint selector sets and whose
payload carries the edge weight. Both endpoints of an edge satisfy a
pattern exactly when the pattern is contained in that intersection, so
the tree aggregates yield (community size, degree sum, intra-community
weight) for every pattern without revisiting the graph.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._kernels import ALG_SUM
from .contacts import AttributeTable, InteractionGraph, Selector
from .errors import UndefinedMeasureError, ValidationError
from .netstats import CommunityStats, Measure, community_quality, score_from_stats
from .patterntree import PatternTree, build_tree, canonical_item_order, grow


@dataclass(frozen=True)
class Pattern:
    """Conjunction of selectors, kept in canonical (frequency) order."""

    selectors: tuple[Selector, ...]

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.selectors), self.labels())

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(f"{a}={v}" for a, v in self.selectors))

    def matches(self, actor_selectors: frozenset[Selector]) -> bool:
        return set(self.selectors) <= actor_selectors

    def __str__(self) -> str:
        return " AND ".join(self.labels())


@dataclass(frozen=True)
class CommunityPattern:
    pattern: Pattern
    members: frozenset[str]
    quality: float
    measure: Measure
    optimistic_estimate: float

    def to_dict(self) -> dict:
        return {
            "selectors": [list(s) for s in self.pattern.selectors],
            "member_count": len(self.members),
            "members": sorted(self.members),
            "quality": self.quality,
            "optimistic_estimate_at_emit": self.optimistic_estimate,
        }


@dataclass
class CommunityPatternTree:
    """Community pattern tree plus the graph constants the measures need."""

    tree: PatternTree
    selector_ids: dict[Selector, int]
    id_selectors: list[Selector]
    graph_nodes: int
    total_weight: float

    def pattern_stats(self, basis: np.ndarray) -> CommunityStats:
        return CommunityStats(
            size=int(round(basis[0])),
            degree_sum=float(basis[1]),
            intra_weight=float(basis[2]),
            graph_nodes=self.graph_nodes,
            total_weight=self.total_weight,
        )


@dataclass
class MiningStats:
    evaluated: int = 0
    emitted: int = 0
    pruned_branches: int = 0


def build_community_tree(
    graph: InteractionGraph,
    attributes: AttributeTable,
    min_selector_support: int = 1,
) -> CommunityPatternTree:
    """Compile graph plus attribute table into a community pattern tree.

    Selectors held by fewer than ``min_selector_support`` actors cannot
    head a qualifying pattern and are left out of the tree.
    """
    missing = graph.nodes - attributes.actors()
    if missing:
        raise ValidationError(
            f"graph nodes missing from attribute table: {sorted(missing)[:5]}"
        )
    actors = sorted(graph.nodes)
    freq = Counter(s for a in actors for s in attributes.selectors(a))
    freq = Counter({s: c for s, c in freq.items() if c >= min_selector_support})
    selector_ids, id_selectors = canonical_item_order(freq)

    transactions: list[tuple[int, ...]] = []
    rows: list[tuple[float, float, float]] = []
    for actor in actors:
        ids = sorted(
            selector_ids[s] for s in attributes.selectors(actor) if s in selector_ids
        )
        transactions.append(tuple(ids))
        rows.append((1.0, graph.degree(actor), 0.0))
    for (a, b), w in sorted(graph.edges.items()):
        shared = attributes.selectors(a) & attributes.selectors(b)
        ids = sorted(selector_ids[s] for s in shared if s in selector_ids)
        transactions.append(tuple(ids))
        rows.append((0.0, 0.0, w))

    tree = build_tree(transactions, np.asarray(rows), ALG_SUM)
    return CommunityPatternTree(
        tree=tree,
        selector_ids=selector_ids,
        id_selectors=id_selectors,
        graph_nodes=graph.num_nodes(),
        total_weight=graph.total_weight(),
    )


def optimistic_estimate(stats: CommunityStats, measure: Measure) -> float:
    """Admissible upper bound on the quality of all pattern refinements.

    Any refinement keeps at most the pattern's intra-community weight,
    so for local modularity e/m bounds it; segregation and inverted
    conductance fall back to their global maximum of 1.
    """
    if measure is Measure.MODULARITY_LOCAL:
        if stats.total_weight <= 0:
            raise UndefinedMeasureError("graph has no edge weight")
        return stats.intra_weight / stats.total_weight
    return 1.0


class _TopKSearch:
    """Bounded best list plus the branch-and-bound visitor."""

    def __init__(self, cp: CommunityPatternTree, measure: Measure, k: int, prune: bool):
        self.cp = cp
        self.measure = measure
        self.k = k
        self.prune = prune
        self.stats = MiningStats()
        # entries sorted ascending by (-quality, len, labels)
        self._entries: list[tuple[tuple, tuple[int, ...], float, float]] = []

    def _labels(self, pattern_ids: tuple[int, ...]) -> tuple[str, ...]:
        return tuple(
            sorted(f"{a}={v}" for a, v in (self.cp.id_selectors[i] for i in pattern_ids))
        )

    def threshold(self) -> float | None:
        if len(self._entries) < self.k:
            return None
        return self._entries[-1][2]

    def visit(self, pattern_ids: tuple[int, ...], basis: np.ndarray) -> bool:
        self.stats.evaluated += 1
        stats = self.cp.pattern_stats(basis)
        estimate = optimistic_estimate(stats, self.measure)
        try:
            quality = score_from_stats(stats, self.measure)
        except UndefinedMeasureError:
            quality = None  # e.g. pattern covering every node under segregation
        if quality is not None:
            key = (-quality, len(pattern_ids), self._labels(pattern_ids))
            if len(self._entries) < self.k or key < self._entries[-1][0]:
                bisect.insort(self._entries, (key, pattern_ids, quality, estimate))
                if len(self._entries) > self.k:
                    self._entries.pop()
                self.stats.emitted += 1
        threshold = self.threshold()
        # Strict comparison: a refinement whose quality only ties the
        # k-th best can still win on the (length, label) tie-break.
        if self.prune and threshold is not None and estimate < threshold:
            self.stats.pruned_branches += 1
            return False
        return True

    def results(self) -> list[tuple[tuple[int, ...], float]]:
        return [(ids, est) for (_, ids, _, est) in self._entries]


def mine_top_k(
    graph: InteractionGraph,
    attributes: AttributeTable,
    measure: Measure,
    k: int,
    min_size: int = 2,
    max_depth: int = 3,
    prune: bool = True,
    stats_out: MiningStats | None = None,
) -> list[CommunityPattern]:
    """Exhaustive top-k community patterns, pruned but exact.

    Returns the k best selector conjunctions of length <= ``max_depth``
    whose member sets have at least ``min_size`` actors, sorted by
    quality with (shorter pattern, lexicographic) tie-breaks. Final
    qualities are recomputed from the graph as a consistency check on
    the tree aggregates.
    """
    if k < 1 or min_size < 1 or max_depth < 1:
        raise ValidationError("k, min_size and max_depth must all be >= 1")
    if graph.total_weight() <= 0:
        raise UndefinedMeasureError("graph has no edge weight")
    cp = build_community_tree(graph, attributes, min_selector_support=min_size)
    search = _TopKSearch(cp, measure, k, prune)
    grow(cp.tree, (), max_depth, float(min_size), search.visit)
    if stats_out is not None:
        stats_out.evaluated = search.stats.evaluated
        stats_out.emitted = search.stats.emitted
        stats_out.pruned_branches = search.stats.pruned_branches

    results: list[CommunityPattern] = []
    for pattern_ids, estimate in search.results():
        selectors = tuple(cp.id_selectors[i] for i in sorted(pattern_ids))
        pattern = Pattern(selectors)
        members = frozenset(
            a for a in graph.nodes if pattern.matches(attributes.selectors(a))
        )
        score = community_quality(graph, members, measure)
        results.append(
            CommunityPattern(
                pattern=pattern,
                members=members,
                quality=score.value,
                measure=measure,
                optimistic_estimate=estimate,
            )
        )
    results.sort(key=lambda p: (-p.quality, p.pattern.sort_key()))
    return results
