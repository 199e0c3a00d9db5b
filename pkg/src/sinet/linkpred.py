"""Structural link prediction on contact networks.

Unweighted neighborhood measures and their duration-aware weighted
variants, ranking-based evaluation (AUC, precision@k) with separate
tracks for new and recurring contacts, and the duration-bucketed
recurrence analysis.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .contacts import (
    ContactSession,
    InteractionGraph,
    Pair,
    WeightingMode,
    build_graph,
    canonical_pair,
)
from .errors import EvaluationError, UnknownActorError, ValidationError


class LinkMeasure(Enum):
    COMMON_NEIGHBORS = "common_neighbors"
    JACCARD = "jaccard"
    ADAMIC_ADAR = "adamic_adar"
    PREFERENTIAL = "preferential"
    W_COMMON_NEIGHBORS = "w_common_neighbors"
    W_ADAMIC_ADAR = "w_adamic_adar"


class TaskKind(Enum):
    NEW = "new"
    RECURRING = "recurring"


def score(
    graph: InteractionGraph,
    pair: Pair,
    measure: LinkMeasure,
    aa_log1p: bool = False,
) -> float:
    """Structural similarity of an actor pair under one measure.

    ``aa_log1p`` switches Adamic-Adar to log(1 + deg) weighting instead
    of skipping degree-1 common neighbors.
    """
    x, y = canonical_pair(*pair)
    for actor in (x, y):
        if actor not in graph:
            raise UnknownActorError(f"unknown actor: {actor!r}")
    nbr_x = graph.neighbors(x)
    nbr_y = graph.neighbors(y)
    common = set(nbr_x) & set(nbr_y)

    if measure is LinkMeasure.COMMON_NEIGHBORS:
        return float(len(common))
    if measure is LinkMeasure.JACCARD:
        union = set(nbr_x) | set(nbr_y)
        return len(common) / len(union) if union else 0.0
    if measure is LinkMeasure.ADAMIC_ADAR:
        total = 0.0
        for z in common:
            deg = len(graph.neighbors(z))
            if aa_log1p:
                total += 1.0 / math.log(1.0 + deg)
            elif deg >= 2:
                total += 1.0 / math.log(deg)
        return total
    if measure is LinkMeasure.PREFERENTIAL:
        return float(len(nbr_x) * len(nbr_y))
    if measure is LinkMeasure.W_COMMON_NEIGHBORS:
        return sum((nbr_x[z] + nbr_y[z]) / 2.0 for z in common)
    if measure is LinkMeasure.W_ADAMIC_ADAR:
        total = 0.0
        for z in common:
            strength = sum(graph.neighbors(z).values())
            total += (nbr_x[z] + nbr_y[z]) / (2.0 * math.log(1.0 + strength))
        return total
    raise ValueError(f"unknown measure: {measure}")  # pragma: no cover


def rank_candidates(
    graph: InteractionGraph,
    candidates: Iterable[Pair],
    measure: LinkMeasure,
    aa_log1p: bool = False,
) -> list[tuple[Pair, float]]:
    """Candidates sorted by score descending, ties by canonical pair."""
    scored = [
        (canonical_pair(*p), score(graph, p, measure, aa_log1p)) for p in candidates
    ]
    scored.sort(key=lambda ps: (-ps[1], ps[0]))
    return scored


@dataclass(frozen=True)
class PredictionTask:
    """A train graph plus labeled test pairs for one task kind."""

    train_graph: InteractionGraph
    outcomes: Mapping[Pair, bool]
    durations: Mapping[Pair, float]
    kind: TaskKind

    def __post_init__(self):
        for pair in self.outcomes:
            is_edge = self.train_graph.has_edge(*pair)
            if self.kind is TaskKind.NEW and is_edge:
                raise ValidationError(f"NEW task contains a train edge: {pair}")
            if self.kind is TaskKind.RECURRING and not is_edge:
                raise ValidationError(f"RECURRING task contains a non-edge: {pair}")


def make_task(
    train_sessions: Sequence[ContactSession],
    test_sessions: Sequence[ContactSession],
    kind: TaskKind,
    mode: WeightingMode = WeightingMode.DURATION,
    positive_min_duration: float | None = None,
) -> PredictionTask:
    """Build a prediction task from two observation periods.

    NEW tasks label every train-graph non-edge; RECURRING tasks label
    the train edges. A pair is positive when its test-period total
    duration is > 0, or >= ``positive_min_duration`` when given.
    """
    train_graph = build_graph(train_sessions, mode)
    test_duration: dict[Pair, float] = defaultdict(float)
    for s in test_sessions:
        test_duration[s.pair] += s.duration

    def positive(pair: Pair) -> bool:
        d = test_duration.get(pair, 0.0)
        return d > 0 if positive_min_duration is None else d >= positive_min_duration

    nodes = sorted(train_graph.nodes)
    if kind is TaskKind.NEW:
        pairs = [
            (a, b) for a, b in combinations(nodes, 2) if not train_graph.has_edge(a, b)
        ]
    else:
        pairs = sorted(train_graph.edges)
    return PredictionTask(
        train_graph=train_graph,
        outcomes={p: positive(p) for p in pairs},
        durations={p: test_duration.get(p, 0.0) for p in pairs},
        kind=kind,
    )


def auc_from_scores(scored: Mapping[Pair, float], outcomes: Mapping[Pair, bool]) -> float:
    """Probability a random positive outranks a random negative (ties 0.5).

    Computed as the normalized Mann-Whitney U statistic with average
    ranks over tied scores.
    """
    pairs = sorted(outcomes)
    values = np.array([scored[p] for p in pairs])
    labels = np.array([outcomes[p] for p in pairs], dtype=bool)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("test set needs at least one positive and one negative")
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(sorted_vals):
        j = i
        while j + 1 < len(sorted_vals) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i: j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
        i = j + 1
    rank_sum = float(ranks[labels].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass(frozen=True)
class Evaluation:
    auc: float
    precision_at: dict[int, float]


def evaluate(
    task: PredictionTask,
    measure: LinkMeasure,
    ks: Sequence[int] = (1, 5, 10),
    aa_log1p: bool = False,
) -> Evaluation:
    """AUC and precision@k of one measure's ranking on a task."""
    scored = {
        p: score(task.train_graph, p, measure, aa_log1p) for p in task.outcomes
    }
    auc = auc_from_scores(scored, task.outcomes)
    ranked = rank_candidates(task.train_graph, task.outcomes, measure, aa_log1p)
    precision: dict[int, float] = {}
    for k in ks:
        top = ranked[:k]
        if top:
            precision[k] = sum(1 for p, _ in top if task.outcomes[p]) / len(top)
    return Evaluation(auc=auc, precision_at=precision)


NO_CONTACT = "no"


@dataclass
class BucketDistribution:
    """Test-period durations of the pairs in one train-duration bucket."""

    label: str
    pairs: list[Pair] = field(default_factory=list)
    durations: list[float] = field(default_factory=list)

    def survival(self) -> list[tuple[float, float]]:
        """(min_length, fraction of pairs with duration >= min_length)."""
        if not self.durations:
            return []
        ordered = sorted(self.durations)
        n = len(ordered)
        out = []
        for i, d in enumerate(ordered):
            if i == 0 or d != ordered[i - 1]:
                out.append((d, (n - i) / n))
        return out

    def quantile(self, q: float) -> float:
        if not self.durations:
            raise EvaluationError(f"bucket {self.label} is empty")
        return float(np.quantile(self.durations, q))


def bucket_labels(edges: Sequence[float]) -> list[str]:
    labels = [NO_CONTACT]
    for lo, hi in zip(edges, edges[1:]):
        labels.append(f"[{lo:g},{hi:g})")
    labels.append(f"[{edges[-1]:g},inf)")
    return labels


def duration_bucket_analysis(
    sessions_train: Sequence[ContactSession],
    sessions_test: Sequence[ContactSession],
    bucket_edges: Sequence[float],
) -> dict[str, BucketDistribution]:
    """Group test-period contacts by their pair's train-period duration.

    Buckets are [e0,e1), ..., [e_last,inf) over total train duration,
    plus the pseudo-bucket of pairs without any train contact. Only
    pairs with a test-period contact contribute a duration.
    """
    edges = list(bucket_edges)
    if not edges or edges != sorted(edges) or len(set(edges)) != len(edges):
        raise ValidationError(f"bucket edges must be strictly ascending: {edges}")
    train_duration: dict[Pair, float] = defaultdict(float)
    for s in sessions_train:
        train_duration[s.pair] += s.duration
    test_duration: dict[Pair, float] = defaultdict(float)
    for s in sessions_test:
        test_duration[s.pair] += s.duration

    labels = bucket_labels(edges)
    buckets = {label: BucketDistribution(label) for label in labels}

    def label_for(train_d: float | None) -> str | None:
        if train_d is None:
            return NO_CONTACT
        for i, (lo, hi) in enumerate(zip(edges, edges[1:])):
            if lo <= train_d < hi:
                return labels[i + 1]
        if train_d >= edges[-1]:
            return labels[-1]
        return None  # below the first edge: outside the analysis

    for pair, test_d in sorted(test_duration.items()):
        if test_d <= 0:
            continue
        label = label_for(train_duration.get(pair))
        if label is None:
            continue
        buckets[label].pairs.append(pair)
        buckets[label].durations.append(test_d)
    return buckets


def feature_matrix(
    graph: InteractionGraph,
    pairs: Sequence[Pair],
    measures: Sequence[LinkMeasure],
    outcomes: Mapping[Pair, bool] | None = None,
) -> list[dict]:
    """Per-pair measure scores (plus label when outcomes are known)."""
    rows = []
    for pair in pairs:
        a, b = canonical_pair(*pair)
        row: dict = {"actor_a": a, "actor_b": b}
        for m in measures:
            row[m.value] = score(graph, (a, b), m)
        if outcomes is not None:
            row["label"] = int(outcomes[(a, b)])
        rows.append(row)
    return rows
