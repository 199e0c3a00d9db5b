"""Independent oracles and small random input generators.

Every oracle here recomputes its answer by the most direct route
available (exhaustive enumeration, double loops, dense matrices) so the
implementations under test are checked against a second, structurally
different path.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from sinet.contacts import AttributeTable, InteractionGraph, WeightingMode
from sinet.errors import UndefinedMeasureError
from sinet.expertrank import CombinedExpertGraph
from sinet.emm import Instance
from sinet.netstats import Measure, community_quality


def brute_force_top_k(graph, attributes, measure, k, min_size, max_depth):
    """Enumerate every selector conjunction, no tree, no pruning."""
    selectors = sorted(
        {s for a in graph.nodes for s in attributes.selectors(a)}
    )
    found = []
    for size in range(1, max_depth + 1):
        for combo in combinations(selectors, size):
            members = frozenset(
                a for a in graph.nodes if set(combo) <= attributes.selectors(a)
            )
            if len(members) < min_size:
                continue
            try:
                q = community_quality(graph, members, measure).value
            except UndefinedMeasureError:
                continue
            labels = tuple(sorted(f"{a}={v}" for a, v in combo))
            found.append(
                {
                    "selectors": frozenset(combo),
                    "members": members,
                    "quality": q,
                    "key": (-q, len(combo), labels),
                }
            )
    found.sort(key=lambda e: e["key"])
    return found[:k]


def all_qualifying_patterns(graph, attributes, min_size, max_depth):
    """(selector set, members) for every conjunction meeting min_size."""
    selectors = sorted({s for a in graph.nodes for s in attributes.selectors(a)})
    out = []
    for size in range(1, max_depth + 1):
        for combo in combinations(selectors, size):
            members = frozenset(
                a for a in graph.nodes if set(combo) <= attributes.selectors(a)
            )
            if len(members) >= min_size:
                out.append((frozenset(combo), members))
    return out


def random_attribute_graph(rng: np.random.Generator):
    """Small random weighted graph plus a random attribute table."""
    n = int(rng.integers(4, 13))
    actors = [f"n{i}" for i in range(n)]
    attributes = AttributeTable()
    pool = [("f0", "x"), ("f0", "y"), ("f1", "x"), ("f1", "y"), ("tag", "t1"), ("tag", "t2")]
    n_selectors = int(rng.integers(2, len(pool) + 1))
    pool = pool[:n_selectors]
    for a in actors:
        attributes.ensure_actor(a)
        for s in pool:
            if rng.random() < 0.45:
                attributes.add(a, *s)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                edges[(actors[i], actors[j])] = float(rng.integers(1, 4))
    if not edges:
        edges[(actors[0], actors[1])] = 1.0
    return InteractionGraph(actors, edges, WeightingMode.COUNT), attributes


def random_instances(rng: np.random.Generator, max_rows=15, max_selectors=6):
    """Small random EMM datasets with two numeric targets."""
    n = int(rng.integers(3, max_rows + 1))
    n_sel = int(rng.integers(2, max_selectors + 1))
    pool = [(f"a{j}", "1") for j in range(n_sel)]
    rows = []
    for _ in range(n):
        sels = frozenset(s for s in pool if rng.random() < 0.5)
        rows.append(
            Instance(
                selectors=sels,
                targets={
                    "x": float(rng.normal()),
                    "y": float(rng.normal()),
                },
            )
        )
    return rows


def auc_double_loop(scores: dict, outcomes: dict) -> float:
    """Direct pairwise definition of AUC with half-credit ties."""
    pos = [scores[p] for p, y in outcomes.items() if y]
    neg = [scores[p] for p, y in outcomes.items() if not y]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


def dense_ppr(
    graph: CombinedExpertGraph, query: str, damping: float = 0.85, tol: float = 1e-14
) -> dict[str, float]:
    """Dense-matrix power iteration over the combined expert graph.

    Builds the full effective transition matrix (restart mass folded
    into the query column) and iterates with numpy; returns normalized
    developer scores.
    """
    res_nodes = sorted(graph.subtree_lines)
    dev_nodes = sorted(graph.developers)
    nodes = [("res", r) for r in res_nodes] + [("dev", d) for d in dev_nodes]
    index = {n: i for i, n in enumerate(nodes)}
    q = index[("res", query)]
    n = len(nodes)
    T = np.zeros((n, n))
    for r in res_nodes:
        i = index[("res", r)]
        if graph.is_file(r):
            edges = {("dev", d): w for d, w in graph.file_developers[r].items()}
        else:
            edges = {("res", c): w for c, w in graph.children[r].items()}
        carried = 0.0
        for target, w in edges.items():
            T[i, index[target]] += damping * w
            carried += w
        T[i, q] += damping * (1.0 - carried) + (1.0 - damping)
    for d in dev_nodes:
        i = index[("dev", d)]
        carried = 0.0
        for other, w in graph.contacts.get(d, {}).items():
            T[i, index[("dev", other)]] += damping * w
            carried += w
        T[i, q] += damping * (1.0 - carried) + (1.0 - damping)
    assert np.allclose(T.sum(axis=1), 1.0, atol=1e-12)

    v = np.zeros(n)
    v[q] = 1.0
    for _ in range(100_000):
        new = v @ T
        if np.abs(new - v).sum() < tol:
            v = new
            break
        v = new
    dev_scores = {d: v[index[("dev", d)]] for d in dev_nodes}
    total = sum(dev_scores.values())
    return {d: s / total for d, s in dev_scores.items()}


def two_pass_correlation(xs, ys) -> float:
    """Textbook two-pass Pearson r."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mx, my = xs.mean(), ys.mean()
    cov = ((xs - mx) * (ys - my)).sum()
    return float(cov / np.sqrt(((xs - mx) ** 2).sum() * ((ys - my) ** 2).sum()))
