"""Prefix-tree machinery shared by the community and EMM miners.

Transactions are canonical sequences of integer item ids (most frequent
first). Each tree node carries an aggregate payload row that is merged
under one of the kernel algebras: plain componentwise sums for the
community pattern tree, moment aggregates for valuation bases. The tree
is stored as a flat arena (item / parent / payload arrays plus header
lists), which keeps the recursive conditional projection in tight
array loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from ._kernels import ALG_SUM  # noqa: F401  (re-exported for callers)


@dataclass
class PatternTree:
    """Flat-arena prefix tree; node 0 is the root (item -1, parent -1)."""

    algebra: int
    width: int
    items: np.ndarray    # int32, item id per node
    parents: np.ndarray  # int32, parent node index
    payload: np.ndarray  # float64 (n_nodes, width)
    headers: dict[int, np.ndarray]  # item id -> int32 node indices
    order: list[int]     # item ids present, ascending canonical order

    def num_nodes(self) -> int:
        return len(self.items)

    def root_payload(self) -> np.ndarray:
        return self.payload[0].copy()

    def item_basis(self, item: int) -> np.ndarray:
        """Merged payload of every node carrying ``item``."""
        return _kernels.merge_rows(self.payload, self.headers[item], self.algebra)


def _group_transactions(
    transactions: Sequence[tuple[int, ...]], rows: np.ndarray, algebra: int
) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Merge payload rows of identical transactions."""
    groups: dict[tuple[int, ...], int] = {}
    group_of_row = np.empty(len(transactions), dtype=np.int32)
    distinct: list[tuple[int, ...]] = []
    for i, t in enumerate(transactions):
        g = groups.get(t)
        if g is None:
            g = len(distinct)
            groups[t] = g
            distinct.append(t)
        group_of_row[i] = g
    merged = np.zeros((len(distinct), rows.shape[1]))
    _kernels.scatter_merge(
        merged, group_of_row, rows, np.arange(len(transactions), dtype=np.int32), algebra
    )
    return distinct, merged


def build_tree(
    transactions: Sequence[tuple[int, ...]],
    rows: np.ndarray,
    algebra: int,
) -> PatternTree:
    """Insert canonical transactions; payloads merge along each path.

    The root accumulates every transaction (including empty ones), so
    its payload is the merge of all inserted rows.
    """
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    width = rows.shape[1]
    distinct, merged = _group_transactions(transactions, rows, algebra)

    items: list[int] = [-1]
    parents: list[int] = [-1]
    children: list[dict[int, int]] = [{}]
    headers: dict[int, list[int]] = {}
    dest_idx: list[int] = []
    row_idx: list[int] = []

    for g, trans in enumerate(distinct):
        node = 0
        dest_idx.append(0)
        row_idx.append(g)
        for item in trans:
            nxt = children[node].get(item)
            if nxt is None:
                nxt = len(items)
                items.append(item)
                parents.append(node)
                children.append({})
                children[node][item] = nxt
                headers.setdefault(item, []).append(nxt)
            node = nxt
            dest_idx.append(node)
            row_idx.append(g)

    payload = np.zeros((len(items), width))
    _kernels.scatter_merge(
        payload,
        np.asarray(dest_idx, dtype=np.int32),
        merged,
        np.asarray(row_idx, dtype=np.int32),
        algebra,
    )
    return PatternTree(
        algebra=algebra,
        width=width,
        items=np.asarray(items, dtype=np.int32),
        parents=np.asarray(parents, dtype=np.int32),
        payload=payload,
        headers={i: np.asarray(ns, dtype=np.int32) for i, ns in headers.items()},
        order=sorted(headers),
    )


def conditional_tree(
    tree: PatternTree, item: int, min_support: float
) -> PatternTree | None:
    """Tree of the prefix paths of ``item``, support-filtered.

    Support is the count component (column 0) of the merged payload;
    items below ``min_support`` within the conditional base cannot head
    a qualifying refinement and are dropped. Returns None when nothing
    survives.
    """
    heads = tree.headers[item]
    buf, offsets = _kernels.conditional_paths(tree.items, tree.parents, heads)
    base_rows = tree.payload[heads]
    if len(buf) == 0:
        return None

    lengths = np.diff(offsets)
    support = np.zeros(int(buf.max()) + 1)
    np.add.at(support, buf, np.repeat(base_rows[:, 0], lengths))
    keep = support >= min_support
    if not keep.any():
        return None

    keep_pos = keep[buf]
    new_buf = buf[keep_pos]
    new_lengths = np.zeros(len(heads), dtype=np.int64)
    np.add.at(new_lengths, np.repeat(np.arange(len(heads)), lengths), keep_pos)
    new_offsets = np.concatenate(([0], np.cumsum(new_lengths)))

    transactions = [
        tuple(new_buf[new_offsets[i]: new_offsets[i + 1]].tolist())
        for i in range(len(heads))
    ]
    return build_tree(transactions, base_rows, tree.algebra)


def conditional_item_bases(
    tree: PatternTree, item: int, min_support: float
) -> list[tuple[int, np.ndarray]]:
    """Merged basis per item of the conditional base, without a tree.

    Equivalent to the header sums of ``conditional_tree(tree, item)``;
    used at the deepest search level where no further projection will
    happen and building the trie would be wasted work.
    """
    heads = tree.headers[item]
    buf, offsets = _kernels.conditional_paths(tree.items, tree.parents, heads)
    if len(buf) == 0:
        return []
    base_rows = tree.payload[heads]
    n_items = int(buf.max()) + 1
    dest = np.zeros((n_items, tree.width))
    row_idx = np.repeat(
        np.arange(len(heads), dtype=np.int32), np.diff(offsets).astype(np.int64)
    )
    _kernels.scatter_merge(dest, buf, base_rows, row_idx, tree.algebra)
    return [
        (j, dest[j]) for j in range(n_items - 1, -1, -1) if dest[j, 0] >= min_support
    ]


def grow(
    tree: PatternTree,
    suffix: tuple[int, ...],
    depth_left: int,
    min_support: float,
    visit: Callable[[tuple[int, ...], np.ndarray], bool],
) -> None:
    """Depth-first pattern growth over recursive conditional trees.

    Items are processed least-frequent-first; ``visit`` receives each
    qualifying pattern with its merged basis and returns whether the
    branch should be refined further.
    """
    for item in reversed(tree.order):
        basis = tree.item_basis(item)
        if basis[0] < min_support:
            continue
        pattern = suffix + (item,)
        expand = visit(pattern, basis)
        if not expand or depth_left <= 1:
            continue
        if depth_left == 2:
            for child, child_basis in conditional_item_bases(tree, item, min_support):
                visit(pattern + (child,), child_basis)
        else:
            cond = conditional_tree(tree, item, min_support)
            if cond is not None:
                grow(cond, pattern, depth_left - 1, min_support, visit)


def canonical_item_order(
    frequencies: dict, key_order: Callable | None = None
) -> tuple[dict, list]:
    """Map selectors to dense ids by descending frequency, ties lexicographic.

    Returns (selector -> id, id -> selector list).
    """
    ranked = sorted(frequencies, key=lambda s: (-frequencies[s], s))
    return {s: i for i, s in enumerate(ranked)}, ranked


def encode_transactions(
    itemsets: Iterable[Iterable],
    item_ids: dict,
) -> list[tuple[int, ...]]:
    """Canonically ordered id tuples; unknown items are dropped."""
    out = []
    for itemset in itemsets:
        ids = sorted(item_ids[s] for s in itemset if s in item_ids)
        out.append(tuple(ids))
    return out
