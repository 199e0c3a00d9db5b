"""Pure-Python/numpy implementations of the mining kernels.

Moment aggregates are merged with centered (Chan-style) updates so that
variances and comoments stay accurate even when values carry a large
common offset; plain power sums would cancel catastrophically there.
"""

from __future__ import annotations

import numpy as np

ALG_SUM = 0
ALG_MOMENTS1 = 1
ALG_MOMENTS2 = 2


def conditional_paths(items, parents, heads):
    """Prefix path (root->node, head excluded) per head node.

    Returns a flat int32 buffer of item ids plus an int64 offsets array
    with ``offsets[i]:offsets[i+1]`` delimiting the i-th path. All
    chains are walked simultaneously, one tree level per numpy pass;
    node 0 is the root and carries no item.
    """
    heads = np.asarray(heads, dtype=np.int32)
    items = np.asarray(items, dtype=np.int32)
    parents = np.asarray(parents, dtype=np.int32)
    current = parents[heads]
    depths = np.zeros(len(heads), dtype=np.int64)
    layers: list[np.ndarray] = []
    while True:
        active = current > 0
        if not active.any():
            break
        layers.append(np.where(active, current, 0))
        depths += active
        current = np.where(active, parents[np.maximum(current, 0)], 0)
    offsets = np.concatenate(([0], np.cumsum(depths)))
    buf = np.empty(int(offsets[-1]), dtype=np.int32)
    ends = offsets[1:]
    for k, layer in enumerate(layers):
        mask = layer > 0
        # the k-th ancestor sits k slots before the end of its path
        buf[ends[mask] - 1 - k] = items[layer[mask]]
    return buf, offsets


def merge_pair(acc, row, algebra):
    """Merge ``row`` into ``acc`` in place (one monoid operation)."""
    if algebra == ALG_SUM:
        acc += row
        return acc
    nb = row[0]
    if nb == 0.0:
        return acc
    na = acc[0]
    if na == 0.0:
        acc[:] = row
        return acc
    n = na + nb
    if algebra == ALG_MOMENTS1:
        delta = row[1] - acc[1]
        acc[1] += delta * nb / n
        acc[2] += row[2] + delta * delta * na * nb / n
    else:
        dx = row[1] - acc[1]
        dy = row[2] - acc[2]
        acc[1] += dx * nb / n
        acc[2] += dy * nb / n
        acc[3] += row[3] + dx * dx * na * nb / n
        acc[4] += row[4] + dy * dy * na * nb / n
        acc[5] += row[5] + dx * dy * na * nb / n
    acc[0] = n
    return acc


def _batch_moments1(rows):
    n = rows[:, 0]
    n_tot = n.sum()
    if n_tot == 0.0:
        return np.zeros(3)
    mean = float(n @ rows[:, 1]) / n_tot
    centered = rows[:, 1] - mean
    m2 = rows[:, 2].sum() + float(n @ (centered * centered))
    return np.array([n_tot, mean, m2])


def _batch_moments2(rows):
    n = rows[:, 0]
    n_tot = n.sum()
    if n_tot == 0.0:
        return np.zeros(6)
    mean_x = float(n @ rows[:, 1]) / n_tot
    mean_y = float(n @ rows[:, 2]) / n_tot
    cx = rows[:, 1] - mean_x
    cy = rows[:, 2] - mean_y
    m2x = rows[:, 3].sum() + float(n @ (cx * cx))
    m2y = rows[:, 4].sum() + float(n @ (cy * cy))
    cxy = rows[:, 5].sum() + float(n @ (cx * cy))
    return np.array([n_tot, mean_x, mean_y, m2x, m2y, cxy])


def merge_rows(payload, idx, algebra):
    """Fold the selected payload rows into a single basis vector."""
    rows = payload[idx] if idx is not None else payload
    if rows.shape[0] == 0:
        return np.zeros(payload.shape[1])
    if algebra == ALG_SUM:
        return rows.sum(axis=0)
    if algebra == ALG_MOMENTS1:
        return _batch_moments1(rows)
    return _batch_moments2(rows)


def scatter_merge(dest, dest_idx, rows, row_idx, algebra):
    """Merge ``rows[row_idx[k]]`` into ``dest[dest_idx[k]]`` for every k.

    The numpy lane groups contributions per destination first (one
    centered batch merge per destination), which is algebraically the
    same monoid fold as the sequential compiled lane.
    """
    if len(dest_idx) == 0:
        return dest
    picked = rows[row_idx]
    if algebra == ALG_SUM:
        np.add.at(dest, dest_idx, picked)
        return dest

    n = picked[:, 0]
    n_g = np.zeros(dest.shape[0])
    np.add.at(n_g, dest_idx, n)
    active = n_g > 0.0
    safe_n = np.where(active, n_g, 1.0)

    def group_mean(col):
        acc = np.zeros(dest.shape[0])
        np.add.at(acc, dest_idx, n * col)
        return acc / safe_n

    if algebra == ALG_MOMENTS1:
        mean_g = group_mean(picked[:, 1])
        cx = picked[:, 1] - mean_g[dest_idx]
        m2_g = np.zeros(dest.shape[0])
        np.add.at(m2_g, dest_idx, picked[:, 2] + n * cx * cx)
        group = np.stack([n_g, mean_g, m2_g], axis=1)
    else:
        mean_x = group_mean(picked[:, 1])
        mean_y = group_mean(picked[:, 2])
        cx = picked[:, 1] - mean_x[dest_idx]
        cy = picked[:, 2] - mean_y[dest_idx]
        m2x = np.zeros(dest.shape[0])
        m2y = np.zeros(dest.shape[0])
        cxy = np.zeros(dest.shape[0])
        np.add.at(m2x, dest_idx, picked[:, 3] + n * cx * cx)
        np.add.at(m2y, dest_idx, picked[:, 4] + n * cy * cy)
        np.add.at(cxy, dest_idx, picked[:, 5] + n * cx * cy)
        group = np.stack([n_g, mean_x, mean_y, m2x, m2y, cxy], axis=1)

    fresh = active & (dest[:, 0] == 0.0)
    dest[fresh] = group[fresh]
    for d in np.nonzero(active & ~fresh)[0]:
        merge_pair(dest[d], group[d], algebra)
    return dest
