"""The compiled and pure-Python kernel lanes must be interchangeable."""

import numpy as np
import pytest

from sinet._kernels import ALG_MOMENTS1, ALG_MOMENTS2, ALG_SUM, available_lanes

LANES = available_lanes()
HAVE_COMPILED = "compiled" in LANES

pytestmark = pytest.mark.skipif(
    not HAVE_COMPILED, reason="compiled kernel lane not built"
)


def random_tree_arrays(rng, n_nodes=40):
    parents = np.empty(n_nodes, dtype=np.int32)
    items = np.empty(n_nodes, dtype=np.int32)
    parents[0] = -1
    items[0] = -1
    for i in range(1, n_nodes):
        parents[i] = int(rng.integers(0, i))
        items[i] = int(rng.integers(0, 6))
    return items, parents


class TestConditionalPaths:
    def test_lanes_agree(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            items, parents = random_tree_arrays(rng)
            heads = rng.integers(1, len(items), size=10).astype(np.int32)
            buf_c, off_c = LANES["compiled"].conditional_paths(items, parents, heads)
            buf_p, off_p = LANES["python"].conditional_paths(items, parents, heads)
            assert np.array_equal(buf_c, buf_p)
            assert np.array_equal(off_c, off_p)


def random_rows(rng, n, algebra):
    if algebra == ALG_SUM:
        return rng.normal(size=(n, 3))
    width = 3 if algebra == ALG_MOMENTS1 else 6
    rows = np.zeros((n, width))
    rows[:, 0] = rng.integers(0, 5, size=n).astype(float)
    rows[:, 1] = rng.normal(size=n)
    if algebra == ALG_MOMENTS2:
        rows[:, 2] = rng.normal(size=n)
        rows[:, 3:5] = np.abs(rng.normal(size=(n, 2)))
        rows[:, 5] = rng.normal(size=n)
    else:
        rows[:, 2] = np.abs(rng.normal(size=n))
    rows[rows[:, 0] == 0.0] = 0.0
    return rows


@pytest.mark.parametrize("algebra", [ALG_SUM, ALG_MOMENTS1, ALG_MOMENTS2])
class TestMergeParity:
    def test_merge_rows(self, algebra):
        rng = np.random.default_rng(1)
        for _ in range(40):
            rows = random_rows(rng, int(rng.integers(1, 30)), algebra)
            idx = rng.integers(0, len(rows), size=int(rng.integers(1, 20))).astype(np.int32)
            out_c = LANES["compiled"].merge_rows(rows, idx, algebra)
            out_p = LANES["python"].merge_rows(rows, idx, algebra)
            np.testing.assert_allclose(out_c, out_p, rtol=1e-9, atol=1e-12)

    def test_scatter_merge(self, algebra):
        rng = np.random.default_rng(2)
        for _ in range(40):
            rows = random_rows(rng, 25, algebra)
            k = int(rng.integers(1, 60))
            dest_idx = rng.integers(0, 8, size=k).astype(np.int32)
            row_idx = rng.integers(0, 25, size=k).astype(np.int32)
            dest_c = np.zeros((8, rows.shape[1]))
            dest_p = np.zeros((8, rows.shape[1]))
            LANES["compiled"].scatter_merge(dest_c, dest_idx, rows, row_idx, algebra)
            LANES["python"].scatter_merge(dest_p, dest_idx, rows, row_idx, algebra)
            np.testing.assert_allclose(dest_c, dest_p, rtol=1e-9, atol=1e-12)

    def test_merge_pair(self, algebra):
        rng = np.random.default_rng(3)
        for _ in range(40):
            rows = random_rows(rng, 2, algebra)
            acc_c = rows[0].copy()
            acc_p = rows[0].copy()
            LANES["compiled"].merge_pair(acc_c, rows[1], algebra)
            LANES["python"].merge_pair(acc_p, rows[1], algebra)
            np.testing.assert_allclose(acc_c, acc_p, rtol=1e-9, atol=1e-12)


class TestEndToEndParity:
    def test_miners_agree_across_lanes(self, monkeypatch):
        """Same mining results whichever lane the tree machinery uses."""
        import sinet.patterntree as pt
        from sinet.emm import Threshold, make_model, mine
        from helpers import random_instances

        rng = np.random.default_rng(77)
        datasets = [random_instances(rng) for _ in range(10)]
        model = make_model("correlation", ["x", "y"])

        def run_all():
            return [
                mine(rows, model, 2, 3, Threshold(float("-inf")))
                for rows in datasets
            ]

        results = {}
        for lane_name, lane in LANES.items():
            monkeypatch.setattr(pt._kernels, "conditional_paths", lane.conditional_paths)
            monkeypatch.setattr(pt._kernels, "merge_rows", lane.merge_rows)
            monkeypatch.setattr(pt._kernels, "scatter_merge", lane.scatter_merge)
            results[lane_name] = run_all()
        for r_c, r_p in zip(results["compiled"], results["python"]):
            m_c = {frozenset(p.selectors): p for p in r_c}
            m_p = {frozenset(p.selectors): p for p in r_p}
            assert set(m_c) == set(m_p)
            for key, p_c in m_c.items():
                assert p_c.support == m_p[key].support
                assert p_c.quality == pytest.approx(m_p[key].quality, abs=1e-9)
