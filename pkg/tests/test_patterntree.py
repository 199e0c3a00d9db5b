"""Arena tree invariants shared by both miners."""

import numpy as np

from sinet._kernels import ALG_SUM
from sinet.patterntree import build_tree, canonical_item_order, conditional_tree, grow


def small_tree():
    transactions = [(0, 1), (0, 1, 2), (0, 2), (1,), (), (0, 1)]
    rows = np.ones((len(transactions), 1))
    return transactions, build_tree(transactions, rows, ALG_SUM)


class TestBuildTree:
    def test_root_payload_is_total(self):
        transactions, tree = small_tree()
        assert tree.root_payload()[0] == len(transactions)

    def test_header_sums_equal_item_frequency(self):
        transactions, tree = small_tree()
        for item in tree.order:
            freq = sum(1 for t in transactions if item in t)
            assert tree.item_basis(item)[0] == freq

    def test_parent_payload_at_least_children_sum(self):
        _, tree = small_tree()
        children_sum = np.zeros((tree.num_nodes(), tree.width))
        for node in range(1, tree.num_nodes()):
            children_sum[tree.parents[node]] += tree.payload[node]
        assert (tree.payload >= children_sum - 1e-12).all()

    def test_shared_prefixes_compress(self):
        transactions, tree = small_tree()
        total_items = sum(len(t) for t in transactions)
        assert tree.num_nodes() - 1 < total_items


class TestConditionalTree:
    def test_prefix_paths_support(self):
        _, tree = small_tree()
        cond = conditional_tree(tree, 2, min_support=1)
        # paths above item 2: (0,1) and (0,)
        assert cond is not None
        assert cond.item_basis(0)[0] == 2
        assert cond.item_basis(1)[0] == 1

    def test_min_support_filters_items(self):
        _, tree = small_tree()
        cond = conditional_tree(tree, 2, min_support=2)
        assert cond is not None
        assert cond.order == [0]

    def test_no_survivors_returns_none(self):
        _, tree = small_tree()
        assert conditional_tree(tree, 2, min_support=5) is None


class TestGrow:
    def collect(self, transactions, min_support, max_depth):
        rows = np.ones((len(transactions), 1))
        tree = build_tree(transactions, rows, ALG_SUM)
        seen = {}

        def visit(pattern, basis):
            seen[frozenset(pattern)] = basis[0]
            return True

        grow(tree, (), max_depth, float(min_support), visit)
        return seen

    def test_matches_bruteforce_counts(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            n_items = int(rng.integers(2, 6))
            transactions = [
                tuple(sorted(j for j in range(n_items) if rng.random() < 0.5))
                for _ in range(int(rng.integers(2, 12)))
            ]
            seen = self.collect(transactions, min_support=1, max_depth=3)
            from itertools import combinations

            expected = {}
            for size in range(1, 4):
                for combo in combinations(range(n_items), size):
                    support = sum(1 for t in transactions if set(combo) <= set(t))
                    if support >= 1:
                        expected[frozenset(combo)] = support
            assert seen == expected

    def test_depth_limit_respected(self):
        seen = self.collect([(0, 1, 2), (0, 1, 2)], min_support=1, max_depth=2)
        assert max(len(p) for p in seen) == 2


class TestCanonicalOrder:
    def test_descending_frequency_then_lexicographic(self):
        freq = {("b", "1"): 3, ("a", "1"): 3, ("c", "1"): 5}
        ids, ranked = canonical_item_order(freq)
        assert ranked == [("c", "1"), ("a", "1"), ("b", "1")]
        assert ids[("c", "1")] == 0
