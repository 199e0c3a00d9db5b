"""Valuation bases and tree mining against the naive baseline."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_instances, two_pass_correlation
from sinet.errors import UndefinedModelError, ValidationError
from sinet.emm import (
    Instance,
    MineStats,
    Threshold,
    TopK,
    build_basis_tree,
    insert,
    make_model,
    merge,
    mine,
    model_params,
    naive_mine,
    neutral,
    quality,
    singleton,
)

ALL_MODELS = [
    ("frequency", ()),
    ("mean", ("x",)),
    ("variance", ("x",)),
    ("correlation", ("x", "y")),
    ("slope", ("x", "y")),
]


def inst(selectors, x=0.0, y=0.0):
    return Instance(frozenset(selectors), {"x": x, "y": y})


def basis_of(model, instances):
    b = neutral(model)
    for i in instances:
        b = insert(b, i)
    return b


class TestBases:
    def test_merge_neutral_is_identity(self):
        model = make_model("correlation", ["x", "y"])
        b = basis_of(model, [inst({("a", "1")}, 1.0, 2.0), inst(set(), 3.0, 1.0)])
        merged = merge(neutral(model), b)
        assert np.allclose(merged.vec, b.vec)

    def test_frequency_merge_adds_counts(self):
        model = make_model("frequency")
        b1 = basis_of(model, [inst(set())] * 3)
        b2 = basis_of(model, [inst(set())] * 4)
        assert merge(b1, b2).vec[0] == 7

    def test_class_mismatch_rejected(self):
        m1 = make_model("mean", ["x"])
        m2 = make_model("variance", ["x"])
        with pytest.raises(TypeError):
            merge(neutral(m1), neutral(m2))

    def test_merge_equals_batch_on_random_point_sets(self):
        rng = np.random.default_rng(2)
        model = make_model("correlation", ["x", "y"])
        for _ in range(50):
            a = [inst(set(), rng.normal(), rng.normal()) for _ in range(rng.integers(2, 20))]
            b = [inst(set(), rng.normal(), rng.normal()) for _ in range(rng.integers(2, 20))]
            merged = merge(basis_of(model, a), basis_of(model, b))
            union = basis_of(model, a + b)
            assert np.allclose(merged.vec, union.vec, atol=1e-9)

    def test_mean_and_variance_params(self):
        model = make_model("variance", ["x"])
        b = basis_of(model, [inst(set(), x) for x in (1.0, 2.0, 3.0)])
        params = model_params(b)
        assert params["mean"] == pytest.approx(2.0)
        assert params["variance"] == pytest.approx(2.0 / 3.0)

    def test_collinear_points(self):
        model = make_model("correlation", ["x", "y"])
        b = basis_of(model, [inst(set(), v, v) for v in (0.0, 1.0, 2.0)])
        assert model_params(b)["r"] == pytest.approx(1.0)
        slope = make_model("slope", ["x", "y"])
        assert slope.params(b.vec)["slope"] == pytest.approx(1.0)

    def test_anticorrelated_points(self):
        model = make_model("correlation", ["x", "y"])
        b = basis_of(model, [inst(set(), 0.0, 1.0), inst(set(), 1.0, 0.0)])
        assert model_params(b)["r"] == pytest.approx(-1.0)

    def test_zero_variance_undefined(self):
        model = make_model("correlation", ["x", "y"])
        b = basis_of(model, [inst(set(), 1.0, 0.0), inst(set(), 1.0, 5.0)])
        with pytest.raises(UndefinedModelError):
            model_params(b)

    def test_below_min_count_undefined(self):
        model = make_model("correlation", ["x", "y"])
        b = basis_of(model, [inst(set(), 1.0, 2.0)])
        with pytest.raises(UndefinedModelError):
            model_params(b)

    def test_correlation_matches_two_pass_oracle(self):
        rng = np.random.default_rng(8)
        model = make_model("correlation", ["x", "y"])
        for _ in range(100):
            n = int(rng.integers(3, 40))
            xs = rng.normal(size=n)
            ys = 0.4 * xs + rng.normal(size=n)
            b = basis_of(model, [inst(set(), x, y) for x, y in zip(xs, ys)])
            assert model_params(b)["r"] == pytest.approx(
                two_pass_correlation(xs, ys), abs=1e-9
            )

    def test_stable_under_large_offset(self):
        """Values near 1e6 with unit spread must not lose the signal."""
        rng = np.random.default_rng(12)
        model = make_model("correlation", ["x", "y"])
        xs = 1e6 + rng.normal(size=200)
        ys = 1e6 + 0.5 * (xs - 1e6) + rng.normal(size=200)
        b = basis_of(model, [inst(set(), x, y) for x, y in zip(xs, ys)])
        assert model_params(b)["r"] == pytest.approx(
            two_pass_correlation(xs, ys), abs=1e-9
        )

    def test_missing_target_rejected(self):
        model = make_model("correlation", ["x", "y"])
        with pytest.raises(ValidationError):
            model.singleton({"x": 1.0})

    def test_quality_zero_for_identical_bases(self):
        model = make_model("mean", ["x"])
        b = basis_of(model, [inst(set(), x) for x in (1.0, 5.0)])
        assert quality(b, b) == 0.0


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@st.composite
def random_basis(draw, model_name, targets):
    model = make_model(model_name, targets)
    n = draw(st.integers(min_value=0, max_value=20))
    rows = [
        inst(set(), draw(finite), draw(finite)) for _ in range(n)
    ]
    return basis_of(model, rows)


class TestMonoidLaws:
    @given(
        random_basis("correlation", ("x", "y")),
        random_basis("correlation", ("x", "y")),
        random_basis("correlation", ("x", "y")),
    )
    @settings(max_examples=250, deadline=None)
    def test_associative_commutative_correlation(self, a, b, c):
        left = merge(merge(a, b), c).vec
        right = merge(a, merge(b, c)).vec
        scale = np.maximum(1.0, np.maximum(np.abs(left), np.abs(right)))
        assert (np.abs(left - right) / scale < 1e-9).all()
        ab, ba = merge(a, b).vec, merge(b, a).vec
        scale = np.maximum(1.0, np.abs(ab))
        assert (np.abs(ab - ba) / scale < 1e-9).all()

    @given(random_basis("mean", ("x",)), random_basis("mean", ("x",)))
    @settings(max_examples=250, deadline=None)
    def test_identity_and_commutativity_mean(self, a, b):
        model = a.model
        assert np.allclose(merge(neutral(model), a).vec, a.vec)
        assert np.allclose(merge(a, neutral(model)).vec, a.vec)
        scale = np.maximum(1.0, np.abs(merge(a, b).vec))
        assert (np.abs(merge(a, b).vec - merge(b, a).vec) / scale < 1e-9).all()

    @given(st.lists(st.tuples(finite, finite), min_size=0, max_size=30),
           st.integers(min_value=0, max_value=30))
    @settings(max_examples=250, deadline=None)
    def test_homomorphism_concat_split(self, points, cut):
        """basis(A + B) == merge(basis(A), basis(B)) for any split."""
        model = make_model("correlation", ["x", "y"])
        rows = [inst(set(), x, y) for x, y in points]
        cut = min(cut, len(rows))
        merged = merge(basis_of(model, rows[:cut]), basis_of(model, rows[cut:]))
        direct = basis_of(model, rows)
        scale = np.maximum(1.0, np.abs(direct.vec))
        assert (np.abs(merged.vec - direct.vec) / scale < 1e-9).all()


def results_match(r1, r2, tol=1e-9):
    if len(r1) != len(r2):
        return False
    key = lambda p: (frozenset(p.selectors))
    m1 = {key(p): p for p in r1}
    m2 = {key(p): p for p in r2}
    if set(m1) != set(m2):
        return False
    for k, p1 in m1.items():
        p2 = m2[k]
        if p1.support != p2.support or abs(p1.quality - p2.quality) > tol:
            return False
    return True


class TestMining:
    def test_single_attribute_patterns(self):
        model = make_model("frequency")
        rows = [inst({("color", "red")}), inst({("color", "red")}),
                inst({("color", "blue")})]
        result = mine(rows, model, 1, 1, Threshold(float("-inf")))
        supports = {p.selectors[0]: p.support for p in result}
        assert supports == {("color", "red"): 2, ("color", "blue"): 1}

    def test_min_support_filters(self):
        model = make_model("frequency")
        rows = [inst({("color", "red")}), inst({("color", "blue")})]
        result = mine(rows, model, 2, 1, Threshold(float("-inf")))
        assert result == []

    def test_empty_data(self):
        model = make_model("frequency")
        assert mine([], model, 1, 2, Threshold(float("-inf"))) == []
        assert naive_mine([], model, 1, 2, Threshold(float("-inf"))) == []

    def test_one_instance_all_depths(self):
        model = make_model("frequency")
        rows = [inst({("a", "1"), ("b", "1"), ("c", "1")})]
        result = mine(rows, model, 1, 2, Threshold(float("-inf")))
        assert len(result) == 3 + 3  # singles and pairs, depth capped at 2

    @pytest.mark.parametrize("model_name,targets", ALL_MODELS)
    def test_mine_equals_naive_random(self, model_name, targets):
        rng = np.random.default_rng(99)
        model = make_model(model_name, targets)
        for _ in range(40):
            rows = random_instances(rng)
            min_support = max(model.n_min, int(rng.integers(1, 4)))
            depth = int(rng.integers(1, 4))
            r1 = mine(rows, model, min_support, depth, Threshold(float("-inf")))
            r2 = naive_mine(rows, model, min_support, depth, Threshold(float("-inf")))
            assert results_match(r1, r2)

    def test_top_k_mode_selects_k_best(self):
        model = make_model("mean", ["x"])
        rows = [inst({("g", "hi")}, 10.0) for _ in range(5)]
        rows += [inst({("g", "lo")}, 0.1) for _ in range(5)]
        rows += [inst(set(), 1.0) for _ in range(5)]
        top = mine(rows, model, 2, 1, TopK(1))
        assert len(top) == 1
        assert top[0].selectors == (("g", "hi"),)

    def test_planted_collinear_selector_wins(self):
        rng = np.random.default_rng(31)
        model = make_model("correlation", ["x", "y"])
        rows = []
        for _ in range(300):
            x, y = rng.normal(), rng.normal()
            sels = set()
            if rng.random() < 0.3:
                sels.add(("planted", "1"))
                y = x
            if rng.random() < 0.4:
                sels.add(("noise", "1"))
            rows.append(inst(sels, x, y))
        top = mine(rows, model, 10, 2, TopK(1))
        assert (("planted", "1"),) == top[0].selectors

    def test_undefined_patterns_skipped_and_counted(self):
        model = make_model("correlation", ["x", "y"])
        rows = [inst({("flat", "1")}, 1.0, float(i)) for i in range(5)]
        rows += [inst({("ok", "1")}, float(i), float(i % 3)) for i in range(5)]
        stats = MineStats()
        result = mine(rows, model, 2, 1, Threshold(float("-inf")), stats_out=stats)
        assert stats.skipped_undefined == 1
        assert {p.selectors[0] for p in result} == {("ok", "1")}

    def test_visit_count_at_most_naive_evaluations(self):
        rng = np.random.default_rng(55)
        model = make_model("mean", ["x"])
        for _ in range(30):
            rows = random_instances(rng)
            s1, s2 = MineStats(), MineStats()
            mine(rows, model, 2, 3, Threshold(float("-inf")), stats_out=s1)
            naive_mine(rows, model, 2, 3, Threshold(float("-inf")), stats_out=s2)
            assert s1.visited <= s2.visited

    def test_frequency_tree_reproduces_classic_counts(self):
        """Frequency bases reduce the tree to classic pattern supports."""
        rng = np.random.default_rng(77)
        model = make_model("frequency")
        rows = random_instances(rng)
        result = mine(rows, model, 1, 4, Threshold(float("-inf")))
        for p in result:
            direct = sum(
                1 for r in rows if set(p.selectors) <= r.selectors
            )
            assert p.support == direct

    def test_gp_tree_root_is_global_basis(self):
        model = make_model("mean", ["x"])
        rows = [inst({("a", "1")}, 1.0), inst(set(), 5.0)]
        gp = build_basis_tree(rows, model)
        assert np.allclose(gp.tree.root_payload(), gp.global_vec)

    def test_mode_validation(self):
        model = make_model("correlation", ["x", "y"])
        with pytest.raises(ValidationError):
            mine([], model, 1, 2, Threshold(0.0))  # below class minimum
        with pytest.raises(ValidationError):
            mine([], model, 2, 2, TopK(0))
