"""Fast exhaustive exceptional model mining over generalized pattern trees.

Tree nodes carry valuation bases instead of frequency counters: a basis
is a mergeable (commutative-monoid) aggregate from which a model
class's parameters are computable. Mining then follows classic pattern
growth with bases merged where counts would be summed; the result is
provably identical to the naive depth-first search that materializes
each pattern's instance subset, which is also provided as a baseline.

Bases store counts, means and centered second moments rather than raw
power sums, so parameters stay accurate when target values carry a
large common offset.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import math

import numpy as np

from . import _kernels
from ._kernels import ALG_MOMENTS1, ALG_MOMENTS2, ALG_SUM
from .contacts import Selector
from .errors import UndefinedModelError, ValidationError
from .patterntree import PatternTree, build_tree, canonical_item_order, grow


@dataclass(frozen=True)
class Instance:
    """One data row: descriptive selectors plus named numeric targets."""

    selectors: frozenset[Selector]
    targets: Mapping[str, float]


class ModelClass:
    """A model class binds target columns to a valuation basis layout."""

    id: str = ""
    algebra: int = ALG_SUM
    width: int = 1
    n_min: int = 1
    primary: str = "count"

    def __init__(self, targets: Sequence[str] = ()):
        self.targets = tuple(targets)

    def key(self) -> tuple:
        return (self.id, self.targets)

    def singleton(self, targets: Mapping[str, float]) -> np.ndarray:
        raise NotImplementedError

    def params(self, vec: np.ndarray) -> dict[str, float]:
        raise NotImplementedError

    def _require(self, vec: np.ndarray) -> float:
        n = vec[0]
        if n < self.n_min:
            raise UndefinedModelError(
                f"{self.id} needs at least {self.n_min} instances, got {n:g}"
            )
        return n

    def quality(self, pattern_vec: np.ndarray, global_vec: np.ndarray) -> float:
        """Size-adjusted deviation of the primary parameter."""
        p = self.params(pattern_vec)[self.primary]
        g = self.params(global_vec)[self.primary]
        return math.sqrt(pattern_vec[0]) * abs(p - g)

    def _target_values(self, targets: Mapping[str, float]) -> list[float]:
        values = []
        for name in self.targets:
            if name not in targets:
                raise ValidationError(f"missing target {name!r} for model {self.id}")
            v = float(targets[name])
            if not math.isfinite(v):
                raise ValidationError(f"non-finite target {name!r}: {v}")
            values.append(v)
        return values

    def _target_columns(self, instances: Sequence["Instance"]) -> list[np.ndarray]:
        columns = []
        for name in self.targets:
            try:
                col = np.array([i.targets[name] for i in instances], dtype=float)
            except KeyError:
                raise ValidationError(f"missing target {name!r} for model {self.id}")
            if not np.isfinite(col).all():
                raise ValidationError(f"non-finite values in target {name!r}")
            columns.append(col)
        return columns

    def singleton_rows(self, instances: Sequence["Instance"]) -> np.ndarray:
        """One basis row per instance (bulk form of ``singleton``)."""
        n = len(instances)
        if self.algebra == ALG_SUM:
            return np.ones((n, self.width))
        rows = np.zeros((n, self.width))
        rows[:, 0] = 1.0
        for j, col in enumerate(self._target_columns(instances), start=1):
            rows[:, j] = col
        return rows


class FrequencyModel(ModelClass):
    id = "frequency"
    algebra = ALG_SUM
    width = 1
    n_min = 1
    primary = "count"

    def singleton(self, targets: Mapping[str, float]) -> np.ndarray:
        return np.array([1.0])

    def params(self, vec: np.ndarray) -> dict[str, float]:
        self._require(vec)
        return {"count": float(vec[0])}


class MeanModel(ModelClass):
    id = "mean"
    algebra = ALG_MOMENTS1
    width = 3
    n_min = 1
    primary = "mean"

    def __init__(self, targets: Sequence[str]):
        if len(targets) != 1:
            raise ValidationError(f"{self.id} model needs exactly one target")
        super().__init__(targets)

    def singleton(self, targets: Mapping[str, float]) -> np.ndarray:
        (x,) = self._target_values(targets)
        return np.array([1.0, x, 0.0])

    def params(self, vec: np.ndarray) -> dict[str, float]:
        n = self._require(vec)
        return {"mean": float(vec[1]), "variance": float(vec[2] / n)}


class VarianceModel(MeanModel):
    id = "variance"
    primary = "variance"


class CorrelationModel(ModelClass):
    id = "correlation"
    algebra = ALG_MOMENTS2
    width = 6
    n_min = 2
    primary = "r"

    def __init__(self, targets: Sequence[str]):
        if len(targets) != 2:
            raise ValidationError(f"{self.id} model needs exactly two targets")
        super().__init__(targets)

    def singleton(self, targets: Mapping[str, float]) -> np.ndarray:
        x, y = self._target_values(targets)
        return np.array([1.0, x, y, 0.0, 0.0, 0.0])

    def params(self, vec: np.ndarray) -> dict[str, float]:
        self._require(vec)
        m2x, m2y, cxy = vec[3], vec[4], vec[5]
        if m2x <= 0.0 or m2y <= 0.0:
            raise UndefinedModelError(f"{self.id} undefined: a target has zero variance")
        return {"r": float(cxy / math.sqrt(m2x * m2y))}


class SlopeModel(ModelClass):
    id = "slope"
    algebra = ALG_MOMENTS2
    width = 6
    n_min = 2
    primary = "slope"

    def __init__(self, targets: Sequence[str]):
        if len(targets) != 2:
            raise ValidationError(f"{self.id} model needs exactly two targets (x, y)")
        super().__init__(targets)

    def singleton(self, targets: Mapping[str, float]) -> np.ndarray:
        x, y = self._target_values(targets)
        return np.array([1.0, x, y, 0.0, 0.0, 0.0])

    def params(self, vec: np.ndarray) -> dict[str, float]:
        self._require(vec)
        if vec[3] <= 0.0:
            raise UndefinedModelError(f"{self.id} undefined: x has zero variance")
        return {"slope": float(vec[5] / vec[3])}


MODEL_REGISTRY: dict[str, type[ModelClass]] = {
    "frequency": FrequencyModel,
    "mean": MeanModel,
    "variance": VarianceModel,
    "correlation": CorrelationModel,
    "slope": SlopeModel,
}


def make_model(name: str, targets: Sequence[str] = ()) -> ModelClass:
    if name not in MODEL_REGISTRY:
        raise ValidationError(
            f"unknown model class {name!r}; known: {sorted(MODEL_REGISTRY)}"
        )
    cls = MODEL_REGISTRY[name]
    return cls() if name == "frequency" else cls(targets)


@dataclass(frozen=True)
class ValuationBasis:
    """Mergeable model summary; the monoid element stored per tree node."""

    model: ModelClass
    vec: np.ndarray

    @property
    def n(self) -> float:
        return float(self.vec[0]) if len(self.vec) else 0.0


def neutral(model: ModelClass) -> ValuationBasis:
    return ValuationBasis(model, np.zeros(model.width))


def singleton(instance: Instance, model: ModelClass) -> ValuationBasis:
    return ValuationBasis(model, model.singleton(instance.targets))


def merge(b1: ValuationBasis, b2: ValuationBasis) -> ValuationBasis:
    if b1.model.key() != b2.model.key():
        raise TypeError(
            f"cannot merge bases of different model classes: "
            f"{b1.model.key()} vs {b2.model.key()}"
        )
    out = b1.vec.copy()
    _kernels.merge_pair(out, b2.vec, b1.model.algebra)
    return ValuationBasis(b1.model, out)


def insert(b: ValuationBasis, instance: Instance) -> ValuationBasis:
    return merge(b, singleton(instance, b.model))


def model_params(b: ValuationBasis, model: ModelClass | None = None) -> dict[str, float]:
    model = model or b.model
    return model.params(b.vec)


def quality(
    pattern_basis: ValuationBasis,
    global_basis: ValuationBasis,
    model: ModelClass | None = None,
) -> float:
    model = model or pattern_basis.model
    return model.quality(pattern_basis.vec, global_basis.vec)


@dataclass(frozen=True)
class MinedPattern:
    selectors: tuple[Selector, ...]
    support: int
    params: dict[str, float]
    quality: float

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(f"{a}={v}" for a, v in self.selectors))

    def to_dict(self) -> dict:
        return {
            "selectors": [list(s) for s in self.selectors],
            "support": self.support,
            "params": self.params,
            "quality": self.quality,
        }


@dataclass(frozen=True)
class TopK:
    k: int


@dataclass(frozen=True)
class Threshold:
    min_quality: float


MiningMode = TopK | Threshold


@dataclass
class MineStats:
    visited: int = 0
    skipped_undefined: int = 0


@dataclass
class BasisTree:
    """Pattern tree over valuation bases, with item encoding and global basis."""

    tree: PatternTree
    model: ModelClass
    selector_ids: dict[Selector, int]
    id_selectors: list[Selector]
    global_vec: np.ndarray

    def global_basis(self) -> ValuationBasis:
        return ValuationBasis(self.model, self.global_vec.copy())


QualityFn = Callable[[np.ndarray, np.ndarray, ModelClass], float]


def _default_quality(pattern_vec, global_vec, model) -> float:
    return model.quality(pattern_vec, global_vec)


def _prepare(
    instances: Sequence[Instance], model: ModelClass, min_support: int
) -> tuple[dict[Selector, int], list[Selector], np.ndarray, list[tuple[int, ...]], np.ndarray]:
    rows = model.singleton_rows(instances)
    global_vec = _kernels.merge_rows(rows, None, model.algebra)

    freq = Counter(s for inst in instances for s in inst.selectors)
    freq = Counter({s: c for s, c in freq.items() if c >= min_support})
    selector_ids, id_selectors = canonical_item_order(freq)
    transactions = [
        tuple(sorted(selector_ids[s] for s in inst.selectors if s in selector_ids))
        for inst in instances
    ]
    return selector_ids, id_selectors, rows, transactions, global_vec


def build_basis_tree(
    instances: Sequence[Instance], model: ModelClass, min_support: int = 1
) -> BasisTree:
    _, id_selectors, rows, transactions, global_vec = _prepare(
        instances, model, min_support
    )
    tree = build_tree(transactions, rows, model.algebra)
    return BasisTree(
        tree=tree,
        model=model,
        selector_ids={s: i for i, s in enumerate(id_selectors)},
        id_selectors=id_selectors,
        global_vec=global_vec,
    )


class _Collector:
    """Shared result collection for mine and naive_mine."""

    def __init__(
        self,
        model: ModelClass,
        id_selectors: list[Selector],
        global_vec: np.ndarray,
        mode: MiningMode,
        quality_fn: QualityFn,
    ):
        self.model = model
        self.id_selectors = id_selectors
        self.global_vec = global_vec
        self.mode = mode
        self.quality_fn = quality_fn
        self.stats = MineStats()
        self.found: list[MinedPattern] = []

    def offer(self, pattern_ids: tuple[int, ...], vec: np.ndarray) -> None:
        self.stats.visited += 1
        try:
            params = self.model.params(vec)
            q = self.quality_fn(vec, self.global_vec, self.model)
        except UndefinedModelError:
            self.stats.skipped_undefined += 1
            return
        if isinstance(self.mode, Threshold) and q < self.mode.min_quality:
            return
        selectors = tuple(self.id_selectors[i] for i in sorted(pattern_ids))
        self.found.append(
            MinedPattern(
                selectors=selectors, support=int(round(vec[0])), params=params, quality=q
            )
        )

    def results(self) -> list[MinedPattern]:
        self.found.sort(key=lambda p: (-p.quality, len(p.selectors), p.labels()))
        if isinstance(self.mode, TopK):
            return self.found[: self.mode.k]
        return self.found


def _check_mode(mode: MiningMode, model: ModelClass, min_support: int) -> None:
    if isinstance(mode, TopK) and mode.k < 1:
        raise ValidationError("top-k mode needs k >= 1")
    if min_support < model.n_min:
        raise ValidationError(
            f"min_support {min_support} below model minimum {model.n_min}"
        )


def mine(
    instances: Sequence[Instance],
    model: ModelClass,
    min_support: int,
    max_depth: int,
    mode: MiningMode,
    quality_fn: QualityFn = _default_quality,
    stats_out: MineStats | None = None,
) -> list[MinedPattern]:
    """Exhaustive pattern-growth mining; prunes on support only.

    Equivalent to ``naive_mine`` on every input; the generalized tree
    merely avoids rescanning instance subsets per pattern.
    """
    _check_mode(mode, model, min_support)
    if max_depth < 1:
        raise ValidationError("max_depth must be >= 1")
    gp = build_basis_tree(instances, model, min_support)
    collector = _Collector(model, gp.id_selectors, gp.global_vec, mode, quality_fn)

    def visit(pattern_ids: tuple[int, ...], vec: np.ndarray) -> bool:
        collector.offer(pattern_ids, vec)
        return True

    grow(gp.tree, (), max_depth, float(min_support), visit)
    if stats_out is not None:
        stats_out.visited = collector.stats.visited
        stats_out.skipped_undefined = collector.stats.skipped_undefined
    return collector.results()


def naive_mine(
    instances: Sequence[Instance],
    model: ModelClass,
    min_support: int,
    max_depth: int,
    mode: MiningMode,
    quality_fn: QualityFn = _default_quality,
    stats_out: MineStats | None = None,
) -> list[MinedPattern]:
    """Baseline depth-first search materializing each pattern's subset."""
    _check_mode(mode, model, min_support)
    if max_depth < 1:
        raise ValidationError("max_depth must be >= 1")
    _, id_selectors, rows, transactions, global_vec = _prepare(
        instances, model, min_support
    )
    collector = _Collector(model, id_selectors, global_vec, mode, quality_fn)
    item_sets = [frozenset(t) for t in transactions]
    n_items = len(id_selectors)
    evaluations = 0

    def rec(pattern_ids: tuple[int, ...], subset: list[int], depth_left: int) -> None:
        nonlocal evaluations
        first = pattern_ids[-1] + 1 if pattern_ids else 0
        for item in range(first, n_items):
            candidate = [i for i in subset if item in item_sets[i]]
            evaluations += 1
            if len(candidate) < min_support:
                continue
            vec = _kernels.merge_rows(
                rows, np.asarray(candidate, dtype=np.int32), model.algebra
            )
            extended = pattern_ids + (item,)
            collector.offer(extended, vec)
            if depth_left > 1:
                rec(extended, candidate, depth_left - 1)

    rec((), list(range(len(instances))), max_depth)
    if stats_out is not None:
        stats_out.visited = evaluations
        stats_out.skipped_undefined = collector.stats.skipped_undefined
    return collector.results()
