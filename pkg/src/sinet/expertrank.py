"""Developer familiarity ranking over a combined resource/contact graph.

Version-control change records build a resource tree whose edges carry
changed-line proportions and whose files point at their contributors;
face-to-face contact sessions shortly before commits add
developer-to-developer knowledge-transfer edges. A personalized
random walk with restart at the queried resource then ranks developers
by familiarity with that part of the code base.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .contacts import ContactSession, canonical_pair
from .errors import ConvergenceError, ValidationError

DEFAULT_KAPPA = 0.1
DEFAULT_WINDOW = 8 * 3600  # lookback before each commit, seconds


@dataclass(frozen=True)
class ChangeRecord:
    developer: str
    path: str
    lines_added: int
    lines_removed: int
    commit_time: int

    def __post_init__(self):
        if self.lines_added < 0 or self.lines_removed < 0:
            raise ValidationError(f"negative line counts in {self}")


def normalize_path(path: str) -> str:
    """Collapse separators and resolve '.'/'..'; '' denotes the root."""
    parts: list[str] = []
    for part in path.replace("\\", "/").split("/"):
        if part in ("", "."):
            continue
        if part == "..":
            if not parts:
                raise ValidationError(f"path escapes the root: {path!r}")
            parts.pop()
        else:
            parts.append(part)
    return "/".join(parts)


def _parent(path: str) -> str:
    return path.rsplit("/", 1)[0] if "/" in path else ""


@dataclass
class CombinedExpertGraph:
    """Resource tree + file contributions + contact coupling.

    Every resource's out-weights sum to 1; a developer's out-weights
    sum to kappa when it had any qualifying pre-commit contact, else 0
    (the remaining mass restarts at the query during the walk).
    """

    kappa: float
    window: int
    children: dict[str, dict[str, float]] = field(default_factory=dict)
    file_developers: dict[str, dict[str, float]] = field(default_factory=dict)
    contacts: dict[str, dict[str, float]] = field(default_factory=dict)
    subtree_lines: dict[str, float] = field(default_factory=dict)
    developers: set[str] = field(default_factory=set)

    def has_resource(self, path: str) -> bool:
        return path in self.subtree_lines

    def is_file(self, path: str) -> bool:
        return path in self.file_developers

    def is_empty(self) -> bool:
        return not self.subtree_lines


def build_expert_graph(
    changes: Sequence[ChangeRecord],
    sessions: Sequence[ContactSession],
    kappa: float = DEFAULT_KAPPA,
    window: int = DEFAULT_WINDOW,
    added_only: bool = False,
) -> CombinedExpertGraph:
    """Assemble the combined graph from change records and contacts.

    A record's weight is its added+removed lines (added only with
    ``added_only``); zero-line records are dropped. The contact
    coupling D(A, B) sums, over A's distinct commit times, the duration
    of A-B contact inside the ``window`` seconds before the commit.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ValidationError(f"kappa must be in [0, 1]: {kappa}")
    if window <= 0:
        raise ValidationError(f"window must be positive: {window}")

    graph = CombinedExpertGraph(kappa=kappa, window=window)
    file_dev_lines: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    commit_times: dict[str, set[int]] = defaultdict(set)
    for rec in changes:
        lines = rec.lines_added if added_only else rec.lines_added + rec.lines_removed
        if lines <= 0:
            continue
        path = normalize_path(rec.path)
        if not path:
            raise ValidationError(f"change record with empty path: {rec}")
        file_dev_lines[path][rec.developer] += lines
        commit_times[rec.developer].add(rec.commit_time)
    if not file_dev_lines:
        return graph

    for path, devs in file_dev_lines.items():
        total = sum(devs.values())
        graph.file_developers[path] = {d: v / total for d, v in sorted(devs.items())}
        graph.developers.update(devs)
        graph.subtree_lines[path] = graph.subtree_lines.get(path, 0.0) + total
        child, parent = path, _parent(path)
        while True:
            graph.subtree_lines[parent] = graph.subtree_lines.get(parent, 0.0) + total
            graph.children.setdefault(parent, {})[child] = 0.0
            if parent == "":
                break
            child, parent = parent, _parent(parent)
    overlap = graph.children.keys() & graph.file_developers.keys()
    if overlap:
        raise ValidationError(
            f"path is both a file and a directory: {sorted(overlap)[0]!r}"
        )
    for parent, kids in graph.children.items():
        for child in kids:
            kids[child] = graph.subtree_lines[child] / graph.subtree_lines[parent]

    by_pair: dict[tuple[str, str], list[ContactSession]] = defaultdict(list)
    for s in sessions:
        by_pair[s.pair].append(s)
    for dev in sorted(graph.developers):
        coupling: dict[str, float] = defaultdict(float)
        for other in sorted(graph.developers):
            if other == dev:
                continue
            pair_sessions = by_pair.get(canonical_pair(dev, other), [])
            if not pair_sessions:
                continue
            for t in commit_times[dev]:
                lo = t - window
                for s in pair_sessions:
                    coupling[other] += max(0, min(s.end, t) - max(s.start, lo))
        total = sum(coupling.values())
        if total > 0 and kappa > 0:
            graph.contacts[dev] = {
                d: kappa * v / total for d, v in sorted(coupling.items()) if v > 0
            }
    return graph


def rank_developers(
    graph: CombinedExpertGraph,
    query: str,
    damping: float = 0.85,
    epsilon: float = 1e-8,
    max_iter: int = 1000,
) -> list[tuple[str, float]]:
    """Developer scores for a resource, via power iteration.

    Random walk with restart at the query node: resources spread their
    mass over children (or contributors, for files); developers pass
    kappa to contacted developers and restart the rest. Scores are the
    developers' stationary probabilities renormalized to sum 1.
    """
    query = normalize_path(query)
    if not graph.has_resource(query):
        raise ValidationError(f"query path not in resource tree: {query!r}")

    out: dict[object, dict[object, float]] = {}
    for path in graph.subtree_lines:
        if graph.is_file(path):
            out[("res", path)] = {
                ("dev", d): w for d, w in graph.file_developers[path].items()
            }
        else:
            out[("res", path)] = {
                ("res", c): w for c, w in graph.children[path].items()
            }
    for dev in graph.developers:
        out[("dev", dev)] = {
            ("dev", d): w for d, w in graph.contacts.get(dev, {}).items()
        }

    start = ("res", query)
    nodes = sorted(out, key=str)
    v = {node: 0.0 for node in nodes}
    v[start] = 1.0
    for _ in range(max_iter):
        new = {node: 0.0 for node in nodes}
        restart = 0.0
        for node in nodes:
            mass = v[node]
            if mass == 0.0:
                continue
            edges = out[node]
            carried = 0.0
            for target, w in edges.items():
                new[target] += damping * mass * w
                carried += w
            restart += mass * (damping * (1.0 - carried) + (1.0 - damping))
        new[start] += restart
        residual = sum(abs(new[n] - v[n]) for n in nodes)
        v = new
        if residual < epsilon:
            break
    else:
        raise ConvergenceError(
            f"power iteration did not converge within {max_iter} iterations",
            residual=residual,
        )

    dev_mass = {d: v[("dev", d)] for d in graph.developers}
    total = sum(dev_mass.values())
    if total <= 0:
        raise ValidationError("no developer mass reachable from the query")
    ranked = [(d, m / total) for d, m in dev_mass.items()]
    ranked.sort(key=lambda ds: (-ds[1], ds[0]))
    return ranked


def coverage_score(
    ranking: Iterable[tuple[str, float]], developers: Iterable[str]
) -> float:
    """Share of the query's familiarity mass held by a developer subset."""
    subset = set(developers)
    return sum(score for dev, score in ranking if dev in subset)
