"""Benchmark the compiled kernel lane against the pure-Python fallback.

Runs the two mining workloads whose inner loops the kernels carry (the
EMM correlation workload and the planted-community search) once per
lane and prints a timing table.

    python benchmarks/bench_kernels.py [--rows 50000] [--attrs 50]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import sinet.patterntree as patterntree
from sinet._kernels import available_lanes
from sinet.communities import mine_top_k
from sinet.emm import TopK, make_model, mine, naive_mine
from sinet.netstats import Measure
from sinet.synth import planted_attribute_graph, random_emm_instances


def activate(lane) -> None:
    patterntree._kernels.conditional_paths = lane.conditional_paths
    patterntree._kernels.merge_rows = lane.merge_rows
    patterntree._kernels.scatter_merge = lane.scatter_merge


def timed(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.monotonic()
        fn()
        best = min(best, time.monotonic() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=50_000)
    parser.add_argument("--attrs", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(123)
    instances = random_emm_instances(rng, n_rows=args.rows, n_attrs=args.attrs,
                                     selector_p=0.1)
    model = make_model("correlation", ["x", "y"])
    graph, attributes = planted_attribute_graph(np.random.default_rng(7))

    lanes = available_lanes()
    if "compiled" not in lanes:
        print("note: compiled lane unavailable; showing pure lane only")

    deep_instances = random_emm_instances(
        np.random.default_rng(5), n_rows=args.rows // 2, n_attrs=40, selector_p=0.15
    )
    micro_rng = np.random.default_rng(0)
    n_nodes = 120_000
    items = (np.arange(n_nodes, dtype=np.int32) % 50)
    items[0] = -1
    parents = np.empty(n_nodes, dtype=np.int32)
    parents[0] = -1
    parents[1:] = micro_rng.integers(0, np.arange(1, n_nodes))
    heads = micro_rng.integers(1, n_nodes, 3000).astype(np.int32)

    workloads = {
        "emm-mine": lambda: mine(instances, model, 100, 2, TopK(50)),
        "emm-naive": lambda: naive_mine(instances, model, 100, 2, TopK(50)),
        "emm-depth3": lambda: mine(deep_instances, model, 30, 3, TopK(50)),
        "communities": lambda: mine_top_k(
            graph, attributes, Measure.MODULARITY_LOCAL, k=5, min_size=5, max_depth=3
        ),
        "paths-kernel": lambda: [
            patterntree._kernels.conditional_paths(items, parents, heads)
            for _ in range(20)
        ],
    }

    results: dict[str, dict[str, float]] = {}
    for lane_name, lane in sorted(lanes.items()):
        activate(lane)
        results[lane_name] = {
            name: timed(fn, args.repeats) for name, fn in workloads.items()
        }

    header = f"{'workload':<14}" + "".join(f"{lane:>12}" for lane in sorted(lanes))
    if len(lanes) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name in workloads:
        row = f"{name:<14}"
        for lane_name in sorted(lanes):
            row += f"{results[lane_name][name]:>11.3f}s"
        if len(lanes) == 2:
            row += f"{results['python'][name] / results['compiled'][name]:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
