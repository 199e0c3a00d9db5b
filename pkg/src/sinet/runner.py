"""Mining engines shared by the CLI and the HTTP service.

Both frontends normalize their parameters here and serialize through
the same canonical JSON writer, which is what guarantees byte-identical
artifacts for identical inputs.
"""

from __future__ import annotations

from typing import Sequence

from .communities import MiningStats, mine_top_k
from .contacts import AttributeTable, InteractionGraph
from .errors import ValidationError
from .emm import Instance, Threshold, TopK, make_model, mine
from .io import FORMAT_VERSION
from .netstats import Measure

MEASURE_NAMES = {
    "modularity": Measure.MODULARITY_LOCAL,
    "segregation": Measure.SEGREGATION,
    "conductance": Measure.INV_CONDUCTANCE,
}


def parse_measure(name: str) -> Measure:
    if name not in MEASURE_NAMES:
        raise ValidationError(f"unknown measure {name!r}; known: {sorted(MEASURE_NAMES)}")
    return MEASURE_NAMES[name]


def communities_params(parameters: dict) -> dict:
    """Normalize and validate community-mining parameters."""
    known = {"measure", "k", "min_size", "max_depth", "prune"}
    unknown = set(parameters) - known
    if unknown:
        raise ValidationError(f"unknown parameters: {sorted(unknown)}")
    params = {
        "measure": str(parameters.get("measure", "modularity")),
        "k": int(parameters.get("k", 10)),
        "min_size": int(parameters.get("min_size", 2)),
        "max_depth": int(parameters.get("max_depth", 3)),
        "prune": bool(parameters.get("prune", True)),
    }
    parse_measure(params["measure"])
    if params["k"] < 1 or params["min_size"] < 1 or params["max_depth"] < 1:
        raise ValidationError("k, min_size and max_depth must all be >= 1")
    return params


def run_communities(
    graph: InteractionGraph, attributes: AttributeTable, parameters: dict
) -> dict:
    params = communities_params(parameters)
    stats = MiningStats()
    patterns = mine_top_k(
        graph,
        attributes,
        parse_measure(params["measure"]),
        k=params["k"],
        min_size=params["min_size"],
        max_depth=params["max_depth"],
        prune=params["prune"],
        stats_out=stats,
    )
    return {
        "format_version": FORMAT_VERSION,
        "engine": "communities",
        "parameters": params,
        "patterns": [p.to_dict() for p in patterns],
        "search": {
            "evaluated_patterns": stats.evaluated,
            "pruned_branches": stats.pruned_branches,
        },
    }


def emm_params(parameters: dict) -> dict:
    known = {"model", "targets", "min_support", "max_depth", "top_k", "min_quality"}
    unknown = set(parameters) - known
    if unknown:
        raise ValidationError(f"unknown parameters: {sorted(unknown)}")
    targets = parameters.get("targets", [])
    if isinstance(targets, str):
        targets = [t for t in targets.split(",") if t]
    params = {
        "model": str(parameters.get("model", "frequency")),
        "targets": [str(t) for t in targets],
        "min_support": int(parameters.get("min_support", 1)),
        "max_depth": int(parameters.get("max_depth", 2)),
    }
    if "top_k" in parameters and parameters["top_k"] is not None:
        params["top_k"] = int(parameters["top_k"])
    elif "min_quality" in parameters and parameters["min_quality"] is not None:
        params["min_quality"] = float(parameters["min_quality"])
    else:
        params["top_k"] = 20
    make_model(params["model"], params["targets"])
    return params


def run_emm(instances: Sequence[Instance], parameters: dict) -> dict:
    params = emm_params(parameters)
    model = make_model(params["model"], params["targets"])
    mode = TopK(params["top_k"]) if "top_k" in params else Threshold(params["min_quality"])
    patterns = mine(
        instances,
        model,
        min_support=params["min_support"],
        max_depth=params["max_depth"],
        mode=mode,
    )
    return {
        "format_version": FORMAT_VERSION,
        "engine": "emm",
        "parameters": params,
        "patterns": [p.to_dict() for p in patterns],
    }


ENGINES = {"communities", "emm"}
