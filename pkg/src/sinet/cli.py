"""Unified command-line entry point with a persistent run ledger."""

from __future__ import annotations

import json
import sys
import time
import uuid
from pathlib import Path
from typing import Sequence

import click

from . import config as config_mod
from . import io as sio
from .contacts import WeightingMode, build_graph, sessionize
from .errors import SinetError, ValidationError
from .expertrank import build_expert_graph, rank_developers
from .linkpred import (
    LinkMeasure,
    TaskKind,
    duration_bucket_analysis,
    evaluate,
    feature_matrix,
    make_task,
)
from .localizer import BoostStrategy, accuracy, predict_base, social_boost, train_base
from .netstats import (
    ambassadors,
    community_quality,
    cumulative_contact_lengths,
    intra_contact_probability,
    partition_quality,
)
from .runner import parse_measure, run_communities, run_emm


def _record_run(
    ledger: str,
    command: str,
    parameters: dict,
    inputs: Sequence[str | Path],
    output: str | Path | None,
    status: str,
    error: str | None = None,
) -> None:
    record = {
        "run_id": uuid.uuid4().hex,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "command": command,
        "parameters": parameters,
        "inputs": {str(p): sio.file_digest(p) for p in inputs if Path(p).exists()},
        "output": str(output) if output else None,
        "output_digest": (
            sio.file_digest(output) if output and Path(output).exists() else None
        ),
        "status": status,
    }
    if error:
        record["error"] = error
    with open(ledger, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


class _Run:
    """Context wrapper that appends the ledger record on completion."""

    def __init__(self, ctx: click.Context, command: str, parameters: dict,
                 inputs: Sequence[str], output: str | None):
        cfg = ctx.obj or {}
        self.ledger = config_mod.resolve("ledger", cfg.get("ledger"), cfg.get("config"))
        self.command = command
        self.parameters = parameters
        self.inputs = inputs
        self.output = output

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "done" if exc_type is None else "failed"
        _record_run(
            self.ledger,
            self.command,
            self.parameters,
            self.inputs,
            self.output,
            status,
            error=str(exc) if exc else None,
        )
        return False


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="key = value configuration file")
@click.option("--ledger", default=None, help="run ledger path (JSON lines)")
@click.pass_context
def cli(ctx, config_path, ledger):
    """Social interaction network construction, analysis and mining."""
    ctx.obj = {"config": config_mod.load_config(config_path), "ledger": ledger}


@cli.command("sessionize")
@click.option("--events", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--gap", default=60, show_default=True, help="max undetected gap (s)")
@click.option("--min-duration", default=20, show_default=True)
@click.pass_context
def sessionize_cmd(ctx, events, out, gap, min_duration):
    """Fold proximity detections into contact sessions."""
    params = {"gap": gap, "min_duration": min_duration}
    with _Run(ctx, "sessionize", params, [events], out):
        sessions = sessionize(sio.read_events(events), gap, min_duration)
        sio.write_sessions(out, sessions)
        click.echo(f"wrote {len(sessions)} sessions to {out}")


_MODES = {m.value: m for m in WeightingMode}


@cli.command("build-graph")
@click.option("--sessions", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(sorted(_MODES)), default="count",
              show_default=True)
@click.option("--min-duration", default=0, show_default=True,
              help="discard sessions shorter than this")
@click.pass_context
def build_graph_cmd(ctx, sessions, out, mode, min_duration):
    """Aggregate contact sessions into a weighted interaction graph."""
    params = {"mode": mode, "min_duration": min_duration}
    with _Run(ctx, "build-graph", params, [sessions], out):
        graph = build_graph(sio.read_sessions(sessions), _MODES[mode], min_duration)
        sio.write_graph(out, graph)
        click.echo(f"wrote graph ({graph.num_nodes()} nodes, {graph.num_edges()} edges)")


@cli.command("stats")
@click.option("--op", required=True,
              type=click.Choice(["cumulative", "quality", "partition", "intra",
                                 "ambassadors"]))
@click.option("--sessions", type=click.Path(exists=True))
@click.option("--graph", "graph_path", type=click.Path(exists=True))
@click.option("--partition", "partition_path", type=click.Path(exists=True))
@click.option("--members", default=None, help="comma-separated actor ids")
@click.option("--measure", default="modularity", show_default=True,
              type=click.Choice(["modularity", "segregation", "conductance"]))
@click.option("--thresholds", default="0", show_default=True,
              help="comma-separated minimal conversation lengths")
@click.option("--quantile", default=0.8, show_default=True)
@click.option("--min-communities", default=2, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def stats_cmd(ctx, op, sessions, graph_path, partition_path, members, measure,
              thresholds, quantile, min_communities, out):
    """Distributions, community measures and role indicators."""
    params = {"op": op, "measure": measure, "thresholds": thresholds,
              "quantile": quantile, "min_communities": min_communities,
              "members": members}
    inputs = [p for p in (sessions, graph_path, partition_path) if p]
    with _Run(ctx, "stats", params, inputs, out):
        if op == "cumulative":
            if not sessions:
                raise ValidationError("--op cumulative needs --sessions")
            data = cumulative_contact_lengths(sio.read_sessions(sessions))
            sio.write_csv(out, ["min_length", "count"], data)
        elif op == "intra":
            if not (sessions and partition_path):
                raise ValidationError("--op intra needs --sessions and --partition")
            ts = [int(t) for t in thresholds.split(",") if t != ""]
            data = intra_contact_probability(
                sio.read_sessions(sessions), sio.read_partition(partition_path), ts
            )
            sio.write_csv(out, ["threshold", "p"], [(t, repr(p)) for t, p in data])
        elif op == "quality":
            if not (graph_path and members):
                raise ValidationError("--op quality needs --graph and --members")
            graph = sio.read_graph(graph_path)
            score = community_quality(
                graph, members.split(","), parse_measure(measure)
            )
            sio.write_json_artifact(out, {"measure": measure, "value": score.value})
        elif op == "partition":
            if not (graph_path and partition_path):
                raise ValidationError("--op partition needs --graph and --partition")
            value = partition_quality(
                sio.read_graph(graph_path),
                sio.read_partition(partition_path),
                parse_measure(measure),
            )
            sio.write_json_artifact(out, {"measure": measure, "value": value})
        else:  # ambassadors
            if not (graph_path and partition_path):
                raise ValidationError("--op ambassadors needs --graph and --partition")
            result = ambassadors(
                sio.read_graph(graph_path),
                sio.read_partition(partition_path),
                degree_quantile=quantile,
                min_communities=min_communities,
            )
            sio.write_json_artifact(out, {"ambassadors": sorted(result)})
        click.echo(f"wrote {out}")


@cli.command("communities")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--attributes", required=True, type=click.Path(exists=True))
@click.option("--measure", default="modularity", show_default=True,
              type=click.Choice(["modularity", "segregation", "conductance"]))
@click.option("--k", default=10, show_default=True)
@click.option("--min-size", default=2, show_default=True)
@click.option("--max-depth", default=3, show_default=True)
@click.option("--prune/--no-prune", default=True, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def communities_cmd(ctx, graph_path, attributes, measure, k, min_size, max_depth,
                    prune, out):
    """Mine the top-k described communities."""
    params = {"measure": measure, "k": k, "min_size": min_size,
              "max_depth": max_depth, "prune": prune}
    with _Run(ctx, "communities", params, [graph_path, attributes], out):
        artifact = run_communities(
            sio.read_graph(graph_path), sio.read_attributes(attributes), params
        )
        sio.write_json_artifact(out, artifact)
        click.echo(f"{len(artifact['patterns'])} patterns -> {out}")


@cli.command("emm")
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--class", "model_class", required=True,
              type=click.Choice(["frequency", "mean", "variance", "correlation",
                                 "slope"]))
@click.option("--targets", default="", help="comma-separated target columns")
@click.option("--min-support", default=1, show_default=True)
@click.option("--max-depth", default=2, show_default=True)
@click.option("--top-k", default=None, type=int)
@click.option("--min-quality", default=None, type=float)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def emm_cmd(ctx, data, model_class, targets, min_support, max_depth, top_k,
            min_quality, out):
    """Exceptional model mining over selector-described instances."""
    if top_k is not None and min_quality is not None:
        raise click.UsageError("--top-k and --min-quality are mutually exclusive")
    params: dict = {"model": model_class, "targets": targets,
                    "min_support": min_support, "max_depth": max_depth}
    if top_k is not None:
        params["top_k"] = top_k
    if min_quality is not None:
        params["min_quality"] = min_quality
    with _Run(ctx, "emm", params, [data], out):
        target_list = [t for t in targets.split(",") if t]
        instances = sio.read_instances(data, target_list)
        artifact = run_emm(instances, params)
        sio.write_json_artifact(out, artifact)
        click.echo(f"{len(artifact['patterns'])} patterns -> {out}")


@cli.command("linkpred")
@click.option("--train", required=True, type=click.Path(exists=True))
@click.option("--test", required=True, type=click.Path(exists=True))
@click.option("--measure", default="common_neighbors", show_default=True,
              type=click.Choice([m.value for m in LinkMeasure]))
@click.option("--task", "task_kind", default="new", show_default=True,
              type=click.Choice(["new", "recurring"]))
@click.option("--positive-min-duration", default=None, type=float,
              help="duration threshold for a positive test pair")
@click.option("--buckets", default=None,
              help="duration bucket edges, e.g. 0,60,120,300")
@click.option("--features-out", default=None, type=click.Path(),
              help="export all measures as a feature matrix CSV")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def linkpred_cmd(ctx, train, test, measure, task_kind, positive_min_duration,
                 buckets, features_out, out):
    """Evaluate structural link prediction between two periods."""
    params = {"measure": measure, "task": task_kind, "buckets": buckets,
              "positive_min_duration": positive_min_duration}
    with _Run(ctx, "linkpred", params, [train, test], out):
        train_sessions = sio.read_sessions(train)
        test_sessions = sio.read_sessions(test)
        task = make_task(
            train_sessions, test_sessions, TaskKind(task_kind),
            positive_min_duration=positive_min_duration,
        )
        result = evaluate(task, LinkMeasure(measure))
        artifact = {
            "measure": measure,
            "task": task_kind,
            "auc": result.auc,
            "precision_at": {str(k): v for k, v in result.precision_at.items()},
            "positives": sum(task.outcomes.values()),
            "candidates": len(task.outcomes),
        }
        if buckets:
            edges = [float(b) for b in buckets.split(",")]
            dists = duration_bucket_analysis(train_sessions, test_sessions, edges)
            artifact["buckets"] = {
                label: dist.survival() for label, dist in dists.items()
            }
        sio.write_json_artifact(out, artifact)
        if features_out:
            rows = feature_matrix(
                task.train_graph, sorted(task.outcomes), list(LinkMeasure),
                task.outcomes,
            )
            header = ["actor_a", "actor_b"] + [m.value for m in LinkMeasure] + ["label"]
            sio.write_csv(features_out, header,
                          [[r[h] for h in header] for r in rows])
        click.echo(f"auc={result.auc:.4f} -> {out}")


@cli.command("expertrank")
@click.option("--changes", required=True, type=click.Path(exists=True))
@click.option("--sessions", required=True, type=click.Path(exists=True))
@click.option("--query", required=True, help="resource path; '' or '.' = root")
@click.option("--kappa", default=0.1, show_default=True)
@click.option("--window", default=28800, show_default=True)
@click.option("--damping", default=0.85, show_default=True)
@click.option("--added-only", is_flag=True, default=False,
              help="count only added lines")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def expertrank_cmd(ctx, changes, sessions, query, kappa, window, damping,
                   added_only, out):
    """Rank developers by familiarity with a resource."""
    params = {"query": query, "kappa": kappa, "window": window,
              "damping": damping, "added_only": added_only}
    with _Run(ctx, "expertrank", params, [changes, sessions], out):
        graph = build_expert_graph(
            sio.read_changes(changes), sio.read_sessions(sessions),
            kappa=kappa, window=window, added_only=added_only,
        )
        ranking = rank_developers(graph, query, damping=damping)
        sio.write_json_artifact(
            out,
            {"query": query, "kappa": kappa,
             "ranking": [{"developer": d, "score": s} for d, s in ranking]},
        )
        click.echo(f"{len(ranking)} developers -> {out}")


@cli.command("localize")
@click.option("--train", required=True, type=click.Path(exists=True))
@click.option("--test", required=True, type=click.Path(exists=True))
@click.option("--sessions", required=True, type=click.Path(exists=True))
@click.option("--strategy", default="majority", show_default=True,
              type=click.Choice([s.value for s in BoostStrategy]))
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--k", default=5, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def localize_cmd(ctx, train, test, sessions, strategy, alpha, k, out):
    """Predict rooms and boost the predictions with contact votes."""
    params = {"strategy": strategy, "alpha": alpha, "k": k}
    with _Run(ctx, "localize", params, [train, test, sessions], out):
        model = train_base(sio.read_observations(train), k=k)
        test_obs = sio.read_observations(test)
        base = [predict_base(model, o) for o in test_obs]
        boosted = social_boost(
            base, sio.read_sessions(sessions), BoostStrategy(strategy), alpha
        )
        rows = [
            [b.actor, b.time, b.room, repr(b.confidence), bb.room,
             repr(bb.confidence)]
            for b, bb in zip(base, boosted)
        ]
        sio.write_csv(
            out,
            ["actor", "time", "room", "confidence", "boosted_room",
             "boosted_confidence"],
            rows,
        )
        truth = {(o.actor, o.time): o.room for o in test_obs if o.room is not None}
        if truth:
            base_acc = accuracy([p for p in base if (p.actor, p.time) in truth], truth)
            boost_acc = accuracy(
                [p for p in boosted if (p.actor, p.time) in truth], truth
            )
            click.echo(json.dumps(
                {"base_accuracy": base_acc, "boosted_accuracy": boost_acc},
                sort_keys=True,
            ))
        else:
            click.echo(f"wrote predictions to {out}")


@cli.command("serve")
@click.option("--data-dir", required=True, type=click.Path(exists=True))
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--workers", default=None, type=int,
              help="mining worker threads")
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True),
              help="also serve the explorer UI from this directory")
@click.pass_context
def serve_cmd(ctx, data_dir, host, port, workers, ui_dir):
    """Serve graphs and mining over JSON HTTP for the explorer UI."""
    import uvicorn

    from .service import create_app

    cfg = ctx.obj["config"]
    host = config_mod.resolve("host", host, cfg)
    port = int(config_mod.resolve("port", str(port) if port else None, cfg))
    workers = int(config_mod.resolve("workers", str(workers) if workers else None, cfg))
    app = create_app(Path(data_dir), workers=workers,
                     ui_dir=Path(ui_dir) if ui_dir else None)
    uvicorn.run(app, host=host, port=port)


def dispatch(argv: Sequence[str]) -> int:
    """Run one CLI invocation; returns the process exit status."""
    try:
        cli.main(args=list(argv), prog_name="sinet", standalone_mode=False)
        return 0
    except click.exceptions.UsageError as e:
        sys.stderr.write(f"usage error: {e.format_message()}\n")
        return 2
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return 130
    except SinetError as e:
        sys.stderr.write(
            json.dumps({"error": type(e).__name__, "message": str(e)},
                       sort_keys=True) + "\n"
        )
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
