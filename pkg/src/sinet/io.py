"""CSV file formats and canonical JSON artifacts.

All formats are plain UTF-8 CSV with a header row; the graph file adds
one leading comment line recording the weighting mode. JSON artifacts
are serialized canonically (sorted keys, fixed indentation) so that
identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

from .contacts import (
    AttributeTable,
    ContactSession,
    InteractionGraph,
    ProximityEvent,
    WeightingMode,
)
from .errors import ValidationError
from .expertrank import ChangeRecord
from .emm import Instance
from .localizer import RoomObservation

FORMAT_VERSION = 1


def _open_reader(path: str | Path, expected: Sequence[str]) -> tuple[list[dict], list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        meta = []
        if first.startswith("#"):
            meta.append(first[1:].strip())
            first = fh.readline()
        header = [h.strip() for h in first.strip().split(",")]
        missing = [c for c in expected if c not in header]
        if missing:
            raise ValidationError(f"{path}: missing columns {missing} in header {header}")
        reader = csv.DictReader(fh, fieldnames=header)
        return list(reader), meta


def read_events(path: str | Path) -> list[ProximityEvent]:
    rows, _ = _open_reader(path, ["actor_a", "actor_b", "time"])
    events = []
    for row in rows:
        strength = row.get("strength")
        events.append(
            ProximityEvent(
                actor_a=row["actor_a"],
                actor_b=row["actor_b"],
                time=int(float(row["time"])),
                strength=float(strength) if strength not in (None, "") else None,
            )
        )
    return events


def write_events(path: str | Path, events: Iterable[ProximityEvent]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actor_a", "actor_b", "time", "strength"])
        for e in events:
            writer.writerow(
                [e.actor_a, e.actor_b, e.time, "" if e.strength is None else e.strength]
            )


def read_sessions(path: str | Path) -> list[ContactSession]:
    rows, _ = _open_reader(path, ["actor_a", "actor_b", "start", "end"])
    return [
        ContactSession(
            actor_a=row["actor_a"],
            actor_b=row["actor_b"],
            start=int(float(row["start"])),
            end=int(float(row["end"])),
        )
        for row in rows
    ]


def write_sessions(path: str | Path, sessions: Iterable[ContactSession]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actor_a", "actor_b", "start", "end", "duration"])
        for s in sessions:
            writer.writerow([s.actor_a, s.actor_b, s.start, s.end, s.duration])


def read_attributes(path: str | Path) -> AttributeTable:
    rows, _ = _open_reader(path, ["actor", "attribute", "value"])
    table = AttributeTable()
    for row in rows:
        table.add(row["actor"], row["attribute"], row["value"])
    return table


def write_attributes(path: str | Path, table: AttributeTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actor", "attribute", "value"])
        for actor in sorted(table):
            for attribute, value in sorted(table.selectors(actor)):
                writer.writerow([actor, attribute, value])


def read_graph(path: str | Path) -> InteractionGraph:
    rows, meta = _open_reader(path, ["actor_a", "actor_b", "weight"])
    mode = WeightingMode.COUNT
    for line in meta:
        if line.startswith("weighting_mode="):
            mode = WeightingMode(line.split("=", 1)[1])
    edges = {
        (row["actor_a"], row["actor_b"]): float(row["weight"]) for row in rows
    }
    nodes = {a for pair in edges for a in pair}
    return InteractionGraph(nodes, edges, mode)


def write_graph(path: str | Path, graph: InteractionGraph) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# weighting_mode={graph.weighting_mode.value}\n")
        writer = csv.writer(fh)
        writer.writerow(["actor_a", "actor_b", "weight"])
        for (a, b), w in sorted(graph.edges.items()):
            writer.writerow([a, b, repr(w)])


def read_partition(path: str | Path) -> dict[str, str]:
    rows, _ = _open_reader(path, ["actor", "community"])
    return {row["actor"]: row["community"] for row in rows}


def write_partition(path: str | Path, partition: dict[str, str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actor", "community"])
        for actor, community in sorted(partition.items()):
            writer.writerow([actor, community])


def read_changes(path: str | Path) -> list[ChangeRecord]:
    rows, _ = _open_reader(
        path, ["developer", "path", "lines_added", "lines_removed", "commit_time"]
    )
    return [
        ChangeRecord(
            developer=row["developer"],
            path=row["path"],
            lines_added=int(row["lines_added"]),
            lines_removed=int(row["lines_removed"]),
            commit_time=int(float(row["commit_time"])),
        )
        for row in rows
    ]


def read_observations(path: str | Path) -> list[RoomObservation]:
    """Long-format readings: one (actor, time, reader) strength per row."""
    rows, _ = _open_reader(path, ["actor", "time", "reader", "strength"])
    grouped: dict[tuple[str, int], dict] = {}
    for row in rows:
        key = (row["actor"], int(float(row["time"])))
        entry = grouped.setdefault(key, {"signals": [], "room": None})
        entry["signals"].append((row["reader"], float(row["strength"])))
        room = row.get("room")
        if room:
            entry["room"] = room
    return [
        RoomObservation(
            actor=actor, time=time, signals=tuple(entry["signals"]), room=entry["room"]
        )
        for (actor, time), entry in sorted(grouped.items())
    ]


def write_observations(path: str | Path, observations: Iterable[RoomObservation]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actor", "time", "reader", "strength", "room"])
        for o in observations:
            for reader, strength in o.signals:
                writer.writerow([o.actor, o.time, reader, strength, o.room or ""])


def read_instances(path: str | Path, targets: Sequence[str]) -> list[Instance]:
    """Wide-format EMM data: selector columns plus numeric target columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValidationError(f"{path}: empty data file")
        missing = [t for t in targets if t not in reader.fieldnames]
        if missing:
            raise ValidationError(f"{path}: missing target columns {missing}")
        selector_cols = [c for c in reader.fieldnames if c not in targets]
        instances = []
        for row in reader:
            selectors = frozenset(
                (c, row[c]) for c in selector_cols if row[c] not in (None, "")
            )
            instances.append(
                Instance(
                    selectors=selectors,
                    targets={t: float(row[t]) for t in targets},
                )
            )
        return instances


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json_artifact(path: str | Path, obj) -> None:
    Path(path).write_text(canonical_json(obj), encoding="utf-8")


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()
