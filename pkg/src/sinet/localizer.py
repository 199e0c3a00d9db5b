"""Room-level localization with contact-based social boosting.

A k-nearest-neighbor classifier over reader signal vectors provides
base predictions; social boosting then lets concurrent face-to-face
contact partners vote on each actor's room, which exploits the fact
that conversation partners share a room.
"""

from __future__ import annotations

import bisect
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .contacts import ContactSession
from .errors import ValidationError


@dataclass(frozen=True)
class RoomObservation:
    actor: str
    time: int
    signals: tuple[tuple[str, float], ...]
    room: str | None = None

    def __post_init__(self):
        if not self.signals:
            raise ValidationError(f"observation without readings: {self}")
        for reader, strength in self.signals:
            if not math.isfinite(strength):
                raise ValidationError(f"non-finite strength for reader {reader!r}")


@dataclass(frozen=True)
class RoomPrediction:
    actor: str
    time: int
    room: str
    confidence: float


@dataclass
class BaseModel:
    """Dense training matrix for k-NN over the reader signal space."""

    readers: list[str]
    matrix: np.ndarray
    labels: list[str]
    floor: float
    k: int

    def vectorize(self, observation: RoomObservation) -> np.ndarray:
        vec = np.full(len(self.readers), self.floor)
        index = {r: i for i, r in enumerate(self.readers)}
        for reader, strength in observation.signals:
            i = index.get(reader)
            if i is not None:
                vec[i] = strength
        return vec


def train_base(
    observations: Sequence[RoomObservation],
    k: int = 5,
    rooms: Iterable[str] | None = None,
) -> BaseModel:
    """Fit the k-NN base localizer on labeled observations.

    Readings missing for a reader are imputed one unit below the weakest
    observed strength (absent means out of range). When a ``rooms``
    universe is given, every room must have at least one observation.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1: {k}")
    labeled = [o for o in observations if o.room is not None]
    if not labeled:
        raise ValidationError("no labeled observations to train on")
    if len(labeled) != len(observations):
        raise ValidationError("training observations must all carry a room label")
    seen_rooms = {o.room for o in labeled}
    if rooms is not None:
        missing = set(rooms) - seen_rooms
        if missing:
            raise ValidationError(f"rooms without observations: {sorted(missing)}")

    readers = sorted({r for o in labeled for r, _ in o.signals})
    floor = min(s for o in labeled for _, s in o.signals) - 1.0
    model = BaseModel(readers=readers, matrix=np.empty(0), labels=[], floor=floor, k=k)
    model.matrix = np.stack([model.vectorize(o) for o in labeled])
    model.labels = [o.room for o in labeled]  # type: ignore[misc]
    return model


def predict_base(model: BaseModel, observation: RoomObservation) -> RoomPrediction:
    """Majority room of the k nearest training vectors.

    Confidence is the winning vote share; vote ties go to the room with
    the smaller mean distance, then to room-id order.
    """
    vec = model.vectorize(observation)
    dists = np.sqrt(((model.matrix - vec) ** 2).sum(axis=1))
    k = min(model.k, len(dists))
    nearest = np.argpartition(dists, k - 1)[:k]
    votes: dict[str, int] = defaultdict(int)
    dist_sum: dict[str, float] = defaultdict(float)
    for i in nearest:
        room = model.labels[i]
        votes[room] += 1
        dist_sum[room] += float(dists[i])
    best = min(
        votes,
        key=lambda room: (-votes[room], dist_sum[room] / votes[room], room),
    )
    return RoomPrediction(
        actor=observation.actor,
        time=observation.time,
        room=best,
        confidence=votes[best] / k,
    )


class BoostStrategy(Enum):
    MAJORITY = "majority"
    CONFIDENCE = "confidence"
    DURATION = "duration"


def social_boost(
    predictions: Sequence[RoomPrediction],
    sessions: Sequence[ContactSession],
    strategy: BoostStrategy = BoostStrategy.MAJORITY,
    alpha: float = 1.0,
) -> list[RoomPrediction]:
    """Correct predictions by voting among concurrent contact partners.

    At each prediction's timestamp the actor's own room votes with
    weight 1; each partner whose session spans the timestamp votes with
    its current prediction, weighted alpha times the strategy factor
    (1, the partner's confidence, or the session's elapsed share).
    Weight ties keep the base prediction; contact-free predictions are
    returned unchanged.
    """
    by_actor: dict[str, list[RoomPrediction]] = defaultdict(list)
    for p in predictions:
        by_actor[p.actor].append(p)
    for timeline in by_actor.values():
        timeline.sort(key=lambda p: p.time)
    times = {actor: [p.time for p in timeline] for actor, timeline in by_actor.items()}

    partner_sessions: dict[str, list[ContactSession]] = defaultdict(list)
    for s in sessions:
        partner_sessions[s.actor_a].append(s)
        partner_sessions[s.actor_b].append(s)

    def prediction_at(actor: str, t: int) -> RoomPrediction | None:
        timeline = by_actor.get(actor)
        if not timeline:
            return None
        i = bisect.bisect_right(times[actor], t) - 1
        return timeline[i] if i >= 0 else None

    boosted: list[RoomPrediction] = []
    for own in predictions:
        ongoing = [
            s
            for s in partner_sessions.get(own.actor, [])
            if s.start <= own.time <= s.end
        ]
        votes: dict[str, float] = defaultdict(float)
        votes[own.room] += 1.0
        any_partner = False
        max_elapsed = max((own.time - s.start for s in ongoing), default=0)
        for s in ongoing:
            partner = s.actor_b if s.actor_a == own.actor else s.actor_a
            pred = prediction_at(partner, own.time)
            if pred is None:
                continue
            if strategy is BoostStrategy.MAJORITY:
                factor = 1.0
            elif strategy is BoostStrategy.CONFIDENCE:
                factor = pred.confidence
            else:
                factor = (own.time - s.start) / max_elapsed if max_elapsed > 0 else 0.0
            weight = alpha * factor
            if weight > 0.0:
                votes[pred.room] += weight
                any_partner = True
        if not any_partner:
            boosted.append(own)
            continue
        top = max(votes.values())
        winners = [room for room, w in votes.items() if w == top]
        room = winners[0] if len(winners) == 1 else own.room
        boosted.append(
            RoomPrediction(
                actor=own.actor,
                time=own.time,
                room=room,
                confidence=votes[room] / sum(votes.values()),
            )
        )
    return boosted


def accuracy(
    predictions: Sequence[RoomPrediction], truth: dict[tuple[str, int], str]
) -> float:
    """Fraction of predictions matching the true room."""
    if not predictions:
        raise ValidationError("no predictions to score")
    hits = sum(1 for p in predictions if truth.get((p.actor, p.time)) == p.room)
    return hits / len(predictions)
