"""Base k-NN localization and social boosting."""

import numpy as np
import pytest

from sinet.contacts import ContactSession
from sinet.errors import ValidationError
from sinet.localizer import (
    BoostStrategy,
    RoomObservation,
    RoomPrediction,
    accuracy,
    predict_base,
    social_boost,
    train_base,
)
from sinet.synth import room_simulation


def obs(actor, time, room=None, **signals):
    return RoomObservation(
        actor=actor, time=time, room=room,
        signals=tuple((r, float(s)) for r, s in signals.items()),
    )


def unique_reader_training():
    rows = []
    for i, room in enumerate(("red", "green", "blue")):
        for j in range(4):
            rows.append(obs(f"t{i}{j}", j, room=room, **{f"r{i}": -40.0}))
    return rows


class TestTrainPredict:
    def test_unique_reader_recovers_room(self):
        model = train_base(unique_reader_training(), k=3)
        pred = predict_base(model, obs("q", 0, r1=-40.0))
        assert pred.room == "green"
        assert pred.confidence == 1.0

    def test_k1_returns_nearest_label(self):
        rows = [obs("a", 0, room="one", r0=-40.0), obs("b", 0, room="two", r0=-80.0)]
        model = train_base(rows, k=1)
        assert predict_base(model, obs("q", 5, r0=-45.0)).room == "one"
        assert predict_base(model, obs("q", 5, r0=-75.0)).room == "two"

    def test_confidence_is_vote_share(self):
        rows = [obs("a", 0, room="one", r0=-40.0), obs("b", 0, room="one", r0=-42.0),
                obs("c", 0, room="two", r0=-44.0)]
        model = train_base(rows, k=3)
        pred = predict_base(model, obs("q", 0, r0=-41.0))
        assert pred.room == "one"
        assert pred.confidence == pytest.approx(2 / 3)

    def test_vote_tie_broken_by_distance(self):
        rows = [obs("a", 0, room="near", r0=-40.0), obs("b", 0, room="far", r0=-60.0)]
        model = train_base(rows, k=2)
        assert predict_base(model, obs("q", 0, r0=-45.0)).room == "near"

    def test_unlabeled_training_rejected(self):
        with pytest.raises(ValidationError):
            train_base([obs("a", 0, r0=-40.0)])

    def test_missing_room_universe_rejected(self):
        with pytest.raises(ValidationError):
            train_base(unique_reader_training(), rooms=["red", "green", "blue", "attic"])

    def test_missing_reader_imputed_below_observed(self):
        model = train_base(unique_reader_training())
        assert model.floor == -41.0

    def test_deterministic_predictions(self):
        rng = np.random.default_rng(1)
        sim = room_simulation(rng, test_periods=2)
        model = train_base(sim.train)
        p1 = [predict_base(model, o) for o in sim.test]
        p2 = [predict_base(model, o) for o in sim.test]
        assert p1 == p2

    def test_noise_band_calibration(self):
        """Base accuracy lands in the target band on every seed."""
        for seed in range(5):
            rng = np.random.default_rng(seed)
            sim = room_simulation(rng)
            model = train_base(sim.train, k=5)
            base = [predict_base(model, o) for o in sim.test]
            assert 0.80 <= accuracy(base, sim.truth) <= 0.88


def pred(actor, time, room, confidence=1.0):
    return RoomPrediction(actor=actor, time=time, room=room, confidence=confidence)


class TestSocialBoost:
    def test_contact_free_actor_unchanged(self):
        predictions = [pred("a", 10, "r1", 0.6)]
        assert social_boost(predictions, []) == predictions

    def test_two_partners_correct_a_mistake(self):
        predictions = [
            pred("a", 10, "wrong"), pred("b", 10, "right"), pred("c", 10, "right"),
        ]
        sessions = [ContactSession("a", "b", 0, 100), ContactSession("a", "c", 0, 100)]
        boosted = social_boost(predictions, sessions, BoostStrategy.MAJORITY)
        assert boosted[0].room == "right"
        assert boosted[0].confidence == pytest.approx(2 / 3)

    def test_tie_keeps_own_prediction(self):
        predictions = [pred("a", 10, "mine"), pred("b", 10, "other")]
        sessions = [ContactSession("a", "b", 0, 100)]
        boosted = social_boost(predictions, sessions, BoostStrategy.MAJORITY)
        assert boosted[0].room == "mine"

    def test_alpha_zero_is_identity(self):
        predictions = [pred("a", 10, "r1", 0.7), pred("b", 10, "r2", 0.9)]
        sessions = [ContactSession("a", "b", 0, 100)]
        assert social_boost(predictions, sessions, alpha=0.0) == predictions

    def test_session_must_span_timestamp(self):
        predictions = [pred("a", 500, "mine"), pred("b", 500, "other"),
                       pred("c", 500, "other")]
        sessions = [ContactSession("a", "b", 0, 100),   # over before t=500
                    ContactSession("a", "c", 400, 600)]
        boosted = social_boost(predictions, sessions, BoostStrategy.MAJORITY)
        assert boosted[0].room == "mine"  # one partner each way -> tie -> own

    def test_confidence_strategy_weights_votes(self):
        predictions = [
            pred("a", 10, "mine", 1.0),
            pred("b", 10, "other", 0.9),
            pred("c", 10, "other", 0.8),
        ]
        sessions = [ContactSession("a", "b", 0, 100), ContactSession("a", "c", 0, 100)]
        boosted = social_boost(predictions, sessions, BoostStrategy.CONFIDENCE)
        assert boosted[0].room == "other"
        assert boosted[0].confidence == pytest.approx(1.7 / 2.7)

    def test_duration_strategy_prefers_older_sessions(self):
        predictions = [
            pred("a", 100, "mine"),
            pred("b", 100, "fresh"),
            pred("c", 100, "longstanding"),
            pred("d", 100, "longstanding"),
        ]
        sessions = [ContactSession("a", "b", 99, 200),
                    ContactSession("a", "c", 0, 200),
                    ContactSession("a", "d", 0, 200)]
        boosted = social_boost(predictions, sessions, BoostStrategy.DURATION)
        # two full-weight longstanding votes beat the own vote; the fresh
        # partner contributes only its elapsed share
        assert boosted[0].room == "longstanding"
        fresh_only = social_boost(predictions[:2], sessions[:1], BoostStrategy.DURATION)
        assert fresh_only[0].room == "mine"

    def test_partner_prediction_looked_up_at_latest_time(self):
        predictions = [
            pred("a", 50, "wrong"), pred("b", 40, "right"), pred("c", 45, "right"),
        ]
        sessions = [ContactSession("a", "b", 0, 100), ContactSession("a", "c", 0, 100)]
        boosted = social_boost(predictions, sessions, BoostStrategy.MAJORITY)
        assert boosted[0].room == "right"

    def test_simulation_contacts_share_rooms(self):
        """Premise of boosting: contacted agents co-locate."""
        rng = np.random.default_rng(3)
        sim = room_simulation(rng, test_periods=3)
        times = sorted({t for _, t in sim.truth})
        for s in sim.sessions:
            for t in times:
                if s.start <= t <= s.end:
                    assert sim.truth[(s.actor_a, t)] == sim.truth[(s.actor_b, t)]

    def test_boosting_improves_simulation_accuracy(self):
        rng = np.random.default_rng(7)
        sim = room_simulation(rng)
        model = train_base(sim.train, k=5)
        base = [predict_base(model, o) for o in sim.test]
        boosted = social_boost(base, sim.sessions, BoostStrategy.MAJORITY)
        assert accuracy(boosted, sim.truth) > accuracy(base, sim.truth)


class TestObservationValidation:
    def test_empty_signals_rejected(self):
        with pytest.raises(ValidationError):
            RoomObservation(actor="a", time=0, signals=())

    def test_non_finite_strength_rejected(self):
        with pytest.raises(ValidationError):
            RoomObservation(actor="a", time=0, signals=(("r", float("nan")),))
