from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puzzlejudge.model import (
    DifficultyLevel,
    EpisodeRecord,
    GameKind,
    ONE_D_GAMES,
    TWO_D_GAMES,
    TurnRecord,
    Verdict,
    deserialize_instance,
    instance_id,
    serialize_instance,
)
from puzzlejudge.generators import generate


def test_eight_games_split_one_two_dimensional():
    assert len(list(GameKind)) == 8
    assert len(ONE_D_GAMES) == 4 and len(TWO_D_GAMES) == 4
    assert list(GameKind)[:4] == list(ONE_D_GAMES)
    assert list(GameKind)[4:] == list(TWO_D_GAMES)


def test_difficulty_total_order():
    assert DifficultyLevel.EASY < DifficultyLevel.MEDIUM < DifficultyLevel.HARD


def test_instance_id_deterministic_and_seed_sensitive():
    a = instance_id(GameKind.TEXT_SUDOKU, DifficultyLevel.HARD, 1)
    b = instance_id(GameKind.TEXT_SUDOKU, DifficultyLevel.HARD, 1)
    c = instance_id(GameKind.TEXT_SUDOKU, DifficultyLevel.HARD, 2)
    assert a == b
    assert a != c


def test_verdict_invariant_enforced():
    Verdict(solved=True, feedback=())
    Verdict(solved=False, feedback=("nope",))
    with pytest.raises(ValueError):
        Verdict(solved=True, feedback=("nope",))
    with pytest.raises(ValueError):
        Verdict(solved=False, feedback=())


def test_episode_record_invariants():
    solved = TurnRecord("x", Verdict(True, ()), 0.1)
    failed = TurnRecord("y", Verdict(False, ("msg",)), 0.1)
    EpisodeRecord("id", (failed, solved), solved_at=2)
    with pytest.raises(ValueError):
        EpisodeRecord("id", (solved, failed), solved_at=1)
    with pytest.raises(ValueError):
        EpisodeRecord("id", (failed, solved), solved_at=None)
    with pytest.raises(ValueError):
        EpisodeRecord("id", (solved,), solved_at=2)


@settings(max_examples=60, deadline=None)
@given(
    game=st.sampled_from(list(GameKind)),
    difficulty=st.sampled_from(list(DifficultyLevel)),
    seed=st.integers(0, 2**31),
)
def test_serialization_round_trip(game, difficulty, seed):
    instance = generate(game, difficulty, seed)
    line = serialize_instance(instance)
    assert "\n" not in line
    assert deserialize_instance(line) == instance


def test_serialize_is_stable_and_seed_injective():
    a1 = generate(GameKind.ANAGRAM_SCRIBBLE, DifficultyLevel.EASY, 7)
    a2 = generate(GameKind.ANAGRAM_SCRIBBLE, DifficultyLevel.EASY, 7)
    b = generate(GameKind.ANAGRAM_SCRIBBLE, DifficultyLevel.EASY, 8)
    assert serialize_instance(a1) == serialize_instance(a2)
    assert a1.id != b.id
    assert serialize_instance(a1) != serialize_instance(b)


def test_id_survives_round_trip():
    instance = generate(GameKind.ISLANDS, DifficultyLevel.MEDIUM, 3)
    restored = deserialize_instance(serialize_instance(instance))
    assert restored.id == instance_id(restored.game, restored.difficulty, restored.seed)
