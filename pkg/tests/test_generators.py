from __future__ import annotations

from collections import Counter

import pytest

from puzzlejudge.generators import derive_seed, generate, generate_dataset
from puzzlejudge.graders import check_islands, grade
from puzzlejudge.model import (
    AnagramConstraints,
    BracketConstraints,
    CrosswordConstraints,
    DifficultyLevel,
    GameKind,
    IslandsConstraints,
    NON_REPEATABLE_PASSWORD_KINDS,
    OrderingConstraints,
    PasswordConstraints,
    StringSearchConstraints,
    SudokuConstraints,
    constraints_payload,
    load_instances,
    serialize_instance,
)
from puzzlejudge.solvers import count_solutions, solve

EASY, MEDIUM, HARD = DifficultyLevel.EASY, DifficultyLevel.MEDIUM, DifficultyLevel.HARD


def validate_envelope(instance) -> list[str]:
    """Independent transcription of the difficulty table, kept apart from the
    generator's own parameter tables on purpose."""
    problems = []
    c = instance.constraints
    d = instance.difficulty

    def check(cond, message):
        if not cond:
            problems.append(message)

    if isinstance(c, AnagramConstraints):
        lo, hi = {EASY: (3, 5), MEDIUM: (6, 7), HARD: (8, 10)}[d]
        check(lo <= c.length <= hi, f"length {c.length} outside {lo}..{hi}")
        check(len(c.letters) <= 10, "more than 10 letters")
        check(c.repeatable == (d is not HARD), "repeatable flag wrong for difficulty")
    elif isinstance(c, PasswordConstraints):
        expected = {EASY: 2, MEDIUM: 4, HARD: 6}[d]
        check(len(c.rules) == expected, f"{len(c.rules)} rules, wanted {expected}")
        kinds = Counter(r.kind for r in c.rules)
        for kind in NON_REPEATABLE_PASSWORD_KINDS:
            check(kinds[kind] <= 1, f"counting rule {kind.value} repeated")
    elif isinstance(c, BracketConstraints):
        words, depth = {EASY: (3, 2), MEDIUM: (5, 2), HARD: (5, 3)}[d]
        check(len(c.placements) == words, "placement count wrong")
        check(c.depth == depth, "depth wrong")
        lengths = sorted(len(p.word) for p in c.placements)
        check(sum(lengths) == len(c.base_text), "base text is not the words joined")
    elif isinstance(c, StringSearchConstraints):
        max_len = {EASY: 10, MEDIUM: 20, HARD: 40}[d]
        max_rules = {EASY: 2, MEDIUM: 3, HARD: 5}[d]
        check(len(c.haystack) <= max_len, "text too long")
        n_rules = len(c.must_contain) + len(c.must_exclude) + len(c.complex_rules)
        check(n_rules <= max_rules, "too many constraints")
        if d is not HARD:
            check(not c.complex_rules, "complex rules outside hard")
        from puzzlejudge.model import COMPLEX_RULE_GROUPS

        groups = [
            COMPLEX_RULE_GROUPS[r.kind]
            for r in c.complex_rules
            if r.kind in COMPLEX_RULE_GROUPS
        ]
        check(len(groups) == len(set(groups)), "mutually exclusive rules together")
    elif isinstance(c, CrosswordConstraints):
        size, words = {EASY: (3, 8), MEDIUM: (4, 16), HARD: (5, 20)}[d]
        check(c.size == size, "board size wrong")
        check(len(c.words) == words, "word list size wrong")
        check(all(len(w) == size for w in c.words), "word of wrong length listed")
    elif isinstance(c, SudokuConstraints):
        box = {EASY: 2, MEDIUM: 2, HARD: 3}[d]
        ratio = {EASY: 0.25, MEDIUM: 0.5, HARD: 0.4}[d]
        side = box * box
        check(c.box == box, "box size wrong")
        blanks = sum(row.count("_") for row in c.grid)
        check(blanks == round(side * side * ratio), f"{blanks} blanks")
        symbols = set("".join(c.grid)) - {"_"}
        check(symbols <= set(c.alphabet), "grid symbol outside alphabet")
    elif isinstance(c, IslandsConstraints):
        lo, hi = {EASY: (1, 1), MEDIUM: (1, 3), HARD: (3, 6)}[d]
        check(lo <= c.islands <= hi, f"island count {c.islands} outside {lo}..{hi}")
        if d is EASY:
            check(c.tree_islands == 0 and c.trees_total == 0, "easy must have no trees")
        else:
            check(1 <= c.tree_islands <= c.islands, "tree island count out of range")
            check(c.trees_total >= c.tree_islands, "fewer trees than tree islands")
        check(1 <= c.size_min <= c.size_max <= c.size**2, "size window invalid")
    elif isinstance(c, OrderingConstraints):
        rlo, rhi = {EASY: (2, 2), MEDIUM: (2, 4), HARD: (4, 8)}[d]
        wlo, whi = {EASY: (3, 3), MEDIUM: (4, 6), HARD: (6, 10)}[d]
        llo, lhi = {EASY: (3, 8), MEDIUM: (3, 8), HARD: (3, 15)}[d]
        check(rlo <= len(c.rules) <= rhi, "rule count out of range")
        check(wlo <= len(c.words) <= whi, "word count out of range")
        check(all(llo <= len(w) <= lhi for w in c.words), "word length out of range")
        check(all(-100 <= r.points <= 100 for r in c.rules), "points out of range")
        check(len(set(c.words)) == len(c.words), "duplicate words listed")
    else:
        problems.append(f"unknown constraint type {type(c)}")
    return problems


@pytest.mark.parametrize("game", list(GameKind))
@pytest.mark.parametrize("difficulty", list(DifficultyLevel))
def test_generated_instances_fit_envelope(game, difficulty):
    for seed in range(20):
        instance = generate(game, difficulty, seed)
        assert validate_envelope(instance) == []


def test_generation_is_deterministic():
    a = generate(GameKind.STRING_SEARCH, HARD, 7)
    b = generate(GameKind.STRING_SEARCH, HARD, 7)
    assert serialize_instance(a) == serialize_instance(b)


def test_generated_prompt_matches_renderer():
    from puzzlejudge.prompting import render_prompt

    for game in GameKind:
        instance = generate(game, MEDIUM, 50)
        assert instance.prompt == render_prompt(instance)


def test_string_search_hard_has_unique_solution():
    for seed in (7, 8, 9, 10):
        instance = generate(GameKind.STRING_SEARCH, HARD, seed)
        assert count_solutions(instance, limit=3) == 1


def test_string_search_easy_allows_multiple_solutions():
    # multiplicity is permitted (not forced) outside hard
    counts = {count_solutions(generate(GameKind.STRING_SEARCH, EASY, s), limit=5)
              for s in range(12)}
    assert all(c >= 1 for c in counts)


def test_islands_planted_grid_statistics():
    instance = generate(GameKind.ISLANDS, HARD, 4)
    c = instance.constraints
    answer = solve(instance).answer
    assert check_islands(c, answer).solved


def test_crossword_embeds_solution_plus_noise(lexicon):
    for difficulty, listed in ((EASY, 8), (MEDIUM, 16), (HARD, 20)):
        instance = generate(GameKind.CROSSWORD_ARRANGER, difficulty, 11)
        assert len(instance.constraints.words) == listed
        answer = solve(instance).answer
        assert grade(instance, answer).solved


def test_generate_dataset_small_scale(tmp_path):
    out_test = tmp_path / "test.jsonl"
    out_train = tmp_path / "train.jsonl"
    summary = generate_dataset(
        out_test, out_train, per_cell_test=4, per_cell_train=2,
        master_seed=3, parallelism=1,
    )
    assert summary["test_instances"] == 96
    assert summary["train_instances"] == 48
    test_instances = load_instances(out_test)
    train_instances = load_instances(out_train)
    test_payloads = {constraints_payload(i.game, i.constraints) for i in test_instances}
    train_payloads = {constraints_payload(i.game, i.constraints) for i in train_instances}
    assert len(test_payloads) == 96
    assert len(train_payloads) == 48
    assert not test_payloads & train_payloads

    rerun_test = tmp_path / "test2.jsonl"
    rerun_train = tmp_path / "train2.jsonl"
    generate_dataset(rerun_test, rerun_train, per_cell_test=4, per_cell_train=2,
                     master_seed=3, parallelism=2)
    assert rerun_test.read_bytes() == out_test.read_bytes()
    assert rerun_train.read_bytes() == out_train.read_bytes()


def test_generate_dataset_zero_request(tmp_path):
    summary = generate_dataset(
        tmp_path / "t.jsonl", tmp_path / "r.jsonl",
        per_cell_test=0, per_cell_train=0, parallelism=1,
    )
    assert summary["test_instances"] == 0
    assert (tmp_path / "t.jsonl").read_text() == ""


def test_generation_exhausted_when_lexicon_cannot_satisfy():
    from puzzlejudge.errors import GenerationExhaustedError
    from puzzlejudge.lexicon import Lexicon, bundled_knowledge

    tiny = Lexicon(["impossibilities"])  # no 3-5 letter word exists
    with pytest.raises(GenerationExhaustedError):
        generate(
            GameKind.ANAGRAM_SCRIBBLE, EASY, 1,
            lexicon=tiny, knowledge=bundled_knowledge(), max_attempts=50,
        )


def test_derive_seed_is_stable():
    a = derive_seed(0, GameKind.ISLANDS, EASY, "test", 5)
    b = derive_seed(0, GameKind.ISLANDS, EASY, "test", 5)
    c = derive_seed(0, GameKind.ISLANDS, EASY, "test", 6)
    assert a == b != c
    assert 0 <= a < 2**64
