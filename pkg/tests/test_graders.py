from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldens import (
    ALL_GOLDENS,
    BRACKET_ANSWER,
    CROSSWORD_ANSWER,
    ISLANDS_ANSWER,
    ORDERING_ANSWER,
    SUDOKU_ANSWER,
    anagram_golden,
    bracket_golden,
    crossword_golden,
    islands_golden,
    make_instance,
    ordering_golden,
    password_golden,
    string_search_golden,
    sudoku_golden,
)
from puzzlejudge.feedback import matches_template
from puzzlejudge.graders import (
    bracket_depth,
    check_anagram,
    grade,
    normalize_answer,
)
from puzzlejudge.model import (
    AnagramConstraints,
    ComplexRule,
    ComplexRuleKind,
    DifficultyLevel,
    GameKind,
    StringSearchConstraints,
)


@pytest.mark.parametrize("name,build,answer", ALL_GOLDENS)
def test_worked_examples_grade_solved(name, build, answer):
    verdict = grade(build(), answer)
    assert verdict.solved, (name, verdict.feedback)


@pytest.mark.parametrize("name,build,answer", ALL_GOLDENS)
def test_empty_answer_never_solves(name, build, answer):
    verdict = grade(build(), "")
    assert not verdict.solved
    assert verdict.feedback


def test_grading_is_pure():
    instance = islands_golden()
    assert grade(instance, ISLANDS_ANSWER) == grade(instance, ISLANDS_ANSWER)
    assert grade(instance, "junk") == grade(instance, "junk")


def test_normalization_strips_fences_and_whitespace():
    instance = sudoku_golden()
    fenced = f"```text\n{SUDOKU_ANSWER}\n```"
    assert grade(instance, fenced).solved
    assert grade(instance, f"\n\n  {SUDOKU_ANSWER} \r\n").solved
    assert normalize_answer("```\nabc\n```") == "abc"
    assert normalize_answer("  x  ") == "x"


# --- anagram ---------------------------------------------------------------


def test_anagram_wrong_length_message():
    verdict = grade(anagram_golden(), "hood")
    assert not verdict.solved
    assert "Your answer must be exactly 6 characters long" in verdict.feedback


def test_anagram_case_insensitive():
    assert grade(anagram_golden(), "HOODIE").solved


def test_anagram_charset_and_word_messages():
    verdict = grade(anagram_golden(), "zapped")
    assert "Your answer must only contain the characters provided" in verdict.feedback


def test_anagram_single_use_multiset():
    constraints = AnagramConstraints(
        length=4, letters=("t", "o", "a", "d"), repeatable=False
    )
    instance = make_instance(GameKind.ANAGRAM_SCRIBBLE, DifficultyLevel.HARD, constraints)
    assert grade(instance, "toad").solved
    verdict = grade(instance, "toot")
    assert "Your answer must not contain repeated characters" in verdict.feedback


def test_anagram_none_is_unsolved():
    verdict = grade(anagram_golden(), "None")
    assert not verdict.solved


# --- password ---------------------------------------------------------------


def test_password_uppercase_violation_names_rule():
    verdict = grade(password_golden(), "Hoodie")
    assert not verdict.solved
    assert verdict.feedback == (
        "Hoodie is not satisfying this rule: the text has 0 uppercase characters.",
    )


def test_password_math_digit_run():
    from puzzlejudge.model import PasswordConstraints, PasswordRule, PasswordRuleKind

    constraints = PasswordConstraints(
        rules=(
            PasswordRule(
                kind=PasswordRuleKind.MATH_WORDS, expression="seven times six"
            ),
        )
    )
    instance = make_instance(GameKind.PASSWORD_GAME, DifficultyLevel.EASY, constraints)
    assert grade(instance, "pass42word").solved
    # a longer run must not satisfy the rule: 142 is not 42
    assert not grade(instance, "pass142word").solved


def test_password_rejects_spaces():
    instance = password_golden()
    verdict = grade(instance, "hoo die")
    assert not verdict.solved
    assert any("without any space" in line for line in verdict.feedback)


# --- bracket ----------------------------------------------------------------


def test_bracket_base_text_change_detected():
    verdict = grade(bracket_golden(), "{[fabulos]<text>(games)}")
    assert verdict.feedback == (
        "You are not allowed to change the character sequence of base text fabuloustextgames",
    )


def test_bracket_depth_mismatch_reports_both_depths():
    instance = bracket_golden()
    deeper = instance.constraints.__class__(
        base_text=instance.constraints.base_text,
        placements=instance.constraints.placements,
        depth=3,
    )
    instance3 = make_instance(GameKind.BRACKET_GAME, DifficultyLevel.HARD, deeper)
    verdict = grade(instance3, BRACKET_ANSWER)
    assert "The depth of the bracket is 2. The expected depth is 3" in verdict.feedback


def test_bracket_unbalanced_message():
    verdict = grade(bracket_golden(), "fabulous]<text>(games){")
    assert verdict.feedback == ("There is a closing bracket without an open bracket",)


def test_bracket_wrong_type_message():
    verdict = grade(bracket_golden(), "{(fabulous)<text>(games)}")
    assert (
        "The text 'fabulous' is not inside any block bracket [ ]" in verdict.feedback
    )


def test_bracket_depth_matches_stack_oracle():
    rng = random.Random(5)
    opens = "[{(<"
    closes = {"[": "]", "{": "}", "(": ")", "<": ">"}

    def random_balanced(depth_left: int) -> str:
        if depth_left == 0 or rng.random() < 0.3:
            return ""
        o = rng.choice(opens)
        return (
            random_balanced(depth_left - 1).join((o, closes[o]))
            + random_balanced(depth_left)
        )

    for _ in range(300):
        text = random_balanced(6)
        depth = stack = 0
        for ch in text:
            if ch in opens:
                stack += 1
                depth = max(depth, stack)
            else:
                stack -= 1
        assert bracket_depth(text) == depth


# --- string search ------------------------------------------------------------


def test_string_search_alternative_answer_accepted():
    assert grade(string_search_golden(), "eng").solved


def test_string_search_palindrome_feedback():
    base = string_search_golden().constraints
    constraints = StringSearchConstraints(
        haystack=base.haystack,
        length=base.length,
        must_contain=base.must_contain,
        must_exclude=base.must_exclude,
        complex_rules=(ComplexRule(kind=ComplexRuleKind.PALINDROME),),
    )
    instance = make_instance(GameKind.STRING_SEARCH, DifficultyLevel.HARD, constraints)
    verdict = grade(instance, "eng")
    assert "eng is not a palindrome." in verdict.feedback


def test_string_search_messages_cover_each_rule():
    instance = string_search_golden()
    verdict = grade(instance, "rabbit")
    assert "rabbit is not 3 characters long." in verdict.feedback
    assert "g does not appear in rabbit." in verdict.feedback
    assert "i exists in rabbit." in verdict.feedback
    assert "a exists in rabbit." in verdict.feedback
    missing = grade(instance, "xyz")
    assert "xyz does not exist in hengooserabbitant." in missing.feedback


# --- crossword ------------------------------------------------------------


def test_crossword_shape_mismatch():
    verdict = grade(crossword_golden(), "app\nlee")
    assert verdict.feedback == (
        "Mismatch answer length found!! Expected size of 3, got 2.",
    )


def test_crossword_reused_word_rejected():
    verdict = grade(crossword_golden(), "app\nlee\nlee")
    assert not verdict.solved
    assert all(
        line.startswith("Mismatch answer word found!!") for line in verdict.feedback
    )


def test_crossword_unknown_word_names_orientation():
    verdict = grade(crossword_golden(), "app\nlee\npat")
    assert any(line.startswith("Mismatch answer word found!! Vertical word")
               for line in verdict.feedback)


# --- sudoku -----------------------------------------------------------------


def test_sudoku_replaced_prefilled_cell():
    answer = "BBCD\nCDAB\nBADC\nDCBA"
    verdict = grade(sudoku_golden(), answer)
    assert "One or more characters are replaced" in verdict.feedback


def test_sudoku_duplicate_extension_message():
    answer = "ABCD\nCDAB\nBADC\nDCBB"
    verdict = grade(sudoku_golden(), answer)
    assert not verdict.solved
    assert any(line.startswith("Duplicate value '") for line in verdict.feedback)


def test_sudoku_unfilled_and_shape_messages():
    assert grade(sudoku_golden(), "AB\nCD").feedback == (
        "Your answer is wrong in shape, it should be 4x4 sudoku.",
    )
    verdict = grade(sudoku_golden(), "A_CD\nCD_B\n_AD_\nDCBA")
    assert "There are unfilled cells" in verdict.feedback
    bad = grade(sudoku_golden(), "AXCD\nCDAB\nBADC\nDCBA")
    assert bad.feedback == (
        "There are unrecognized characters, or possibly unfilled cells.",
    )


# --- islands ----------------------------------------------------------------


def test_islands_all_water_counts_zero_islands():
    verdict = grade(islands_golden(), "\n".join(["......"] * 6))
    assert (
        "There must be exactly 3 islands, but you provided 0 islands"
        in verdict.feedback
    )


def test_islands_invalid_character():
    bad = ISLANDS_ANSWER.replace(".", "x", 1)
    verdict = grade(islands_golden(), bad)
    assert verdict.feedback == ("2D contains invalid character (x)",)


def test_islands_shape_report():
    verdict = grade(islands_golden(), "...\n...")
    assert verdict.feedback == ("2D grid is not 6 x 6. (2 x 3)",)


def test_islands_tree_rules():
    no_trees = ISLANDS_ANSWER.replace("o", "#")
    verdict = grade(islands_golden(), no_trees)
    assert (
        "There must be exactly 2 islands that have coconut trees on them"
        in verdict.feedback
    )
    assert "There must be exactly 4 total coconut trees." in verdict.feedback


# --- ordering ---------------------------------------------------------------


def test_ordering_tie_break_is_lexicographic():
    # ant and hen both score 10; ant must come first
    verdict = grade(ordering_golden(), "hen\nant\ngoose\nrabbit")
    assert verdict.feedback == (
        "hen is not supposed to be the 1st word in the order.",
    )


def test_ordering_too_short():
    verdict = grade(ordering_golden(), "ant\nhen")
    assert verdict.feedback == ("Your answer is too short. There should be 4 items.",)


def test_ordering_extra_lines_rejected():
    verdict = grade(ordering_golden(), ORDERING_ANSWER + "\nextra")
    assert verdict.feedback == (
        "extra is not supposed to be the 5th word in the order.",
    )


# --- template conformance ---------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(
    golden=st.sampled_from(ALL_GOLDENS),
    answer=st.text(
        alphabet=st.characters(min_codepoint=32, max_codepoint=122), max_size=30
    ),
)
def test_arbitrary_answers_fuzz_templates(golden, answer):
    name, build, _ = golden
    instance = build()
    verdict = grade(instance, answer)
    for line in verdict.feedback:
        assert matches_template(instance.game, line), (name, line)
