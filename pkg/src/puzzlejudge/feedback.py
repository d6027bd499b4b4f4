"""Feedback message builders and the per-template verification patterns.

Every string a grader can emit is produced here, one function per template.
``TEMPLATE_PATTERNS`` maps each game to the anchored regexes its messages
must match; the test suite runs every emitted message against them.

The duplicate-value sudoku message is a documented extension: the stock
template set has no message for a row/column/box uniqueness violation.
"""
from __future__ import annotations

import re

from .model import BracketKind, GameKind
from .rulestext import ordinal

# --- Anagram Scribble ---------------------------------------------------


def anagram_length(n: int) -> str:
    return f"Your answer must be exactly {n} characters long"


ANAGRAM_CHARSET = "Your answer must only contain the characters provided"
ANAGRAM_REPEATED = "Your answer must not contain repeated characters"
ANAGRAM_NOT_WORD = "Your answer is not a valid English word"

# --- Password Game ------------------------------------------------------


def password_violation(answer: str, rule_sentence: str) -> str:
    return f"{answer} is not satisfying this rule: {rule_sentence}."


# --- Bracket Game -------------------------------------------------------


def bracket_base_changed(base_text: str) -> str:
    return f"You are not allowed to change the character sequence of base text {base_text}"


BRACKET_UNBALANCED = "There is a closing bracket without an open bracket"


def bracket_depth(actual: int, expected: int) -> str:
    return f"The depth of the bracket is {actual}. The expected depth is {expected}"


def bracket_not_found(word: str) -> str:
    return f"The text '{word}' is not found in your answer."


def bracket_not_inside(word: str, kind: BracketKind) -> str:
    return (
        f"The text '{word}' is not inside any {kind.value} bracket"
        f" {kind.open_char} {kind.close_char}"
    )


# --- String Search ------------------------------------------------------


def string_wrong_length(answer: str, n: int) -> str:
    return f"{answer} is not {n} characters long."


def string_not_substring(answer: str, haystack: str) -> str:
    return f"{answer} does not exist in {haystack}."


def string_missing_run(answer: str, n: int, what: str) -> str:
    return f"{answer} does not have {n} consecutive {what}"


def string_has_run(answer: str, n: int, what: str) -> str:
    return f"{answer} has {n} consecutive {what}"


def string_less_or_equal_vowels(answer: str) -> str:
    return f"{answer} has less or equal vowels than consonants"


def string_more_or_equal_vowels(answer: str) -> str:
    return f"{answer} has more or equal vowels than consonants"


def string_unequal_vowels(answer: str) -> str:
    return f"{answer} does not have the same amount of vowels and consonants"


def string_char_missing(ch: str, answer: str) -> str:
    return f"{ch} does not appear in {answer}."


def string_char_present(ch: str, answer: str) -> str:
    return f"{ch} exists in {answer}."


def string_not_palindrome(answer: str) -> str:
    return f"{answer} is not a palindrome."


# --- Crossword Arranger -------------------------------------------------


def crossword_size_mismatch(expected: int, got: int) -> str:
    return f"Mismatch answer length found!! Expected size of {expected}, got {got}."


def crossword_word_mismatch(orientation: str, word: str) -> str:
    return f"Mismatch answer word found!! {orientation} word {word} is not in the word set."


# --- Text Sudoku --------------------------------------------------------

SUDOKU_UNFILLED = "There are unfilled cells"
SUDOKU_UNRECOGNIZED = "There are unrecognized characters, or possibly unfilled cells."
SUDOKU_REPLACED = "One or more characters are replaced"


def sudoku_wrong_shape(side: int) -> str:
    return f"Your answer is wrong in shape, it should be {side}x{side} sudoku."


def sudoku_duplicate(value: str, unit: str, index: int) -> str:
    # Documented extension template; not part of the stock feedback set.
    return f"Duplicate value '{value}' in {unit} {index}."


# --- Islands ------------------------------------------------------------


def islands_wrong_shape(n: int, rows: int, cols: int) -> str:
    return f"2D grid is not {n} x {n}. ({rows} x {cols})"


def islands_invalid_char(ch: str) -> str:
    return f"2D contains invalid character ({ch})"


def islands_wrong_count(expected: int, got: int) -> str:
    return f"There must be exactly {expected} islands, but you provided {got} islands"


def islands_wrong_size(size_min: int, size_max: int) -> str:
    return f"The size of each island must be from {size_min} to {size_max} tiles"


def islands_wrong_tree_islands(expected: int) -> str:
    return f"There must be exactly {expected} islands that have coconut trees on them"


def islands_wrong_trees_total(expected: int) -> str:
    return f"There must be exactly {expected} total coconut trees."


# --- Ordering Text ------------------------------------------------------


def ordering_too_short(items: int) -> str:
    return f"Your answer is too short. There should be {items} items."


def ordering_wrong_position(word: str, position: int) -> str:
    return f"{word} is not supposed to be the {ordinal(position)} word in the order."


# --- Verification patterns ----------------------------------------------

_ANY = r".*"
_INT = r"\d+"
_CH = r"."

TEMPLATE_PATTERNS: dict[GameKind, tuple[re.Pattern, ...]] = {
    GameKind.ANAGRAM_SCRIBBLE: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^Your answer must be exactly {_INT} characters long$",
            r"^Your answer must only contain the characters provided$",
            r"^Your answer must not contain repeated characters$",
            r"^Your answer is not a valid English word$",
        )
    ),
    GameKind.PASSWORD_GAME: tuple(
        re.compile(p, re.DOTALL)
        for p in (rf"^{_ANY} is not satisfying this rule: {_ANY}\.$",)
    ),
    GameKind.BRACKET_GAME: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^You are not allowed to change the character sequence of base text {_ANY}$",
            r"^There is a closing bracket without an open bracket$",
            rf"^The depth of the bracket is {_INT}\. The expected depth is {_INT}$",
            rf"^The text '{_ANY}' is not found in your answer\.$",
            rf"^The text '{_ANY}' is not inside any (block|curly|round|angle) bracket"
            rf" (\[ \]|\{{ \}}|\( \)|< >)$",
        )
    ),
    GameKind.STRING_SEARCH: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^{_ANY} is not {_INT} characters long\.$",
            rf"^{_ANY} does not exist in {_ANY}\.$",
            rf"^{_ANY} does not have {_INT} consecutive consonants$",
            rf"^{_ANY} has {_INT} consecutive consonants$",
            rf"^{_ANY} does not have {_INT} consecutive vowels$",
            rf"^{_ANY} has {_INT} consecutive vowels$",
            rf"^{_ANY} has less or equal vowels than consonants$",
            rf"^{_ANY} has more or equal vowels than consonants$",
            rf"^{_ANY} does not have the same amount of vowels and consonants$",
            rf"^{_CH} does not appear in {_ANY}\.$",
            rf"^{_CH} exists in {_ANY}\.$",
            rf"^{_ANY} is not a palindrome\.$",
        )
    ),
    GameKind.CROSSWORD_ARRANGER: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^Mismatch answer length found!! Expected size of {_INT}, got {_INT}\.$",
            rf"^Mismatch answer word found!! (Horizontal|Vertical) word {_ANY}"
            rf" is not in the word set\.$",
        )
    ),
    GameKind.TEXT_SUDOKU: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            r"^There are unfilled cells$",
            rf"^Your answer is wrong in shape, it should be {_INT}x{_INT} sudoku\.$",
            r"^There are unrecognized characters, or possibly unfilled cells\.$",
            r"^One or more characters are replaced$",
            rf"^Duplicate value '{_CH}' in (row|column|box) {_INT}\.$",
        )
    ),
    GameKind.ISLANDS: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^2D grid is not {_INT} x {_INT}\. \({_INT} x {_INT}\)$",
            rf"^2D contains invalid character \({_CH}\)$",
            rf"^There must be exactly {_INT} islands, but you provided {_INT} islands$",
            rf"^The size of each island must be from {_INT} to {_INT} tiles$",
            rf"^There must be exactly {_INT} islands that have coconut trees on them$",
            rf"^There must be exactly {_INT} total coconut trees\.$",
        )
    ),
    GameKind.ORDERING_TEXT: tuple(
        re.compile(p, re.DOTALL)
        for p in (
            rf"^Your answer is too short\. There should be {_INT} items\.$",
            rf"^{_ANY} is not supposed to be the {_INT}(st|nd|rd|th) word in the order\.$",
        )
    ),
}


def matches_template(game: GameKind, message: str) -> bool:
    return any(p.match(message) for p in TEMPLATE_PATTERNS[game])
