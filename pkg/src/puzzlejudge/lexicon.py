"""Bundled word list, country knowledge tables, and word-form arithmetic.

The shared knowledge layer for generation and grading. Data lives in
``data/words.txt`` (one lowercase word per line) and ``data/countries.tsv``
(country, capital, continent), both overridable through the CLI.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import ExpressionParseError, UnknownCountryError

VOWELS = "aeiou"  # 'y' counts as a consonant


def is_vowel(ch: str) -> bool:
    return ch.lower() in VOWELS


def is_consonant(ch: str) -> bool:
    return ch.isalpha() and ch.lower() not in VOWELS


class Lexicon:
    """Immutable word list indexed by length."""

    def __init__(self, words: Iterable[str]):
        cleaned = set()
        for word in words:
            word = word.strip().lower()
            if not word:
                continue
            if not word.isalpha() or not word.isascii():
                raise ValueError(f"lexicon word {word!r} is not lowercase a-z")
            cleaned.add(word)
        self.words = frozenset(cleaned)
        by_length: dict[int, list[str]] = {}
        for word in cleaned:
            by_length.setdefault(len(word), []).append(word)
        self.by_length = {n: tuple(sorted(ws)) for n, ws in by_length.items()}

    def __len__(self) -> int:
        return len(self.words)

    def is_word(self, text: str) -> bool:
        """Membership test, case-insensitive."""
        return text.lower() in self.words

    def of_length(self, length: int) -> tuple[str, ...]:
        return self.by_length.get(length, ())

    def words_matching(
        self, length: int, allowed: Iterable[str], repeatable: bool
    ) -> list[str]:
        """All words of exactly ``length`` buildable from ``allowed``.

        With ``repeatable`` the allowed letters form an alphabet; without it
        they form a multiset and each listed letter may be used at most as
        many times as it appears.
        """
        if length < 1:
            raise ValueError("length must be >= 1")
        allowed = [ch.lower() for ch in allowed]
        if not allowed:
            raise ValueError("allowed letters must be nonempty")
        matches = []
        if repeatable:
            alphabet = set(allowed)
            for word in self.of_length(length):
                if set(word) <= alphabet:
                    matches.append(word)
        else:
            budget = Counter(allowed)
            for word in self.of_length(length):
                counts = Counter(word)
                if all(budget[ch] >= k for ch, k in counts.items()):
                    matches.append(word)
        return matches

    @staticmethod
    def from_file(path) -> "Lexicon":
        with open(path, encoding="utf-8") as handle:
            return Lexicon(handle.read().split())


class KnowledgeBase:
    """Country -> capital city and continent."""

    def __init__(self, rows: Iterable[tuple[str, str, str]]):
        self.capitals: dict[str, str] = {}
        self.continents: dict[str, str] = {}
        for country, capital, continent in rows:
            if not country or not capital or not continent:
                raise ValueError(f"incomplete knowledge row for {country!r}")
            self.capitals[country] = capital
            self.continents[country] = continent

    def countries(self) -> tuple[str, ...]:
        return tuple(sorted(self.capitals))

    def lookup(self, kind: str, country: str) -> str:
        table = {"capital": self.capitals, "continent": self.continents}.get(kind)
        if table is None:
            raise ValueError(f"unknown lookup kind {kind!r}")
        if country not in table:
            raise UnknownCountryError(country)
        return table[country]

    @staticmethod
    def from_file(path) -> "KnowledgeBase":
        rows = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ValueError(f"bad knowledge row: {line!r}")
                rows.append((parts[0], parts[1], parts[2]))
        return KnowledgeBase(rows)


def _data_path(name: str) -> Path:
    return Path(str(resources.files("puzzlejudge").joinpath("data", name)))


@lru_cache(maxsize=None)
def bundled_lexicon(path: Optional[str] = None) -> Lexicon:
    return Lexicon.from_file(path or _data_path("words.txt"))


@lru_cache(maxsize=None)
def bundled_knowledge(path: Optional[str] = None) -> KnowledgeBase:
    return KnowledgeBase.from_file(path or _data_path("countries.tsv"))


NUMBER_WORDS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20,
}
WORDS_BY_NUMBER = {v: k for k, v in NUMBER_WORDS.items()}

OPERATOR_WORDS = {"plus": "+", "minus": "-", "times": "*"}
OPERATORS = {"+", "-", "*"}


def render_expression(left: int, op: str, right: int, form: str) -> str:
    """Render a binary expression in digit form ("4 + 2") or word form ("four plus two")."""
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}")
    if form == "digits":
        return f"{left} {op} {right}"
    if form == "words":
        op_word = {v: k for k, v in OPERATOR_WORDS.items()}[op]
        return f"{WORDS_BY_NUMBER[left]} {op_word} {WORDS_BY_NUMBER[right]}"
    raise ValueError(f"unknown expression form {form!r}")


def eval_expression(expr: str, form: str) -> int:
    """Exact value of a generator-grammar expression: ``operand op operand``."""
    tokens = expr.split()
    if len(tokens) != 3:
        raise ExpressionParseError(f"expected 'operand op operand', got {expr!r}")
    left_tok, op_tok, right_tok = tokens
    if form == "digits":
        try:
            left, right = int(left_tok), int(right_tok)
        except ValueError as exc:
            raise ExpressionParseError(f"bad operand in {expr!r}") from exc
        op = op_tok
    elif form == "words":
        if left_tok not in NUMBER_WORDS or right_tok not in NUMBER_WORDS:
            raise ExpressionParseError(f"bad number word in {expr!r}")
        if op_tok not in OPERATOR_WORDS:
            raise ExpressionParseError(f"bad operator word in {expr!r}")
        left, right = NUMBER_WORDS[left_tok], NUMBER_WORDS[right_tok]
        op = OPERATOR_WORDS[op_tok]
    else:
        raise ValueError(f"unknown expression form {form!r}")
    if op not in OPERATORS:
        raise ExpressionParseError(f"bad operator in {expr!r}")
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    return left * right
