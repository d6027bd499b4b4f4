"""Core data model: games, difficulties, constraint payloads, verdicts, episodes.

Every value here is immutable after construction so instances can be shared
freely between threads. Serialization is line-oriented: one instance per line,
with grid rows kept as separate strings so records never contain newlines.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class GameKind(str, Enum):
    ANAGRAM_SCRIBBLE = "anagram_scribble"
    PASSWORD_GAME = "password_game"
    BRACKET_GAME = "bracket_game"
    STRING_SEARCH = "string_search"
    CROSSWORD_ARRANGER = "crossword_arranger"
    TEXT_SUDOKU = "text_sudoku"
    ISLANDS = "islands"
    ORDERING_TEXT = "ordering_text"

    @property
    def is_one_dimensional(self) -> bool:
        return self in ONE_D_GAMES

    @property
    def is_two_dimensional(self) -> bool:
        return self in TWO_D_GAMES


ONE_D_GAMES = (
    GameKind.ANAGRAM_SCRIBBLE,
    GameKind.PASSWORD_GAME,
    GameKind.BRACKET_GAME,
    GameKind.STRING_SEARCH,
)
TWO_D_GAMES = (
    GameKind.CROSSWORD_ARRANGER,
    GameKind.TEXT_SUDOKU,
    GameKind.ISLANDS,
    GameKind.ORDERING_TEXT,
)


class DifficultyLevel(str, Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"

    @property
    def rank(self) -> int:
        return _DIFFICULTY_RANK[self]

    def __lt__(self, other: "DifficultyLevel") -> bool:  # type: ignore[override]
        return self.rank < other.rank


_DIFFICULTY_RANK = {
    DifficultyLevel.EASY: 0,
    DifficultyLevel.MEDIUM: 1,
    DifficultyLevel.HARD: 2,
}


class BracketKind(str, Enum):
    BLOCK = "block"
    CURLY = "curly"
    ROUND = "round"
    ANGLE = "angle"

    @property
    def open_char(self) -> str:
        return _BRACKET_CHARS[self][0]

    @property
    def close_char(self) -> str:
        return _BRACKET_CHARS[self][1]


_BRACKET_CHARS = {
    BracketKind.BLOCK: ("[", "]"),
    BracketKind.CURLY: ("{", "}"),
    BracketKind.ROUND: ("(", ")"),
    BracketKind.ANGLE: ("<", ">"),
}

SPECIAL_CHARACTERS = "!@#$%^&*"
ROMAN_DIGITS = "IVXLCDM"


class PasswordRuleKind(str, Enum):
    TOTAL_CHARS = "total_chars"
    UPPERCASE_COUNT = "uppercase_count"
    LOWERCASE_COUNT = "lowercase_count"
    LATIN_COUNT = "latin_count"
    DIGIT_COUNT = "digit_count"
    ROMAN_DIGIT_COUNT = "roman_digit_count"
    SPECIAL_COUNT = "special_count"
    CHAR_COUNT = "char_count"
    CONTAINS_STRING = "contains_string"
    CAPITAL_OF = "capital_of"
    CONTINENT_OF = "continent_of"
    MATH_DIGITS = "math_digits"
    MATH_WORDS = "math_words"


# Counting kinds that may appear at most once per rule list.
NON_REPEATABLE_PASSWORD_KINDS = frozenset(
    {
        PasswordRuleKind.TOTAL_CHARS,
        PasswordRuleKind.UPPERCASE_COUNT,
        PasswordRuleKind.LOWERCASE_COUNT,
        PasswordRuleKind.LATIN_COUNT,
        PasswordRuleKind.DIGIT_COUNT,
        PasswordRuleKind.ROMAN_DIGIT_COUNT,
        PasswordRuleKind.SPECIAL_COUNT,
    }
)


@dataclass(frozen=True)
class PasswordRule:
    kind: PasswordRuleKind
    count: Optional[int] = None
    char: Optional[str] = None
    text: Optional[str] = None
    expression: Optional[str] = None


class ComplexRuleKind(str, Enum):
    PALINDROME = "palindrome"
    HAS_CONSECUTIVE_CONSONANTS = "has_consecutive_consonants"
    NO_CONSECUTIVE_CONSONANTS = "no_consecutive_consonants"
    HAS_CONSECUTIVE_VOWELS = "has_consecutive_vowels"
    NO_CONSECUTIVE_VOWELS = "no_consecutive_vowels"
    MORE_VOWELS = "more_vowels"
    FEWER_VOWELS = "fewer_vowels"
    EQUAL_VOWELS = "equal_vowels"


# Mutually exclusive groups; at most one member of each group per rule list.
COMPLEX_RULE_GROUPS = {
    ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS: "consonant_run",
    ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS: "consonant_run",
    ComplexRuleKind.HAS_CONSECUTIVE_VOWELS: "vowel_run",
    ComplexRuleKind.NO_CONSECUTIVE_VOWELS: "vowel_run",
    ComplexRuleKind.MORE_VOWELS: "vowel_balance",
    ComplexRuleKind.FEWER_VOWELS: "vowel_balance",
    ComplexRuleKind.EQUAL_VOWELS: "vowel_balance",
}


@dataclass(frozen=True)
class ComplexRule:
    kind: ComplexRuleKind
    run_length: Optional[int] = None  # only for the "N consecutive" forms


class OrderingConditionKind(str, Enum):
    EVERY_VOWEL = "every_vowel"
    EVERY_CONSONANT = "every_consonant"
    VOWEL_AFTER_CONSONANT = "vowel_after_consonant"
    CONSONANT_AFTER_VOWEL = "consonant_after_vowel"
    CONSECUTIVE_VOWEL_PAIR = "consecutive_vowel_pair"
    CONSECUTIVE_VOWEL_RUN = "consecutive_vowel_run"
    CONSECUTIVE_CONSONANT_PAIR = "consecutive_consonant_pair"
    CONSECUTIVE_CONSONANT_RUN = "consecutive_consonant_run"
    LENGTH_EXACTLY = "length_exactly"
    LENGTH_NOT_EQUAL = "length_not_equal"
    LENGTH_MORE = "length_more"
    LENGTH_LESS = "length_less"
    LENGTH_BETWEEN = "length_between"
    LENGTH_MORE_NOT_EQUAL = "length_more_not_equal"
    LENGTH_LESS_NOT_EQUAL = "length_less_not_equal"
    STARTS_WITH = "starts_with"
    ENDS_WITH = "ends_with"
    STARTS_AND_ENDS = "starts_and_ends"
    CONTAINS = "contains"
    CONTAINS_EXACTLY = "contains_exactly"


# Kinds whose points apply once per occurrence rather than once per word.
PER_OCCURRENCE_KINDS = frozenset(
    {
        OrderingConditionKind.EVERY_VOWEL,
        OrderingConditionKind.EVERY_CONSONANT,
        OrderingConditionKind.VOWEL_AFTER_CONSONANT,
        OrderingConditionKind.CONSONANT_AFTER_VOWEL,
        OrderingConditionKind.CONSECUTIVE_VOWEL_PAIR,
        OrderingConditionKind.CONSECUTIVE_VOWEL_RUN,
        OrderingConditionKind.CONSECUTIVE_CONSONANT_PAIR,
        OrderingConditionKind.CONSECUTIVE_CONSONANT_RUN,
    }
)


@dataclass(frozen=True)
class OrderingCondition:
    kind: OrderingConditionKind
    number: Optional[int] = None
    number2: Optional[int] = None
    text: Optional[str] = None
    text2: Optional[str] = None


@dataclass(frozen=True)
class OrderingRule:
    condition: OrderingCondition
    points: int
    # Prompt phrasing variant: "<condition> gets P points" vs "add P points if <condition>".
    phrasing: str = "gets"

    def __post_init__(self) -> None:
        if not -100 <= self.points <= 100:
            raise ValueError(f"rule points {self.points} outside [-100, 100]")
        if self.phrasing not in ("gets", "add"):
            raise ValueError(f"unknown phrasing {self.phrasing!r}")


@dataclass(frozen=True)
class AnagramConstraints:
    length: int
    letters: tuple[str, ...]
    repeatable: bool


@dataclass(frozen=True)
class PasswordConstraints:
    rules: tuple[PasswordRule, ...]


@dataclass(frozen=True)
class BracketPlacement:
    word: str
    bracket: BracketKind


@dataclass(frozen=True)
class BracketConstraints:
    base_text: str
    placements: tuple[BracketPlacement, ...]
    depth: int


@dataclass(frozen=True)
class StringSearchConstraints:
    haystack: str
    length: int
    must_contain: tuple[str, ...]
    must_exclude: tuple[str, ...]
    complex_rules: tuple[ComplexRule, ...]


@dataclass(frozen=True)
class CrosswordConstraints:
    size: int
    words: tuple[str, ...]


@dataclass(frozen=True)
class SudokuConstraints:
    box: int  # sub-grid side; full side is box * box
    alphabet: tuple[str, ...]
    grid: tuple[str, ...]  # rows; '_' marks a blank cell

    @property
    def side(self) -> int:
        return self.box * self.box


@dataclass(frozen=True)
class IslandsConstraints:
    size: int
    islands: int
    size_min: int
    size_max: int
    tree_islands: int
    trees_total: int

    @property
    def size_rule_active(self) -> bool:
        return (self.size_min, self.size_max) != (1, self.size * self.size)

    @property
    def tree_rules_active(self) -> bool:
        return self.tree_islands > 0 or self.trees_total > 0


@dataclass(frozen=True)
class OrderingConstraints:
    rules: tuple[OrderingRule, ...]
    words: tuple[str, ...]


ConstraintSet = Union[
    AnagramConstraints,
    PasswordConstraints,
    BracketConstraints,
    StringSearchConstraints,
    CrosswordConstraints,
    SudokuConstraints,
    IslandsConstraints,
    OrderingConstraints,
]

CONSTRAINT_TYPE_BY_GAME = {
    GameKind.ANAGRAM_SCRIBBLE: AnagramConstraints,
    GameKind.PASSWORD_GAME: PasswordConstraints,
    GameKind.BRACKET_GAME: BracketConstraints,
    GameKind.STRING_SEARCH: StringSearchConstraints,
    GameKind.CROSSWORD_ARRANGER: CrosswordConstraints,
    GameKind.TEXT_SUDOKU: SudokuConstraints,
    GameKind.ISLANDS: IslandsConstraints,
    GameKind.ORDERING_TEXT: OrderingConstraints,
}


@dataclass(frozen=True)
class Verdict:
    solved: bool
    feedback: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.solved != (len(self.feedback) == 0):
            raise ValueError("verdict invariant violated: solved <=> empty feedback")


@dataclass(frozen=True)
class TurnRecord:
    response: str
    verdict: Verdict
    latency_s: float


@dataclass(frozen=True)
class EpisodeRecord:
    instance_id: str
    turns: tuple[TurnRecord, ...]
    solved_at: Optional[int] = None  # 1-based turn index
    error: Optional[str] = None

    def __post_init__(self) -> None:
        if self.solved_at is not None:
            if not self.turns or not self.turns[-1].verdict.solved:
                raise ValueError("solved_at set but last verdict is not solved")
            if self.solved_at != len(self.turns):
                raise ValueError("turns recorded after a solved verdict")
        elif self.turns and self.turns[-1].verdict.solved:
            raise ValueError("last verdict solved but solved_at missing")


@dataclass(frozen=True)
class PuzzleInstance:
    id: str
    game: GameKind
    difficulty: DifficultyLevel
    seed: int
    constraints: ConstraintSet
    prompt: str


def instance_id(game: GameKind, difficulty: DifficultyLevel, seed: int) -> str:
    """Deterministic, collision-resistant identifier for a generated instance."""
    digest = hashlib.sha256(f"{game.value}:{difficulty.value}:{seed}".encode()).hexdigest()
    return digest[:16]


def _constraints_to_dict(constraints: ConstraintSet) -> dict:
    if isinstance(constraints, AnagramConstraints):
        return {
            "length": constraints.length,
            "letters": list(constraints.letters),
            "repeatable": constraints.repeatable,
        }
    if isinstance(constraints, PasswordConstraints):
        return {
            "rules": [
                {
                    "kind": r.kind.value,
                    "count": r.count,
                    "char": r.char,
                    "text": r.text,
                    "expression": r.expression,
                }
                for r in constraints.rules
            ]
        }
    if isinstance(constraints, BracketConstraints):
        return {
            "base_text": constraints.base_text,
            "placements": [[p.word, p.bracket.value] for p in constraints.placements],
            "depth": constraints.depth,
        }
    if isinstance(constraints, StringSearchConstraints):
        return {
            "haystack": constraints.haystack,
            "length": constraints.length,
            "must_contain": list(constraints.must_contain),
            "must_exclude": list(constraints.must_exclude),
            "complex_rules": [
                {"kind": c.kind.value, "run_length": c.run_length}
                for c in constraints.complex_rules
            ],
        }
    if isinstance(constraints, CrosswordConstraints):
        return {"size": constraints.size, "words": list(constraints.words)}
    if isinstance(constraints, SudokuConstraints):
        return {
            "box": constraints.box,
            "alphabet": list(constraints.alphabet),
            "grid": list(constraints.grid),
        }
    if isinstance(constraints, IslandsConstraints):
        return {
            "size": constraints.size,
            "islands": constraints.islands,
            "size_min": constraints.size_min,
            "size_max": constraints.size_max,
            "tree_islands": constraints.tree_islands,
            "trees_total": constraints.trees_total,
        }
    if isinstance(constraints, OrderingConstraints):
        return {
            "rules": [
                {
                    "kind": r.condition.kind.value,
                    "number": r.condition.number,
                    "number2": r.condition.number2,
                    "text": r.condition.text,
                    "text2": r.condition.text2,
                    "points": r.points,
                    "phrasing": r.phrasing,
                }
                for r in constraints.rules
            ],
            "words": list(constraints.words),
        }
    raise TypeError(f"unknown constraint type {type(constraints)!r}")


def _constraints_from_dict(game: GameKind, data: dict) -> ConstraintSet:
    if game is GameKind.ANAGRAM_SCRIBBLE:
        return AnagramConstraints(
            length=data["length"],
            letters=tuple(data["letters"]),
            repeatable=data["repeatable"],
        )
    if game is GameKind.PASSWORD_GAME:
        return PasswordConstraints(
            rules=tuple(
                PasswordRule(
                    kind=PasswordRuleKind(r["kind"]),
                    count=r["count"],
                    char=r["char"],
                    text=r["text"],
                    expression=r["expression"],
                )
                for r in data["rules"]
            )
        )
    if game is GameKind.BRACKET_GAME:
        return BracketConstraints(
            base_text=data["base_text"],
            placements=tuple(
                BracketPlacement(word=w, bracket=BracketKind(b))
                for w, b in data["placements"]
            ),
            depth=data["depth"],
        )
    if game is GameKind.STRING_SEARCH:
        return StringSearchConstraints(
            haystack=data["haystack"],
            length=data["length"],
            must_contain=tuple(data["must_contain"]),
            must_exclude=tuple(data["must_exclude"]),
            complex_rules=tuple(
                ComplexRule(kind=ComplexRuleKind(c["kind"]), run_length=c["run_length"])
                for c in data["complex_rules"]
            ),
        )
    if game is GameKind.CROSSWORD_ARRANGER:
        return CrosswordConstraints(size=data["size"], words=tuple(data["words"]))
    if game is GameKind.TEXT_SUDOKU:
        return SudokuConstraints(
            box=data["box"], alphabet=tuple(data["alphabet"]), grid=tuple(data["grid"])
        )
    if game is GameKind.ISLANDS:
        return IslandsConstraints(
            size=data["size"],
            islands=data["islands"],
            size_min=data["size_min"],
            size_max=data["size_max"],
            tree_islands=data["tree_islands"],
            trees_total=data["trees_total"],
        )
    if game is GameKind.ORDERING_TEXT:
        return OrderingConstraints(
            rules=tuple(
                OrderingRule(
                    condition=OrderingCondition(
                        kind=OrderingConditionKind(r["kind"]),
                        number=r["number"],
                        number2=r["number2"],
                        text=r["text"],
                        text2=r["text2"],
                    ),
                    points=r["points"],
                    phrasing=r["phrasing"],
                )
                for r in data["rules"]
            ),
            words=tuple(data["words"]),
        )
    raise ValueError(f"unknown game {game!r}")


def constraints_payload(game: GameKind, constraints: ConstraintSet) -> str:
    """Canonical single-line payload string; used for duplicate detection."""
    return json.dumps(
        {"game": game.value, "constraints": _constraints_to_dict(constraints)},
        separators=(",", ":"),
        ensure_ascii=True,
    )


def serialize_instance(instance: PuzzleInstance) -> str:
    """One-line, self-describing record. Inverse of :func:`deserialize_instance`."""
    record = {
        "id": instance.id,
        "game": instance.game.value,
        "difficulty": instance.difficulty.value,
        "seed": instance.seed,
        "constraints": _constraints_to_dict(instance.constraints),
        "prompt": instance.prompt,
    }
    return json.dumps(record, separators=(",", ":"), ensure_ascii=True)


def deserialize_instance(line: str) -> PuzzleInstance:
    record = json.loads(line)
    game = GameKind(record["game"])
    return PuzzleInstance(
        id=record["id"],
        game=game,
        difficulty=DifficultyLevel(record["difficulty"]),
        seed=record["seed"],
        constraints=_constraints_from_dict(game, record["constraints"]),
        prompt=record["prompt"],
    )


def load_instances(path) -> list[PuzzleInstance]:
    with open(path, encoding="utf-8") as handle:
        return [deserialize_instance(line) for line in handle if line.strip()]


def dump_instances(path, instances) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for inst in instances:
            handle.write(serialize_instance(inst) + "\n")
