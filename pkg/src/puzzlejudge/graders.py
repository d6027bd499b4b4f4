"""Per-game answer verification producing verdicts with templated feedback.

Checkers are pure functions over (constraints, answer text). Malformed
answers never raise; they yield unsolved verdicts. Answer normalization
(outer whitespace, one surrounding code fence, line endings) happens once
in :func:`grade` so library, CLI, and HTTP grading agree byte-for-byte.
"""
from __future__ import annotations

import re
from typing import Optional

from . import feedback as fb
from .lexicon import (
    KnowledgeBase,
    Lexicon,
    bundled_knowledge,
    bundled_lexicon,
    eval_expression,
    is_consonant,
    is_vowel,
)
from .model import (
    AnagramConstraints,
    BracketConstraints,
    BracketKind,
    ComplexRule,
    ComplexRuleKind,
    CrosswordConstraints,
    GameKind,
    IslandsConstraints,
    OrderingConstraints,
    PasswordConstraints,
    PasswordRule,
    PasswordRuleKind,
    PuzzleInstance,
    ROMAN_DIGITS,
    SPECIAL_CHARACTERS,
    StringSearchConstraints,
    SudokuConstraints,
    Verdict,
)
from .rulestext import (
    NO_SPACE_RULE_SENTENCE,
    ordering_condition_text,
    password_rule_sentence,
)
from collections import Counter

_FENCE_RE = re.compile(r"^```[^\n]*\n(.*)\n?```$", re.DOTALL)


def normalize_answer(text: str) -> str:
    """Trim outer whitespace, strip one surrounding code fence, normalize EOLs."""
    text = text.replace("\r\n", "\n").replace("\r", "\n").strip()
    match = _FENCE_RE.match(text)
    if match:
        text = match.group(1).strip()
    return text


def _grid_lines(answer: str) -> list[str]:
    return [line.strip() for line in answer.split("\n") if line.strip()]


def _verdict(feedback: list[str]) -> Verdict:
    return Verdict(solved=not feedback, feedback=tuple(feedback))


# --- Anagram Scribble ---------------------------------------------------


def check_anagram(
    constraints: AnagramConstraints, answer: str, lexicon: Optional[Lexicon] = None
) -> Verdict:
    lexicon = lexicon or bundled_lexicon()
    answer = answer.lower()
    messages = []
    if len(answer) != constraints.length:
        messages.append(fb.anagram_length(constraints.length))
    allowed = set(constraints.letters)
    if not set(answer) <= allowed:
        messages.append(fb.ANAGRAM_CHARSET)
    elif not constraints.repeatable:
        budget = Counter(constraints.letters)
        if any(n > budget[ch] for ch, n in Counter(answer).items()):
            messages.append(fb.ANAGRAM_REPEATED)
    if not lexicon.is_word(answer):
        messages.append(fb.ANAGRAM_NOT_WORD)
    return _verdict(messages)


# --- Password Game ------------------------------------------------------


def _maximal_digit_runs(text: str) -> list[str]:
    return re.findall(r"\d+", text)


def password_rule_satisfied(
    rule: PasswordRule, answer: str, knowledge: KnowledgeBase
) -> bool:
    kind = rule.kind
    if kind is PasswordRuleKind.TOTAL_CHARS:
        return len(answer) == rule.count
    if kind is PasswordRuleKind.UPPERCASE_COUNT:
        return sum(1 for c in answer if c.isupper() and c.isascii()) == rule.count
    if kind is PasswordRuleKind.LOWERCASE_COUNT:
        return sum(1 for c in answer if c.islower() and c.isascii()) == rule.count
    if kind is PasswordRuleKind.LATIN_COUNT:
        return sum(1 for c in answer if c.isascii() and c.isalpha()) == rule.count
    if kind is PasswordRuleKind.DIGIT_COUNT:
        return sum(1 for c in answer if c.isdigit()) == rule.count
    if kind is PasswordRuleKind.ROMAN_DIGIT_COUNT:
        return sum(1 for c in answer if c in ROMAN_DIGITS) == rule.count
    if kind is PasswordRuleKind.SPECIAL_COUNT:
        return sum(1 for c in answer if c in SPECIAL_CHARACTERS) == rule.count
    if kind is PasswordRuleKind.CHAR_COUNT:
        return answer.count(rule.char) == rule.count
    if kind is PasswordRuleKind.CONTAINS_STRING:
        return rule.text in answer
    if kind is PasswordRuleKind.CAPITAL_OF:
        return knowledge.lookup("capital", rule.text) in answer
    if kind is PasswordRuleKind.CONTINENT_OF:
        return knowledge.lookup("continent", rule.text) in answer
    if kind is PasswordRuleKind.MATH_DIGITS:
        value = eval_expression(rule.expression, "digits")
        return str(value) in _maximal_digit_runs(answer)
    if kind is PasswordRuleKind.MATH_WORDS:
        value = eval_expression(rule.expression, "words")
        return str(value) in _maximal_digit_runs(answer)
    raise ValueError(f"unknown password rule kind {kind!r}")


def check_password(
    constraints: PasswordConstraints,
    answer: str,
    knowledge: Optional[KnowledgeBase] = None,
) -> Verdict:
    knowledge = knowledge or bundled_knowledge()
    messages = []
    if any(c.isspace() for c in answer):
        messages.append(fb.password_violation(answer, NO_SPACE_RULE_SENTENCE))
    for rule in constraints.rules:
        if not password_rule_satisfied(rule, answer, knowledge):
            messages.append(fb.password_violation(answer, password_rule_sentence(rule)))
    return _verdict(messages)


# --- Bracket Game -------------------------------------------------------

_BRACKET_CHARS = "[]{}()<>"
_CLOSE_TO_OPEN = {"]": "[", "}": "{", ")": "(", ">": "<"}
_OPEN_TO_KIND = {
    "[": BracketKind.BLOCK,
    "{": BracketKind.CURLY,
    "(": BracketKind.ROUND,
    "<": BracketKind.ANGLE,
}


def strip_brackets(text: str) -> str:
    return "".join(c for c in text if c not in _BRACKET_CHARS)


def scan_brackets(text: str):
    """Return (well_formed, max_depth, pairs) where pairs are (open, close, kind)."""
    stack: list[tuple[str, int]] = []
    pairs: list[tuple[int, int, BracketKind]] = []
    max_depth = 0
    for idx, ch in enumerate(text):
        if ch in _OPEN_TO_KIND:
            stack.append((ch, idx))
            max_depth = max(max_depth, len(stack))
        elif ch in _CLOSE_TO_OPEN:
            if not stack or stack[-1][0] != _CLOSE_TO_OPEN[ch]:
                return False, max_depth, pairs
            open_ch, open_idx = stack.pop()
            pairs.append((open_idx, idx, _OPEN_TO_KIND[open_ch]))
    if stack:
        return False, max_depth, pairs
    return True, max_depth, pairs


def bracket_depth(text: str) -> int:
    return scan_brackets(text)[1]


def check_bracket(constraints: BracketConstraints, answer: str) -> Verdict:
    if strip_brackets(answer) != constraints.base_text:
        return _verdict([fb.bracket_base_changed(constraints.base_text)])
    well_formed, depth, pairs = scan_brackets(answer)
    if not well_formed:
        # Covers both a stray closer and an opener left unclosed.
        return _verdict([fb.BRACKET_UNBALANCED])
    messages = []
    if depth != constraints.depth:
        messages.append(fb.bracket_depth(depth, constraints.depth))
    for placement in constraints.placements:
        starts = [m.start() for m in re.finditer(re.escape(placement.word), answer)]
        if not starts:
            messages.append(fb.bracket_not_found(placement.word))
            continue
        wanted = [p for p in pairs if p[2] is placement.bracket]
        inside = any(
            open_idx < start and start + len(placement.word) <= close_idx
            for start in starts
            for open_idx, close_idx, _ in wanted
        )
        if not inside:
            messages.append(fb.bracket_not_inside(placement.word, placement.bracket))
    return _verdict(messages)


# --- String Search ------------------------------------------------------


def _has_run(text: str, length: int, kind: str) -> bool:
    pred = is_vowel if kind == "vowels" else is_consonant
    run = 0
    for ch in text:
        run = run + 1 if pred(ch) else 0
        if run >= length:
            return True
    return False


def complex_rule_satisfied(rule: ComplexRule, answer: str) -> bool:
    kind = rule.kind
    if kind is ComplexRuleKind.PALINDROME:
        return answer == answer[::-1]
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS:
        return _has_run(answer, rule.run_length, "consonants")
    if kind is ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS:
        return not _has_run(answer, rule.run_length, "consonants")
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_VOWELS:
        return _has_run(answer, rule.run_length, "vowels")
    if kind is ComplexRuleKind.NO_CONSECUTIVE_VOWELS:
        return not _has_run(answer, rule.run_length, "vowels")
    vowels = sum(1 for c in answer if is_vowel(c))
    consonants = sum(1 for c in answer if is_consonant(c))
    if kind is ComplexRuleKind.MORE_VOWELS:
        return vowels > consonants
    if kind is ComplexRuleKind.FEWER_VOWELS:
        return vowels < consonants
    if kind is ComplexRuleKind.EQUAL_VOWELS:
        return vowels == consonants
    raise ValueError(f"unknown complex rule kind {kind!r}")


def _complex_failure_message(rule: ComplexRule, answer: str) -> str:
    kind = rule.kind
    if kind is ComplexRuleKind.PALINDROME:
        return fb.string_not_palindrome(answer)
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS:
        return fb.string_missing_run(answer, rule.run_length, "consonants")
    if kind is ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS:
        return fb.string_has_run(answer, rule.run_length, "consonants")
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_VOWELS:
        return fb.string_missing_run(answer, rule.run_length, "vowels")
    if kind is ComplexRuleKind.NO_CONSECUTIVE_VOWELS:
        return fb.string_has_run(answer, rule.run_length, "vowels")
    if kind is ComplexRuleKind.MORE_VOWELS:
        return fb.string_less_or_equal_vowels(answer)
    if kind is ComplexRuleKind.FEWER_VOWELS:
        return fb.string_more_or_equal_vowels(answer)
    return fb.string_unequal_vowels(answer)


def check_string_search(constraints: StringSearchConstraints, answer: str) -> Verdict:
    messages = []
    if len(answer) != constraints.length:
        messages.append(fb.string_wrong_length(answer, constraints.length))
    if answer not in constraints.haystack:
        messages.append(fb.string_not_substring(answer, constraints.haystack))
    for ch in constraints.must_contain:
        if ch not in answer:
            messages.append(fb.string_char_missing(ch, answer))
    for ch in constraints.must_exclude:
        if ch in answer:
            messages.append(fb.string_char_present(ch, answer))
    for rule in constraints.complex_rules:
        if not complex_rule_satisfied(rule, answer):
            messages.append(_complex_failure_message(rule, answer))
    return _verdict(messages)


# --- Crossword Arranger -------------------------------------------------


def check_crossword(constraints: CrosswordConstraints, answer: str) -> Verdict:
    n = constraints.size
    lines = _grid_lines(answer)
    if len(lines) != n:
        return _verdict([fb.crossword_size_mismatch(n, len(lines))])
    for line in lines:
        if len(line) != n:
            return _verdict([fb.crossword_size_mismatch(n, len(line))])
    available = Counter(constraints.words)
    messages = []
    reads = [("Horizontal", row) for row in lines]
    reads += [("Vertical", "".join(line[c] for line in lines)) for c in range(n)]
    for orientation, word in reads:
        if available[word] > 0:
            available[word] -= 1
        else:
            messages.append(fb.crossword_word_mismatch(orientation, word))
    return _verdict(messages)


# --- Text Sudoku --------------------------------------------------------

BLANK_CELL = "_"


def check_sudoku(constraints: SudokuConstraints, answer: str) -> Verdict:
    side = constraints.side
    box = constraints.box
    lines = _grid_lines(answer)
    if len(lines) != side or any(len(line) != side for line in lines):
        return _verdict([fb.sudoku_wrong_shape(side)])
    alphabet = set(constraints.alphabet)
    if any(c not in alphabet and c != BLANK_CELL for line in lines for c in line):
        return _verdict([fb.SUDOKU_UNRECOGNIZED])
    messages = []
    if any(BLANK_CELL in line for line in lines):
        messages.append(fb.SUDOKU_UNFILLED)
    replaced = any(
        constraints.grid[r][c] != BLANK_CELL and lines[r][c] != constraints.grid[r][c]
        for r in range(side)
        for c in range(side)
    )
    if replaced:
        messages.append(fb.SUDOKU_REPLACED)

    def duplicates(cells: str) -> list[str]:
        counts = Counter(c for c in cells if c != BLANK_CELL)
        return sorted(v for v, k in counts.items() if k > 1)

    for r in range(side):
        for value in duplicates(lines[r]):
            messages.append(fb.sudoku_duplicate(value, "row", r + 1))
    for c in range(side):
        for value in duplicates("".join(lines[r][c] for r in range(side))):
            messages.append(fb.sudoku_duplicate(value, "column", c + 1))
    for br in range(box):
        for bc in range(box):
            cells = "".join(
                lines[br * box + dr][bc * box + dc]
                for dr in range(box)
                for dc in range(box)
            )
            for value in duplicates(cells):
                messages.append(fb.sudoku_duplicate(value, "box", br * box + bc + 1))
    return _verdict(messages)


# --- Islands ------------------------------------------------------------

WATER, LAND, TREE = ".", "#", "o"


def find_islands(lines: list[str]) -> list[list[tuple[int, int]]]:
    """4-connected components over land ('#') and tree ('o') cells."""
    rows, cols = len(lines), len(lines[0]) if lines else 0
    seen = [[False] * cols for _ in range(rows)]
    islands = []
    for r in range(rows):
        for c in range(cols):
            if seen[r][c] or lines[r][c] == WATER:
                continue
            stack = [(r, c)]
            seen[r][c] = True
            cells = []
            while stack:
                cr, cc = stack.pop()
                cells.append((cr, cc))
                for nr, nc in ((cr - 1, cc), (cr + 1, cc), (cr, cc - 1), (cr, cc + 1)):
                    if 0 <= nr < rows and 0 <= nc < cols and not seen[nr][nc]:
                        if lines[nr][nc] != WATER:
                            seen[nr][nc] = True
                            stack.append((nr, nc))
            islands.append(cells)
    return islands


def check_islands(constraints: IslandsConstraints, answer: str) -> Verdict:
    n = constraints.size
    lines = _grid_lines(answer)
    rows = len(lines)
    if rows != n or any(len(line) != n for line in lines):
        cols = next((len(line) for line in lines if len(line) != n), n if rows else 0)
        return _verdict([fb.islands_wrong_shape(n, rows, cols)])
    for line in lines:
        for ch in line:
            if ch not in (WATER, LAND, TREE):
                return _verdict([fb.islands_invalid_char(ch)])
    messages = []
    islands = find_islands(lines)
    if len(islands) != constraints.islands:
        messages.append(fb.islands_wrong_count(constraints.islands, len(islands)))
    if any(
        not constraints.size_min <= len(cells) <= constraints.size_max
        for cells in islands
    ):
        messages.append(fb.islands_wrong_size(constraints.size_min, constraints.size_max))
    tree_islands = sum(
        1 for cells in islands if any(lines[r][c] == TREE for r, c in cells)
    )
    if tree_islands != constraints.tree_islands:
        messages.append(fb.islands_wrong_tree_islands(constraints.tree_islands))
    trees_total = sum(line.count(TREE) for line in lines)
    if trees_total != constraints.trees_total:
        messages.append(fb.islands_wrong_trees_total(constraints.trees_total))
    return _verdict(messages)


# --- Ordering Text ------------------------------------------------------


def score_word(word: str, constraints: OrderingConstraints) -> int:
    total = 0
    for rule in constraints.rules:
        total += rule.points * _condition_occurrences(rule.condition, word)
    return total


def _condition_occurrences(cond, word: str) -> int:
    from .model import OrderingConditionKind as K

    kind = cond.kind
    if kind is K.EVERY_VOWEL:
        return sum(1 for c in word if is_vowel(c))
    if kind is K.EVERY_CONSONANT:
        return sum(1 for c in word if is_consonant(c))
    if kind is K.VOWEL_AFTER_CONSONANT:
        return sum(
            1 for i in range(1, len(word)) if is_vowel(word[i]) and is_consonant(word[i - 1])
        )
    if kind is K.CONSONANT_AFTER_VOWEL:
        return sum(
            1 for i in range(1, len(word)) if is_consonant(word[i]) and is_vowel(word[i - 1])
        )
    if kind is K.CONSECUTIVE_VOWEL_PAIR:
        return _window_count(word, 2, is_vowel)
    if kind is K.CONSECUTIVE_VOWEL_RUN:
        return _window_count(word, cond.number, is_vowel)
    if kind is K.CONSECUTIVE_CONSONANT_PAIR:
        return _window_count(word, 2, is_consonant)
    if kind is K.CONSECUTIVE_CONSONANT_RUN:
        return _window_count(word, cond.number, is_consonant)
    if kind is K.LENGTH_EXACTLY:
        return int(len(word) == cond.number)
    if kind is K.LENGTH_NOT_EQUAL:
        return int(len(word) != cond.number)
    if kind is K.LENGTH_MORE:
        return int(len(word) > cond.number)
    if kind is K.LENGTH_LESS:
        return int(len(word) < cond.number)
    if kind is K.LENGTH_BETWEEN:
        return int(cond.number < len(word) < cond.number2)
    if kind is K.LENGTH_MORE_NOT_EQUAL:
        return int(len(word) > cond.number and len(word) != cond.number2)
    if kind is K.LENGTH_LESS_NOT_EQUAL:
        return int(len(word) < cond.number and len(word) != cond.number2)
    if kind is K.STARTS_WITH:
        return int(word.startswith(cond.text))
    if kind is K.ENDS_WITH:
        return int(word.endswith(cond.text))
    if kind is K.STARTS_AND_ENDS:
        return int(word.startswith(cond.text) and word.endswith(cond.text2))
    if kind is K.CONTAINS:
        return int(cond.text in word)
    if kind is K.CONTAINS_EXACTLY:
        return int(word.count(cond.text) == cond.number)
    raise ValueError(f"unknown ordering condition kind {kind!r}")


def _window_count(word: str, length: int, pred) -> int:
    if length is None or length < 1:
        raise ValueError("window length must be a positive integer")
    count = 0
    for i in range(len(word) - length + 1):
        if all(pred(c) for c in word[i : i + length]):
            count += 1
    return count


def expected_order(constraints: OrderingConstraints) -> list[str]:
    """Highest score first; ties broken lexicographically ascending."""
    return sorted(constraints.words, key=lambda w: (-score_word(w, constraints), w))


def check_ordering(constraints: OrderingConstraints, answer: str) -> Verdict:
    expected = expected_order(constraints)
    lines = [line.strip() for line in answer.split("\n") if line.strip()]
    if len(lines) < len(expected):
        return _verdict([fb.ordering_too_short(len(expected))])
    for position, got in enumerate(lines, start=1):
        if position > len(expected) or got != expected[position - 1]:
            return _verdict([fb.ordering_wrong_position(got, position)])
    return _verdict([])


# --- Dispatch -----------------------------------------------------------


def grade(
    instance: PuzzleInstance,
    answer: str,
    lexicon: Optional[Lexicon] = None,
    knowledge: Optional[KnowledgeBase] = None,
) -> Verdict:
    """Grade a raw answer against an instance; total over arbitrary text."""
    answer = normalize_answer(answer)
    game = instance.game
    constraints = instance.constraints
    if game is GameKind.ANAGRAM_SCRIBBLE:
        return check_anagram(constraints, answer, lexicon)
    if game is GameKind.PASSWORD_GAME:
        return check_password(constraints, answer, knowledge)
    if game is GameKind.BRACKET_GAME:
        return check_bracket(constraints, answer)
    if game is GameKind.STRING_SEARCH:
        return check_string_search(constraints, answer)
    if game is GameKind.CROSSWORD_ARRANGER:
        return check_crossword(constraints, answer)
    if game is GameKind.TEXT_SUDOKU:
        return check_sudoku(constraints, answer)
    if game is GameKind.ISLANDS:
        return check_islands(constraints, answer)
    if game is GameKind.ORDERING_TEXT:
        return check_ordering(constraints, answer)
    raise ValueError(f"unknown game {game!r}")
