"""Reference solvers and bounded solution counters.

Used as generation certificates, test oracles, and the scripted oracle
player. Every solver self-verifies its candidate through the grader before
returning, so a returned answer is always grader-accepted.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceededError, UnsupportedGameError
from .graders import (
    check_bracket,
    check_islands,
    check_password,
    check_string_search,
    complex_rule_satisfied,
    expected_order,
)
from .lexicon import KnowledgeBase, Lexicon, bundled_knowledge, bundled_lexicon, eval_expression
from .model import (
    AnagramConstraints,
    BracketConstraints,
    BracketKind,
    CrosswordConstraints,
    GameKind,
    IslandsConstraints,
    OrderingConstraints,
    PasswordConstraints,
    PasswordRuleKind,
    PuzzleInstance,
    ROMAN_DIGITS,
    SPECIAL_CHARACTERS,
    StringSearchConstraints,
    SudokuConstraints,
)

DEFAULT_BUDGET_S = 10.0


@dataclass(frozen=True)
class SolveResult:
    answer: Optional[str]
    nodes_explored: int = 0
    elapsed: float = 0.0
    proven_unsolvable: bool = False


class _Deadline:
    def __init__(self, budget_s: float):
        if budget_s <= 0:
            raise ValueError("budget must be positive")
        self.start = time.monotonic()
        self.limit = self.start + budget_s
        self.nodes = 0

    def tick(self, every: int = 256) -> None:
        self.nodes += 1
        if self.nodes % every == 0 and time.monotonic() > self.limit:
            raise BudgetExceededError("solver budget exhausted")

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start


# --- Anagram Scribble ---------------------------------------------------


def solve_anagram(c: AnagramConstraints, lexicon: Lexicon) -> Optional[str]:
    matches = lexicon.words_matching(c.length, c.letters, c.repeatable)
    return matches[0] if matches else None


# --- Password Game ------------------------------------------------------

_UPPER_NON_ROMAN = "ABEFGHJKNOPQRSTUWYZ"
_LOWER_POOL = "abcdefghijklmnopqrstuvwxyz"


def _password_targets(c: PasswordConstraints, knowledge: KnowledgeBase):
    targets: dict[PasswordRuleKind, int] = {}
    char_counts: dict[str, int] = {}
    text_blocks: list[str] = []
    math_values: set[int] = set()
    for rule in c.rules:
        kind = rule.kind
        if kind is PasswordRuleKind.CHAR_COUNT:
            if rule.char in char_counts and char_counts[rule.char] != rule.count:
                return None
            char_counts[rule.char] = rule.count
        elif kind is PasswordRuleKind.CONTAINS_STRING:
            text_blocks.append(rule.text)
        elif kind is PasswordRuleKind.CAPITAL_OF:
            text_blocks.append(knowledge.lookup("capital", rule.text))
        elif kind is PasswordRuleKind.CONTINENT_OF:
            text_blocks.append(knowledge.lookup("continent", rule.text))
        elif kind is PasswordRuleKind.MATH_DIGITS:
            math_values.add(eval_expression(rule.expression, "digits"))
        elif kind is PasswordRuleKind.MATH_WORDS:
            math_values.add(eval_expression(rule.expression, "words"))
        else:
            if kind in targets and targets[kind] != rule.count:
                return None
            targets[kind] = rule.count
    if any(v < 0 for v in math_values):
        return None  # a digit run cannot render a negative value
    if any(" " in block for block in text_blocks):
        return None  # answers may not contain spaces
    return targets, char_counts, text_blocks, sorted(math_values)


def solve_password(
    c: PasswordConstraints, knowledge: Optional[KnowledgeBase] = None
) -> Optional[str]:
    """Constructive satisfier: fixed substrings first, then padding by category."""
    knowledge = knowledge or bundled_knowledge()
    parsed = _password_targets(c, knowledge)
    if parsed is None:
        return None
    targets, char_counts, text_blocks, math_values = parsed
    protected = set(char_counts)

    material = "".join(text_blocks) + "".join(str(v) for v in math_values)
    pads: list[str] = []  # splittable non-digit padding characters
    digit_pad = ""

    def tally(pred) -> int:
        return sum(1 for ch in material if pred(ch)) + sum(
            1 for item in pads for ch in item if pred(ch)
        ) + sum(1 for ch in digit_pad if pred(ch))

    # Exact per-character counts first; every later pad avoids these chars.
    for ch, wanted in sorted(char_counts.items()):
        have = tally(lambda c, ch=ch: c == ch)
        if have > wanted:
            return None
        pads.append(ch * (wanted - have))

    def pick_pool(pool: str) -> str:
        avail = [ch for ch in pool if ch not in protected]
        return avail[0] if avail else ""

    if PasswordRuleKind.ROMAN_DIGIT_COUNT in targets:
        need = targets[PasswordRuleKind.ROMAN_DIGIT_COUNT] - tally(lambda c: c in ROMAN_DIGITS)
        if need < 0:
            return None
        filler = pick_pool(ROMAN_DIGITS)
        if need and not filler:
            return None
        pads.append(filler * need)

    if PasswordRuleKind.UPPERCASE_COUNT in targets:
        need = targets[PasswordRuleKind.UPPERCASE_COUNT] - tally(
            lambda c: c.isascii() and c.isupper()
        )
        if need < 0:
            return None
        filler = pick_pool(_UPPER_NON_ROMAN)
        if need and not filler:
            return None
        pads.append(filler * need)

    if PasswordRuleKind.LOWERCASE_COUNT in targets:
        need = targets[PasswordRuleKind.LOWERCASE_COUNT] - tally(
            lambda c: c.isascii() and c.islower()
        )
        if need < 0:
            return None
        filler = pick_pool(_LOWER_POOL)
        if need and not filler:
            return None
        pads.append(filler * need)

    if PasswordRuleKind.LATIN_COUNT in targets:
        need = targets[PasswordRuleKind.LATIN_COUNT] - tally(
            lambda c: c.isascii() and c.isalpha()
        )
        if need < 0:
            return None
        if need:
            if PasswordRuleKind.LOWERCASE_COUNT not in targets:
                filler = pick_pool(_LOWER_POOL)
            elif PasswordRuleKind.UPPERCASE_COUNT not in targets:
                filler = pick_pool(_UPPER_NON_ROMAN)
            else:
                return None
            if not filler:
                return None
            pads.append(filler * need)

    if PasswordRuleKind.DIGIT_COUNT in targets:
        need = targets[PasswordRuleKind.DIGIT_COUNT] - tally(str.isdigit)
        if need < 0:
            return None
        digit_pad = "0" * need

    if PasswordRuleKind.SPECIAL_COUNT in targets:
        need = targets[PasswordRuleKind.SPECIAL_COUNT] - tally(
            lambda c: c in SPECIAL_CHARACTERS
        )
        if need < 0:
            return None
        filler = pick_pool(SPECIAL_CHARACTERS)
        if need and not filler:
            return None
        pads.append(filler * need)

    if PasswordRuleKind.TOTAL_CHARS in targets:
        need = targets[PasswordRuleKind.TOTAL_CHARS] - tally(lambda c: True)
        if need < 0:
            return None
        if need:
            free_special = PasswordRuleKind.SPECIAL_COUNT not in targets
            free_digit = PasswordRuleKind.DIGIT_COUNT not in targets and not math_values
            free_lower = (
                PasswordRuleKind.LOWERCASE_COUNT not in targets
                and PasswordRuleKind.LATIN_COUNT not in targets
            )
            if free_special and pick_pool(SPECIAL_CHARACTERS):
                pads.append(pick_pool(SPECIAL_CHARACTERS) * need)
            elif free_lower and pick_pool(_LOWER_POOL):
                pads.append(pick_pool(_LOWER_POOL) * need)
            elif (
                PasswordRuleKind.UPPERCASE_COUNT not in targets
                and PasswordRuleKind.LATIN_COUNT not in targets
                and pick_pool(_UPPER_NON_ROMAN)
            ):
                pads.append(pick_pool(_UPPER_NON_ROMAN) * need)
            elif free_digit:
                digit_pad += "0" * need
            else:
                return None

    # Assembly: every digit chunk must stay a maximal run, so digit chunks
    # are separated by text blocks or single non-digit pad characters.
    digit_items = [str(v) for v in math_values]
    if digit_pad:
        digit_items.append(digit_pad)
    pad_chars = [ch for item in pads for ch in item]
    atomic = list(text_blocks)
    separators_needed = max(0, len(digit_items) - 1)
    if separators_needed > len(atomic) + len(pad_chars):
        return None
    parts: list[str] = []
    for i, item in enumerate(digit_items):
        parts.append(item)
        if i < len(digit_items) - 1:
            parts.append(atomic.pop() if atomic else pad_chars.pop())
    parts.extend(atomic)
    parts.extend(pad_chars)
    answer = "".join(parts)
    if not check_password(c, answer, knowledge).solved:
        return None
    return answer


# --- Bracket Game -------------------------------------------------------


def _segment_base_text(base: str, words: list[str]) -> Optional[list[str]]:
    """Order the placement words so their concatenation equals the base text."""
    if not words:
        return [] if not base else None
    for i, word in enumerate(words):
        if base.startswith(word):
            rest = _segment_base_text(base[len(word):], words[:i] + words[i + 1:])
            if rest is not None:
                return [word] + rest
    return None


def solve_bracket(c: BracketConstraints) -> Optional[str]:
    order = _segment_base_text(c.base_text, [p.word for p in c.placements])
    if order is None:
        return None
    kind_by_word = {p.word: p.bracket for p in c.placements}
    body = "".join(
        f"{kind_by_word[w].open_char}{w}{kind_by_word[w].close_char}" for w in order
    )
    outer = BracketKind.CURLY
    for _ in range(c.depth - 1):
        body = f"{outer.open_char}{body}{outer.close_char}"
    if not check_bracket(c, body).solved:
        return None
    return body


# --- String Search ------------------------------------------------------


def _string_search_candidates(c: StringSearchConstraints):
    for start in range(len(c.haystack) - c.length + 1):
        sub = c.haystack[start : start + c.length]
        if any(ch not in sub for ch in c.must_contain):
            continue
        if any(ch in sub for ch in c.must_exclude):
            continue
        if all(complex_rule_satisfied(rule, sub) for rule in c.complex_rules):
            yield sub


def solve_string_search(c: StringSearchConstraints) -> Optional[str]:
    for sub in _string_search_candidates(c):
        return sub
    return None


def count_string_search(c: StringSearchConstraints, limit: int) -> int:
    distinct = set()
    for sub in _string_search_candidates(c):
        distinct.add(sub)
        if len(distinct) >= limit:
            break
    return len(distinct)


# --- Crossword Arranger -------------------------------------------------


def _crossword_search(c: CrosswordConstraints, deadline: _Deadline, limit: int):
    """Yield completed row lists; stops after ``limit`` completions."""
    n = c.size
    words = sorted(set(w for w in c.words if len(w) == n))
    prefixes = set()
    for word in words:
        for k in range(n + 1):
            prefixes.add(word[:k])
    found = 0
    rows: list[str] = []

    def columns_ok() -> bool:
        depth = len(rows)
        for col in range(n):
            prefix = "".join(row[col] for row in rows)
            if prefix not in prefixes:
                return False
        return True

    def complete_ok() -> bool:
        available = Counter(c.words)
        for row in rows:
            if available[row] <= 0:
                return False
            available[row] -= 1
        for col in range(n):
            word = "".join(row[col] for row in rows)
            if available[word] <= 0:
                return False
            available[word] -= 1
        return True

    def recurse():
        nonlocal found
        deadline.tick()
        if found >= limit:
            return
        if len(rows) == n:
            if complete_ok():
                found += 1
                yield list(rows)
            return
        for word in words:
            if word in rows:
                continue
            rows.append(word)
            if columns_ok():
                yield from recurse()
                if found >= limit:
                    rows.pop()
                    return
            rows.pop()

    yield from recurse()


def solve_crossword(c: CrosswordConstraints, deadline: _Deadline) -> Optional[str]:
    for rows in _crossword_search(c, deadline, limit=1):
        return "\n".join(rows)
    return None


def count_crossword(c: CrosswordConstraints, deadline: _Deadline, limit: int) -> int:
    return sum(1 for _ in _crossword_search(c, deadline, limit))


# --- Text Sudoku --------------------------------------------------------


def _sudoku_search(c: SudokuConstraints, deadline: _Deadline, limit: int):
    side, box = c.side, c.box
    grid = [list(row) for row in c.grid]
    symbols = list(c.alphabet)

    def unit_values(r: int, col: int):
        values = set(grid[r]) | {grid[i][col] for i in range(side)}
        br, bc = (r // box) * box, (col // box) * box
        for dr in range(box):
            for dc in range(box):
                values.add(grid[br + dr][bc + dc])
        values.discard("_")
        return values

    found = 0

    def recurse():
        nonlocal found
        deadline.tick()
        if found >= limit:
            return
        best = None
        best_options = None
        for r in range(side):
            for col in range(side):
                if grid[r][col] != "_":
                    continue
                used = unit_values(r, col)
                options = [s for s in symbols if s not in used]
                if best is None or len(options) < len(best_options):
                    best, best_options = (r, col), options
                    if not options:
                        return
        if best is None:
            found += 1
            yield ["".join(row) for row in grid]
            return
        r, col = best
        for symbol in best_options:
            grid[r][col] = symbol
            yield from recurse()
            grid[r][col] = "_"
            if found >= limit:
                return

    yield from recurse()


def solve_sudoku(c: SudokuConstraints, deadline: _Deadline) -> Optional[str]:
    for rows in _sudoku_search(c, deadline, limit=1):
        return "\n".join(rows)
    return None


def count_sudoku(c: SudokuConstraints, deadline: _Deadline, limit: int) -> int:
    return sum(1 for _ in _sudoku_search(c, deadline, limit))


# --- Islands ------------------------------------------------------------

WATER_CELL, LAND_CELL, TREE_CELL = ".", "#", "o"


def solve_islands(c: IslandsConstraints) -> Optional[str]:
    """Constructive packer: horizontal strips on even rows, one-column gaps."""
    n, k = c.size, c.islands
    trees = []
    if c.tree_islands > 0:
        if c.trees_total < c.tree_islands or c.tree_islands > k:
            return None
        base, extra = divmod(c.trees_total, c.tree_islands)
        trees = [base + (1 if i < extra else 0) for i in range(c.tree_islands)]
    elif c.trees_total > 0:
        return None
    sizes = []
    for i in range(k):
        wanted = trees[i] if i < len(trees) else 0
        size = max(c.size_min, wanted, 1)
        if size > c.size_max or size > n:
            return None
        sizes.append(size)
    grid = [[WATER_CELL] * n for _ in range(n)]
    row, col = 0, 0
    placements = []
    for size in sizes:
        if col > 0 and col + size > n:
            row += 2
            col = 0
        if row >= n or col + size > n:
            return None
        placements.append((row, col, size))
        col += size + 1
    for idx, (row, col, size) in enumerate(placements):
        for off in range(size):
            grid[row][col + off] = LAND_CELL
        if idx < len(trees):
            for off in range(trees[idx]):
                grid[row][col + off] = TREE_CELL
    answer = "\n".join("".join(row) for row in grid)
    if not check_islands(c, answer).solved:
        return None
    return answer


# --- Ordering Text ------------------------------------------------------


def solve_ordering(c: OrderingConstraints) -> str:
    return "\n".join(expected_order(c))


# --- Dispatch -----------------------------------------------------------

EXHAUSTIVE_GAMES = frozenset(
    {
        GameKind.ANAGRAM_SCRIBBLE,
        GameKind.STRING_SEARCH,
        GameKind.CROSSWORD_ARRANGER,
        GameKind.TEXT_SUDOKU,
    }
)


def solve(
    instance: PuzzleInstance,
    budget_s: float = DEFAULT_BUDGET_S,
    lexicon: Optional[Lexicon] = None,
    knowledge: Optional[KnowledgeBase] = None,
) -> SolveResult:
    """Find a grader-accepted answer, or report unsolvable/exhausted budget."""
    deadline = _Deadline(budget_s)
    game = instance.game
    c = instance.constraints
    answer: Optional[str]
    if game is GameKind.ANAGRAM_SCRIBBLE:
        answer = solve_anagram(c, lexicon or bundled_lexicon())
    elif game is GameKind.PASSWORD_GAME:
        answer = solve_password(c, knowledge)
    elif game is GameKind.BRACKET_GAME:
        answer = solve_bracket(c)
    elif game is GameKind.STRING_SEARCH:
        answer = solve_string_search(c)
    elif game is GameKind.CROSSWORD_ARRANGER:
        answer = solve_crossword(c, deadline)
    elif game is GameKind.TEXT_SUDOKU:
        answer = solve_sudoku(c, deadline)
    elif game is GameKind.ISLANDS:
        answer = solve_islands(c)
    elif game is GameKind.ORDERING_TEXT:
        answer = solve_ordering(c)
    else:
        raise UnsupportedGameError(str(game))
    return SolveResult(
        answer=answer,
        nodes_explored=deadline.nodes,
        elapsed=deadline.elapsed,
        proven_unsolvable=answer is None and game in EXHAUSTIVE_GAMES,
    )


def count_solutions(
    instance: PuzzleInstance,
    limit: int = 2,
    budget_s: float = DEFAULT_BUDGET_S,
    lexicon: Optional[Lexicon] = None,
) -> int:
    """Exact solution count below ``limit`` (else ``limit``) for countable games."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    deadline = _Deadline(budget_s)
    game = instance.game
    c = instance.constraints
    if game is GameKind.ANAGRAM_SCRIBBLE:
        lexicon = lexicon or bundled_lexicon()
        matches = lexicon.words_matching(c.length, c.letters, c.repeatable)
        return min(len(matches), limit)
    if game is GameKind.STRING_SEARCH:
        return count_string_search(c, limit)
    if game is GameKind.CROSSWORD_ARRANGER:
        return count_crossword(c, deadline, limit)
    if game is GameKind.TEXT_SUDOKU:
        return count_sudoku(c, deadline, limit)
    raise UnsupportedGameError(f"count_solutions does not support {game.value}")
