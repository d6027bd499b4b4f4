"""Deterministic, seeded instance generation plus the dataset protocol.

Generation is solution-first wherever a certificate is cheap to plant
(crossword, sudoku, islands, bracket, string search); every emitted
instance is additionally certified by the reference solver. Rejection
sampling is bounded; exceeding the bound signals an envelope/solver bug.
"""
from __future__ import annotations

import hashlib
import random
import string
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional

from .errors import GenerationExhaustedError
from .lexicon import (
    KnowledgeBase,
    Lexicon,
    bundled_knowledge,
    bundled_lexicon,
    eval_expression,
    render_expression,
)
from .model import (
    AnagramConstraints,
    BracketConstraints,
    BracketKind,
    ComplexRule,
    ComplexRuleKind,
    ConstraintSet,
    CrosswordConstraints,
    DifficultyLevel,
    GameKind,
    IslandsConstraints,
    OrderingCondition,
    OrderingConditionKind,
    OrderingConstraints,
    OrderingRule,
    PasswordConstraints,
    PasswordRule,
    PasswordRuleKind,
    BracketPlacement,
    PuzzleInstance,
    StringSearchConstraints,
    SudokuConstraints,
    constraints_payload,
    deserialize_instance,
    instance_id,
    serialize_instance,
)
from .prompting import render_constraints
from .solvers import count_solutions, solve

MAX_ATTEMPTS = 1000

EASY, MEDIUM, HARD = DifficultyLevel.EASY, DifficultyLevel.MEDIUM, DifficultyLevel.HARD

# Parameter envelope per (game, difficulty). Ranges are inclusive.
ENVELOPE = {
    GameKind.ANAGRAM_SCRIBBLE: {
        EASY: {"length": (3, 5), "max_letters": 10, "repeatable": True},
        MEDIUM: {"length": (6, 7), "max_letters": 10, "repeatable": True},
        HARD: {"length": (8, 10), "max_letters": 10, "repeatable": False},
    },
    GameKind.PASSWORD_GAME: {
        EASY: {"rules": 2},
        MEDIUM: {"rules": 4},
        HARD: {"rules": 6},
    },
    GameKind.BRACKET_GAME: {
        EASY: {"words": 3, "depth": 2},
        MEDIUM: {"words": 5, "depth": 2},
        HARD: {"words": 5, "depth": 3},
    },
    GameKind.STRING_SEARCH: {
        EASY: {"text_length": (6, 10), "constraints": (1, 2), "complex": False},
        MEDIUM: {"text_length": (11, 20), "constraints": (2, 3), "complex": False},
        HARD: {"text_length": (21, 40), "constraints": (3, 5), "complex": True},
    },
    GameKind.CROSSWORD_ARRANGER: {
        EASY: {"size": 3, "words": 8},
        MEDIUM: {"size": 4, "words": 16},
        HARD: {"size": 5, "words": 20},
    },
    GameKind.TEXT_SUDOKU: {
        EASY: {"box": 2, "empty_ratio": 0.25},
        MEDIUM: {"box": 2, "empty_ratio": 0.5},
        HARD: {"box": 3, "empty_ratio": 0.4},
    },
    GameKind.ISLANDS: {
        EASY: {"size": (4, 12), "islands": (1, 1), "trees": False},
        MEDIUM: {"size": (6, 9), "islands": (1, 3), "trees": True},
        HARD: {"size": (10, 13), "islands": (3, 6), "trees": True},
    },
    GameKind.ORDERING_TEXT: {
        EASY: {"rules": (2, 2), "words": (3, 3), "word_length": (3, 8)},
        MEDIUM: {"rules": (2, 4), "words": (4, 6), "word_length": (3, 8)},
        HARD: {"rules": (4, 8), "words": (7, 10), "word_length": (3, 15)},
    },
}


def _mix_seed(*parts) -> int:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def derive_seed(master_seed: int, game: GameKind, difficulty: DifficultyLevel,
                split: str, counter: int) -> int:
    """Documented counter scheme: one master integer reproduces every dataset."""
    return _mix_seed(master_seed, game.value, difficulty.value, split, counter)


class _Retry(Exception):
    """Internal: abandon the current attempt and resample."""


# --- Anagram Scribble ---------------------------------------------------


def _gen_anagram(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                 knowledge: KnowledgeBase) -> AnagramConstraints:
    env = ENVELOPE[GameKind.ANAGRAM_SCRIBBLE][difficulty]
    length = rng.randint(*env["length"])
    repeatable = env["repeatable"]
    if repeatable:
        candidates = lexicon.of_length(length)
    else:
        candidates = tuple(
            w for w in lexicon.of_length(length) if len(set(w)) == len(w)
        )
    if not candidates:
        raise _Retry
    word = rng.choice(candidates)
    base = sorted(set(word))
    space = env["max_letters"] - len(base)
    extra_pool = sorted(set(string.ascii_lowercase) - set(base))
    extras = rng.sample(extra_pool, rng.randint(0, min(space, 3))) if space > 0 else []
    letters = base + extras
    rng.shuffle(letters)
    return AnagramConstraints(length=length, letters=tuple(letters), repeatable=repeatable)


# --- Password Game ------------------------------------------------------

_REPEATABLE_KINDS = (
    PasswordRuleKind.CHAR_COUNT,
    PasswordRuleKind.CONTAINS_STRING,
    PasswordRuleKind.CAPITAL_OF,
    PasswordRuleKind.CONTINENT_OF,
    PasswordRuleKind.MATH_DIGITS,
    PasswordRuleKind.MATH_WORDS,
)
_SINGLE_WORD_CONTINENTS = {"Africa", "Asia", "Europe", "Oceania"}


def _alpha_only(text: str) -> bool:
    return text.isascii() and text.isalpha()


def _sample_expression(rng: random.Random, form: str) -> str:
    op = rng.choice(["+", "-", "*"])
    if op == "*":
        left, right = rng.randint(2, 9), rng.randint(2, 9)
    elif op == "+":
        left, right = rng.randint(1, 20), rng.randint(1, 20)
    else:
        left = rng.randint(5, 20)
        right = rng.randint(0, left)
    return render_expression(left, op, right, form)


def _gen_password(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                  knowledge: KnowledgeBase) -> PasswordConstraints:
    rule_count = ENVELOPE[GameKind.PASSWORD_GAME][difficulty]["rules"]
    counting_pool = sorted(NON_REPEATABLE_KINDS_ORDER, key=lambda k: k.value)
    rng.shuffle(counting_pool)
    capital_countries = [
        c for c in knowledge.countries() if _alpha_only(knowledge.lookup("capital", c))
    ]
    continent_countries = [
        c
        for c in knowledge.countries()
        if knowledge.lookup("continent", c) in _SINGLE_WORD_CONTINENTS
    ]
    used_chars: set[str] = set()
    rules: list[PasswordRule] = []
    for _ in range(rule_count):
        if counting_pool and rng.random() < 0.55:
            kind = counting_pool.pop()
            rules.append(_sample_counting_rule(rng, kind))
            continue
        kind = rng.choice(_REPEATABLE_KINDS)
        if kind is PasswordRuleKind.CHAR_COUNT:
            pool = sorted(set(string.ascii_letters) - used_chars)
            if not pool:
                raise _Retry
            char = rng.choice(pool)
            used_chars.add(char)
            rules.append(PasswordRule(kind=kind, char=char, count=rng.randint(1, 3)))
        elif kind is PasswordRuleKind.CONTAINS_STRING:
            word = rng.choice(lexicon.of_length(rng.randint(3, 6)))
            rules.append(PasswordRule(kind=kind, text=word))
        elif kind is PasswordRuleKind.CAPITAL_OF:
            rules.append(PasswordRule(kind=kind, text=rng.choice(capital_countries)))
        elif kind is PasswordRuleKind.CONTINENT_OF:
            rules.append(PasswordRule(kind=kind, text=rng.choice(continent_countries)))
        elif kind is PasswordRuleKind.MATH_DIGITS:
            rules.append(
                PasswordRule(kind=kind, expression=_sample_expression(rng, "digits"))
            )
        else:
            rules.append(
                PasswordRule(kind=kind, expression=_sample_expression(rng, "words"))
            )
    if not _forces_content(rules):
        raise _Retry
    return PasswordConstraints(rules=tuple(rules))


NON_REPEATABLE_KINDS_ORDER = [
    PasswordRuleKind.TOTAL_CHARS,
    PasswordRuleKind.UPPERCASE_COUNT,
    PasswordRuleKind.LOWERCASE_COUNT,
    PasswordRuleKind.LATIN_COUNT,
    PasswordRuleKind.DIGIT_COUNT,
    PasswordRuleKind.ROMAN_DIGIT_COUNT,
    PasswordRuleKind.SPECIAL_COUNT,
]


def _sample_counting_rule(rng: random.Random, kind: PasswordRuleKind) -> PasswordRule:
    if kind is PasswordRuleKind.TOTAL_CHARS:
        return PasswordRule(kind=kind, count=rng.randint(6, 18))
    if kind is PasswordRuleKind.UPPERCASE_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(0, 3))
    if kind is PasswordRuleKind.LOWERCASE_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(3, 10))
    if kind is PasswordRuleKind.LATIN_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(4, 12))
    if kind is PasswordRuleKind.DIGIT_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(0, 4))
    if kind is PasswordRuleKind.ROMAN_DIGIT_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(0, 2))
    if kind is PasswordRuleKind.SPECIAL_COUNT:
        return PasswordRule(kind=kind, count=rng.randint(0, 3))
    raise ValueError(kind)


def _forces_content(rules: Iterable[PasswordRule]) -> bool:
    """At least one rule must reject the empty string."""
    for rule in rules:
        if rule.kind in (
            PasswordRuleKind.CONTAINS_STRING,
            PasswordRuleKind.CAPITAL_OF,
            PasswordRuleKind.CONTINENT_OF,
            PasswordRuleKind.MATH_DIGITS,
            PasswordRuleKind.MATH_WORDS,
        ):
            return True
        if rule.count and rule.count > 0:
            return True
    return False


# --- Bracket Game -------------------------------------------------------


def _gen_bracket(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                 knowledge: KnowledgeBase) -> BracketConstraints:
    env = ENVELOPE[GameKind.BRACKET_GAME][difficulty]
    words: list[str] = []
    while len(words) < env["words"]:
        word = rng.choice(lexicon.of_length(rng.randint(3, 8)))
        if word not in words:
            words.append(word)
    base_text = "".join(words)
    placements = [
        BracketPlacement(word=w, bracket=rng.choice(list(BracketKind))) for w in words
    ]
    rng.shuffle(placements)
    return BracketConstraints(
        base_text=base_text, placements=tuple(placements), depth=env["depth"]
    )


# --- String Search ------------------------------------------------------


def _gen_haystack(rng: random.Random, target_len: int, lexicon: Lexicon) -> str:
    parts = []
    while sum(len(p) for p in parts) < target_len:
        if rng.random() < 0.6:
            parts.append(rng.choice(lexicon.of_length(rng.randint(3, 6))))
        else:
            parts.append(
                "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 4)))
            )
    return "".join(parts)[:target_len]


_COMPLEX_CANDIDATES = (
    ComplexRuleKind.PALINDROME,
    ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS,
    ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS,
    ComplexRuleKind.HAS_CONSECUTIVE_VOWELS,
    ComplexRuleKind.NO_CONSECUTIVE_VOWELS,
    ComplexRuleKind.MORE_VOWELS,
    ComplexRuleKind.FEWER_VOWELS,
    ComplexRuleKind.EQUAL_VOWELS,
)


def _gen_string_search(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                       knowledge: KnowledgeBase) -> StringSearchConstraints:
    from .graders import complex_rule_satisfied
    from .model import COMPLEX_RULE_GROUPS

    env = ENVELOPE[GameKind.STRING_SEARCH][difficulty]
    hay_len = rng.randint(*env["text_length"])
    haystack = _gen_haystack(rng, hay_len, lexicon)
    length = rng.randint(3, min(8, max(3, hay_len // 3)))
    if length > hay_len:
        raise _Retry
    start = rng.randrange(hay_len - length + 1)
    target = haystack[start : start + length]

    lo, hi = env["constraints"]
    total = rng.randint(lo, hi)
    n_complex = 0
    if env["complex"]:
        n_complex = rng.randint(1, min(2, total - 1))
    holding = []
    seen_groups: set[str] = set()
    if n_complex:
        options = []
        for kind in _COMPLEX_CANDIDATES:
            rule = ComplexRule(
                kind=kind,
                run_length=2 if kind in _RUN_KINDS else None,
            )
            if complex_rule_satisfied(rule, target):
                options.append(rule)
        rng.shuffle(options)
        for rule in options:
            group = COMPLEX_RULE_GROUPS.get(rule.kind)
            if group and group in seen_groups:
                continue
            holding.append(rule)
            if group:
                seen_groups.add(group)
            if len(holding) == n_complex:
                break
        if len(holding) < n_complex:
            raise _Retry
    remaining = total - len(holding)
    contain_pool = sorted(set(target))
    exclude_pool = sorted(set(haystack) - set(target))
    n_contain = min(rng.randint(1, 2), len(contain_pool), remaining) if remaining else 0
    n_exclude = remaining - n_contain
    if n_exclude > len(exclude_pool):
        # not enough distinct characters to reach the sampled count
        raise _Retry
    must_contain = tuple(rng.sample(contain_pool, n_contain))
    must_exclude = tuple(rng.sample(exclude_pool, n_exclude))
    return StringSearchConstraints(
        haystack=haystack,
        length=length,
        must_contain=must_contain,
        must_exclude=must_exclude,
        complex_rules=tuple(holding),
    )


_RUN_KINDS = {
    ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS,
    ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS,
    ComplexRuleKind.HAS_CONSECUTIVE_VOWELS,
    ComplexRuleKind.NO_CONSECUTIVE_VOWELS,
}


# --- Crossword Arranger -------------------------------------------------

_SQUARE_INDEX_CACHE: dict[tuple[int, int], tuple] = {}


def _square_index(lexicon: Lexicon, n: int):
    key = (id(lexicon), n)
    if key not in _SQUARE_INDEX_CACHE:
        words = lexicon.of_length(n)
        prefixes: dict[str, str] = {}
        next_chars: dict[str, set[str]] = {}
        for word in words:
            for k in range(n):
                next_chars.setdefault(word[:k], set()).add(word[k])
        prefixes = {p: "".join(sorted(cs)) for p, cs in next_chars.items()}
        mask_by_pos_char: dict[tuple[int, str], int] = {}
        for i, word in enumerate(words):
            for pos, ch in enumerate(word):
                mask_by_pos_char[(pos, ch)] = mask_by_pos_char.get((pos, ch), 0) | (1 << i)
        colmask_cache: dict[tuple[int, str], int] = {}
        _SQUARE_INDEX_CACHE[key] = (words, prefixes, mask_by_pos_char, colmask_cache)
    return _SQUARE_INDEX_CACHE[key]


def plant_word_square(rng: random.Random, lexicon: Lexicon, n: int,
                      node_budget: int = 100_000) -> Optional[list[str]]:
    """Find n rows whose rows and columns are 2n distinct lexicon words.

    Candidate rows are tracked as bitmasks over the word list; the column
    prefix structure guarantees every completed column is itself a word, so
    only distinctness is checked at the end.
    """
    words, prefixes, mask_by_pos_char, colmask_cache = _square_index(lexicon, n)
    if not words:
        return None
    full_mask = (1 << len(words)) - 1
    nodes = 0
    rows: list[str] = []
    used: set[str] = set()

    def column_mask(col: int, prefix: str) -> int:
        key = (col, prefix)
        cached = colmask_cache.get(key)
        if cached is None:
            cached = 0
            for ch in prefixes.get(prefix, ""):
                cached |= mask_by_pos_char.get((col, ch), 0)
            colmask_cache[key] = cached
        return cached

    def search() -> Optional[list[str]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            return None
        if len(rows) == n:
            columns = ["".join(row[c] for row in rows) for c in range(n)]
            if len(set(rows) | set(columns)) == 2 * n:
                return list(rows)
            return None
        mask = full_mask
        for col in range(n):
            mask &= column_mask(col, "".join(row[col] for row in rows))
            if not mask:
                return None
        indices = []
        while mask:
            low = mask & -mask
            indices.append(low.bit_length() - 1)
            mask ^= low
        offset = rng.randrange(len(indices))
        for i in range(len(indices)):
            word = words[indices[(offset + i) % len(indices)]]
            if word in used:
                continue
            rows.append(word)
            used.add(word)
            found = search()
            if found is not None:
                return found
            rows.pop()
            used.discard(word)
            if nodes > node_budget:
                return None
        return None

    return search()


def _gen_crossword(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                   knowledge: KnowledgeBase) -> CrosswordConstraints:
    env = ENVELOPE[GameKind.CROSSWORD_ARRANGER][difficulty]
    n = env["size"]
    square = plant_word_square(rng, lexicon, n)
    if square is None:
        raise _Retry
    columns = ["".join(row[c] for row in square) for c in range(n)]
    solution_words = set(square) | set(columns)
    noise_count = env["words"] - len(solution_words)
    pool = [w for w in lexicon.of_length(n) if w not in solution_words]
    if len(pool) < noise_count:
        raise _Retry
    noise = rng.sample(pool, noise_count)
    listed = sorted(solution_words) + noise
    rng.shuffle(listed)
    return CrosswordConstraints(size=n, words=tuple(listed))


# --- Text Sudoku --------------------------------------------------------


def _fill_sudoku(rng: random.Random, box: int, alphabet: tuple[str, ...]) -> Optional[list[str]]:
    side = box * box
    grid = [["_"] * side for _ in range(side)]

    def ok(r: int, c: int, symbol: str) -> bool:
        if symbol in grid[r]:
            return False
        if any(grid[i][c] == symbol for i in range(side)):
            return False
        br, bc = (r // box) * box, (c // box) * box
        return all(
            grid[br + dr][bc + dc] != symbol for dr in range(box) for dc in range(box)
        )

    def fill(pos: int) -> bool:
        if pos == side * side:
            return True
        r, c = divmod(pos, side)
        symbols = list(alphabet)
        rng.shuffle(symbols)
        for symbol in symbols:
            if ok(r, c, symbol):
                grid[r][c] = symbol
                if fill(pos + 1):
                    return True
                grid[r][c] = "_"
        return False

    if not fill(0):
        return None
    return ["".join(row) for row in grid]


def _gen_sudoku(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                knowledge: KnowledgeBase) -> SudokuConstraints:
    env = ENVELOPE[GameKind.TEXT_SUDOKU][difficulty]
    box = env["box"]
    side = box * box
    if rng.random() < 0.5:
        alphabet = tuple(str(d) for d in range(1, side + 1))
    else:
        alphabet = tuple(string.ascii_uppercase[:side])
    full = _fill_sudoku(rng, box, alphabet)
    if full is None:
        raise _Retry
    blanks = round(side * side * env["empty_ratio"])
    masked = rng.sample(range(side * side), blanks)
    grid = [list(row) for row in full]
    for pos in masked:
        r, c = divmod(pos, side)
        grid[r][c] = "_"
    return SudokuConstraints(
        box=box, alphabet=alphabet, grid=tuple("".join(row) for row in grid)
    )


# --- Islands ------------------------------------------------------------


def _grow_islands(rng: random.Random, n: int, sizes: list[int]) -> Optional[list[set]]:
    """Place blobs with one-cell water margins via random BFS growth."""
    blocked: set[tuple[int, int]] = set()
    islands: list[set] = []

    def neighbors(cell):
        r, c = cell
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < n and 0 <= nc < n:
                yield nr, nc

    for size in sizes:
        placed = False
        for _ in range(60):
            free = sorted(
                (r, c) for r in range(n) for c in range(n) if (r, c) not in blocked
            )
            if not free:
                break
            seed_cell = rng.choice(free)
            cells = {seed_cell}
            frontier = {
                nb for nb in neighbors(seed_cell) if nb not in blocked
            }
            while len(cells) < size and frontier:
                nxt = rng.choice(sorted(frontier))
                frontier.discard(nxt)
                cells.add(nxt)
                for nb in neighbors(nxt):
                    if nb not in blocked and nb not in cells:
                        frontier.add(nb)
            if len(cells) == size:
                islands.append(cells)
                for cell in cells:
                    blocked.add(cell)
                    for nb in neighbors(cell):
                        blocked.add(nb)
                placed = True
                break
        if not placed:
            return None
    return islands


def _gen_islands(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                 knowledge: KnowledgeBase) -> IslandsConstraints:
    env = ENVELOPE[GameKind.ISLANDS][difficulty]
    n = rng.randint(*env["size"])
    k = rng.randint(*env["islands"])
    if k == 1:
        sizes = [rng.randint(3, min(n + 4, 15))]
    else:
        sizes = [rng.randint(2, min(7, n - 2)) for _ in range(k)]
    islands = _grow_islands(rng, n, sizes)
    if islands is None:
        raise _Retry
    # The declared size window brackets the planted sizes; the packer-based
    # solver needs its floor to fit a single-row strip.
    size_min = max(1, min(sizes) - rng.randint(0, 8))
    size_min = min(size_min, n)
    size_max = min(n * n, max(sizes) + rng.randint(0, 16))
    tree_islands = 0
    trees_total = 0
    tree_cells: list[tuple[int, int]] = []
    if env["trees"]:
        tree_islands = rng.randint(1, k)
        chosen = rng.sample(range(k), tree_islands)
        caps = [len(islands[i]) for i in chosen]
        most = min(tree_islands + 4, sum(caps), tree_islands * size_max)
        trees_total = rng.randint(tree_islands, max(tree_islands, most))
        counts = [1] * tree_islands
        remaining = trees_total - tree_islands
        turn = 0
        while remaining > 0:
            idx = turn % tree_islands
            if counts[idx] < caps[idx]:
                counts[idx] += 1
                remaining -= 1
            turn += 1
            if turn > 10_000:
                raise _Retry
        for island, count in zip(chosen, counts):
            tree_cells.extend(rng.sample(sorted(islands[island]), count))
    grid = [["."] * n for _ in range(n)]
    for island in islands:
        for r, c in island:
            grid[r][c] = "#"
    for r, c in tree_cells:
        grid[r][c] = "o"
    constraints = IslandsConstraints(
        size=n,
        islands=k,
        size_min=size_min,
        size_max=size_max,
        tree_islands=tree_islands,
        trees_total=trees_total,
    )
    # The planted grid must satisfy its own derived rule set.
    from .graders import check_islands

    planted = "\n".join("".join(row) for row in grid)
    if not check_islands(constraints, planted).solved:
        raise _Retry
    return constraints


# --- Ordering Text ------------------------------------------------------


def _sample_ordering_condition(rng: random.Random, words: list[str]) -> OrderingCondition:
    K = OrderingConditionKind
    kind = rng.choice(
        [
            K.EVERY_VOWEL, K.EVERY_CONSONANT, K.VOWEL_AFTER_CONSONANT,
            K.CONSONANT_AFTER_VOWEL, K.CONSECUTIVE_VOWEL_PAIR,
            K.CONSECUTIVE_VOWEL_RUN, K.CONSECUTIVE_CONSONANT_PAIR,
            K.CONSECUTIVE_CONSONANT_RUN, K.LENGTH_EXACTLY, K.LENGTH_NOT_EQUAL,
            K.LENGTH_MORE, K.LENGTH_LESS, K.LENGTH_BETWEEN,
            K.LENGTH_MORE_NOT_EQUAL, K.LENGTH_LESS_NOT_EQUAL, K.STARTS_WITH,
            K.ENDS_WITH, K.STARTS_AND_ENDS, K.CONTAINS, K.CONTAINS_EXACTLY,
        ]
    )
    lengths = sorted(len(w) for w in words)
    if kind in (K.CONSECUTIVE_VOWEL_RUN, K.CONSECUTIVE_CONSONANT_RUN):
        return OrderingCondition(kind=kind, number=3)
    if kind in (K.LENGTH_EXACTLY, K.LENGTH_NOT_EQUAL, K.LENGTH_MORE, K.LENGTH_LESS):
        pivot = rng.randint(max(3, lengths[0] - 1), lengths[-1] + 1)
        return OrderingCondition(kind=kind, number=pivot)
    if kind is K.LENGTH_BETWEEN:
        low = rng.randint(max(2, lengths[0] - 1), lengths[-1])
        return OrderingCondition(kind=kind, number=low, number2=low + rng.randint(2, 4))
    if kind in (K.LENGTH_MORE_NOT_EQUAL, K.LENGTH_LESS_NOT_EQUAL):
        pivot = rng.randint(max(3, lengths[0]), lengths[-1])
        return OrderingCondition(
            kind=kind, number=pivot, number2=rng.randint(lengths[0], lengths[-1])
        )
    word = rng.choice(words)
    if kind is K.STARTS_WITH:
        return OrderingCondition(kind=kind, text=word[: rng.randint(1, 2)])
    if kind is K.ENDS_WITH:
        return OrderingCondition(kind=kind, text=word[-rng.randint(1, 2):])
    if kind is K.STARTS_AND_ENDS:
        other = rng.choice(words)
        return OrderingCondition(kind=kind, text=word[:1], text2=other[-1:])
    pos = rng.randrange(len(word))
    snippet = word[pos : pos + rng.randint(1, 2)]
    if kind is K.CONTAINS:
        return OrderingCondition(kind=kind, text=snippet)
    return OrderingCondition(
        kind=kind, number=rng.randint(1, 2), text=snippet
    )


def _gen_ordering(rng: random.Random, difficulty: DifficultyLevel, lexicon: Lexicon,
                  knowledge: KnowledgeBase) -> OrderingConstraints:
    env = ENVELOPE[GameKind.ORDERING_TEXT][difficulty]
    word_count = rng.randint(*env["words"])
    lo, hi = env["word_length"]
    words: list[str] = []
    while len(words) < word_count:
        length = rng.randint(lo, min(hi, 12))
        pool = lexicon.of_length(length)
        if not pool:
            continue
        word = rng.choice(pool)
        if word not in words:
            words.append(word)
    rule_count = rng.randint(*env["rules"])
    rules = []
    for _ in range(rule_count):
        condition = _sample_ordering_condition(rng, words)
        points = rng.randint(1, 100) * rng.choice([-1, 1])
        rules.append(
            OrderingRule(
                condition=condition, points=points, phrasing=rng.choice(["gets", "add"])
            )
        )
    return OrderingConstraints(rules=tuple(rules), words=tuple(words))


# --- Dispatch -----------------------------------------------------------

_GENERATORS: dict[GameKind, Callable] = {
    GameKind.ANAGRAM_SCRIBBLE: _gen_anagram,
    GameKind.PASSWORD_GAME: _gen_password,
    GameKind.BRACKET_GAME: _gen_bracket,
    GameKind.STRING_SEARCH: _gen_string_search,
    GameKind.CROSSWORD_ARRANGER: _gen_crossword,
    GameKind.TEXT_SUDOKU: _gen_sudoku,
    GameKind.ISLANDS: _gen_islands,
    GameKind.ORDERING_TEXT: _gen_ordering,
}

# Solver budget while certifying candidates at generation time.
_CERTIFY_BUDGET_S = 10.0


def generate(
    game: GameKind,
    difficulty: DifficultyLevel,
    seed: int,
    lexicon: Optional[Lexicon] = None,
    knowledge: Optional[KnowledgeBase] = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> PuzzleInstance:
    """Deterministic in (game, difficulty, seed); certified solvable."""
    lexicon = lexicon or bundled_lexicon()
    knowledge = knowledge or bundled_knowledge()
    rng = random.Random(_mix_seed(game.value, difficulty.value, seed))
    gen_fn = _GENERATORS[game]
    for _ in range(max_attempts):
        try:
            constraints = gen_fn(rng, difficulty, lexicon, knowledge)
        except _Retry:
            continue
        instance = PuzzleInstance(
            id=instance_id(game, difficulty, seed),
            game=game,
            difficulty=difficulty,
            seed=seed,
            constraints=constraints,
            prompt=render_constraints(game, constraints),
        )
        result = solve(
            instance, budget_s=_CERTIFY_BUDGET_S, lexicon=lexicon, knowledge=knowledge
        )
        if result.answer is None:
            continue
        if game is GameKind.STRING_SEARCH and difficulty is HARD:
            if count_solutions(instance, limit=2, lexicon=lexicon) != 1:
                continue
        return instance
    raise GenerationExhaustedError(
        f"could not generate {game.value}/{difficulty.value} after {max_attempts} attempts"
    )


def _cell_worker(args) -> tuple[str, str, list[str], list[str]]:
    game_value, difficulty_value, per_test, per_train, master_seed = args
    game = GameKind(game_value)
    difficulty = DifficultyLevel(difficulty_value)
    lexicon = bundled_lexicon()
    knowledge = bundled_knowledge()
    payloads: set[str] = set()

    def draw(split: str, count: int) -> list[str]:
        lines = []
        counter = 0
        while len(lines) < count:
            seed = derive_seed(master_seed, game, difficulty, split, counter)
            counter += 1
            if counter > 50 * max(count, 1) + 1000:
                raise GenerationExhaustedError(
                    f"duplicate rejection stalled for {game.value}/{difficulty.value}"
                )
            instance = generate(game, difficulty, seed, lexicon, knowledge)
            payload = constraints_payload(game, instance.constraints)
            if payload in payloads:
                continue
            payloads.add(payload)
            lines.append(serialize_instance(instance))
        return lines

    test_lines = draw("test", per_test)
    train_lines = draw("train", per_train)
    return game_value, difficulty_value, test_lines, train_lines


def dataset_cells() -> list[tuple[GameKind, DifficultyLevel]]:
    return [(game, diff) for game in GameKind for diff in DifficultyLevel]


def generate_dataset(
    out_test,
    out_train,
    per_cell_test: int = 1000,
    per_cell_train: int = 10,
    master_seed: int = 0,
    parallelism: Optional[int] = None,
) -> dict:
    """Emit the full test/train suites; returns summary counts.

    Test and train payloads are disjoint per construction (shared rejection
    set per cell; envelopes keep distinct cells structurally disjoint), and
    the writer re-checks global uniqueness before returning.
    """
    import os

    cells = dataset_cells()
    jobs = [
        (game.value, diff.value, per_cell_test, per_cell_train, master_seed)
        for game, diff in cells
    ]
    if parallelism is None:
        parallelism = min(8, os.cpu_count() or 1)
    results = {}
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for game_value, diff_value, test_lines, train_lines in pool.map(
                _cell_worker, jobs
            ):
                results[(game_value, diff_value)] = (test_lines, train_lines)
    else:
        for job in jobs:
            game_value, diff_value, test_lines, train_lines = _cell_worker(job)
            results[(game_value, diff_value)] = (test_lines, train_lines)

    seen_payloads: set[str] = set()
    test_total = train_total = 0
    with open(out_test, "w", encoding="utf-8", newline="") as test_file, open(
        out_train, "w", encoding="utf-8", newline=""
    ) as train_file:
        for game, diff in cells:
            test_lines, train_lines = results[(game.value, diff.value)]
            for line, sink in [(l, test_file) for l in test_lines] + [
                (l, train_file) for l in train_lines
            ]:
                instance = deserialize_instance(line)
                payload = constraints_payload(instance.game, instance.constraints)
                if payload in seen_payloads:
                    raise GenerationExhaustedError(
                        f"cross-cell payload collision in {game.value}/{diff.value}"
                    )
                seen_payloads.add(payload)
                sink.write(line + "\n")
            test_total += len(test_lines)
            train_total += len(train_lines)
    return {
        "test_instances": test_total,
        "train_instances": train_total,
        "cells": len(cells),
        "per_cell_test": per_cell_test,
        "per_cell_train": per_cell_train,
        "master_seed": master_seed,
    }
