"""Prompt rendering and multi-turn message assembly.

``render_constraints`` turns a constraint payload into the game's prompt
text; ``build_bundle`` stacks an optional worked example and any prior
response/feedback interactions into an ordered chat message list.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    AnagramConstraints,
    BracketConstraints,
    ConstraintSet,
    CrosswordConstraints,
    GameKind,
    IslandsConstraints,
    OrderingConstraints,
    PasswordConstraints,
    PuzzleInstance,
    StringSearchConstraints,
    SudokuConstraints,
)
from .rulestext import ordering_rule_text, password_rule_sentence, complex_rule_text

RETRY_HEADER = "Your previous answer is incorrect."
RETRY_FOOTER = "Please answer again. Print only the answer."


@dataclass(frozen=True)
class Message:
    role: str  # "user" | "assistant"
    content: str


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple[Message, ...]
    system: Optional[str] = None
    # Convenience handle for scripted players; remote players must only read
    # ``messages``.
    instance: Optional[PuzzleInstance] = None


def _quote_list(chars) -> str:
    return ", ".join(f"'{c}'" for c in chars)


def _render_anagram(c: AnagramConstraints) -> str:
    usage = (
        "Each character can be used multiple times."
        if c.repeatable
        else "Each character can only be used once."
    )
    return (
        f"Construct a valid {c.length}-character English word from the following letters:\n"
        f"{_quote_list(c.letters)}.\n"
        f"{usage} Please write None if there is no valid combination. "
        "Print only the answer."
    )


def _render_password(c: PasswordConstraints) -> str:
    lines = [
        "Please write a text string without any space by following a set of given rules. "
        "Please write only the answer and follow the following criteria:"
    ]
    for rule in c.rules:
        lines.append(f" - {password_rule_sentence(rule)}")
    return "\n".join(lines)


def _render_bracket(c: BracketConstraints) -> str:
    lines = [
        f"You are given a text {c.base_text} "
        "Your job is to put some valid parenthesis brackets in the text such that:"
    ]
    for placement in c.placements:
        lines.append(f" - {placement.word} is inside a {placement.bracket.value} bracket")
    lines.append("")
    lines.append(
        "The open and close parenthesis for block is [ ], curly is { }, "
        "round is ( ), and angle is < >."
    )
    lines.append(f"The bracket depth must be {c.depth} and print only the answer")
    return "\n".join(lines)


def _render_string_search(c: StringSearchConstraints) -> str:
    lines = [
        "You are given the following string:",
        c.haystack,
        "",
        f"Find a substring of exactly {c.length} characters long that:",
    ]
    if c.must_contain:
        lines.append(f" - Contains {_quote_list(c.must_contain)}")
    if c.must_exclude:
        lines.append(f" - Does not contain {_quote_list(c.must_exclude)}")
    for rule in c.complex_rules:
        lines.append(f" - {complex_rule_text(rule)}")
    lines.append("")
    lines.append("Print only the answer.")
    return "\n".join(lines)


def _render_crossword(c: CrosswordConstraints) -> str:
    lines = [
        f"Given a board size of {c.size}x{c.size}, arrange a possible crossword "
        "puzzle answer from a list of words. Item in the list can only be used once.",
        "",
        "List of words:",
    ]
    for word in c.words:
        lines.append(f" - {word}")
    lines.append("")
    lines.append("Print only the answer.")
    return "\n".join(lines)


def _render_sudoku(c: SudokuConstraints) -> str:
    values = ", ".join(c.alphabet)
    lines = [
        f"Please solve the {c.side}x{c.side} sudoku with {values} as the values "
        "and fill _ with the possible value and only print the answer. "
        "Follow the sudoku rule."
    ]
    lines.extend(c.grid)
    return "\n".join(lines)


def _render_islands(c: IslandsConstraints) -> str:
    lines = [
        f"You are asked to construct a 2D {c.size} x {c.size} grid, consisting of "
        "water tiles (denoted by '.'), land tiles (denoted by '#'), and coconut "
        "tree tiles (denoted by 'o'). Coconut tree tiles are also considered as "
        "land tiles.",
        "",
        "A group of connected land tiles in 4 cardinal directions forms an island.",
        "",
        "Your 2D grid must follow the following rules:",
        f" - There must be exactly {c.islands} islands.",
    ]
    if c.size_rule_active:
        lines.append(
            f" - The size of each island must be from {c.size_min} to "
            f"{c.size_max} tiles each."
        )
    if c.tree_rules_active:
        lines.append(
            f" - There must be exactly {c.tree_islands} islands that have "
            "coconut trees on them."
        )
        lines.append(f" - There must be exactly {c.trees_total} total coconut trees.")
    lines.append("")
    lines.append("Print only the answer.")
    return "\n".join(lines)


def _render_ordering(c: OrderingConstraints) -> str:
    lines = [
        "Given a set of rules to calculate point, sort the set of words in "
        "decreasing order.",
        "When there 2 or more words with same point, sort lexicographically.",
        "Rules:",
    ]
    for rule in c.rules:
        lines.append(f" - {ordering_rule_text(rule)}")
    lines.append("Words:")
    for word in c.words:
        lines.append(f" - {word}")
    lines.append("Print only the answer.")
    return "\n".join(lines)


_RENDERERS = {
    GameKind.ANAGRAM_SCRIBBLE: _render_anagram,
    GameKind.PASSWORD_GAME: _render_password,
    GameKind.BRACKET_GAME: _render_bracket,
    GameKind.STRING_SEARCH: _render_string_search,
    GameKind.CROSSWORD_ARRANGER: _render_crossword,
    GameKind.TEXT_SUDOKU: _render_sudoku,
    GameKind.ISLANDS: _render_islands,
    GameKind.ORDERING_TEXT: _render_ordering,
}


def render_constraints(game: GameKind, constraints: ConstraintSet) -> str:
    return _RENDERERS[game](constraints)


def render_prompt(instance: PuzzleInstance) -> str:
    return render_constraints(instance.game, instance.constraints)


def feedback_turn_content(feedback_lines) -> str:
    body = "\n".join(feedback_lines)
    return f"{RETRY_HEADER}\n{body}\n{RETRY_FOOTER}"


def build_bundle(
    instance: PuzzleInstance,
    example: Optional[tuple[PuzzleInstance, str]] = None,
    interactions: tuple[tuple[str, tuple[str, ...]], ...] = (),
) -> PromptBundle:
    """Assemble the chat messages for one grading turn.

    ``interactions`` holds prior (response, feedback lines) pairs; each adds
    an assistant turn followed by a user turn wrapping the feedback.
    """
    if example is not None:
        example_instance, example_answer = example
        if (
            example_instance.game != instance.game
            or example_instance.difficulty != instance.difficulty
        ):
            raise ValueError("example must share the instance's game and difficulty")
        first = (
            f"{example_instance.prompt}\n"
            f"Possible Answer:\n{example_answer}\n\n"
            f"{instance.prompt}"
        )
    else:
        first = instance.prompt
    messages = [Message("user", first)]
    for response, feedback_lines in interactions:
        messages.append(Message("assistant", response))
        messages.append(Message("user", feedback_turn_content(feedback_lines)))
    return PromptBundle(messages=tuple(messages), instance=instance)
