"""Human-readable renderings of rule objects.

These strings appear verbatim in prompts and in grader feedback, so both
modules import from here to stay byte-identical.
"""
from __future__ import annotations

from .model import (
    ComplexRule,
    ComplexRuleKind,
    OrderingCondition,
    OrderingConditionKind,
    OrderingRule,
    PasswordRule,
    PasswordRuleKind,
)


def password_rule_text(rule: PasswordRule) -> str:
    """The rule as it appears after "the text has" in the prompt."""
    kind = rule.kind
    if kind is PasswordRuleKind.TOTAL_CHARS:
        return f"only {rule.count} characters"
    if kind is PasswordRuleKind.UPPERCASE_COUNT:
        return f"{rule.count} uppercase characters"
    if kind is PasswordRuleKind.LOWERCASE_COUNT:
        return f"{rule.count} lowercase characters"
    if kind is PasswordRuleKind.LATIN_COUNT:
        return f"{rule.count} latin character"
    if kind is PasswordRuleKind.DIGIT_COUNT:
        return f"{rule.count} number digits"
    if kind is PasswordRuleKind.ROMAN_DIGIT_COUNT:
        return f"{rule.count} number of roman digits"
    if kind is PasswordRuleKind.SPECIAL_COUNT:
        return (
            f"{rule.count} special characters, including "
            "'!', '@', '#', '$', '%', '^', '&', '*'"
        )
    if kind is PasswordRuleKind.CHAR_COUNT:
        return f"{rule.count} {rule.char} character"
    if kind is PasswordRuleKind.CONTAINS_STRING:
        return f"{rule.text} string"
    if kind is PasswordRuleKind.CAPITAL_OF:
        return f"the capital city of {rule.text}"
    if kind is PasswordRuleKind.CONTINENT_OF:
        return f"the continent of {rule.text}"
    if kind in (PasswordRuleKind.MATH_DIGITS, PasswordRuleKind.MATH_WORDS):
        return f"a number that equals to {rule.expression}"
    raise ValueError(f"unknown password rule kind {kind!r}")


def password_rule_sentence(rule: PasswordRule) -> str:
    return f"the text has {password_rule_text(rule)}"


NO_SPACE_RULE_SENTENCE = "the text is written without any space"


def complex_rule_text(rule: ComplexRule) -> str:
    kind = rule.kind
    if kind is ComplexRuleKind.PALINDROME:
        return "forms a palindrome"
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_CONSONANTS:
        return f"has {rule.run_length} consecutive consonants"
    if kind is ComplexRuleKind.NO_CONSECUTIVE_CONSONANTS:
        return f"does not have {rule.run_length} consecutive consonants"
    if kind is ComplexRuleKind.HAS_CONSECUTIVE_VOWELS:
        return f"has {rule.run_length} consecutive vowels"
    if kind is ComplexRuleKind.NO_CONSECUTIVE_VOWELS:
        return f"does not have {rule.run_length} consecutive vowels"
    if kind is ComplexRuleKind.MORE_VOWELS:
        return "has more vowels than consonants"
    if kind is ComplexRuleKind.FEWER_VOWELS:
        return "has less vowels than consonants"
    if kind is ComplexRuleKind.EQUAL_VOWELS:
        return "has the same amount of vowels and consonants"
    raise ValueError(f"unknown complex rule kind {kind!r}")


def ordering_condition_text(cond: OrderingCondition) -> str:
    kind = cond.kind
    if kind is OrderingConditionKind.EVERY_VOWEL:
        return "every vowel"
    if kind is OrderingConditionKind.EVERY_CONSONANT:
        return "every consonant"
    if kind is OrderingConditionKind.VOWEL_AFTER_CONSONANT:
        return "every vowel right after a consonant"
    if kind is OrderingConditionKind.CONSONANT_AFTER_VOWEL:
        return "every consonant right after a vowel"
    if kind is OrderingConditionKind.CONSECUTIVE_VOWEL_PAIR:
        return "every pair of consecutive vowels"
    if kind is OrderingConditionKind.CONSECUTIVE_VOWEL_RUN:
        return f"every {cond.number} consecutive vowels"
    if kind is OrderingConditionKind.CONSECUTIVE_CONSONANT_PAIR:
        return "every pair of consecutive consonants"
    if kind is OrderingConditionKind.CONSECUTIVE_CONSONANT_RUN:
        return f"every {cond.number} consecutive consonants"
    if kind is OrderingConditionKind.LENGTH_EXACTLY:
        return f"word that has exactly {cond.number} characters"
    if kind is OrderingConditionKind.LENGTH_NOT_EQUAL:
        return f"word not equal to {cond.number} characters"
    if kind is OrderingConditionKind.LENGTH_MORE:
        return f"word more than {cond.number} characters"
    if kind is OrderingConditionKind.LENGTH_LESS:
        return f"word less than {cond.number} characters"
    if kind is OrderingConditionKind.LENGTH_BETWEEN:
        return (
            f"word more than {cond.number} characters"
            f" and less than {cond.number2} characters"
        )
    if kind is OrderingConditionKind.LENGTH_MORE_NOT_EQUAL:
        return (
            f"word more than {cond.number} characters"
            f" but not equal to {cond.number2} characters"
        )
    if kind is OrderingConditionKind.LENGTH_LESS_NOT_EQUAL:
        return (
            f"word less than {cond.number} characters"
            f" but not equal to {cond.number2} characters"
        )
    if kind is OrderingConditionKind.STARTS_WITH:
        return f"word starts with '{cond.text}'"
    if kind is OrderingConditionKind.ENDS_WITH:
        return f"word ends with '{cond.text}'"
    if kind is OrderingConditionKind.STARTS_AND_ENDS:
        return f"word starts with '{cond.text}' and ends with '{cond.text2}'"
    if kind is OrderingConditionKind.CONTAINS:
        return f"there exists '{cond.text}' in the word"
    if kind is OrderingConditionKind.CONTAINS_EXACTLY:
        return f"there exists exactly {cond.number} '{cond.text}' in the word"
    raise ValueError(f"unknown ordering condition kind {kind!r}")


def _points_text(points: int) -> str:
    unit = "point" if abs(points) == 1 else "points"
    return f"{points} {unit}"


def ordering_rule_text(rule: OrderingRule) -> str:
    condition = ordering_condition_text(rule.condition)
    if rule.phrasing == "add":
        return f"add {_points_text(rule.points)} if {condition}"
    return f"{condition} gets {_points_text(rule.points)}"


def ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"
