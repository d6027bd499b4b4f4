"""Text-puzzle benchmark engine: generation, grading, solving, evaluation."""

from .model import (
    DifficultyLevel,
    EpisodeRecord,
    GameKind,
    PuzzleInstance,
    Verdict,
    deserialize_instance,
    instance_id,
    serialize_instance,
)
from .generators import generate, generate_dataset
from .graders import grade
from .solvers import SolveResult, count_solutions, solve
from .prompting import PromptBundle, build_bundle, render_prompt

__all__ = [
    "DifficultyLevel",
    "EpisodeRecord",
    "GameKind",
    "PromptBundle",
    "PuzzleInstance",
    "SolveResult",
    "Verdict",
    "build_bundle",
    "count_solutions",
    "deserialize_instance",
    "generate",
    "generate_dataset",
    "grade",
    "instance_id",
    "render_prompt",
    "serialize_instance",
    "solve",
]

__version__ = "0.1.0"
