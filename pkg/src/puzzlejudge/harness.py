"""Multi-turn evaluation loop: players, episodes, metrics, reports.

An episode replays the judge loop: build prompt, collect a response, grade,
feed the templated feedback back, stop at the first solve or after the turn
cap. Episodes are independent, so suites may run them concurrently; metrics
are reduced single-threaded afterwards.
"""
from __future__ import annotations

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol

from .errors import PlayerTransportError
from .graders import grade
from .lexicon import KnowledgeBase, Lexicon
from .model import (
    DifficultyLevel,
    EpisodeRecord,
    GameKind,
    ONE_D_GAMES,
    PuzzleInstance,
    TurnRecord,
)
from .prompting import PromptBundle, build_bundle
from .remote import RemoteEndpoint, call_remote_model
from .solvers import DEFAULT_BUDGET_S, solve

DEFAULT_MAX_TURNS = 3


class Player(Protocol):
    name: str

    def respond(self, bundle: PromptBundle) -> str: ...


class OraclePlayer:
    """Answers through the reference solver; certifies harness and graders."""

    name = "oracle"

    def __init__(self, budget_s: float = DEFAULT_BUDGET_S):
        self.budget_s = budget_s

    def respond(self, bundle: PromptBundle) -> str:
        result = solve(bundle.instance, budget_s=self.budget_s)
        return result.answer if result.answer is not None else "None"


class FlawedPlayer:
    """Wrong once, right after feedback: a constructed self-reflection player."""

    name = "flawed"

    def __init__(self, budget_s: float = DEFAULT_BUDGET_S):
        self.budget_s = budget_s

    def respond(self, bundle: PromptBundle) -> str:
        oracle_answer = solve(bundle.instance, budget_s=self.budget_s).answer or "None"
        if len(bundle.messages) == 1:
            for mutated in (oracle_answer + "z", "z" + oracle_answer, ""):
                if not grade(bundle.instance, mutated).solved:
                    return mutated
        return oracle_answer


class RandomPlayer:
    """Deterministic garbage keyed on instance and turn; never solves by design."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def respond(self, bundle: PromptBundle) -> str:
        turn = len(bundle.messages)
        rng = random.Random(f"{self.seed}:{bundle.instance.id}:{turn}")
        return "".join(rng.choice("?!#%") for _ in range(4))


class RemoteModelPlayer:
    """Chat-completion player with greedy decoding and bounded retries."""

    name = "remote"

    def __init__(self, endpoint: RemoteEndpoint):
        self.endpoint = endpoint

    def respond(self, bundle: PromptBundle) -> str:
        return call_remote_model(self.endpoint, bundle)


@dataclass
class MetricsTable:
    """Cumulative solve rates keyed by (game, difficulty, turn), plus 1D/2D means."""

    max_turns: int
    totals: dict = field(default_factory=dict)  # (game, difficulty) -> episodes
    solved_by_turn: dict = field(default_factory=dict)  # (game, difficulty, k) -> count

    def add_episode(self, instance: PuzzleInstance, record: EpisodeRecord) -> None:
        key = (instance.game, instance.difficulty)
        self.totals[key] = self.totals.get(key, 0) + 1
        if record.solved_at is not None:
            for turn in range(record.solved_at, self.max_turns + 1):
                cell = (instance.game, instance.difficulty, turn)
                self.solved_by_turn[cell] = self.solved_by_turn.get(cell, 0) + 1

    def rate(self, game: GameKind, difficulty: DifficultyLevel, turn: int) -> float:
        total = self.totals.get((game, difficulty), 0)
        if total == 0:
            return 0.0
        return self.solved_by_turn.get((game, difficulty, turn), 0) / total

    def cells(self) -> list[tuple[GameKind, DifficultyLevel]]:
        return sorted(self.totals, key=lambda k: (list(GameKind).index(k[0]), k[1].rank))

    def aggregate_rate(self, dim: str, difficulty: DifficultyLevel, turn: int) -> Optional[float]:
        games = [g for g in GameKind if (g in ONE_D_GAMES) == (dim == "1D")]
        rates = [
            self.rate(g, difficulty, turn)
            for g in games
            if (g, difficulty) in self.totals
        ]
        if not rates:
            return None
        return sum(rates) / len(rates)

    def rows(self) -> list[tuple[str, str, int, float]]:
        """Long-form rows: (game-or-dim, difficulty, turn, rate)."""
        out = []
        for game, difficulty in self.cells():
            for turn in range(1, self.max_turns + 1):
                out.append((game.value, difficulty.value, turn, self.rate(game, difficulty, turn)))
        for dim in ("1D", "2D"):
            for difficulty in DifficultyLevel:
                for turn in range(1, self.max_turns + 1):
                    rate = self.aggregate_rate(dim, difficulty, turn)
                    if rate is not None:
                        out.append((dim, difficulty.value, turn, rate))
        return out


def run_episode(
    player: Player,
    instance: PuzzleInstance,
    example: Optional[tuple[PuzzleInstance, str]] = None,
    max_turns: int = DEFAULT_MAX_TURNS,
    lexicon: Optional[Lexicon] = None,
    knowledge: Optional[KnowledgeBase] = None,
) -> EpisodeRecord:
    if max_turns < 1:
        raise ValueError("max_turns must be >= 1")
    interactions: list[tuple[str, tuple[str, ...]]] = []
    turns: list[TurnRecord] = []
    solved_at: Optional[int] = None
    for turn in range(1, max_turns + 1):
        bundle = build_bundle(instance, example, tuple(interactions))
        started = time.monotonic()
        try:
            response = player.respond(bundle)
        except PlayerTransportError as exc:
            return EpisodeRecord(
                instance_id=instance.id,
                turns=tuple(turns),
                solved_at=None,
                error=str(exc) or exc.__class__.__name__,
            )
        latency = time.monotonic() - started
        verdict = grade(instance, response, lexicon=lexicon, knowledge=knowledge)
        turns.append(TurnRecord(response=response, verdict=verdict, latency_s=latency))
        if verdict.solved:
            solved_at = turn
            break
        interactions.append((response, verdict.feedback))
    return EpisodeRecord(instance_id=instance.id, turns=tuple(turns), solved_at=solved_at)


def make_examples(
    instances: Iterable[PuzzleInstance],
    train_instances: Iterable[PuzzleInstance],
    budget_s: float = DEFAULT_BUDGET_S,
) -> dict[tuple[GameKind, DifficultyLevel], tuple[PuzzleInstance, str]]:
    """One solved train example per (game, difficulty) cell present in the suite."""
    needed = {(inst.game, inst.difficulty) for inst in instances}
    examples: dict[tuple[GameKind, DifficultyLevel], tuple[PuzzleInstance, str]] = {}
    for train in train_instances:
        key = (train.game, train.difficulty)
        if key in needed and key not in examples:
            answer = solve(train, budget_s=budget_s).answer
            if answer is not None:
                examples[key] = (train, answer)
    missing = needed - set(examples)
    if missing:
        raise ValueError(f"no train example for cells: {sorted(str(m) for m in missing)}")
    return examples


def run_suite(
    player: Player,
    instances: list[PuzzleInstance],
    shot: str = "zero",
    max_turns: int = DEFAULT_MAX_TURNS,
    parallelism: int = 4,
    train_instances: Optional[list[PuzzleInstance]] = None,
    lexicon: Optional[Lexicon] = None,
    knowledge: Optional[KnowledgeBase] = None,
    on_record=None,
) -> tuple[MetricsTable, list[EpisodeRecord]]:
    """Run every instance through the player; ``on_record`` (if given) sees
    each finished episode in suite order so callers can flush partial
    results even if the run is interrupted."""
    if not instances:
        raise ValueError("suite must be nonempty")
    if shot not in ("zero", "one"):
        raise ValueError(f"unknown shot mode {shot!r}")
    examples = None
    if shot == "one":
        if not train_instances:
            raise ValueError("one-shot evaluation needs train instances")
        examples = make_examples(instances, train_instances)

    def episode(instance: PuzzleInstance) -> EpisodeRecord:
        example = examples.get((instance.game, instance.difficulty)) if examples else None
        return run_episode(
            player, instance, example, max_turns, lexicon=lexicon, knowledge=knowledge
        )

    records: list[EpisodeRecord] = []
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            for record in pool.map(episode, instances):
                records.append(record)
                if on_record is not None:
                    on_record(record)
    else:
        for instance in instances:
            record = episode(instance)
            records.append(record)
            if on_record is not None:
                on_record(record)

    metrics = MetricsTable(max_turns=max_turns)
    for instance, record in zip(instances, records):
        metrics.add_episode(instance, record)
    return metrics, records


# --- Reports --------------------------------------------------------------


def export_report(
    metrics: MetricsTable,
    records: list[EpisodeRecord],
    out_dir,
    include_table_text: bool = True,
) -> dict[str, str]:
    """Write metrics.tsv (round-trippable), metrics.txt, episodes.log."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {}

    tsv_path = os.path.join(out_dir, "metrics.tsv")
    with open(tsv_path, "w", encoding="utf-8") as handle:
        handle.write("group\tdifficulty\tturn\tsolve_rate\n")
        for group, difficulty, turn, rate in metrics.rows():
            handle.write(f"{group}\t{difficulty}\t{turn}\t{rate:.6f}\n")
    paths["metrics_tsv"] = tsv_path

    if include_table_text:
        txt_path = os.path.join(out_dir, "metrics.txt")
        with open(txt_path, "w", encoding="utf-8") as handle:
            handle.write(format_metrics_table(metrics))
        paths["metrics_txt"] = txt_path

    log_path = os.path.join(out_dir, "episodes.log")
    with open(log_path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(episode_to_dict(record), ensure_ascii=True) + "\n")
    paths["episodes_log"] = log_path
    return paths


def format_metrics_table(metrics: MetricsTable) -> str:
    turns = range(1, metrics.max_turns + 1)
    header_cells = []
    for difficulty in DifficultyLevel:
        for turn in turns:
            header_cells.append(f"{difficulty.value[:4]}#{turn}")
    lines = ["group".ljust(20) + "".join(c.rjust(9) for c in header_cells)]
    groups = [g.value for g, _ in metrics.cells()]
    seen = []
    for group in groups:
        if group not in seen:
            seen.append(group)
    seen.extend(["1D", "2D"])
    for group in seen:
        cells = []
        for difficulty in DifficultyLevel:
            for turn in turns:
                if group in ("1D", "2D"):
                    rate = metrics.aggregate_rate(group, difficulty, turn)
                else:
                    rate = (
                        metrics.rate(GameKind(group), difficulty, turn)
                        if (GameKind(group), difficulty) in metrics.totals
                        else None
                    )
                cells.append("-".rjust(9) if rate is None else f"{rate * 100:8.1f}%")
        lines.append(group.ljust(20) + "".join(cells))
    return "\n".join(lines) + "\n"


def episode_to_dict(record: EpisodeRecord) -> dict:
    return {
        "instance_id": record.instance_id,
        "solved_at": record.solved_at,
        "error": record.error,
        "turns": [
            {
                "response": turn.response,
                "solved": turn.verdict.solved,
                "feedback": list(turn.verdict.feedback),
                "latency_s": turn.latency_s,
            }
            for turn in record.turns
        ],
    }


def import_metrics_tsv(path) -> MetricsTable:
    """Rebuild a MetricsTable from an exported metrics.tsv (game rows only)."""
    rows = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        if header.strip() != "group\tdifficulty\tturn\tsolve_rate":
            raise ValueError("unrecognized metrics file header")
        for line in handle:
            group, difficulty, turn, rate = line.rstrip("\n").split("\t")
            rows.append((group, difficulty, int(turn), float(rate)))
    max_turns = max((r[2] for r in rows), default=DEFAULT_MAX_TURNS)
    table = MetricsTable(max_turns=max_turns)
    # Rates are ratios of integers over a common denominator; reconstruct with
    # a fixed virtual total so rate() reproduces the stored values.
    virtual_total = 1_000_000
    for group, difficulty, turn, rate in rows:
        try:
            game = GameKind(group)
        except ValueError:
            continue  # aggregate rows are derived, not stored
        key = (game, DifficultyLevel(difficulty))
        table.totals[key] = virtual_total
        table.solved_by_turn[(game, DifficultyLevel(difficulty), turn)] = round(
            rate * virtual_total
        )
    return table
