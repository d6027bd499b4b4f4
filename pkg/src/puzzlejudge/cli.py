"""Command line interface: gen, dataset, grade, solve, eval, serve."""
from __future__ import annotations

import argparse
import json
import sys

from .generators import derive_seed, generate, generate_dataset
from .graders import grade
from .harness import (
    FlawedPlayer,
    OraclePlayer,
    RandomPlayer,
    RemoteModelPlayer,
    export_report,
    run_suite,
)
from .lexicon import bundled_knowledge, bundled_lexicon
from .model import (
    DifficultyLevel,
    GameKind,
    deserialize_instance,
    load_instances,
    serialize_instance,
)
from .remote import RemoteEndpoint
from .solvers import count_solutions, solve


def _game_choices():
    return [g.value for g in GameKind] + ["all"]


def _difficulty_choices():
    return [d.value for d in DifficultyLevel] + ["all"]


def _selected_cells(game: str, difficulty: str):
    games = list(GameKind) if game == "all" else [GameKind(game)]
    difficulties = (
        list(DifficultyLevel) if difficulty == "all" else [DifficultyLevel(difficulty)]
    )
    return [(g, d) for g in games for d in difficulties]


def _add_data_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--words", help="override the bundled word list file")
    parser.add_argument("--countries", help="override the bundled country table file")


def _load_data(args):
    lexicon = bundled_lexicon(args.words) if getattr(args, "words", None) else bundled_lexicon()
    knowledge = (
        bundled_knowledge(args.countries)
        if getattr(args, "countries", None)
        else bundled_knowledge()
    )
    return lexicon, knowledge


def cmd_gen(args) -> int:
    import os

    lexicon, knowledge = _load_data(args)
    cells = _selected_cells(args.game, args.difficulty)
    written = 0
    if os.path.isdir(args.out) or args.out.endswith(os.sep):
        # one {game}_{difficulty}.jsonl suite file per selected cell
        os.makedirs(args.out, exist_ok=True)
        for game, difficulty in cells:
            path = os.path.join(args.out, f"{game.value}_{difficulty.value}.jsonl")
            with open(path, "w", encoding="utf-8") as handle:
                for i in range(args.count):
                    seed = derive_seed(args.seed, game, difficulty, "suite", i)
                    instance = generate(game, difficulty, seed, lexicon, knowledge)
                    handle.write(serialize_instance(instance) + "\n")
                    written += 1
        print(f"wrote {written} instances to {len(cells)} files under {args.out}")
        return 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for game, difficulty in cells:
            for i in range(args.count):
                seed = derive_seed(args.seed, game, difficulty, "suite", i)
                instance = generate(game, difficulty, seed, lexicon, knowledge)
                handle.write(serialize_instance(instance) + "\n")
                written += 1
    print(f"wrote {written} instances to {args.out}")
    return 0


def cmd_dataset(args) -> int:
    summary = generate_dataset(
        args.out_test,
        args.out_train,
        per_cell_test=args.per_cell_test,
        per_cell_train=args.per_cell_train,
        master_seed=args.seed,
        parallelism=args.parallel,
    )
    print(json.dumps(summary, indent=2))
    return 0


def _read_answer(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _read_instance(path: str):
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                return deserialize_instance(line)
    raise SystemExit(f"no instance found in {path}")


def cmd_grade(args) -> int:
    lexicon, knowledge = _load_data(args)
    instance = _read_instance(args.instance)
    answer = _read_answer(args.answer)
    verdict = grade(instance, answer, lexicon=lexicon, knowledge=knowledge)
    print(f"solved: {str(verdict.solved).lower()}")
    for line in verdict.feedback:
        print(f"feedback: {line}")
    return 0 if verdict.solved else 1


def cmd_solve(args) -> int:
    lexicon, knowledge = _load_data(args)
    instance = _read_instance(args.instance)
    result = solve(instance, budget_s=args.budget, lexicon=lexicon, knowledge=knowledge)
    if result.answer is None:
        status = "unsolvable" if result.proven_unsolvable else "no-answer"
        print(f"status: {status}")
        return 1
    print(result.answer)
    if args.count_limit:
        count = count_solutions(instance, limit=args.count_limit, lexicon=lexicon)
        print(f"solutions (capped at {args.count_limit}): {count}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    import os

    from .harness import episode_to_dict

    lexicon, knowledge = _load_data(args)
    instances = load_instances(args.suite)
    os.makedirs(args.out, exist_ok=True)
    if args.player == "oracle":
        player = OraclePlayer()
    elif args.player == "flawed":
        player = FlawedPlayer()
    elif args.player == "random":
        player = RandomPlayer()
    else:
        if not args.endpoint:
            raise SystemExit("--endpoint is required for the remote player")
        player = RemoteModelPlayer(
            RemoteEndpoint(
                base_url=args.endpoint,
                model=args.model,
                log_path=os.path.join(args.out, "requests.log"),
            )
        )
    train = load_instances(args.train) if args.train else None
    # stream episodes as they finish so an interrupted run keeps its partials
    stream_path = os.path.join(args.out, "episodes.log")
    with open(stream_path, "w", encoding="utf-8") as stream:

        def flush_record(record):
            stream.write(json.dumps(episode_to_dict(record), ensure_ascii=True) + "\n")
            stream.flush()

        metrics, records = run_suite(
            player,
            instances,
            shot="one" if args.shot == 1 else "zero",
            max_turns=args.turns,
            parallelism=args.parallel,
            train_instances=train,
            lexicon=lexicon,
            knowledge=knowledge,
            on_record=flush_record,
        )
    paths = export_report(metrics, records, args.out)
    for turn in range(1, args.turns + 1):
        overall = [
            metrics.rate(g, d, turn) for (g, d) in metrics.totals
        ]
        mean = sum(overall) / len(overall)
        print(f"turn {turn}: mean solve rate {mean * 100:.1f}%")
    print(f"report written to {paths['metrics_tsv']}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    server = serve(
        port=args.port,
        suite_path=args.suite,
        event_log_path=args.events,
        token=args.token,
        host=args.host,
    )
    print(f"serving on http://{args.host}:{args.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puzzlejudge",
        description="Generate, grade, solve, and evaluate text puzzles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a suite of instances")
    p.add_argument("--game", choices=_game_choices(), default="all")
    p.add_argument("--difficulty", choices=_difficulty_choices(), default="all")
    p.add_argument("--count", type=int, default=10, help="instances per cell")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True)
    _add_data_overrides(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("dataset", help="emit the full test/train dataset")
    p.add_argument("--out-test", required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--per-cell-test", type=int, default=1000)
    p.add_argument("--per-cell-train", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", type=int, default=None)
    p.set_defaults(fn=cmd_dataset)

    p = sub.add_parser("grade", help="grade an answer against an instance")
    p.add_argument("--instance", required=True, help="file with one serialized instance")
    p.add_argument("--answer", required=True, help="answer file, or - for stdin")
    _add_data_overrides(p)
    p.set_defaults(fn=cmd_grade)

    p = sub.add_parser("solve", help="run the reference solver on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=float, default=10.0)
    p.add_argument("--count-limit", type=int, default=None)
    _add_data_overrides(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("eval", help="run a player over a suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--player", choices=["oracle", "flawed", "random", "remote"],
                   default="oracle")
    p.add_argument("--shot", type=int, choices=[0, 1], default=0)
    p.add_argument("--turns", type=int, default=3)
    p.add_argument("--parallel", type=int, default=4)
    p.add_argument("--train", help="train suite (required for --shot 1)")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--endpoint", help="chat-completions base URL for remote player")
    p.add_argument("--model", default="gpt-4o-mini")
    _add_data_overrides(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("serve", help="start the human-play HTTP server")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--suite", help="serve puzzles drawn from this suite file")
    p.add_argument("--events", help="append-only event log path")
    p.add_argument("--token", help="require X-Auth-Token header matching this value")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
