"""HTTP facade for timed human play: sessions, submissions, telemetry.

State is derived from an append-only event log (create/view/submit), so a
restart replays the log and every Table-style metric stays reconstructable.
Answers are graded by the library grader; verdicts here match CLI grading
byte-for-byte. Reference solutions are never stored or returned.
"""
from __future__ import annotations

import json
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .generators import generate
from .graders import grade
from .lexicon import KnowledgeBase, Lexicon, bundled_knowledge, bundled_lexicon
from .model import (
    DifficultyLevel,
    GameKind,
    PuzzleInstance,
    deserialize_instance,
    serialize_instance,
)

SESSION_PUZZLES_MIN = 2
SESSION_PUZZLES_MAX = 3


@dataclass
class PuzzleState:
    instance: PuzzleInstance
    attempts: int = 0
    solved: bool = False
    first_view_ts: Optional[float] = None
    solved_ts: Optional[float] = None

    @property
    def elapsed_s(self) -> Optional[float]:
        if self.solved_ts is None or self.first_view_ts is None:
            return None
        return self.solved_ts - self.first_view_ts


@dataclass
class Session:
    id: str
    puzzles: list[PuzzleState]
    index: int = 0
    submissions: dict = field(default_factory=dict)  # submission_id -> response

    @property
    def complete(self) -> bool:
        return self.index >= len(self.puzzles)


class SessionStore:
    """In-memory session state backed by an append-only event log."""

    def __init__(
        self,
        event_log_path=None,
        suite: Optional[list[PuzzleInstance]] = None,
        lexicon: Optional[Lexicon] = None,
        knowledge: Optional[KnowledgeBase] = None,
        clock=time.time,
    ):
        self._lock = threading.RLock()
        self._sessions: dict[str, Session] = {}
        self._event_log_path = event_log_path
        self._suite = suite or []
        self._lexicon = lexicon or bundled_lexicon()
        self._knowledge = knowledge or bundled_knowledge()
        self._clock = clock
        if event_log_path:
            self._replay()

    # -- event log ---------------------------------------------------------

    def _append_event(self, event: dict) -> None:
        if not self._event_log_path:
            return
        with open(self._event_log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(event, ensure_ascii=True) + "\n")

    def _replay(self) -> None:
        try:
            handle = open(self._event_log_path, encoding="utf-8")
        except FileNotFoundError:
            return
        with handle:
            for line in handle:
                if line.strip():
                    self._apply_event(json.loads(line), record=False)

    def _apply_event(self, event: dict, record: bool = True) -> None:
        kind = event["event"]
        if kind == "create":
            puzzles = [
                PuzzleState(instance=deserialize_instance(line))
                for line in event["instances"]
            ]
            self._sessions[event["session_id"]] = Session(
                id=event["session_id"], puzzles=puzzles
            )
        elif kind == "view":
            session = self._sessions[event["session_id"]]
            state = session.puzzles[event["index"]]
            if state.first_view_ts is None:
                state.first_view_ts = event["ts"]
        elif kind == "submit":
            session = self._sessions[event["session_id"]]
            state = session.puzzles[event["index"]]
            state.attempts += 1
            if event["solved"]:
                state.solved = True
                state.solved_ts = event["ts"]
                session.index += 1
            if event.get("submission_id"):
                session.submissions[event["submission_id"]] = event["response"]
        if record:
            self._append_event(event)

    # -- operations --------------------------------------------------------

    def _pick_instances(
        self,
        game: Optional[GameKind],
        difficulty: Optional[DifficultyLevel],
        seed: Optional[int],
        count: Optional[int],
    ) -> list[PuzzleInstance]:
        rng = random.Random(seed if seed is not None else uuid.uuid4().int)
        n = count if count else rng.randint(SESSION_PUZZLES_MIN, SESSION_PUZZLES_MAX)
        if not SESSION_PUZZLES_MIN <= n <= SESSION_PUZZLES_MAX:
            raise ValueError(
                f"sessions hold {SESSION_PUZZLES_MIN} to {SESSION_PUZZLES_MAX} puzzles"
            )
        pool = [
            inst
            for inst in self._suite
            if (game is None or inst.game == game)
            and (difficulty is None or inst.difficulty == difficulty)
        ]
        if len(pool) >= n:
            return rng.sample(pool, n)
        instances = []
        for _ in range(n):
            g = game or rng.choice(list(GameKind))
            d = difficulty or rng.choice(list(DifficultyLevel))
            instances.append(
                generate(g, d, rng.getrandbits(63), self._lexicon, self._knowledge)
            )
        return instances

    def create_session(
        self,
        game: Optional[GameKind] = None,
        difficulty: Optional[DifficultyLevel] = None,
        seed: Optional[int] = None,
        count: Optional[int] = None,
    ) -> dict:
        with self._lock:
            instances = self._pick_instances(game, difficulty, seed, count)
            session_id = uuid.uuid4().hex
            now = self._clock()
            self._apply_event(
                {
                    "event": "create",
                    "session_id": session_id,
                    "ts": now,
                    "instances": [serialize_instance(inst) for inst in instances],
                }
            )
            self._apply_event(
                {"event": "view", "session_id": session_id, "index": 0, "ts": now}
            )
            return self._puzzle_payload(self._sessions[session_id])

    def _puzzle_payload(self, session: Session) -> dict:
        payload = {
            "session_id": session.id,
            "puzzle_count": len(session.puzzles),
            "index": session.index,
            "complete": session.complete,
            "puzzle": None,
        }
        if not session.complete:
            state = session.puzzles[session.index]
            payload["puzzle"] = {
                "instance_id": state.instance.id,
                "game": state.instance.game.value,
                "difficulty": state.instance.difficulty.value,
                "prompt": state.instance.prompt,
                "attempts": state.attempts,
            }
        return payload

    def get_puzzle(self, session_id: str) -> dict:
        with self._lock:
            session = self._require(session_id)
            if not session.complete:
                state = session.puzzles[session.index]
                if state.first_view_ts is None:
                    self._apply_event(
                        {
                            "event": "view",
                            "session_id": session_id,
                            "index": session.index,
                            "ts": self._clock(),
                        }
                    )
            return self._puzzle_payload(session)

    def submit_answer(
        self, session_id: str, answer: str, submission_id: Optional[str] = None
    ) -> dict:
        with self._lock:
            session = self._require(session_id)
            if submission_id and submission_id in session.submissions:
                return session.submissions[submission_id]
            if session.complete:
                raise SessionComplete(session_id)
            state = session.puzzles[session.index]
            index = session.index
            verdict = grade(
                state.instance, answer, lexicon=self._lexicon, knowledge=self._knowledge
            )
            now = self._clock()
            next_index = index + (1 if verdict.solved else 0)
            complete_after = next_index >= len(session.puzzles)
            response = {
                "solved": verdict.solved,
                "feedback": list(verdict.feedback),
                "attempts": state.attempts + 1,
                "advance": verdict.solved,
                "session_complete": complete_after,
                # Metadata only: the next puzzle's timer starts when it is fetched.
                "next": {
                    "index": next_index,
                    "puzzle_count": len(session.puzzles),
                    "complete": complete_after,
                },
            }
            if verdict.solved and state.first_view_ts is not None:
                response["elapsed_s"] = round(now - state.first_view_ts, 3)
            self._apply_event(
                {
                    "event": "submit",
                    "session_id": session_id,
                    "index": index,
                    "ts": now,
                    "solved": verdict.solved,
                    "submission_id": submission_id,
                    "response": response,
                }
            )
            return response

    def stats(self, scope: str = "global", session_id: Optional[str] = None) -> dict:
        with self._lock:
            if scope == "session":
                sessions = [self._require(session_id)]
            elif scope == "global":
                sessions = list(self._sessions.values())
            else:
                raise ValueError(f"unknown stats scope {scope!r}")
            cells: dict[tuple[str, str], dict] = {}
            for session in sessions:
                for state in session.puzzles:
                    if state.attempts == 0:
                        continue
                    key = (
                        state.instance.game.value,
                        state.instance.difficulty.value,
                    )
                    cell = cells.setdefault(
                        key,
                        {"attempted": 0, "first_turn_solved": 0, "solved": 0,
                         "attempts_sum": 0, "time_sum": 0.0},
                    )
                    cell["attempted"] += 1
                    if state.solved:
                        cell["solved"] += 1
                        cell["attempts_sum"] += state.attempts
                        if state.attempts == 1:
                            cell["first_turn_solved"] += 1
                        if state.elapsed_s is not None:
                            cell["time_sum"] += state.elapsed_s
            rows = []
            for (game, difficulty) in sorted(cells):
                cell = cells[(game, difficulty)]
                solved = cell["solved"]
                rows.append(
                    {
                        "game": game,
                        "difficulty": difficulty,
                        "first_turn_rate": round(
                            100.0 * cell["first_turn_solved"] / cell["attempted"], 1
                        ),
                        "avg_attempts": round(cell["attempts_sum"] / solved, 2)
                        if solved
                        else None,
                        "avg_time_s": round(cell["time_sum"] / solved, 1)
                        if solved
                        else None,
                        "puzzles": cell["attempted"],
                    }
                )
            return {"scope": scope, "rows": rows}

    def _require(self, session_id: Optional[str]) -> Session:
        if not session_id or session_id not in self._sessions:
            raise UnknownSession(str(session_id))
        return self._sessions[session_id]


class UnknownSession(KeyError):
    pass


class SessionComplete(ValueError):
    pass


# --- HTTP layer -----------------------------------------------------------


def make_handler(store: SessionStore, token: Optional[str] = None):
    class Handler(BaseHTTPRequestHandler):
        server_version = "puzzlejudge"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, body: dict) -> None:
            data = json.dumps(body, ensure_ascii=True).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self._cors()
            self.end_headers()
            self.wfile.write(data)

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header(
                "Access-Control-Allow-Headers", "Content-Type, X-Auth-Token"
            )
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")

        def _authorized(self) -> bool:
            if token is None:
                return True
            return self.headers.get("X-Auth-Token") == token

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            raw = self.rfile.read(length)
            try:
                parsed = json.loads(raw)
            except ValueError:
                raise BadRequest("body is not valid JSON")
            if not isinstance(parsed, dict):
                raise BadRequest("body must be a JSON object")
            return parsed

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.end_headers()

        def do_GET(self):
            self._route("GET")

        def do_POST(self):
            self._route("POST")

        def _route(self, method: str) -> None:
            if not self._authorized():
                self._send(401, {"error": "missing or invalid token"})
                return
            parsed = urlparse(self.path)
            parts = [p for p in parsed.path.split("/") if p]
            try:
                if method == "POST" and parts == ["sessions"]:
                    body = self._read_body()
                    game = GameKind(body["game"]) if body.get("game") else None
                    difficulty = (
                        DifficultyLevel(body["difficulty"])
                        if body.get("difficulty")
                        else None
                    )
                    result = store.create_session(
                        game=game,
                        difficulty=difficulty,
                        seed=body.get("seed"),
                        count=body.get("count"),
                    )
                    self._send(201, result)
                elif method == "GET" and len(parts) == 3 and parts[0] == "sessions" \
                        and parts[2] == "puzzle":
                    self._send(200, store.get_puzzle(parts[1]))
                elif method == "POST" and len(parts) == 3 and parts[0] == "sessions" \
                        and parts[2] == "answer":
                    body = self._read_body()
                    if "answer" not in body:
                        raise BadRequest("missing 'answer'")
                    result = store.submit_answer(
                        parts[1], body["answer"], body.get("submission_id")
                    )
                    self._send(200, result)
                elif method == "GET" and parts == ["stats"]:
                    query = parse_qs(parsed.query)
                    scope = query.get("scope", ["global"])[0]
                    session_id = query.get("session_id", [None])[0]
                    self._send(200, store.stats(scope, session_id))
                else:
                    self._send(404, {"error": "no such route"})
            except BadRequest as exc:
                self._send(400, {"error": str(exc)})
            except UnknownSession as exc:
                self._send(404, {"error": f"unknown session {exc.args[0]}"})
            except SessionComplete:
                self._send(409, {"error": "session already complete"})
            except (KeyError, ValueError) as exc:
                self._send(400, {"error": str(exc)})

    return Handler


class BadRequest(ValueError):
    pass


def serve(
    port: int,
    suite_path=None,
    event_log_path=None,
    token: Optional[str] = None,
    host: str = "127.0.0.1",
) -> ThreadingHTTPServer:
    suite = None
    if suite_path:
        from .model import load_instances

        suite = load_instances(suite_path)
    store = SessionStore(event_log_path=event_log_path, suite=suite)
    server = ThreadingHTTPServer((host, port), make_handler(store, token))
    return server
