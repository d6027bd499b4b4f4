// DOM wiring for the play client. Feedback strings are rendered verbatim
// via textContent; prompts and answers live in monospace blocks so grid
// puzzles align. One submission may be in flight at a time, and retries
// reuse the same idempotency key so attempts are never double-counted.

import { ApiClient, SessionFilters, StatsResponse } from "./api.js";
import {
  PlayViewState,
  applyAnswerResult,
  applyError,
  applySessionView,
  initialState,
  tickTimer,
} from "./state.js";

function newSubmissionId(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return `sub-${Date.now()}-${Math.random().toString(36).slice(2)}`;
}

export class PlayApp {
  state: PlayViewState = initialState();
  private inFlight = false;
  private timerHandle: ReturnType<typeof setInterval> | null = null;
  private lastFilters: SessionFilters = {};

  readonly statusEl: HTMLElement;
  readonly promptEl: HTMLPreElement;
  readonly answerEl: HTMLTextAreaElement;
  readonly submitEl: HTMLButtonElement;
  readonly nextEl: HTMLButtonElement;
  readonly feedbackEl: HTMLUListElement;
  readonly timerEl: HTMLElement;
  readonly attemptsEl: HTMLElement;
  readonly metaEl: HTMLElement;
  readonly solvedEl: HTMLElement;
  readonly errorEl: HTMLElement;
  readonly retryEl: HTMLButtonElement;
  readonly statsEl: HTMLElement;

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
  ) {
    root.innerHTML = `
      <div class="banner" data-role="error" hidden>
        <span data-role="error-message"></span>
        <button data-role="retry">Retry</button>
      </div>
      <div data-role="status"></div>
      <div data-role="meta"></div>
      <div data-role="timer"></div>
      <div data-role="attempts"></div>
      <pre data-role="prompt" style="font-family: monospace"></pre>
      <ul data-role="feedback"></ul>
      <textarea data-role="answer" style="font-family: monospace" rows="8"></textarea>
      <button data-role="submit">Submit</button>
      <button data-role="next" hidden>Next puzzle</button>
      <div data-role="solved" hidden></div>
      <div data-role="stats"></div>
    `;
    this.statusEl = this.pick("status");
    this.promptEl = this.pick("prompt") as HTMLPreElement;
    this.answerEl = this.pick("answer") as HTMLTextAreaElement;
    this.submitEl = this.pick("submit") as HTMLButtonElement;
    this.nextEl = this.pick("next") as HTMLButtonElement;
    this.feedbackEl = this.pick("feedback") as HTMLUListElement;
    this.timerEl = this.pick("timer");
    this.attemptsEl = this.pick("attempts");
    this.metaEl = this.pick("meta");
    this.solvedEl = this.pick("solved");
    this.errorEl = this.pick("error");
    this.retryEl = this.pick("retry") as HTMLButtonElement;
    this.statsEl = this.pick("stats");

    this.submitEl.addEventListener("click", () => {
      void this.submit(this.answerEl.value);
    });
    this.nextEl.addEventListener("click", () => {
      void this.nextPuzzle();
    });
    this.retryEl.addEventListener("click", () => {
      void this.startSession(this.lastFilters);
    });
  }

  private pick(role: string): HTMLElement {
    const el = this.root.querySelector(`[data-role="${role}"]`);
    if (!el) throw new Error(`missing element ${role}`);
    return el as HTMLElement;
  }

  private setState(state: PlayViewState): void {
    this.state = state;
    this.render();
  }

  async startSession(filters: SessionFilters = {}): Promise<void> {
    this.lastFilters = filters;
    this.stopTimer();
    this.setState({ ...initialState(), phase: "loading" });
    try {
      const view = await this.client.createSession(filters);
      this.setState(applySessionView(this.state, view));
      this.startTimer();
    } catch (err) {
      this.setState(applyError(this.state, String(err)));
    }
  }

  async submit(answer: string): Promise<boolean> {
    if (this.state.phase !== "playing" || this.inFlight || !this.state.sessionId) {
      return false;
    }
    this.inFlight = true;
    this.submitEl.disabled = true;
    const submissionId = newSubmissionId();
    try {
      let result;
      for (let attempt = 0; ; attempt += 1) {
        try {
          result = await this.client.submitAnswer(
            this.state.sessionId,
            answer,
            submissionId,
          );
          break;
        } catch (err) {
          if (attempt >= 2) throw err;
        }
      }
      this.setState(applyAnswerResult(this.state, result));
      if (result.solved) {
        this.stopTimer();
      }
      return true;
    } catch (err) {
      this.setState(applyError(this.state, String(err)));
      return false;
    } finally {
      this.inFlight = false;
      this.submitEl.disabled = false;
    }
  }

  async nextPuzzle(): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      const view = await this.client.getPuzzle(this.state.sessionId);
      this.answerEl.value = "";
      this.setState(applySessionView(this.state, view));
      if (this.state.phase === "playing") {
        this.startTimer();
      } else {
        this.stopTimer();
        await this.showStats("global");
      }
    } catch (err) {
      this.setState(applyError(this.state, String(err)));
    }
  }

  async showStats(scope: "global" | "session"): Promise<void> {
    try {
      const stats = await this.client.getStats(
        scope,
        this.state.sessionId ?? undefined,
      );
      this.renderStats(stats);
    } catch (err) {
      this.setState(applyError(this.state, String(err)));
    }
  }

  private startTimer(): void {
    this.stopTimer();
    this.timerHandle = setInterval(() => {
      this.setState(tickTimer(this.state));
    }, 1000);
  }

  private stopTimer(): void {
    if (this.timerHandle !== null) {
      clearInterval(this.timerHandle);
      this.timerHandle = null;
    }
  }

  private render(): void {
    const s = this.state;
    this.errorEl.hidden = s.phase !== "error";
    if (s.phase === "error") {
      this.pick("error-message").textContent = s.errorMessage ?? "network failure";
    }
    this.statusEl.textContent = s.phase;
    this.metaEl.textContent = s.puzzleCount
      ? `Puzzle ${Math.min(s.index + 1, s.puzzleCount)} of ${s.puzzleCount}` +
        (s.game ? ` — ${s.game} (${s.difficulty})` : "")
      : "";
    this.timerEl.textContent =
      s.phase === "playing" ? `${s.timerSeconds}s` : "";
    this.attemptsEl.textContent = `Attempts: ${s.attempts}`;
    this.promptEl.textContent = s.prompt;
    this.feedbackEl.replaceChildren(
      ...s.feedback.map((line) => {
        const item = document.createElement("li");
        item.textContent = line;
        return item;
      }),
    );
    const playing = s.phase === "playing";
    this.answerEl.hidden = !playing;
    this.submitEl.hidden = !playing;
    this.nextEl.hidden = s.phase !== "solved";
    this.solvedEl.hidden = s.phase !== "solved" && s.phase !== "session-complete";
    if (s.phase === "solved") {
      const elapsed =
        s.lastElapsedS === null ? "" : ` in ${Math.round(s.lastElapsedS)}s`;
      this.solvedEl.textContent = `Solved${elapsed} after ${s.attempts} attempt(s).`;
    } else if (s.phase === "session-complete") {
      this.solvedEl.textContent = "Session complete. Thanks for playing!";
    }
  }

  private renderStats(stats: StatsResponse): void {
    this.statsEl.replaceChildren();
    const heading = document.createElement("h2");
    heading.textContent = `Stats (${stats.scope})`;
    this.statsEl.appendChild(heading);
    if (stats.rows.length === 0) {
      const empty = document.createElement("p");
      empty.dataset.role = "stats-empty";
      empty.textContent = "No plays recorded yet.";
      this.statsEl.appendChild(empty);
      return;
    }
    const table = document.createElement("table");
    table.dataset.role = "stats-table";
    const head = document.createElement("tr");
    for (const column of [
      "Game",
      "Difficulty",
      "1st Turn Solve Rate (%)",
      "Avg. Attempts",
      "Avg. Time to Solve (s)",
    ]) {
      const cell = document.createElement("th");
      cell.textContent = column;
      head.appendChild(cell);
    }
    table.appendChild(head);
    for (const row of stats.rows) {
      const tr = document.createElement("tr");
      tr.dataset.game = row.game;
      tr.dataset.difficulty = row.difficulty;
      for (const value of [
        row.game,
        row.difficulty,
        row.first_turn_rate,
        row.avg_attempts,
        row.avg_time_s,
      ]) {
        const cell = document.createElement("td");
        cell.textContent = value === null ? "-" : String(value);
        tr.appendChild(cell);
      }
      table.appendChild(tr);
    }
    this.statsEl.appendChild(table);
  }
}

export function mountApp(root: HTMLElement, client: ApiClient): PlayApp {
  return new PlayApp(root, client);
}
