// End-to-end: spawn the real play server, drive the DOM app against it,
// and check the stats view against the raw /stats payload field-for-field.
import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountApp } from "../src/app.js";

const PORT = 18650 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let suitePath: string;
let answersByPrompt: Record<string, string>;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i += 1) {
    try {
      const res = await fetch(`${BASE}/stats`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "play-e2e-"));
  suitePath = join(dir, "suite.jsonl");
  execFileSync("python3", [
    "-m", "puzzlejudge.cli", "gen",
    "--game", "ordering_text", "--difficulty", "easy",
    "--count", "4", "--seed", "9", "--out", suitePath,
  ]);
  const mapJson = execFileSync("python3", [
    "-c",
    [
      "import json, sys",
      "from puzzlejudge.model import load_instances",
      "from puzzlejudge.solvers import solve",
      `instances = load_instances(${JSON.stringify(suitePath)})`,
      "print(json.dumps({i.prompt: solve(i).answer for i in instances}))",
    ].join("\n"),
  ]);
  answersByPrompt = JSON.parse(mapJson.toString());
  server = spawn("python3", [
    "-m", "puzzlejudge.cli", "serve",
    "--port", String(PORT), "--suite", suitePath,
    "--events", join(dir, "events.log"),
  ]);
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

describe("full session against the live server", () => {
  it("plays wrong-then-right through both puzzles and matches stats", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const app = mountApp(document.getElementById("app")!, new ApiClient(BASE));

    await app.startSession({
      game: "ordering_text",
      difficulty: "easy",
      seed: 31,
      count: 2,
    });
    expect(app.state.phase).toBe("playing");
    expect(app.state.puzzleCount).toBe(2);

    // -- puzzle 1: wrong answer first ------------------------------------
    const prompt1 = app.state.prompt;
    expect(answersByPrompt[prompt1]).toBeDefined();
    await app.submit("zzz");
    expect(app.state.phase).toBe("playing");
    expect(app.state.attempts).toBe(1);
    // ordering prompts list exactly three words at easy difficulty, so a
    // one-line answer must draw the too-short message, rendered verbatim
    const items = [
      ...document.querySelectorAll('[data-role="feedback"] li'),
    ].map((li) => li.textContent);
    expect(items).toEqual(["Your answer is too short. There should be 3 items."]);

    // -- puzzle 1: correct answer ----------------------------------------
    await app.submit(answersByPrompt[prompt1]);
    expect(app.state.phase).toBe("solved");
    expect(app.state.attempts).toBe(2);
    expect(app.state.lastElapsedS).not.toBeNull();
    const solvedText = document.querySelector('[data-role="solved"]')!.textContent!;
    expect(solvedText).toContain("after 2 attempt(s)");

    // -- puzzle 2 ----------------------------------------------------------
    await app.nextPuzzle();
    expect(app.state.phase).toBe("playing");
    expect(app.state.index).toBe(1);
    const prompt2 = app.state.prompt;
    expect(prompt2).not.toBe(prompt1);
    await app.submit(answersByPrompt[prompt2]);
    expect(app.state.phase).toBe("solved");
    expect(app.state.attempts).toBe(1);

    await app.nextPuzzle();
    expect(app.state.phase).toBe("session-complete");

    // -- stats view matches the raw payload field-for-field ----------------
    const payload = await (await fetch(`${BASE}/stats?scope=global`)).json();
    expect(payload.rows.length).toBeGreaterThan(0);
    const table = document.querySelector('[data-role="stats-table"]')!;
    const domRows = [...table.querySelectorAll("tr[data-game]")];
    expect(domRows.length).toBe(payload.rows.length);
    for (const row of payload.rows) {
      const domRow = domRows.find(
        (r) =>
          (r as HTMLElement).dataset.game === row.game &&
          (r as HTMLElement).dataset.difficulty === row.difficulty,
      );
      expect(domRow, `${row.game}/${row.difficulty}`).toBeDefined();
      const cells = [...domRow!.querySelectorAll("td")].map((td) => td.textContent);
      expect(cells).toEqual([
        row.game,
        row.difficulty,
        String(row.first_turn_rate),
        row.avg_attempts === null ? "-" : String(row.avg_attempts),
        row.avg_time_s === null ? "-" : String(row.avg_time_s),
      ]);
    }

    // attempts on the server agree with what the UI displayed throughout
    const sessionStats = await (
      await fetch(`${BASE}/stats?scope=global`)
    ).json();
    const cell = sessionStats.rows.find(
      (r: { game: string }) => r.game === "ordering_text",
    );
    expect(cell.avg_attempts).toBe(1.5); // (2 + 1) / 2 solves
    expect(cell.first_turn_rate).toBe(50.0);
    expect(cell.avg_time_s).not.toBeNull();
  });

  it("honors game/difficulty filters and shows the served prompt", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const app = mountApp(document.getElementById("app")!, new ApiClient(BASE));
    await app.startSession({ game: "islands", difficulty: "hard", seed: 7 });
    expect(app.state.phase).toBe("playing");
    expect(app.state.game).toBe("islands");
    expect(app.state.difficulty).toBe("hard");
    expect(app.state.prompt).toContain("islands");

    // the rendered prompt is exactly what the server returns for this puzzle
    const served = await (
      await fetch(`${BASE}/sessions/${app.state.sessionId}/puzzle`)
    ).json();
    expect(
      document.querySelector('[data-role="prompt"]')!.textContent,
    ).toBe(served.puzzle.prompt);
  });
});
