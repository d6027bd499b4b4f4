// Typed client for the play server. The UI never grades anything itself:
// solved flags and feedback strings come exclusively from these responses.

export interface PuzzleInfo {
  instance_id: string;
  game: string;
  difficulty: string;
  prompt: string;
  attempts: number;
}

export interface SessionView {
  session_id?: string;
  puzzle_count: number;
  index: number;
  complete: boolean;
  puzzle: PuzzleInfo | null;
}

export interface AnswerResult {
  solved: boolean;
  feedback: string[];
  attempts: number;
  advance: boolean;
  session_complete: boolean;
  elapsed_s?: number;
  next: { index: number; puzzle_count: number; complete: boolean };
}

export interface StatsRow {
  game: string;
  difficulty: string;
  first_turn_rate: number;
  avg_attempts: number | null;
  avg_time_s: number | null;
  puzzles: number;
}

export interface StatsResponse {
  scope: string;
  rows: StatsRow[];
}

export interface SessionFilters {
  game?: string;
  difficulty?: string;
  seed?: number;
  count?: number;
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      const detail = await response.text().catch(() => "");
      throw new Error(`HTTP ${response.status}: ${detail.slice(0, 200)}`);
    }
    return (await response.json()) as T;
  }

  createSession(filters: SessionFilters): Promise<SessionView> {
    return this.request<SessionView>("/sessions", {
      method: "POST",
      body: JSON.stringify(filters),
    });
  }

  getPuzzle(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${sessionId}/puzzle`);
  }

  submitAnswer(
    sessionId: string,
    answer: string,
    submissionId: string,
  ): Promise<AnswerResult> {
    return this.request<AnswerResult>(`/sessions/${sessionId}/answer`, {
      method: "POST",
      body: JSON.stringify({ answer, submission_id: submissionId }),
    });
  }

  getStats(scope: "global" | "session", sessionId?: string): Promise<StatsResponse> {
    const query =
      scope === "session" && sessionId
        ? `?scope=session&session_id=${encodeURIComponent(sessionId)}`
        : "?scope=global";
    return this.request<StatsResponse>(`/stats${query}`);
  }
}
