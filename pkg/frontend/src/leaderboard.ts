/** Leaderboard state: polls scores and progress, keeps rows in the exact
 * order the service returned them (ranking is the server's job). */

import type { ApiClient } from "./api.js";
import type { Progress, ScoreRow } from "./types.js";

export interface LeaderboardSnapshot {
  rows: ScoreRow[];
  progress: Progress;
}

export class Leaderboard {
  private readonly api: ApiClient;
  private readonly sessionId: string;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(api: ApiClient, sessionId: string) {
    this.api = api;
    this.sessionId = sessionId;
  }

  async refresh(): Promise<LeaderboardSnapshot> {
    const [scores, progress] = await Promise.all([
      this.api.getScores(this.sessionId),
      this.api.getProgress(this.sessionId),
    ]);
    return { rows: scores.scores, progress };
  }

  start(
    intervalMs: number,
    onUpdate: (snapshot: LeaderboardSnapshot) => void,
    onError?: (error: unknown) => void,
  ): void {
    this.stop();
    const tick = () =>
      this.refresh().then(onUpdate, (error) => onError?.(error));
    void tick();
    this.timer = setInterval(tick, intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
