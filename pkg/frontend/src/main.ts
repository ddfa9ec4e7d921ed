/** Page bootstrap: one annotator tab drives one HIT at a time; the
 * leaderboard panel polls live scores for campaign operators. */

import { ApiClient, ApiError } from "./api.js";
import { renderHit, renderLeaderboard, renderMessage } from "./dom.js";
import { HitView } from "./hitView.js";
import { Leaderboard } from "./leaderboard.js";

function requireElement(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function startApp(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? window.location.origin;
  const sessionId = params.get("session") ?? "";
  const annotatorId = params.get("annotator") ?? `anon-${Math.floor(Math.random() * 1e6)}`;

  const hitPanel = requireElement("hit-panel");
  const boardPanel = requireElement("leaderboard-panel");
  const statusLine = requireElement("status-line");

  if (!sessionId) {
    renderMessage(
      hitPanel,
      "No session: open this page with ?session=<id>&annotator=<name>" +
        " (and optionally &service=<http://host:port>).",
      "warn",
    );
    return;
  }

  const api = new ApiClient(baseUrl);
  statusLine.textContent = `session ${sessionId} | annotator ${annotatorId}`;

  let inFlight: HitView | null = null; // one HIT per tab at a time

  async function loadNextHit(): Promise<void> {
    try {
      const response = await api.nextHit(sessionId, annotatorId);
      if (response.status === "complete" || !response.hit) {
        renderMessage(hitPanel, "Campaign complete - thank you!", "done");
        inFlight = null;
        return;
      }
      const view = new HitView(response.hit);
      inFlight = view;
      renderHit(hitPanel, view, {
        onSlide: (itemId, value) => view.setSlider(itemId, value),
        onSubmit: () => void submit(view),
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        renderMessage(hitPanel, `Waiting: ${error.detail}`, "warn");
        setTimeout(() => void loadNextHit(), 3000);
      } else {
        renderMessage(hitPanel, String(error), "error");
      }
    }
  }

  async function submit(view: HitView): Promise<void> {
    try {
      const ack = await api.submitJudgment(
        sessionId,
        view.hit.hit_id,
        annotatorId,
        view.scores,
      );
      view.markSubmitted();
      renderMessage(hitPanel, `Submitted (seq ${ack.seq}). Fetching the next HIT...`);
      setTimeout(() => void loadNextHit(), 400);
    } catch (error) {
      // 409/422 come back verbatim so annotators see the service's reason.
      renderMessage(hitPanel, String(error), "error");
    }
  }

  const leaderboard = new Leaderboard(api, sessionId);
  leaderboard.start(
    2000,
    (snapshot) => renderLeaderboard(boardPanel, snapshot),
    (error) => renderMessage(boardPanel, String(error), "error"),
  );

  void loadNextHit();
}

if (typeof document !== "undefined" && document.getElementById("hit-panel")) {
  startApp();
}
