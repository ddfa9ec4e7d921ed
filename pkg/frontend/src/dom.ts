/** DOM rendering for the annotation page. Pure functions of state; all
 * interaction flows back through the provided callbacks. */

import type { HitView } from "./hitView.js";
import type { LeaderboardSnapshot } from "./leaderboard.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMessage(container: HTMLElement, text: string, kind = "info"): void {
  container.replaceChildren(el("p", `message message-${kind}`, text));
}

export interface HitCallbacks {
  onSlide: (itemId: string, value: number) => void;
  onSubmit: () => void;
}

/** Render one HIT: payload text plus a 0-100 slider per item, a live rank
 * list, and a submit button gated on every slider having been touched. */
export function renderHit(container: HTMLElement, view: HitView, callbacks: HitCallbacks): void {
  container.replaceChildren();
  const header = el("div", "hit-header");
  header.append(
    el("h2", undefined, `HIT ${view.hit.hit_id}`),
    el("span", "hit-iteration", `iteration ${view.hit.iteration}`),
  );
  container.append(header);

  const list = el("div", "hit-items");
  for (const item of view.hit.items) {
    const row = el("div", "hit-item");
    row.dataset.itemId = item.item_id;
    const label = el("label", "hit-payload", item.payload);
    label.htmlFor = `slider-${item.item_id}`;

    const slider = el("input", "hit-slider") as HTMLInputElement;
    slider.type = "range";
    slider.id = `slider-${item.item_id}`;
    slider.min = "0";
    slider.max = "100";
    slider.step = "1";
    slider.value = String(view.slider(item.item_id));
    slider.disabled = view.submitted;
    slider.addEventListener("input", () => {
      callbacks.onSlide(item.item_id, Number(slider.value));
      valueBadge.textContent = String(view.slider(item.item_id));
      refreshRanking();
      refreshSubmit();
    });

    const valueBadge = el("span", "hit-value", String(view.slider(item.item_id)));
    row.append(label, slider, valueBadge);
    list.append(row);
  }
  container.append(list);

  const rankingBox = el("ol", "hit-ranking");
  container.append(el("h3", undefined, "current ranking"), rankingBox);

  const submit = el("button", "hit-submit", "Submit scores") as HTMLButtonElement;
  submit.addEventListener("click", () => {
    if (!view.canSubmit) return;
    submit.disabled = true;
    callbacks.onSubmit();
  });
  container.append(submit);

  const hint = el("p", "hit-hint", "");
  container.append(hint);

  function refreshRanking(): void {
    rankingBox.replaceChildren(
      ...view.ranking().map((item) =>
        el("li", undefined, `${item.payload} (${view.slider(item.item_id)})`),
      ),
    );
  }

  function refreshSubmit(): void {
    submit.disabled = !view.canSubmit;
    hint.textContent = view.submitted
      ? "submitted"
      : view.allTouched
        ? "ready to submit"
        : "move every slider once to enable submission";
  }

  refreshRanking();
  refreshSubmit();
}

export function renderLeaderboard(container: HTMLElement, snapshot: LeaderboardSnapshot): void {
  container.replaceChildren();
  const { rows, progress } = snapshot;
  const iterationShown = progress.complete
    ? progress.iterations_total
    : progress.iteration + 1;
  container.append(
    el(
      "p",
      "progress-line",
      `iteration ${iterationShown}/${progress.iterations_total}` +
        ` | HITs completed: ${progress.hits_completed}` +
        ` | annotators: ${Object.keys(progress.annotators).length}` +
        (progress.complete ? " | campaign complete" : ""),
    ),
  );
  const table = el("table", "leaderboard");
  const head = el("tr");
  for (const title of ["#", "item", "score", "variance", "judgments"]) {
    head.append(el("th", undefined, title));
  }
  table.append(head);
  rows.forEach((row, index) => {
    const tr = el("tr");
    tr.append(
      el("td", undefined, String(index + 1)),
      el("td", undefined, row.item_id),
      el("td", undefined, row.score.toFixed(3)),
      el("td", undefined, row.variance.toFixed(4)),
      el("td", undefined, String(row.count)),
    );
    table.append(tr);
  });
  container.append(table);
}
