import { describe, expect, it } from "vitest";

import { HitView } from "../src/hitView.js";
import type { HitPayload } from "../src/types.js";

function makeHit(n = 5): HitPayload {
  return {
    hit_id: "hit-0000-000",
    iteration: 0,
    anchor_id: "w0",
    items: Array.from({ length: n }, (_, k) => ({
      item_id: `w${k}`,
      payload: `word ${k}`,
    })),
  };
}

describe("HitView", () => {
  it("defaults every slider to the 50 midpoint", () => {
    const view = new HitView(makeHit());
    expect(view.scores).toEqual([50, 50, 50, 50, 50]);
  });

  it("requires every slider to be touched before submission", () => {
    const view = new HitView(makeHit(3));
    expect(view.canSubmit).toBe(false);
    view.setSlider("w0", 80);
    view.setSlider("w1", 20);
    expect(view.canSubmit).toBe(false);
    view.setSlider("w2", 50); // touching without moving counts
    expect(view.canSubmit).toBe(true);
  });

  it("posts exactly the slider state, in presentation order", () => {
    const view = new HitView(makeHit());
    view.setSlider("w0", 100);
    view.setSlider("w1", 0);
    view.setSlider("w2", 50);
    view.setSlider("w3", 50);
    view.setSlider("w4", 50);
    expect(view.scores).toEqual([100, 0, 50, 50, 50]);
  });

  it("clamps and rounds to integers in [0, 100]", () => {
    const view = new HitView(makeHit(2));
    view.setSlider("w0", 150);
    view.setSlider("w1", 33.6);
    expect(view.scores).toEqual([100, 34]);
  });

  it("ranks by value with ties keeping presentation order", () => {
    const view = new HitView(makeHit(4));
    view.setSlider("w0", 20);
    view.setSlider("w1", 80);
    view.setSlider("w2", 80);
    view.setSlider("w3", 40);
    expect(view.ranking().map((i) => i.item_id)).toEqual(["w1", "w2", "w3", "w0"]);
  });

  it("freezes after submission", () => {
    const view = new HitView(makeHit(2));
    view.setSlider("w0", 10);
    view.setSlider("w1", 90);
    view.markSubmitted();
    expect(view.canSubmit).toBe(false);
    view.setSlider("w0", 99); // ignored: completed HITs are immutable
    expect(view.scores).toEqual([10, 90]);
  });

  it("rejects unknown items and non-numeric values", () => {
    const view = new HitView(makeHit(2));
    expect(() => view.setSlider("nope", 10)).toThrow();
    expect(() => view.setSlider("w0", Number.NaN)).toThrow();
  });
});
