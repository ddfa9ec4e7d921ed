/** State for one partial-ranking HIT: n items, one 0-100 slider each.
 *
 * Sliders start at the 50 midpoint and every one must be touched before
 * submission unlocks. What gets posted is exactly the slider state - no
 * client-side normalization - and equal values are legitimate (they encode
 * ties).
 */

import type { HitItem, HitPayload } from "./types.js";

export class HitView {
  readonly hit: HitPayload;
  private readonly values = new Map<string, number>();
  private readonly touched = new Set<string>();
  submitted = false;

  constructor(hit: HitPayload) {
    this.hit = hit;
    for (const item of hit.items) {
      this.values.set(item.item_id, 50);
    }
  }

  setSlider(itemId: string, value: number): void {
    if (!this.values.has(itemId)) {
      throw new Error(`unknown item ${itemId}`);
    }
    if (!Number.isFinite(value)) {
      throw new Error(`slider value must be a number, got ${value}`);
    }
    if (this.submitted) {
      return; // completed HITs are immutable
    }
    const clamped = Math.min(100, Math.max(0, Math.round(value)));
    this.values.set(itemId, clamped);
    this.touched.add(itemId);
  }

  slider(itemId: string): number {
    const value = this.values.get(itemId);
    if (value === undefined) throw new Error(`unknown item ${itemId}`);
    return value;
  }

  get allTouched(): boolean {
    return this.touched.size === this.hit.items.length;
  }

  get canSubmit(): boolean {
    return this.allTouched && !this.submitted;
  }

  /** Scores in presentation order, exactly as the sliders stand. */
  get scores(): number[] {
    return this.hit.items.map((item) => this.slider(item.item_id));
  }

  /** Live ranking: items by slider value, best first; ties keep
   * presentation order. */
  ranking(): HitItem[] {
    return [...this.hit.items]
      .map((item, index) => ({ item, index, value: this.slider(item.item_id) }))
      .sort((a, b) => b.value - a.value || a.index - b.index)
      .map((entry) => entry.item);
  }

  markSubmitted(): void {
    this.submitted = true;
  }
}
