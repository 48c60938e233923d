import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("slider debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a drag storm to far fewer calls than events", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 150);
    // 30 events/s for 2 seconds = 60 events, ~33 ms apart
    for (let i = 0; i < 60; i++) {
      push(i);
      vi.advanceTimersByTime(33);
    }
    vi.advanceTimersByTime(200);
    expect(calls.length).toBe(1); // every event re-arms the trailing timer
    expect(calls[0]).toBe(59); // only the latest value is sent
  });

  it("fires once per quiet window with the last arguments", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 150);
    push(1);
    push(2);
    vi.advanceTimersByTime(150);
    push(3);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([2, 3]);
  });

  it("flush fires the pending call immediately", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 150);
    push(7);
    push.flush();
    expect(calls).toEqual([7]);
    push.flush(); // nothing pending: no double fire
    expect(calls).toEqual([7]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 150);
    push(7);
    push.cancel();
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([]);
  });
});
