import { describe, expect, it } from "vitest";

import { CommandFeed, HeldKeys } from "../src/input.js";

describe("HeldKeys", () => {
  it("tracks held state, not keypress events", () => {
    const keys = new HeldKeys();
    expect(keys.keyEvent("ArrowUp", true)).toBe(true);
    // OS auto-repeat delivers more keydowns; held state must not flicker
    keys.keyEvent("ArrowUp", true);
    keys.keyEvent("ArrowUp", true);
    expect(keys.snapshot().up).toBe(true);
    keys.keyEvent("ArrowUp", false);
    expect(keys.snapshot().up).toBe(false);
  });

  it("ignores keys it does not drive with", () => {
    const keys = new HeldKeys();
    expect(keys.keyEvent("KeyW", true)).toBe(false);
    expect(keys.keyEvent(" ", true)).toBe(false);
    expect(keys.snapshot()).toEqual({
      up: false, down: false, left: false, right: false,
    });
  });

  it("reports simultaneous opposing keys as both held", () => {
    const keys = new HeldKeys();
    keys.keyEvent("ArrowUp", true);
    keys.keyEvent("ArrowDown", true);
    const snap = keys.snapshot();
    expect(snap.up).toBe(true);
    expect(snap.down).toBe(true);
  });

  it("releaseAll clears everything (window blur safety)", () => {
    const keys = new HeldKeys();
    keys.keyEvent("ArrowLeft", true);
    keys.keyEvent("ArrowUp", true);
    keys.releaseAll();
    expect(keys.snapshot()).toEqual({
      up: false, down: false, left: false, right: false,
    });
  });

  it("snapshot is a copy, not a live view", () => {
    const keys = new HeldKeys();
    const snap = keys.snapshot();
    keys.keyEvent("ArrowUp", true);
    expect(snap.up).toBe(false);
  });
});

describe("CommandFeed", () => {
  it("holds ArrowUp across 5 ticks: 5 frames, up=true, seq +1 each", () => {
    const keys = new HeldKeys();
    keys.keyEvent("ArrowUp", true);
    const feed = new CommandFeed(keys);
    const frames = [0, 1, 2, 3, 4].map(() => feed.next());
    expect(frames.map((f) => f.seq)).toEqual([1, 2, 3, 4, 5]);
    for (const f of frames) {
      expect(f.type).toBe("command");
      expect(f.up).toBe(true);
      expect(f.down).toBe(false);
    }
  });

  it("still emits all-false frames when nothing is held", () => {
    const feed = new CommandFeed(new HeldKeys());
    const f = feed.next();
    expect(f).toEqual({
      type: "command", up: false, down: false, left: false, right: false,
      seq: 1,
    });
  });

  it("seq strictly increases across changing inputs", () => {
    const keys = new HeldKeys();
    const feed = new CommandFeed(keys);
    const seqs: number[] = [];
    for (let i = 0; i < 50; i++) {
      keys.keyEvent("ArrowLeft", i % 3 === 0);
      keys.keyEvent("ArrowUp", i % 2 === 0);
      seqs.push(feed.next().seq);
    }
    for (let i = 1; i < seqs.length; i++) {
      expect(seqs[i]!).toBeGreaterThan(seqs[i - 1]!);
    }
    expect(feed.lastSeq).toBe(50);
  });
});
