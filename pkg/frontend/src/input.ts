/** Held-key tracking and the per-tick command feed.
 *
 * Driving input is the held state of the four arrow keys, sampled once per
 * tick, never keypress events, so OS key repeat has no effect.  A command
 * frame goes out every tick even when nothing is held: the explicit
 * all-false coast keeps the server's input-starvation timeout from firing.
 */

import type { CommandFrame } from "./protocol.js";

export interface KeySnapshot {
  up: boolean;
  down: boolean;
  left: boolean;
  right: boolean;
}

const KEY_MAP: Record<string, keyof KeySnapshot> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
};

export class HeldKeys {
  private held: KeySnapshot = {
    up: false, down: false, left: false, right: false,
  };

  /** Feed one keyboard event; returns false for keys we don't handle. */
  keyEvent(code: string, down: boolean): boolean {
    const name = KEY_MAP[code];
    if (name === undefined) return false;
    this.held[name] = down;
    return true;
  }

  releaseAll(): void {
    this.held = { up: false, down: false, left: false, right: false };
  }

  snapshot(): KeySnapshot {
    return { ...this.held };
  }
}

/** Turns key snapshots into command frames with a strictly increasing seq. */
export class CommandFeed {
  private seq = 0;

  constructor(private readonly keys: HeldKeys) {}

  next(): CommandFrame {
    this.seq += 1;
    return { type: "command", ...this.keys.snapshot(), seq: this.seq };
  }

  get lastSeq(): number {
    return this.seq;
  }
}
