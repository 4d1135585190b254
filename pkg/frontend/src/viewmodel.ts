/** Client-side session state: what the UI is allowed to show.
 *
 * Only server-confirmed frames mutate the model; there is no client-side
 * prediction.  The displayed round counter never goes backwards except
 * through an explicit, user-initiated reset, so a stale or reordered state
 * frame can never make the picture jump back in time.
 */

import type {
  ResultFrame, ScenarioDesc, ServerFrame, StateFrame,
} from "./protocol.js";

export type ConnectionStatus =
  | "connecting"   // socket opening or hello not yet received
  | "live"         // episode running
  | "ended"        // result received, input disabled
  | "closed"       // connection lost; offer reconnect, never auto-retry
  | "error";       // malformed frame; session is poisoned

export class ViewModel {
  status: ConnectionStatus = "connecting";
  scenario: ScenarioDesc | null = null;
  mode: "realtime" | "lockstep" | null = null;
  seed = 0;
  robotKind = "";
  humanKind = "";
  tick: StateFrame | null = null;
  result: ResultFrame | null = null;
  /** Transient server error messages (bad input etc.), newest last. */
  notices: string[] = [];
  lastError: string | null = null;
  private resetArmed = false;

  /** True while driving input should be sampled and sent. */
  get inputEnabled(): boolean {
    return this.status === "live" && this.humanKind === "remote";
  }

  get shieldActive(): boolean {
    return this.tick?.decision === "backup";
  }

  /** Call before sending a reset so the round-0 frame is accepted. */
  expectReset(): void {
    this.resetArmed = true;
  }

  applyFrame(frame: ServerFrame): void {
    if (this.status === "error") return;
    switch (frame.type) {
      case "hello":
        this.scenario = frame.scenario;
        this.mode = frame.mode;
        this.seed = frame.seed;
        this.robotKind = frame.robot;
        this.humanKind = frame.human;
        this.status = "live";
        break;
      case "state":
        if (this.resetArmed && frame.round === 0) {
          this.resetArmed = false;
          this.tick = frame;
          this.result = null;
          this.status = "live";
        } else if (this.tick === null || frame.round >= this.tick.round) {
          this.tick = frame;
        }
        break;
      case "result":
        this.result = frame;
        this.status = "ended";
        break;
      case "error":
        this.notices.push(frame.message);
        break;
    }
  }

  /** A frame failed to parse: poison the session, render nothing new. */
  failProtocol(message: string): void {
    this.status = "error";
    this.lastError = message;
  }

  connectionLost(): void {
    if (this.status === "live" || this.status === "connecting") {
      this.status = "closed";
    }
  }
}
