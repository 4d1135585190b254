/** Session client: socket plumbing between the wire protocol and a ViewModel.
 *
 * Works with any WebSocket-shaped object (the browser's, or the `ws`
 * package under node for headless tests), so the exact same code path is
 * what the conformance suite exercises.  The client never advances
 * simulation state itself; it only forwards frames.
 */

import { encodeClientFrame, parseServerFrame, ProtocolError } from "./protocol.js";
import type { ClientFrame, ServerFrame } from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open", listener: () => void): void;
  addEventListener(type: "message", listener: (ev: { data: unknown }) => void): void;
  addEventListener(type: "close", listener: () => void): void;
  addEventListener(type: "error", listener: () => void): void;
}

export interface ClientHooks {
  /** Called after the view model has absorbed each frame. */
  onFrame?: (frame: ServerFrame) => void;
  onClose?: () => void;
}

export class GameClient {
  constructor(
    private readonly socket: SocketLike,
    private readonly vm: ViewModel,
    private readonly hooks: ClientHooks = {},
  ) {
    socket.addEventListener("message", (ev) => this.onMessage(ev.data));
    socket.addEventListener("close", () => {
      this.vm.connectionLost();
      this.hooks.onClose?.();
    });
    socket.addEventListener("error", () => {
      this.vm.connectionLost();
    });
  }

  private onMessage(data: unknown): void {
    const text = typeof data === "string" ? data : String(data);
    let frame: ServerFrame;
    try {
      frame = parseServerFrame(text);
    } catch (err) {
      const msg = err instanceof ProtocolError ? err.message : String(err);
      this.vm.failProtocol(msg);
      this.socket.close();
      return;
    }
    this.vm.applyFrame(frame);
    this.hooks.onFrame?.(frame);
  }

  send(frame: ClientFrame): void {
    this.socket.send(encodeClientFrame(frame));
  }

  step(): void {
    this.send({ type: "step" });
  }

  reset(seed?: number): void {
    this.vm.expectReset();
    this.send(seed === undefined ? { type: "reset" } : { type: "reset", seed });
  }

  close(): void {
    this.socket.close();
  }
}
