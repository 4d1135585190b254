/** Browser entry point: DOM wiring for the live view and arrow-key driving. */

import { GameClient } from "./client.js";
import { CommandFeed, HeldKeys } from "./input.js";
import { buildDisplayList, drawDisplayList } from "./render.js";
import { ViewModel } from "./viewmodel.js";

const TICK_MS = 100;   // input cadence matches the server's 10 Hz tick

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("view");
const ctx = canvas.getContext("2d");
if (ctx === null) throw new Error("no 2d canvas context");
const urlInput = el<HTMLInputElement>("server-url");
const connectBtn = el<HTMLButtonElement>("connect");
const resetBtn = el<HTMLButtonElement>("reset");
const statusLine = el<HTMLElement>("status");
const banner = el<HTMLElement>("banner");

let vm = new ViewModel();
let client: GameClient | null = null;
let inputTimer: number | null = null;
const keys = new HeldKeys();
let feed = new CommandFeed(keys);

function setBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.style.display = text === null ? "none" : "block";
}

function statusText(): string {
  switch (vm.status) {
    case "connecting": return "connecting…";
    case "live":
      return `${vm.mode} | robot ${vm.robotKind} | human ${vm.humanKind} | seed ${vm.seed}`;
    case "ended": return `episode over: ${vm.result?.outcome ?? "?"}`;
    case "closed": return "disconnected";
    case "error": return `protocol error: ${vm.lastError ?? "?"}`;
  }
}

function stopInput(): void {
  if (inputTimer !== null) {
    window.clearInterval(inputTimer);
    inputTimer = null;
  }
}

function connect(): void {
  client?.close();
  stopInput();
  keys.releaseAll();
  vm = new ViewModel();
  feed = new CommandFeed(keys);
  setBanner(null);
  const socket = new WebSocket(urlInput.value);
  client = new GameClient(socket, vm, {
    onClose: () => {
      stopInput();
      if (vm.status === "closed") {
        setBanner("connection lost; press Connect to rejoin");
      } else if (vm.status === "error") {
        setBanner(`protocol error: ${vm.lastError ?? "malformed frame"}`);
      }
    },
  });
  // one command per tick, even all-false, so the server never starves
  inputTimer = window.setInterval(() => {
    if (vm.inputEnabled && client !== null) client.send(feed.next());
  }, TICK_MS);
}

connectBtn.addEventListener("click", connect);
resetBtn.addEventListener("click", () => {
  client?.reset();
});

window.addEventListener("keydown", (ev) => {
  if (keys.keyEvent(ev.key, true)) ev.preventDefault();
});
window.addEventListener("keyup", (ev) => {
  if (keys.keyEvent(ev.key, false)) ev.preventDefault();
});
window.addEventListener("blur", () => keys.releaseAll());

function paint(): void {
  if (vm.scenario !== null) {
    const dl = buildDisplayList(vm.scenario, vm.tick, vm.result,
                                { width: canvas.width, height: canvas.height });
    drawDisplayList(ctx!, dl);
  }
  statusLine.textContent = statusText();
  window.requestAnimationFrame(paint);
}

window.requestAnimationFrame(paint);
