/** Frame types and codecs for the game server's JSON wire protocol.
 *
 * Field names and shapes mirror the server exactly (see docs/protocol.md
 * in the repository root).  The parser is strict: a frame that is not
 * valid JSON, has no known `type`, or is missing a required field throws
 * ProtocolError rather than yielding a partially-filled object.
 */

export const PROTOCOL_VERSION = 1;

export interface AgentState {
  x: number;
  y: number;
  v: number;
  theta: number;
}

export interface GoalDisk {
  x: number;
  y: number;
  radius: number;
}

export interface BodyDims {
  length: number;
  width: number;
}

export interface LaneDesc {
  width: number;
  points: [number, number][];
}

export interface ScenarioDesc {
  name: string;
  episode_cap: number;
  tau: number;
  d_safe: number;
  canvas: [number, number, number, number];
  robot_goal: GoalDisk;
  human_goal: GoalDisk;
  robot_body: BodyDims;
  human_body: BodyDims;
  robot_subgoals: [number, number][];
  lanes: LaneDesc[];
  walls: [number, number][][];
  no_stop_zones: [number, number, number, number][];
  pull_over_lane_y: number | null;
}

export interface HelloFrame {
  type: "hello";
  version: number;
  mode: "realtime" | "lockstep";
  tick_hz: number;
  seed: number;
  robot: string;
  human: string;
  scenario: ScenarioDesc;
}

export type Decision = "inner" | "backup" | null;
export type Outcome = "goal" | "unsafe" | "timeout";

export interface StateFrame {
  type: "state";
  round: number;
  time_s: number;
  robot: AgentState;
  human: AgentState;
  decision: Decision;
  outcome: Outcome | null;
  min_center_dist: number;
  backup_count: number;
  stops_in_zone: number;
}

export interface ResultFrame {
  type: "result";
  outcome: Outcome;
  rounds: number;
  turns: number;
  time_s: number;
  min_center_dist: number;
  backup_count: number;
  stops_in_zone: number;
  seed: number;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type ServerFrame = HelloFrame | StateFrame | ResultFrame | ErrorFrame;

export interface CommandFrame {
  type: "command";
  up: boolean;
  down: boolean;
  left: boolean;
  right: boolean;
  seq: number;
}

export interface StepFrame {
  type: "step";
}

export interface ResetFrame {
  type: "reset";
  seed?: number;
}

export type ClientFrame = CommandFrame | StepFrame | ResetFrame;

export class ProtocolError extends Error {}

function fail(msg: string): never {
  throw new ProtocolError(msg);
}

function obj(v: unknown, what: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) {
    fail(`${what} is not an object`);
  }
  return v as Record<string, unknown>;
}

function num(o: Record<string, unknown>, key: string, what: string): number {
  const v = o[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    fail(`${what}.${key} is not a finite number`);
  }
  return v;
}

function str(o: Record<string, unknown>, key: string, what: string): string {
  const v = o[key];
  if (typeof v !== "string") fail(`${what}.${key} is not a string`);
  return v;
}

function pair(v: unknown, what: string): [number, number] {
  if (!Array.isArray(v) || v.length !== 2 ||
      typeof v[0] !== "number" || typeof v[1] !== "number") {
    fail(`${what} is not an [x, y] pair`);
  }
  return [v[0], v[1]];
}

function agent(v: unknown, what: string): AgentState {
  const o = obj(v, what);
  return {
    x: num(o, "x", what), y: num(o, "y", what),
    v: num(o, "v", what), theta: num(o, "theta", what),
  };
}

function goal(v: unknown, what: string): GoalDisk {
  const o = obj(v, what);
  return {
    x: num(o, "x", what), y: num(o, "y", what),
    radius: num(o, "radius", what),
  };
}

function body(v: unknown, what: string): BodyDims {
  const o = obj(v, what);
  return { length: num(o, "length", what), width: num(o, "width", what) };
}

function scenario(v: unknown): ScenarioDesc {
  const o = obj(v, "scenario");
  const canvas = o["canvas"];
  if (!Array.isArray(canvas) || canvas.length !== 4 ||
      canvas.some((c) => typeof c !== "number")) {
    fail("scenario.canvas is not [x0, y0, x1, y1]");
  }
  const lanesRaw = o["lanes"];
  if (!Array.isArray(lanesRaw)) fail("scenario.lanes is not a list");
  const lanes = lanesRaw.map((l, i) => {
    const lo = obj(l, `scenario.lanes[${i}]`);
    const pts = lo["points"];
    if (!Array.isArray(pts)) fail(`scenario.lanes[${i}].points is not a list`);
    return {
      width: num(lo, "width", `scenario.lanes[${i}]`),
      points: pts.map((p, j) => pair(p, `scenario.lanes[${i}].points[${j}]`)),
    };
  });
  const wallsRaw = o["walls"];
  if (!Array.isArray(wallsRaw)) fail("scenario.walls is not a list");
  const walls = wallsRaw.map((w, i) => {
    if (!Array.isArray(w)) fail(`scenario.walls[${i}] is not a list`);
    return w.map((p, j) => pair(p, `scenario.walls[${i}][${j}]`));
  });
  const zonesRaw = o["no_stop_zones"];
  if (!Array.isArray(zonesRaw)) fail("scenario.no_stop_zones is not a list");
  const zones = zonesRaw.map((z, i) => {
    if (!Array.isArray(z) || z.length !== 4 ||
        z.some((c) => typeof c !== "number")) {
      fail(`scenario.no_stop_zones[${i}] is not [x0, y0, x1, y1]`);
    }
    return z as [number, number, number, number];
  });
  const subRaw = o["robot_subgoals"];
  if (!Array.isArray(subRaw)) fail("scenario.robot_subgoals is not a list");
  const poy = o["pull_over_lane_y"];
  if (poy !== null && typeof poy !== "number") {
    fail("scenario.pull_over_lane_y is not a number or null");
  }
  return {
    name: str(o, "name", "scenario"),
    episode_cap: num(o, "episode_cap", "scenario"),
    tau: num(o, "tau", "scenario"),
    d_safe: num(o, "d_safe", "scenario"),
    canvas: canvas as [number, number, number, number],
    robot_goal: goal(o["robot_goal"], "scenario.robot_goal"),
    human_goal: goal(o["human_goal"], "scenario.human_goal"),
    robot_body: body(o["robot_body"], "scenario.robot_body"),
    human_body: body(o["human_body"], "scenario.human_body"),
    robot_subgoals: subRaw.map((p, i) => pair(p, `scenario.robot_subgoals[${i}]`)),
    lanes,
    walls,
    no_stop_zones: zones,
    pull_over_lane_y: poy,
  };
}

function parseHello(o: Record<string, unknown>): HelloFrame {
  const mode = str(o, "mode", "hello");
  if (mode !== "realtime" && mode !== "lockstep") {
    fail(`hello.mode ${JSON.stringify(mode)} unknown`);
  }
  const version = num(o, "version", "hello");
  if (version !== PROTOCOL_VERSION) {
    fail(`unsupported protocol version ${version}`);
  }
  return {
    type: "hello",
    version,
    mode,
    tick_hz: num(o, "tick_hz", "hello"),
    seed: num(o, "seed", "hello"),
    robot: str(o, "robot", "hello"),
    human: str(o, "human", "hello"),
    scenario: scenario(o["scenario"]),
  };
}

function decision(v: unknown): Decision {
  if (v === null || v === "inner" || v === "backup") return v;
  fail(`state.decision ${JSON.stringify(v)} unknown`);
}

function outcome(v: unknown, what: string): Outcome {
  if (v === "goal" || v === "unsafe" || v === "timeout") return v;
  fail(`${what} ${JSON.stringify(v)} unknown`);
}

function parseState(o: Record<string, unknown>): StateFrame {
  return {
    type: "state",
    round: num(o, "round", "state"),
    time_s: num(o, "time_s", "state"),
    robot: agent(o["robot"], "state.robot"),
    human: agent(o["human"], "state.human"),
    decision: decision(o["decision"]),
    outcome: o["outcome"] === null ? null : outcome(o["outcome"], "state.outcome"),
    min_center_dist: num(o, "min_center_dist", "state"),
    backup_count: num(o, "backup_count", "state"),
    stops_in_zone: num(o, "stops_in_zone", "state"),
  };
}

function parseResult(o: Record<string, unknown>): ResultFrame {
  return {
    type: "result",
    outcome: outcome(o["outcome"], "result.outcome"),
    rounds: num(o, "rounds", "result"),
    turns: num(o, "turns", "result"),
    time_s: num(o, "time_s", "result"),
    min_center_dist: num(o, "min_center_dist", "result"),
    backup_count: num(o, "backup_count", "result"),
    stops_in_zone: num(o, "stops_in_zone", "result"),
    seed: num(o, "seed", "result"),
  };
}

/** Parse one server frame; throws ProtocolError on anything malformed. */
export function parseServerFrame(text: string): ServerFrame {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    fail("frame is not valid JSON");
  }
  const o = obj(raw, "frame");
  switch (o["type"]) {
    case "hello":
      return parseHello(o);
    case "state":
      return parseState(o);
    case "result":
      return parseResult(o);
    case "error":
      return { type: "error", message: str(o, "message", "error") };
    default:
      fail(`unknown frame type ${JSON.stringify(o["type"])}`);
  }
}

/** Encode a client frame the way the server expects: compact JSON. */
export function encodeClientFrame(frame: ClientFrame): string {
  return JSON.stringify(frame);
}
