/** Scene construction and canvas painting.
 *
 * Rendering happens in two stages.  `buildDisplayList` is a pure function
 * from (scenario, latest state, result) to a JSON-serializable list of
 * drawing primitives in world coordinates; it is what the golden tests pin
 * down.  `drawDisplayList` interprets that list onto a 2d canvas context
 * and owns the world-to-screen transform.  Keeping the painter trivial
 * means a stored display list is a faithful reference render.
 */

import type { ResultFrame, ScenarioDesc, StateFrame } from "./protocol.js";

export const ROBOT_COLOR = "#d62728";   // the robot car is red
export const HUMAN_COLOR = "#1f77b4";   // the human car is blue

const BG = "#10131a";
const ROAD = "#2b2f3a";
const LANE_DASH = "#4a5162";
const WALL = "#8892a6";
const ZONE_FILL = "rgba(255,160,0,0.18)";
const ZONE_EDGE = "#ffa000";
const TEXT = "#e6e9f2";
const TEXT_DIM = "#9aa3b5";

export interface ViewportItem {
  kind: "viewport";
  world: [number, number, number, number];
  width: number;
  height: number;
}

export interface ClearItem {
  kind: "clear";
  color: string;
}

export interface PolylineItem {
  kind: "polyline";
  points: [number, number][];
  color: string;
  widthWorld: number;
  dash?: [number, number];
}

export interface ZoneItem {
  kind: "zone";
  rect: [number, number, number, number];
  fill: string;
  edge: string;
}

export interface DiskItem {
  kind: "disk";
  x: number;
  y: number;
  r: number;
  fill?: string;
  edge?: string;
  dash?: [number, number];
}

export interface CarItem {
  kind: "car";
  x: number;
  y: number;
  theta: number;
  length: number;
  width: number;
  color: string;
}

export interface RingItem {
  kind: "ring";
  x: number;
  y: number;
  r: number;
  color: string;
}

export interface HudTextItem {
  kind: "hud";
  /** Fractions of the canvas size, origin top left. */
  fx: number;
  fy: number;
  text: string;
  color: string;
  size: number;
  align: "left" | "center";
}

export interface OverlayItem {
  kind: "overlay";
  color: string;
}

export type DisplayItem =
  | ViewportItem | ClearItem | PolylineItem | ZoneItem | DiskItem
  | CarItem | RingItem | HudTextItem | OverlayItem;

export type DisplayList = DisplayItem[];

export interface ViewSize {
  width: number;
  height: number;
}

function fmt(v: number, digits = 1): string {
  return v.toFixed(digits);
}

export function buildDisplayList(
  scenario: ScenarioDesc,
  tick: StateFrame | null,
  result: ResultFrame | null,
  view: ViewSize,
): DisplayList {
  const dl: DisplayList = [
    { kind: "viewport", world: scenario.canvas, width: view.width,
      height: view.height },
    { kind: "clear", color: BG },
  ];

  for (const lane of scenario.lanes) {
    dl.push({ kind: "polyline", points: lane.points, color: ROAD,
              widthWorld: lane.width });
  }
  for (const lane of scenario.lanes) {
    dl.push({ kind: "polyline", points: lane.points, color: LANE_DASH,
              widthWorld: 0.12, dash: [1.2, 1.8] });
  }
  for (const wall of scenario.walls) {
    dl.push({ kind: "polyline", points: wall, color: WALL, widthWorld: 0.5 });
  }
  for (const z of scenario.no_stop_zones) {
    dl.push({ kind: "zone", rect: z, fill: ZONE_FILL, edge: ZONE_EDGE });
  }

  dl.push({ kind: "disk", x: scenario.robot_goal.x, y: scenario.robot_goal.y,
            r: scenario.robot_goal.radius, edge: ROBOT_COLOR, dash: [0.8, 0.6] });
  dl.push({ kind: "disk", x: scenario.human_goal.x, y: scenario.human_goal.y,
            r: scenario.human_goal.radius, edge: HUMAN_COLOR, dash: [0.8, 0.6] });
  for (const [x, y] of scenario.robot_subgoals) {
    dl.push({ kind: "disk", x, y, r: 0.3, fill: "rgba(214,39,40,0.5)" });
  }

  if (tick !== null) {
    dl.push({ kind: "car", x: tick.human.x, y: tick.human.y,
              theta: tick.human.theta, length: scenario.human_body.length,
              width: scenario.human_body.width, color: HUMAN_COLOR });
    dl.push({ kind: "car", x: tick.robot.x, y: tick.robot.y,
              theta: tick.robot.theta, length: scenario.robot_body.length,
              width: scenario.robot_body.width, color: ROBOT_COLOR });
    if (tick.decision === "backup") {
      dl.push({ kind: "ring", x: tick.robot.x, y: tick.robot.y,
                r: scenario.robot_body.length * 1.1, color: ROBOT_COLOR });
      dl.push({ kind: "hud", fx: 0.5, fy: 0.07, text: "SHIELD",
                color: ROBOT_COLOR, size: 22, align: "center" });
    }
    dl.push({
      kind: "hud", fx: 0.02, fy: 0.05,
      text: `${scenario.name}  round ${tick.round}  t=${fmt(tick.time_s)}s`,
      color: TEXT, size: 14, align: "left",
    });
    dl.push({
      kind: "hud", fx: 0.02, fy: 0.095,
      text: `robot v=${fmt(tick.robot.v)}  human v=${fmt(tick.human.v)}  ` +
            `min dist=${fmt(tick.min_center_dist)}  ` +
            `backups=${tick.backup_count}`,
      color: TEXT_DIM, size: 12, align: "left",
    });
  } else {
    dl.push({ kind: "hud", fx: 0.5, fy: 0.5, text: "waiting for server",
              color: TEXT_DIM, size: 16, align: "center" });
  }

  if (result !== null) {
    dl.push({ kind: "overlay", color: "rgba(8,10,14,0.72)" });
    dl.push({ kind: "hud", fx: 0.5, fy: 0.42,
              text: result.outcome.toUpperCase(),
              color: result.outcome === "goal" ? "#4caf50" : "#ff5252",
              size: 34, align: "center" });
    dl.push({
      kind: "hud", fx: 0.5, fy: 0.52,
      text: `time ${fmt(result.time_s)}s  rounds ${result.rounds}  ` +
            `min dist ${fmt(result.min_center_dist, 2)}`,
      color: TEXT, size: 15, align: "center",
    });
    dl.push({
      kind: "hud", fx: 0.5, fy: 0.58,
      text: `shield overrides ${result.backup_count}  ` +
            `zone stops ${result.stops_in_zone}`,
      color: TEXT_DIM, size: 13, align: "center",
    });
    dl.push({ kind: "hud", fx: 0.5, fy: 0.66, text: "press Reset to go again",
              color: TEXT_DIM, size: 13, align: "center" });
  }

  return dl;
}

interface Transform {
  scale: number;
  ox: number;
  oy: number;
  height: number;
}

function makeTransform(vp: ViewportItem): Transform {
  const [x0, y0, x1, y1] = vp.world;
  const margin = 12;
  const scale = Math.min(
    (vp.width - 2 * margin) / (x1 - x0),
    (vp.height - 2 * margin) / (y1 - y0),
  );
  const ox = (vp.width - (x1 - x0) * scale) / 2 - x0 * scale;
  const oy = (vp.height - (y1 - y0) * scale) / 2 - y0 * scale;
  return { scale, ox, oy, height: vp.height };
}

function sx(t: Transform, x: number): number {
  return x * t.scale + t.ox;
}

function sy(t: Transform, y: number): number {
  // world y points up, canvas y points down
  return t.height - (y * t.scale + t.oy);
}

export function drawDisplayList(
  ctx: CanvasRenderingContext2D,
  dl: DisplayList,
): void {
  const vp = dl.find((i) => i.kind === "viewport") as ViewportItem | undefined;
  if (vp === undefined) return;
  const t = makeTransform(vp);
  for (const item of dl) {
    switch (item.kind) {
      case "viewport":
        break;
      case "clear":
        ctx.fillStyle = item.color;
        ctx.fillRect(0, 0, vp.width, vp.height);
        break;
      case "polyline": {
        ctx.strokeStyle = item.color;
        ctx.lineWidth = item.widthWorld * t.scale;
        ctx.lineCap = "round";
        ctx.setLineDash(item.dash ? item.dash.map((d) => d * t.scale) : []);
        ctx.beginPath();
        item.points.forEach(([x, y], i) => {
          if (i === 0) ctx.moveTo(sx(t, x), sy(t, y));
          else ctx.lineTo(sx(t, x), sy(t, y));
        });
        ctx.stroke();
        ctx.setLineDash([]);
        break;
      }
      case "zone": {
        const [x0, y0, x1, y1] = item.rect;
        const px = sx(t, x0);
        const py = sy(t, y1);
        const w = (x1 - x0) * t.scale;
        const h = (y1 - y0) * t.scale;
        ctx.fillStyle = item.fill;
        ctx.fillRect(px, py, w, h);
        ctx.strokeStyle = item.edge;
        ctx.lineWidth = 1.5;
        ctx.strokeRect(px, py, w, h);
        break;
      }
      case "disk":
        ctx.beginPath();
        ctx.arc(sx(t, item.x), sy(t, item.y), item.r * t.scale, 0, 2 * Math.PI);
        if (item.fill) {
          ctx.fillStyle = item.fill;
          ctx.fill();
        }
        if (item.edge) {
          ctx.strokeStyle = item.edge;
          ctx.lineWidth = 1.5;
          ctx.setLineDash(item.dash ? item.dash.map((d) => d * t.scale) : []);
          ctx.stroke();
          ctx.setLineDash([]);
        }
        break;
      case "car": {
        ctx.save();
        ctx.translate(sx(t, item.x), sy(t, item.y));
        ctx.rotate(-item.theta);
        const l = item.length * t.scale;
        const w = item.width * t.scale;
        ctx.fillStyle = item.color;
        ctx.fillRect(-l / 2, -w / 2, l, w);
        // pale nose wedge shows the heading
        ctx.fillStyle = "rgba(255,255,255,0.75)";
        ctx.beginPath();
        ctx.moveTo(l / 2, 0);
        ctx.lineTo(l / 5, -w / 2);
        ctx.lineTo(l / 5, w / 2);
        ctx.closePath();
        ctx.fill();
        ctx.restore();
        break;
      }
      case "ring":
        ctx.beginPath();
        ctx.arc(sx(t, item.x), sy(t, item.y), item.r * t.scale, 0, 2 * Math.PI);
        ctx.strokeStyle = item.color;
        ctx.lineWidth = 3;
        ctx.stroke();
        break;
      case "hud":
        ctx.fillStyle = item.color;
        ctx.font = `${item.size}px system-ui, sans-serif`;
        ctx.textAlign = item.align;
        ctx.fillText(item.text, item.fx * vp.width, item.fy * vp.height);
        break;
      case "overlay":
        ctx.fillStyle = item.color;
        ctx.fillRect(0, 0, vp.width, vp.height);
        break;
    }
  }
}
