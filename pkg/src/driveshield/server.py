"""WebSocket game server and the JSON frame protocol.

One connection = one independent session.  The server greets with a
``hello`` frame describing the scenario, then emits a ``state`` frame for
round 0 and one per completed round, and a single ``result`` frame when the
episode ends.  Clients send ``command`` frames (remote driving input),
``step`` frames (lockstep mode only) and ``reset`` frames.  All frames are
JSON objects with a ``type`` field; floats are rounded to six decimals.

In realtime mode the server advances one round per tick (default 10 Hz) and
never tries to catch up after a stall, so a slow client cannot trigger a
burst of backlogged rounds.  In lockstep mode rounds advance only on
``step``, which is what a deterministic client replay wants.
"""

from __future__ import annotations

import asyncio
import json

from .harness import RunConfig, Episode, episode_rngs, make_human, make_robot
from .humans import RemoteCommand, RemoteConfig, RemoteDriver
from .scenarios import Scenario, builtin
from .params import PhysicalParams

PROTOCOL_VERSION = 1


def _r6(v: float) -> float:
    return round(float(v), 6)


def _agent_payload(a) -> dict:
    return {"x": _r6(a.x), "y": _r6(a.y), "v": _r6(a.v), "theta": _r6(a.theta)}


def scenario_payload(s: Scenario) -> dict:
    p = s.params
    return {
        "name": s.name,
        "episode_cap": s.episode_cap,
        "tau": _r6(p.tau),
        "d_safe": _r6(p.d_safe),
        "canvas": [_r6(c) for c in s.canvas],
        "robot_goal": {"x": _r6(s.robot_goal.x), "y": _r6(s.robot_goal.y),
                       "radius": _r6(s.robot_goal.radius)},
        "human_goal": {"x": _r6(s.human_goal.x), "y": _r6(s.human_goal.y),
                       "radius": _r6(s.human_goal.radius)},
        "robot_body": {"length": _r6(p.robot.body_length),
                       "width": _r6(p.robot.body_width)},
        "human_body": {"length": _r6(p.human.body_length),
                       "width": _r6(p.human.body_width)},
        "robot_subgoals": [[_r6(x), _r6(y)] for x, y in s.robot_subgoals],
        "lanes": [{"width": _r6(l.width),
                   "points": [[_r6(x), _r6(y)] for x, y in l.points]}
                  for l in s.lanes],
        "walls": [[[_r6(x), _r6(y)] for x, y in w] for w in s.walls],
        "no_stop_zones": [[_r6(c) for c in z] for z in s.no_stop_zones],
        "pull_over_lane_y": None if s.pull_over_lane_y is None
                            else _r6(s.pull_over_lane_y),
    }


class Session:
    """Episode plus the controllers behind it, rebuildable on reset."""

    def __init__(self, scenario_name: str, robot_kind: str, human_kind: str,
                 seed: int) -> None:
        self.scenario_name = scenario_name
        self.robot_kind = robot_kind
        self.human_kind = human_kind
        self.seed = seed
        self.scenario = builtin(scenario_name)
        self._build()

    def _build(self) -> None:
        cfg = RunConfig(self.scenario_name, self.robot_kind, self.human_kind,
                        self.seed)
        rng_r, rng_h = episode_rngs(cfg)
        robot = make_robot(self.robot_kind, self.scenario, rng_r)
        if self.human_kind == "remote":
            self.remote: RemoteDriver | None = RemoteDriver(
                RemoteConfig(), self.scenario.params)
            human = self.remote
        else:
            self.remote = None
            human = make_human(self.human_kind, self.scenario, rng_h)
        self.episode = Episode(self.scenario, robot, human)

    def reset(self, seed: int) -> None:
        self.seed = seed
        self._build()

    def submit_command(self, msg: dict) -> bool:
        if self.remote is None:
            return False
        cmd = RemoteCommand(
            up=bool(msg.get("up")), down=bool(msg.get("down")),
            left=bool(msg.get("left")), right=bool(msg.get("right")),
            seq=int(msg.get("seq", 0)))
        return self.remote.submit(cmd)

    def hello_frame(self, mode: str, tick_hz: float) -> dict:
        return {"type": "hello", "version": PROTOCOL_VERSION, "mode": mode,
                "tick_hz": _r6(tick_hz), "seed": self.seed,
                "robot": self.robot_kind, "human": self.human_kind,
                "scenario": scenario_payload(self.scenario)}

    def state_frame(self) -> dict:
        ep = self.episode
        decision = ep.last_decision.value if ep.last_decision else None
        outcome = ep.outcome.value if ep.outcome else None
        return {"type": "state", "round": ep.rounds, "time_s": _r6(ep.time_s),
                "robot": _agent_payload(ep.state.robot),
                "human": _agent_payload(ep.state.human),
                "decision": decision, "outcome": outcome,
                "min_center_dist": _r6(ep.min_center_dist),
                "backup_count": ep.backup_count,
                "stops_in_zone": ep.stops_in_zone}

    def result_frame(self) -> dict:
        ep = self.episode
        return {"type": "result", "outcome": ep.outcome.value,
                "rounds": ep.rounds, "turns": ep.turns,
                "time_s": _r6(ep.time_s),
                "min_center_dist": _r6(ep.min_center_dist),
                "backup_count": ep.backup_count,
                "stops_in_zone": ep.stops_in_zone, "seed": self.seed}


def record_frames(scenario_name: str, robot_kind: str, human_kind: str,
                  seed: int, max_rounds: int | None = None) -> list[dict]:
    """Run an episode offline and return the frames a live client would see."""
    session = Session(scenario_name, robot_kind, human_kind, seed)
    frames = [session.hello_frame("lockstep", 0.0), session.state_frame()]
    while not session.episode.done:
        if max_rounds is not None and session.episode.rounds >= max_rounds:
            break
        session.episode.advance()
        frames.append(session.state_frame())
    if session.episode.done:
        frames.append(session.result_frame())
    return frames


def _encode(frame: dict) -> str:
    return json.dumps(frame, separators=(",", ":"))


class GameServer:
    def __init__(self, scenario: str, robot: str = "shield",
                 human: str = "remote", host: str = "127.0.0.1",
                 port: int = 8700, tick_hz: float = 10.0,
                 lockstep: bool = False, seed: int = 0) -> None:
        builtin(scenario)  # fail fast on unknown names
        self.scenario = scenario
        self.robot = robot
        self.human = human
        self.host = host
        self.port = port
        self.tick_hz = tick_hz
        self.lockstep = lockstep
        self.seed = seed
        self._server = None

    @property
    def mode(self) -> str:
        return "lockstep" if self.lockstep else "realtime"

    async def _handle(self, ws) -> None:
        session = Session(self.scenario, self.robot, self.human, self.seed)
        outbox: asyncio.Queue = asyncio.Queue()
        steps: asyncio.Queue = asyncio.Queue()
        outbox.put_nowait(session.hello_frame(self.mode, self.tick_hz))
        outbox.put_nowait(session.state_frame())

        def advance_and_emit() -> None:
            if session.episode.done:
                return
            session.episode.advance()
            outbox.put_nowait(session.state_frame())
            if session.episode.done:
                outbox.put_nowait(session.result_frame())

        async def writer() -> None:
            while True:
                frame = await outbox.get()
                await ws.send(_encode(frame))

        async def ticker() -> None:
            if self.lockstep:
                while True:
                    await steps.get()
                    advance_and_emit()
            else:
                loop = asyncio.get_running_loop()
                period = 1.0 / self.tick_hz
                next_t = loop.time() + period
                while True:
                    delay = next_t - loop.time()
                    if delay > 0:
                        await asyncio.sleep(delay)
                        next_t += period
                    else:
                        # stalled; resync instead of bursting missed rounds
                        next_t = loop.time() + period
                    advance_and_emit()

        tasks = [asyncio.ensure_future(writer()), asyncio.ensure_future(ticker())]
        try:
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                except ValueError:
                    outbox.put_nowait({"type": "error", "message": "invalid JSON"})
                    continue
                kind = msg.get("type")
                if kind == "command":
                    if session.remote is None:
                        outbox.put_nowait({"type": "error",
                                           "message": "human driver is not remote"})
                    else:
                        session.submit_command(msg)  # stale seq is dropped
                elif kind == "step":
                    if self.lockstep:
                        steps.put_nowait(None)
                    else:
                        outbox.put_nowait({"type": "error",
                                           "message": "step is lockstep-only"})
                elif kind == "reset":
                    try:
                        seed = int(msg.get("seed", session.seed))
                    except (TypeError, ValueError):
                        outbox.put_nowait({"type": "error",
                                           "message": "reset seed must be an integer"})
                        continue
                    session.reset(seed)
                    outbox.put_nowait(session.state_frame())
                else:
                    outbox.put_nowait({"type": "error",
                                       "message": f"unknown frame type {kind!r}"})
        finally:
            for t in tasks:
                t.cancel()

    async def start(self) -> None:
        import websockets
        self._server = await websockets.serve(self._handle, self.host, self.port)
        if self.port == 0:
            self.port = self._server.sockets[0].getsockname()[1]

    async def close(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    async def serve_forever(self) -> None:
        await self.start()
        try:
            await asyncio.Future()
        finally:
            await self.close()


def serve(scenario: str, robot: str, human: str, host: str, port: int,
          tick_hz: float, lockstep: bool, seed: int) -> None:
    server = GameServer(scenario, robot, human, host, port, tick_hz,
                        lockstep, seed)
    print(f"driveshield server on ws://{host}:{port} "
          f"({scenario}, robot={robot}, human={human}, {server.mode})")
    try:
        asyncio.run(server.serve_forever())
    except KeyboardInterrupt:
        pass
