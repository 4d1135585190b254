"""Builtin driving situations and a line-oriented scenario file format.

File format: ``key = value`` lines grouped under ``[section]`` headers, with
``#`` comments and all numbers serialized to six decimal places.  Two keys
(``name``, ``episode_cap``) precede the first section; the sections are
``[physical]``, ``[robot]``, ``[human]``, ``[geometry]`` and ``[zones]``.
Repeatable keys (``subgoal``, ``lane``, ``wall``, ``no_stop``) appear once
per item, so files stay diff-friendly.

    name = cross
    episode_cap = 600

    [physical]
    tau = 0.100000
    d_safe = 1.000000
    robot_limits = 2.000000 0.785398 5.000000 2.000000 1.000000
    human_limits = 2.000000 0.785398 5.000000 2.000000 1.000000

    [robot]
    init = -36.000000 0.000000 0.000000 0.000000
    goal = 24.000000 0.000000 2.000000
    subgoal = 24.000000 0.000000

    [human]
    init = 0.000000 -25.000000 0.000000 1.570796
    goal = 0.000000 24.000000 2.000000

    [geometry]
    canvas = -40.000000 -30.000000 28.000000 28.000000
    lane = 4.000000 -40.000000 0.000000 28.000000 0.000000
    wall = -40.000000 2.000000 -2.000000 2.000000

    [zones]
    no_stop = -4.000000 -4.000000 4.000000 4.000000

``robot_limits``/``human_limits`` hold ``a_max phi_max v_max body_length
body_width``; ``lane`` is ``width`` followed by polyline points; ``wall`` is
a flat polyline; ``no_stop`` is an axis-aligned ``x0 y0 x1 y1`` rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import atan2, hypot, pi

from .dynamics import AgentState, JointState, SafetyMode, Turn, is_safe
from .params import AgentLimits, PhysicalParams


class ScenarioError(ValueError):
    """A scenario violated a structural assumption or failed to parse."""


@dataclass(frozen=True)
class GoalSpec:
    x: float
    y: float
    radius: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Lane:
    """Cosmetic lane descriptor: a centerline polyline with a width."""

    width: float
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    params: PhysicalParams
    robot_init: AgentState
    human_init: AgentState
    robot_goal: GoalSpec
    human_goal: GoalSpec
    robot_subgoals: tuple[tuple[float, float], ...]
    canvas: tuple[float, float, float, float]  # x0 y0 x1 y1
    lanes: tuple[Lane, ...] = ()
    walls: tuple[tuple[tuple[float, float], ...], ...] = ()
    no_stop_zones: tuple[tuple[float, float, float, float], ...] = ()
    pull_over_lane_y: float | None = None
    episode_cap: int = 600

    def __post_init__(self) -> None:
        if self.robot_init.v != 0.0 or self.human_init.v != 0.0:
            raise ScenarioError(
                "initial speeds must be zero: the recoverability argument "
                "assumes both agents start at rest")
        x0 = self.initial_state()
        if not (is_safe(x0, self.params, SafetyMode.CENTER_DISTANCE)
                and is_safe(x0, self.params, SafetyMode.RECTANGLE_OVERLAP)):
            raise ScenarioError("initial joint state must be safe")
        if not self.robot_subgoals:
            raise ScenarioError("robot subgoal chain must not be empty")
        fx, fy = self.robot_subgoals[-1]
        if hypot(fx - self.robot_goal.x, fy - self.robot_goal.y) > 1e-6:
            raise ScenarioError("subgoal chain must end at the robot goal center")
        reach = self.episode_cap * self.params.tau
        for who, init, goal, lim in (
                ("robot", self.robot_init, self.robot_goal, self.params.robot),
                ("human", self.human_init, self.human_goal, self.params.human)):
            dist = hypot(goal.x - init.x, goal.y - init.y)
            if dist > reach * lim.v_max:
                raise ScenarioError(
                    f"{who} goal is unreachable within episode_cap at v_max "
                    f"({dist:.1f} m > {reach * lim.v_max:.1f} m)")
        for z in self.no_stop_zones:
            if not (z[0] < z[2] and z[1] < z[3]):
                raise ScenarioError("no-stop zones must have positive area (x0<x1, y0<y1)")
        if self.episode_cap < 1:
            raise ScenarioError("episode_cap must be positive")

    def initial_state(self) -> JointState:
        return JointState(self.robot_init, self.human_init, Turn.ROBOT)


def _limits_default() -> AgentLimits:
    return AgentLimits(a_max=2.0, phi_max=pi / 4, v_max=5.0,
                       body_length=2.0, body_width=1.0)


def _params_default() -> PhysicalParams:
    return PhysicalParams(tau=0.1, d_safe=1.0,
                          robot=_limits_default(), human=_limits_default())


def _cross() -> Scenario:
    # perpendicular 4 m roads crossing at the origin
    return Scenario(
        name="cross",
        params=_params_default(),
        robot_init=AgentState(-36.0, 0.0, 0.0, 0.0),
        human_init=AgentState(0.0, -25.0, 0.0, round(pi / 2, 6)),
        robot_goal=GoalSpec(24.0, 0.0, 2.0),
        human_goal=GoalSpec(0.0, 24.0, 2.0),
        robot_subgoals=((24.0, 0.0),),
        canvas=(-40.0, -30.0, 28.0, 28.0),
        lanes=(Lane(4.0, ((-40.0, 0.0), (28.0, 0.0))),
               Lane(4.0, ((0.0, -30.0), (0.0, 28.0)))),
        walls=(((-40.0, 2.0), (-2.0, 2.0)), ((2.0, 2.0), (28.0, 2.0)),
               ((-40.0, -2.0), (-2.0, -2.0)), ((2.0, -2.0), (28.0, -2.0)),
               ((-2.0, -30.0), (-2.0, -2.0)), ((-2.0, 2.0), (-2.0, 28.0)),
               ((2.0, -30.0), (2.0, -2.0)), ((2.0, 2.0), (2.0, 28.0))),
    )


def _merge() -> Scenario:
    # the human's lane cuts across the robot's near (-11, 0) at a shallow
    # angle, then peels off to park well south of the robot's route
    return Scenario(
        name="merge",
        params=_params_default(),
        robot_init=AgentState(-40.0, 0.0, 0.0, 0.0),
        human_init=AgentState(-28.3, 7.75, 0.0, -0.655269),
        robot_goal=GoalSpec(22.0, 0.0, 2.0),
        human_goal=GoalSpec(0.0, -14.0, 2.0),
        robot_subgoals=((22.0, 0.0),),
        canvas=(-44.0, -16.0, 32.0, 12.0),
        lanes=(Lane(4.0, ((-44.0, 0.0), (32.0, 0.0))),
               Lane(4.0, ((-28.3, 7.75), (-18.2, 0.0), (0.0, -14.0)))),
        walls=(((-44.0, 2.5), (-25.0, 2.5)), ((-18.0, 2.5), (32.0, 2.5)),
               ((-44.0, -2.5), (-18.5, -2.5)), ((-11.5, -2.5), (32.0, -2.5))),
    )


def _turn() -> Scenario:
    # unprotected left: the robot turns north across the oncoming lane while
    # a westbound car approaches head-on, crosses the robot's turn path and
    # finally drifts off to park north-west, clear of both route legs
    return Scenario(
        name="turn",
        params=_params_default(),
        robot_init=AgentState(-32.0, -2.0, 0.0, 0.0),
        human_init=AgentState(27.0, 2.0, 0.0, 2.961739),
        robot_goal=GoalSpec(2.0, 24.0, 2.0),
        human_goal=GoalSpec(-28.0, 12.0, 2.0),
        robot_subgoals=((0.0, -2.0), (2.0, 1.0), (2.0, 24.0)),
        canvas=(-36.0, -30.0, 31.0, 30.0),
        lanes=(Lane(4.0, ((-36.0, -2.0), (31.0, -2.0))),
               Lane(4.0, ((-36.0, 2.0), (31.0, 2.0))),
               Lane(4.0, ((2.0, -30.0), (2.0, 30.0))),
               Lane(4.0, ((-2.0, -30.0), (-2.0, 30.0)))),
        walls=(((-36.0, 4.0), (-4.0, 4.0)), ((18.0, 4.0), (31.0, 4.0)),
               ((-36.0, -4.0), (-4.0, -4.0)), ((4.0, -4.0), (31.0, -4.0)),
               ((-4.0, -30.0), (-4.0, -4.0)), ((-4.0, 12.0), (-4.0, 30.0)),
               ((4.0, -30.0), (4.0, -4.0)), ((4.0, 8.0), (4.0, 30.0))),
    )


def _turn_no_stop() -> Scenario:
    base = _turn()
    return replace(base, name="turn_no_stop",
                   no_stop_zones=((-4.0, -4.0, 4.0, 4.0),))


def _two_lanes() -> Scenario:
    # two eastbound lanes plus an on-ramp from the south-west; the shoulder
    # lane north of the robot is the pull-over target
    return Scenario(
        name="two_lanes",
        params=_params_default(),
        robot_init=AgentState(-36.0, 0.0, 0.0, 0.0),
        human_init=AgentState(-17.8, -15.5, 0.0, 0.953093),
        robot_goal=GoalSpec(24.0, 0.0, 2.0),
        human_goal=GoalSpec(6.0, 18.0, 2.0),
        robot_subgoals=((24.0, 0.0),),
        canvas=(-40.0, -18.0, 34.0, 20.0),
        lanes=(Lane(4.0, ((-40.0, 0.0), (34.0, 0.0))),
               Lane(4.0, ((-40.0, 4.0), (34.0, 4.0))),
               Lane(4.0, ((-17.8, -15.5), (-6.8, 0.0), (6.0, 18.0)))),
        walls=(((-40.0, 6.0), (-6.5, 6.0)), ((1.5, 6.0), (34.0, 6.0)),
               ((-40.0, -2.0), (-12.0, -2.0)), ((-4.5, -2.0), (34.0, -2.0))),
        pull_over_lane_y=4.0,
    )


_BUILTINS = {
    "cross": _cross,
    "merge": _merge,
    "turn": _turn,
    "turn_no_stop": _turn_no_stop,
    "two_lanes": _two_lanes,
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin(name: str) -> Scenario:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ScenarioError(
            f"unknown scenario {name!r}; builtins: {', '.join(BUILTIN_NAMES)}") from None


def _f(v: float) -> str:
    # repr gives the shortest digits that parse back to the same float, so
    # dumped scenarios reload bit for bit
    return repr(float(v))


def _fs(*vals: float) -> str:
    return " ".join(_f(v) for v in vals)


def dumps(s: Scenario) -> str:
    out = ["# driveshield scenario"]
    out.append(f"name = {s.name}")
    out.append(f"episode_cap = {s.episode_cap}")
    out.append("")
    out.append("[physical]")
    out.append(f"tau = {_f(s.params.tau)}")
    out.append(f"d_safe = {_f(s.params.d_safe)}")
    for label, lim in (("robot_limits", s.params.robot), ("human_limits", s.params.human)):
        out.append(f"{label} = " + _fs(lim.a_max, lim.phi_max, lim.v_max,
                                       lim.body_length, lim.body_width))
    for section, init, goal in (("robot", s.robot_init, s.robot_goal),
                                ("human", s.human_init, s.human_goal)):
        out.append("")
        out.append(f"[{section}]")
        out.append(f"init = " + _fs(init.x, init.y, init.v, init.theta))
        out.append(f"goal = " + _fs(goal.x, goal.y, goal.radius))
        if section == "robot":
            for wx, wy in s.robot_subgoals:
                out.append(f"subgoal = " + _fs(wx, wy))
    out.append("")
    out.append("[geometry]")
    out.append("canvas = " + _fs(*s.canvas))
    if s.pull_over_lane_y is not None:
        out.append(f"pull_over_lane_y = {_f(s.pull_over_lane_y)}")
    for lane in s.lanes:
        flat = [c for pt in lane.points for c in pt]
        out.append("lane = " + _fs(lane.width, *flat))
    for wall in s.walls:
        flat = [c for pt in wall for c in pt]
        out.append("wall = " + _fs(*flat))
    out.append("")
    out.append("[zones]")
    for z in s.no_stop_zones:
        out.append("no_stop = " + _fs(*z))
    out.append("")
    return "\n".join(out)


_SECTIONS = ("physical", "robot", "human", "geometry", "zones")


def _pairs(vals: list[float], what: str) -> tuple[tuple[float, float], ...]:
    if len(vals) < 4 or len(vals) % 2 != 0:
        raise ScenarioError(f"{what} needs an even number (>= 4) of coordinates")
    return tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))


def loads(text: str) -> Scenario:
    top: dict[str, str] = {}
    scalars: dict[tuple[str, str], list[float]] = {}
    repeats: dict[tuple[str, str], list[list[float]]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ScenarioError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if section is None:
            if key not in ("name", "episode_cap"):
                raise ScenarioError(f"line {lineno}: unexpected key {key!r} before sections")
            top[key] = val
            continue
        try:
            nums = [float(tok) for tok in val.split()]
        except ValueError:
            raise ScenarioError(f"line {lineno}: non-numeric value for {key!r}") from None
        if key in ("subgoal", "lane", "wall", "no_stop"):
            repeats.setdefault((section, key), []).append(nums)
        elif (section, key) in scalars:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r} in [{section}]")
        else:
            scalars[(section, key)] = nums

    def need(section: str, key: str, arity: int) -> list[float]:
        if (section, key) not in scalars:
            raise ScenarioError(f"missing {key!r} in [{section}]")
        vals = scalars.pop((section, key))
        if len(vals) != arity:
            raise ScenarioError(f"{key!r} in [{section}] needs {arity} numbers")
        return vals

    if "name" not in top:
        raise ScenarioError("missing top-level 'name'")
    try:
        cap = int(top.get("episode_cap", "600"))
    except ValueError:
        raise ScenarioError("episode_cap must be an integer") from None

    tau = need("physical", "tau", 1)[0]
    d_safe = need("physical", "d_safe", 1)[0]
    rl = need("physical", "robot_limits", 5)
    hl = need("physical", "human_limits", 5)
    try:
        params = PhysicalParams(
            tau=tau, d_safe=d_safe,
            robot=AgentLimits(*rl), human=AgentLimits(*hl))
    except ValueError as e:
        raise ScenarioError(str(e)) from None

    r_init = need("robot", "init", 4)
    r_goal = need("robot", "goal", 3)
    h_init = need("human", "init", 4)
    h_goal = need("human", "goal", 3)
    canvas = need("geometry", "canvas", 4)
    pull_y = None
    if ("geometry", "pull_over_lane_y") in scalars:
        pull_y = scalars.pop(("geometry", "pull_over_lane_y"))[0]
    if scalars:
        sec, key = next(iter(scalars))
        raise ScenarioError(f"unknown key {key!r} in [{sec}]")

    subgoals = []
    for vals in repeats.pop(("robot", "subgoal"), []):
        if len(vals) != 2:
            raise ScenarioError("'subgoal' needs 2 numbers")
        subgoals.append((vals[0], vals[1]))
    lanes = []
    for vals in repeats.pop(("geometry", "lane"), []):
        if len(vals) < 5:
            raise ScenarioError("'lane' needs a width and at least two points")
        lanes.append(Lane(vals[0], _pairs(vals[1:], "lane")))
    walls = []
    for vals in repeats.pop(("geometry", "wall"), []):
        walls.append(_pairs(vals, "wall"))
    zones = []
    for vals in repeats.pop(("zones", "no_stop"), []):
        if len(vals) != 4:
            raise ScenarioError("'no_stop' needs 4 numbers")
        zones.append(tuple(vals))
    if repeats:
        sec, key = next(iter(repeats))
        raise ScenarioError(f"key {key!r} not allowed in [{sec}]")

    return Scenario(
        name=top["name"],
        params=params,
        robot_init=AgentState(*r_init),
        human_init=AgentState(*h_init),
        robot_goal=GoalSpec(*r_goal),
        human_goal=GoalSpec(*h_goal),
        robot_subgoals=tuple(subgoals),
        canvas=tuple(canvas),
        lanes=tuple(lanes),
        walls=tuple(walls),
        no_stop_zones=tuple(zones),
        pull_over_lane_y=pull_y,
        episode_cap=cap,
    )


def save(s: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(s))


def load(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        return loads(f.read())
