import dataclasses

import pytest

from driveshield.dynamics import Turn
from driveshield.scenarios import (BUILTIN_NAMES, GoalSpec, Lane, Scenario,
                                   ScenarioError, builtin, dumps, load, loads,
                                   save)


def test_builtin_names():
    assert BUILTIN_NAMES == ("cross", "merge", "turn", "turn_no_stop",
                             "two_lanes")


def test_unknown_builtin():
    with pytest.raises(ScenarioError):
        builtin("roundabout")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_is_well_formed(name):
    s = builtin(name)
    assert s.name == name
    x = s.initial_state()
    assert x.turn is Turn.ROBOT
    assert s.episode_cap > 0
    x0, y0, x1, y1 = s.canvas
    assert x0 < x1 and y0 < y1
    # the subgoal chain ends at the goal center
    assert s.robot_subgoals[-1] == (s.robot_goal.x, s.robot_goal.y)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_text_round_trip(name):
    s = builtin(name)
    assert loads(dumps(s)) == s


def test_save_load_round_trip(tmp_path):
    s = builtin("merge")
    path = tmp_path / "merge.toml"
    save(s, path)
    assert load(path) == s


def test_round_trip_preserves_tuned_fields():
    s = dataclasses.replace(builtin("turn_no_stop"), episode_cap=123)
    t = loads(dumps(s))
    assert t.episode_cap == 123
    assert t.no_stop_zones == s.no_stop_zones


def test_validation_rejects_unsafe_initial_state():
    s = builtin("cross")
    bad_human = dataclasses.replace(s.human_init, x=s.robot_init.x,
                                    y=s.robot_init.y)
    with pytest.raises(ScenarioError):
        dataclasses.replace(s, human_init=bad_human)


def test_validation_rejects_broken_subgoal_chain():
    s = builtin("cross")
    with pytest.raises(ScenarioError):
        dataclasses.replace(s, robot_subgoals=())
    with pytest.raises(ScenarioError):
        dataclasses.replace(s, robot_subgoals=((0.0, 99.0),))


def test_validation_rejects_degenerate_zone():
    s = builtin("turn")
    with pytest.raises(ScenarioError):
        dataclasses.replace(s, no_stop_zones=((4.0, 0.0, -4.0, 4.0),))


def test_validation_rejects_nonpositive_cap():
    with pytest.raises(ScenarioError):
        dataclasses.replace(builtin("cross"), episode_cap=0)


@pytest.mark.parametrize("text,fragment", [
    ("", "missing top-level 'name'"),
    ("name = x\n???\n", "expected 'key = value'"),
    ("name = x\n[weather]\nrain = 1\n", "unknown section"),
    ("name = x\n[physical]\ntau = fast\n", "non-numeric"),
])
def test_loads_rejects_malformed_text(text, fragment):
    with pytest.raises(ScenarioError) as err:
        loads(text)
    assert fragment in str(err.value)


def test_loads_rejects_wrong_arity():
    text = dumps(builtin("cross"))
    lines = [("init = 1 2" if l.startswith("init = -36") else l)
             for l in text.splitlines()]
    with pytest.raises(ScenarioError) as err:
        loads("\n".join(lines))
    assert "needs 4 numbers" in str(err.value)


def test_loads_rejects_duplicate_key():
    s = dumps(builtin("cross"))
    dup = s + "\n[params]\ntau = 0.2\n"
    with pytest.raises(ScenarioError):
        loads(dup)


def test_lane_and_goal_types():
    s = builtin("two_lanes")
    assert all(isinstance(l, Lane) for l in s.lanes)
    assert isinstance(s.robot_goal, GoalSpec)
    assert s.pull_over_lane_y == 4.0
