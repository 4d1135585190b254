"""Reference trajectory for the client conformance test.

Replays a per-round key log through the same Session the WebSocket server
uses, with no sockets in between, and prints the state frames plus the
final result as JSON.  The conformance test replays the identical log
against a live ``driveshield serve --lockstep`` process and requires a
byte-for-byte match.

Usage: python3 harness_replay.py SCENARIO ROBOT SEED KEYLOG.json
"""

import json
import sys

from driveshield.server import Session


def main() -> int:
    scenario, robot, seed, path = sys.argv[1:5]
    with open(path) as f:
        log = json.load(f)
    session = Session(scenario, robot, "remote", int(seed))
    states = [session.state_frame()]
    while not session.episode.done:
        k = session.episode.rounds
        keys = log[k] if k < len(log) else {}
        session.submit_command({"type": "command", "seq": k + 1, **keys})
        session.episode.advance()
        states.append(session.state_frame())
    out = {"states": states, "result": session.result_frame()}
    json.dump(out, sys.stdout, separators=(",", ":"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
