"""Kernel backend selection.

The compiled extension is used when available; set ``DRIVESHIELD_PURE=1`` to
force the pure-Python mirror.  Both expose the same functions and produce
bitwise-identical results (verified by the kernel parity tests).
"""

import os

if os.environ.get("DRIVESHIELD_PURE"):
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

step_agent = _impl.step_agent
rect_overlap = _impl.rect_overlap
abstract_step = _impl.abstract_step
box_min_center_dist = _impl.box_min_center_dist
backup_schedule = _impl.backup_schedule
is_recoverable_raw = _impl.is_recoverable_raw
rollout_concrete = _impl.rollout_concrete
cem_scores = _impl.cem_scores

__all__ = [
    "BACKEND",
    "step_agent",
    "rect_overlap",
    "abstract_step",
    "box_min_center_dist",
    "backup_schedule",
    "is_recoverable_raw",
    "rollout_concrete",
    "cem_scores",
]
