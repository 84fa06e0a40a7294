"""CSV/JSON emission for trajectories, traces, sweeps and rest points.

All numeric fields are written with ``%.17g``: 17 significant digits are
enough for a float64 round trip, so re-parsing an emitted file reproduces
the values bit for bit, independent of locale.
"""

from __future__ import annotations

import json
from typing import Optional

from .bifurcation import BifurcationDiagram, CriticalCurve
from .dynamics import Trajectory
from .restpoints import RestPoint
from .simulate import EmpiricalTrace


def fmt(value: float) -> str:
    return f"{value:.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    lines = ["t,x,y"]
    lines += [f"{fmt(t)},{fmt(x)},{fmt(y)}" for t, x, y in traj.samples]
    return "\n".join(lines) + "\n"


def parse_trajectory_csv(text: str) -> list[tuple[float, float, float]]:
    rows = text.strip().splitlines()
    if not rows or rows[0] != "t,x,y":
        raise ValueError("not a trajectory CSV")
    return [tuple(float(v) for v in line.split(",")) for line in rows[1:]]


def terminal_points_csv(starts, finals) -> str:
    lines = ["start_x,start_y,x,y"]
    for (sx, sy), (x, y) in zip(starts, finals):
        lines.append(f"{fmt(sx)},{fmt(sy)},{fmt(x)},{fmt(y)}")
    return "\n".join(lines) + "\n"


def trace_csv(trace_x: EmpiricalTrace, trace_y: EmpiricalTrace) -> str:
    lines = ["round,x,y"]
    for (rnd, px), (_, py) in zip(trace_x.samples, trace_y.samples):
        lines.append(f"{rnd},{fmt(px[0])},{fmt(py[0])}")
    return "\n".join(lines) + "\n"


def trace_metadata_json(trace: EmpiricalTrace) -> str:
    meta = dict(trace.metadata)
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"


def rest_points_json(points: list[RestPoint]) -> str:
    payload = [
        {
            "x": p.x, "y": p.y, "u": p.u, "v": p.v,
            "eig": [[lam.real, lam.imag] for lam in p.eigenvalues],
            "stability": p.stability,
            "residual": p.residual,
        }
        for p in points
    ]
    return json.dumps(payload, indent=2) + "\n"


def sweep_csv(diagram: BifurcationDiagram) -> str:
    lines = ["T,x,y,stability,branch_id"]
    for branch_id, branch in enumerate(diagram.branches):
        for temp, point in branch:
            lines.append(f"{fmt(temp)},{fmt(point.x)},{fmt(point.y)},"
                         f"{point.stability},{branch_id}")
    return "\n".join(lines) + "\n"


def critical_csv(curve: CriticalCurve) -> str:
    lines = ["T_fixed,Tc_minus,Tc_plus"]
    for fixed, lo, hi in curve.samples:
        lo_s = fmt(lo) if lo is not None else ""
        hi_s = fmt(hi) if hi is not None else ""
        lines.append(f"{fmt(fixed)},{lo_s},{hi_s}")
    return "\n".join(lines) + "\n"


def portrait_csv(trajectories: list[Trajectory]) -> str:
    lines = ["traj,t,x,y"]
    for idx, traj in enumerate(trajectories):
        for t, x, y in traj.samples:
            lines.append(f"{idx},{fmt(t)},{fmt(x)},{fmt(y)}")
    return "\n".join(lines) + "\n"


def write_text(path: Optional[str], text: str) -> None:
    if path is None:
        print(text, end="")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
