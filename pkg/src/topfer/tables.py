"""CSV and aligned-text rendering of profiles, branch points and iteration tables.

CSV fields carry 15 significant digits and LF line endings. Lines starting
with ``#`` are comments and are skipped by the readers. Aligned tables use 6
decimals; magnitudes below 1e-3 switch to the ``D`` exponent notation of
old Fortran listings (``9.5D-04``).
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence

import numpy as np

from .falkner_skan import BranchPoint, Flow
from .itm import IterationRecord

PROFILE_HEADER = ("eta", "f", "fp", "fpp")
BRANCH_HEADER = ("beta", "flow", "fpp0", "iterations", "converged")
ITERATION_HEADER = ("j", "h_star", "gamma", "rel_change", "fpp0")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".15g")


def _parse_float(s: str) -> float | None:
    return None if s == "" else float(s)


def _write(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _rows(text: str, header: Sequence[str]) -> list[list[str]]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows or tuple(rows[0]) != tuple(header):
        raise ValueError(f"expected header {','.join(header)}")
    return rows[1:]


def profile_csv(profile: np.ndarray) -> str:
    return _write(PROFILE_HEADER, np.asarray(profile, dtype=float).tolist())


def read_profile(text: str) -> np.ndarray:
    return np.array([[float(v) for v in r] for r in _rows(text, PROFILE_HEADER)], dtype=float).reshape(-1, 4)


def branch_csv(points: Iterable[BranchPoint]) -> str:
    return _write(BRANCH_HEADER, ((p.beta, p.flow.value, p.fpp0, p.iterations, p.converged) for p in points))


def read_branch(text: str) -> list[BranchPoint]:
    out = []
    for beta, flow, fpp0, iterations, converged in _rows(text, BRANCH_HEADER):
        out.append(BranchPoint(float(beta), Flow(flow), float(fpp0), int(iterations), converged == "true"))
    return out


def iterations_csv(records: Iterable[IterationRecord], comments=()) -> str:
    rows = ((r.j, r.h_star, r.gamma, r.rel_change, r.fpp0_physical) for r in records)
    return _write(ITERATION_HEADER, rows, comments)


def read_iterations(text: str) -> list[IterationRecord]:
    out = []
    for j, h, g, rel, fpp0 in _rows(text, ITERATION_HEADER):
        gamma = float(g)
        out.append(IterationRecord(int(j), float(h), gamma, _parse_float(rel), float(fpp0), gamma == -1.0))
    return out


def dnum(x, places: int = 6) -> str:
    """Fixed 6 decimals, or ``D`` notation for nonzero magnitudes below 1e-3."""
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    if x != 0 and abs(x) < 1e-3:
        mant, exp = f"{x:.1e}".split("e")
        return f"{mant}D{int(exp):+03d}"
    return f"{x:.{places}f}"


def aligned(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    cells = [list(header)] + [[v if isinstance(v, str) else dnum(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def iterations_table(records: Iterable[IterationRecord]) -> str:
    rows = ((str(r.j), r.h_star, r.gamma, r.rel_change, r.fpp0_physical) for r in records)
    return aligned(ITERATION_HEADER, rows)


def branch_table(points: Iterable[BranchPoint]) -> str:
    rows = ((p.beta, p.flow.value, p.fpp0, str(p.iterations), fmt(p.converged)) for p in points)
    return aligned(BRANCH_HEADER, rows)


def profile_table(profile: np.ndarray) -> str:
    return aligned(PROFILE_HEADER, np.asarray(profile, dtype=float).tolist())
