"""Deterministic text serialization of orbits, scans and mutation classes.

All numbers go through one formatting rule, every container is emitted
in a fixed order and line endings are always a single newline, so a
given object serializes to identical bytes on every run and platform
with the same floating-point results.
"""
from __future__ import annotations

import json
import math

from .errors import DomainError
from .exchange import MutationClassResult
from .orbits import GrowthVerdict, Orbit, OrbitKind, ScanTable

__all__ = ["fmt_float", "export_csv", "export_json", "parse_scan_json"]


def fmt_float(v: float) -> str:
    """Shortest decimal that round-trips; integral values print bare.

    Non-finite values (possible in diagnostics of orbits that grew
    past 1e154, never in orbit points) print as inf/-inf/nan.
    """
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0.0 else "-inf"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _num(v: float) -> str:
    # JSON-safe variant: non-finite becomes a quoted token
    v = float(v)
    if math.isfinite(v):
        return fmt_float(v)
    return json.dumps(fmt_float(v))


def export_csv(orbit: Orbit) -> str:
    """CSV text of an orbit, one row per point, step index first.

    Tropical orbits add the conserved quadratic as a final column.
    """
    lines = []
    pts = orbit.points
    if orbit.kind is OrbitKind.TROPICAL:
        lines.append("step,s,t,phi")
        ph = orbit.phi
        for i in range(len(pts)):
            lines.append(
                f"{i},{fmt_float(pts[i, 0])},{fmt_float(pts[i, 1])},{fmt_float(ph[i])}"
            )
    else:
        lines.append("step,x,y")
        for i in range(len(pts)):
            lines.append(f"{i},{fmt_float(pts[i, 0])},{fmt_float(pts[i, 1])}")
    return "\n".join(lines) + "\n"


def _emit(obj) -> str:
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(k)}:{_emit(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise DomainError(f"cannot serialize {type(obj).__name__}")


def _verdict_dict(verdict: GrowthVerdict) -> dict:
    return {
        "kind": verdict.kind.value,
        "ratio": verdict.ratio,
        "rate": verdict.rate,
        "max_log_radius": verdict.max_log_radius,
    }


def _orbit_dict(orbit: Orbit) -> dict:
    out = {
        "kind": orbit.kind.value,
        "params": {"p": orbit.params.p, "q": orbit.params.q},
        "start": [float(orbit.start[0]), float(orbit.start[1])],
        "requested_steps": orbit.requested_steps,
        "truncated_at": orbit.truncated_at,
        "truncation_reason": orbit.truncation_reason,
        "points": [[float(a), float(b)] for a, b in orbit.points],
    }
    diag = {"log_radius": [float(v) for v in orbit.log_radius]}
    if orbit.kind is OrbitKind.TROPICAL:
        diag["phi"] = [float(v) for v in orbit.phi]
        diag["polar_angle"] = [float(v) for v in orbit.polar]
        diag["sign_pairs"] = [[int(a), int(b)] for a, b in orbit.signs]
    out["diagnostics"] = diag
    return out


def _scan_dict(table: ScanTable) -> dict:
    return {
        "kind": table.kind.value,
        "steps": table.steps,
        "p_values": [float(v) for v in table.p_values],
        "q_values": [float(v) for v in table.q_values],
        "cells": [
            {"p": c.p, "q": c.q, "verdict": _verdict_dict(c.verdict)} for c in table.cells
        ],
    }


def _class_dict(result: MutationClassResult) -> dict:
    return {
        "size": result.size,
        "complete": result.complete,
        "matrices": [[list(row) for row in m.entries] for m in result.matrices],
    }


def export_json(obj) -> str:
    """Canonical JSON text for an orbit, a scan table or a mutation class.

    Keys appear in a fixed order and numbers use the same formatting
    rule as the CSV export.  A trailing newline terminates the text.
    """
    if isinstance(obj, Orbit):
        payload = _orbit_dict(obj)
    elif isinstance(obj, ScanTable):
        payload = _scan_dict(obj)
    elif isinstance(obj, MutationClassResult):
        payload = _class_dict(obj)
    else:
        raise DomainError(f"no JSON export for {type(obj).__name__}")
    return _emit(payload) + "\n"


def _parse_verdict(d: dict) -> GrowthVerdict:
    from .orbits import GrowthKind

    kind = GrowthKind(d["kind"])

    def num(v):
        if isinstance(v, str):
            return float(v)
        return None if v is None else float(v)

    return GrowthVerdict(
        kind,
        ratio=num(d.get("ratio")),
        rate=num(d.get("rate")),
        max_log_radius=num(d.get("max_log_radius")),
    )


def parse_scan_json(text: str) -> ScanTable:
    """Rebuild a ScanTable from its exported JSON text."""
    from .orbits import ScanCell

    try:
        d = json.loads(text)
        cells = tuple(
            ScanCell(p=float(c["p"]), q=float(c["q"]), verdict=_parse_verdict(c["verdict"]))
            for c in d["cells"]
        )
        return ScanTable(
            p_values=tuple(float(v) for v in d["p_values"]),
            q_values=tuple(float(v) for v in d["q_values"]),
            kind=OrbitKind(d["kind"]),
            steps=int(d["steps"]),
            cells=cells,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"not a scan table document: {exc}") from None
