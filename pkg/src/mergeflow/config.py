"""JSON scenario files.

A config file is a single JSON object:

    {
      "roads": [
        {"v_max": 1.0, "rho_max": 1.0, "initial": 0.15},
        {"v_max": 1.0, "rho_max": 1.0, "initial": 0.2},
        {"v_max": 1.0, "rho_max": 1.2,
         "initial": [{"from": 0.0, "to": 0.5, "value": 0.3},
                     {"from": 0.5, "to": 1.0, "value": 0.6}]}
      ],
      "cells": 1000,
      "cfl": 0.9,
      "lambda": 1.0,          // optional, defaults to max v_max
      "final_time": 0.75,
      "solver": "both",       // "relaxation" | "classical" | "both"
      "snapshots": [0.25, 0.5],
      "output_dir": "out"
    }

Unknown keys are rejected with the offending path in the message, so a
typo never silently falls back to a default.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigError
from .fundamentals import FundamentalDiagram
from .simulation import SOLVER_CHOICES, RoadSpec, Scenario

DEFAULT_OUTPUT_DIR = "out"

_TOP_KEYS = {
    "roads", "cells", "cfl", "lambda", "final_time", "solver", "snapshots", "output_dir",
}
_ROAD_KEYS = {"v_max", "rho_max", "initial"}
_SEGMENT_KEYS = {"from", "to", "value"}


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing required key '{key}'")
    return obj[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key: {where}{key}")


def _parse_road(obj, where: str) -> RoadSpec:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, _ROAD_KEYS, f"{where}.")
    v_max = _number(_require(obj, "v_max", where), f"{where}.v_max")
    rho_max = _number(_require(obj, "rho_max", where), f"{where}.rho_max")
    diagram = FundamentalDiagram(v_max=v_max, rho_max=rho_max)
    raw = _require(obj, "initial", where)
    if isinstance(raw, list):
        segments = []
        for i, seg in enumerate(raw):
            seg_where = f"{where}.initial[{i}]"
            if not isinstance(seg, dict):
                raise ConfigError(f"{seg_where}: expected an object")
            _reject_unknown(seg, _SEGMENT_KEYS, f"{seg_where}.")
            segments.append(
                (
                    _number(_require(seg, "from", seg_where), f"{seg_where}.from"),
                    _number(_require(seg, "to", seg_where), f"{seg_where}.to"),
                    _number(_require(seg, "value", seg_where), f"{seg_where}.value"),
                )
            )
        initial: float | tuple = tuple(segments)
    else:
        initial = _number(raw, f"{where}.initial")
    return RoadSpec(diagram=diagram, initial=initial)


def parse_config(data, where: str = "config") -> tuple[Scenario, str]:
    """Turn a decoded JSON object into (Scenario, output_dir)."""
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a JSON object at the top level")
    _reject_unknown(data, _TOP_KEYS, "")
    roads_raw = _require(data, "roads", where)
    if not isinstance(roads_raw, list) or len(roads_raw) != 3:
        raise ConfigError("roads: expected an array of exactly 3 road objects")
    roads = tuple(_parse_road(obj, f"roads[{i}]") for i, obj in enumerate(roads_raw))

    cells = _integer(_require(data, "cells", where), "cells")
    final_time = _number(_require(data, "final_time", where), "final_time")
    cfl = _number(data["cfl"], "cfl") if "cfl" in data else 0.9
    lam = _number(data["lambda"], "lambda") if "lambda" in data else None

    solver = data.get("solver", "relaxation")
    if solver not in SOLVER_CHOICES:
        raise ConfigError(f"solver: expected one of {SOLVER_CHOICES}, got {solver!r}")

    snapshots_raw = data.get("snapshots", [])
    if not isinstance(snapshots_raw, list):
        raise ConfigError("snapshots: expected an array of times")
    snapshots = tuple(
        _number(s, f"snapshots[{i}]") for i, s in enumerate(snapshots_raw)
    )

    output_dir = data.get("output_dir", DEFAULT_OUTPUT_DIR)
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError(f"output_dir: expected a nonempty string, got {output_dir!r}")

    scenario = Scenario(
        roads=roads,
        final_time=final_time,
        cells=cells,
        cfl=cfl,
        lam=lam,
        solver=solver,
        snapshots=snapshots,
    )
    return scenario, output_dir


def load_config(path) -> tuple[Scenario, str]:
    """Read and validate a JSON scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data, where=str(path))


def scenario_to_config(scenario: Scenario, output_dir: str = DEFAULT_OUTPUT_DIR) -> dict:
    """Inverse of parse_config, suitable for json.dump."""
    roads = []
    for spec in scenario.roads:
        if isinstance(spec.initial, tuple):
            initial = [
                {"from": lo, "to": hi, "value": value} for lo, hi, value in spec.initial
            ]
        else:
            initial = spec.initial
        roads.append(
            {"v_max": spec.diagram.v_max, "rho_max": spec.diagram.rho_max, "initial": initial}
        )
    data = {
        "roads": roads,
        "cells": scenario.cells,
        "cfl": scenario.cfl,
        "final_time": scenario.final_time,
        "solver": scenario.solver,
        "snapshots": list(scenario.snapshots),
        "output_dir": output_dir,
    }
    if scenario.lam is not None:
        data["lambda"] = scenario.lam
    return data


def dump_config(scenario: Scenario, output_dir: str = DEFAULT_OUTPUT_DIR) -> str:
    return json.dumps(scenario_to_config(scenario, output_dir), indent=2) + "\n"
