"""Run-configuration schema and loaders.

A run config is one JSON document with sections params, grid, solver,
data, split, norms, plus seed and output_dir.  Validation is strict:
unknown keys are rejected everywhere, and every exact quantity (problem
parameters, region points, split exponents) must be given as an 'a/b'
string or integer, never as a float.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema

from .data import gaussian, gaussian_packet, random_phase
from .errors import SchemaError
from .exponents import ProblemParams
from .grids import Field, Grid
from .rationals import parse_rational
from .regions import LebesguePair
from .spectral import SolverConfig
from .splitting import SplitConfig

_RATIONAL = {"type": ["string", "integer"]}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["params"],
    "properties": {
        "params": {
            "type": "object",
            "additionalProperties": False,
            "required": ["d", "m", "gamma", "beta"],
            "properties": {
                "d": {"type": "integer", "minimum": 1},
                "m": _RATIONAL,
                "gamma": _RATIONAL,
                "beta": _RATIONAL,
                "sign": {"enum": ["focusing", "defocusing"]},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dim", "n", "box_length"],
            "properties": {
                "dim": {"type": "integer", "enum": [1, 2]},
                "n": {"type": "integer", "minimum": 16},
                "box_length": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dt", "t_final"],
            "properties": {
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "t_final": {"type": "number", "minimum": 0},
                "dealias": {"enum": ["two-thirds", "none"]},
                "zero_mode_kernel": {"type": "number"},
                "snapshot_stride": {"type": "integer", "minimum": 1},
            },
        },
        "data": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["gaussian", "gaussian_packet", "random_phase"]},
                "amplitude": {"type": "number"},
                "width": {"type": "number", "exclusiveMinimum": 0},
                "ripple_amplitude": {"type": "number"},
                "ripple_freq": {"type": "number"},
                "ripple_width": {"type": "number", "exclusiveMinimum": 0},
                "freq_cap": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "split": {
            "type": "object",
            "additionalProperties": False,
            "required": ["point", "N", "alpha", "s"],
            "properties": {
                "point": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["inv_r", "inv_q"],
                    "properties": {"inv_r": _RATIONAL, "inv_q": _RATIONAL},
                },
                "N": _RATIONAL,
                "alpha": _RATIONAL,
                "s": _RATIONAL,
                "rho": _RATIONAL,
                "c0": _RATIONAL,
                "picard": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                        "max_iter": {"type": "integer", "minimum": 1},
                    },
                },
                "step_cap": {"type": "integer", "minimum": 1},
                "n_sweep": {"type": "array", "items": _RATIONAL, "minItems": 1},
                "enforce_divergence": {"type": "boolean"},
            },
        },
        "norms": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "q": {"type": "number", "minimum": 1},
                "r": {"type": "number", "minimum": 1},
                "s": {"type": "number"},
                "p": {"type": "number", "minimum": 1},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "n_shifts": {"type": "integer", "minimum": 4},
                "window_nodes": {"type": "integer", "minimum": 3},
                "t0_values": {"type": "array", "items": {"type": "number"}},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
    },
}


def validate_config(doc: dict, require: tuple[str, ...] = ()) -> dict:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"config invalid at {where}: {exc.message}") from None
    for section in require:
        if section not in doc:
            raise SchemaError(f"config is missing required section {section!r}")
    data_kind = doc.get("data", {}).get("kind")
    if data_kind == "random_phase" and "seed" not in doc:
        raise SchemaError("random_phase data requires an explicit seed")
    return doc


def load_config(path, require: tuple[str, ...] = ()) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from None
    return validate_config(doc, require)


def build_params(doc: dict) -> ProblemParams:
    sec = doc["params"]
    return ProblemParams(
        d=sec["d"],
        m=parse_rational(str(sec["m"])),
        gamma=parse_rational(str(sec["gamma"])),
        beta=parse_rational(str(sec["beta"])),
        sign=sec.get("sign", "defocusing"),
    )


def build_grid(doc: dict) -> Grid:
    sec = doc["grid"]
    return Grid(dim=sec["dim"], n=sec["n"], length=float(sec["box_length"]))


def build_solver(doc: dict) -> SolverConfig:
    sec = doc["solver"]
    return SolverConfig(
        params=build_params(doc),
        grid=build_grid(doc),
        dt=float(sec["dt"]),
        t_final=float(sec["t_final"]),
        dealias=sec.get("dealias", "two-thirds"),
        zero_mode_kernel=float(sec.get("zero_mode_kernel", 0.0)),
        snapshot_stride=int(sec.get("snapshot_stride", 1)),
    )


def build_data(doc: dict, grid: Grid, rng=None) -> Field:
    sec = doc.get("data", {"kind": "gaussian"})
    kind = sec["kind"]
    if kind == "gaussian":
        return gaussian(grid, sec.get("amplitude", 0.5), sec.get("width", 2.0))
    if kind == "gaussian_packet":
        return gaussian_packet(
            grid,
            amplitude=sec.get("amplitude", 0.3),
            width=sec.get("width", 2.0),
            ripple_amplitude=sec.get("ripple_amplitude", 0.05),
            ripple_freq=sec.get("ripple_freq", 6.0),
            ripple_width=sec.get("ripple_width", 1.5),
        )
    if rng is None:
        raise SchemaError("random_phase data requires a seeded generator")
    return random_phase(grid, rng, sec.get("freq_cap", 8.0), sec.get("amplitude", 1.0))


def build_split(doc: dict) -> SplitConfig:
    sec = doc["split"]
    picard = sec.get("picard", {})
    return SplitConfig(
        solver=build_solver(doc),
        point=LebesguePair(
            parse_rational(str(sec["point"]["inv_r"])),
            parse_rational(str(sec["point"]["inv_q"])),
        ),
        N=parse_rational(str(sec["N"])),
        alpha=parse_rational(str(sec["alpha"])),
        s=parse_rational(str(sec["s"])),
        rho=parse_rational(str(sec.get("rho", "1"))),
        c0=parse_rational(str(sec.get("c0", "1/4"))),
        picard_tol=float(picard.get("tol", 1e-10)),
        picard_max_iter=int(picard.get("max_iter", 50)),
        step_cap=int(sec.get("step_cap", 64)),
        enforce_divergence=bool(sec.get("enforce_divergence", True)),
    )


def sweep_values(doc: dict) -> list[Fraction]:
    sec = doc["split"]
    if "n_sweep" in sec:
        return [parse_rational(str(v)) for v in sec["n_sweep"]]
    return [parse_rational(str(sec["N"]))]
