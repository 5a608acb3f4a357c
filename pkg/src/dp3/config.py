"""Run configuration: JSON schema, defaults and object builders."""
import copy
import json

import jsonschema

from .errors import ConfigError, DP3Error
from .evolution import StepControl
from .norms import WeightProfile
from .persistence import SELECTABLE, DEFAULT_SELECTOR
from .rhs import FORMS, REDUCTIONS
from .spectral import Grid
from .state import INITIAL_KINDS, make_initial

_POS = {"type": "number", "exclusiveMinimum": 0}
_NUM_LIST = {"type": "array", "items": {"type": "number"}}

SCHEMA = {
    "type": "object",
    "required": ["domain", "time", "init"],
    "additionalProperties": False,
    "properties": {
        "domain": {
            "type": "object",
            "required": ["L", "n_points"],
            "additionalProperties": False,
            "properties": {"L": _POS, "n_points": {"type": "integer", "minimum": 16}},
        },
        "time": {
            "type": "object",
            "required": ["dt_max", "t_end"],
            "additionalProperties": False,
            "properties": {
                "dt_max": _POS,
                "t_end": {"type": "number", "minimum": 0},
                "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "dt_min": _POS,
                "sample_every": {"type": "integer", "minimum": 1},
                "fixed_dt": {"type": "boolean"},
            },
        },
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"form": {"enum": list(FORMS)}, "sobolev_s": {"type": "number"}},
        },
        "init": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {"kind": {"enum": list(INITIAL_KINDS)}, "params": {"type": "object"}},
        },
        "certify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"x0": {"type": "number"}},
        },
        "weights": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "beta", "N"],
                "additionalProperties": False,
                "properties": {"kind": {"enum": ["log", "algebraic"]}, "beta": _POS, "N": _POS},
            },
        },
        "mollify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"epsilons": _NUM_LIST, "calibration_C": _POS},
        },
        "thresholds": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "slope_threshold": _POS,
                "zero_floor": {"type": "number", "minimum": 0},
                "classify": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "o_drop": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                        "O_factor": {"type": "number", "exclusiveMinimum": 1},
                    },
                },
            },
        },
        "persist": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "gamma": _POS,
                "N_ladder": _NUM_LIST,
                "selector": {"type": "array", "items": {"enum": list(SELECTABLE)}},
                "x_samples": _NUM_LIST,
            },
        },
        "reductions": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kinds": {"type": "array", "items": {"enum": list(REDUCTIONS)}},
                "tolerance": _POS,
            },
        },
        "characteristics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"x0s": _NUM_LIST},
        },
    },
}

DEFAULTS = {
    "time": {"cfl": 0.3, "dt_min": 1e-9, "sample_every": 1, "fixed_dt": False},
    "model": {"form": "convolution", "sobolev_s": 2.0},
    "init": {"params": {}},
    "certify": {"x0": 0.0},
    "weights": [],
    "mollify": {"epsilons": [], "calibration_C": 1.0},
    "thresholds": {"slope_threshold": 1e6, "zero_floor": 1e-13, "classify": {"o_drop": 0.5, "O_factor": 2.0}},
    "persist": {"selector": list(DEFAULT_SELECTOR)},
    "reductions": {"kinds": [], "tolerance": 1e-8},
    "characteristics": {"x0s": []},
}


def _merge(base, extra):
    out = copy.deepcopy(base)
    for key, val in extra.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def validate(raw):
    """Check ``raw`` against the schema and return it merged over the defaults."""
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    cfg = _merge(DEFAULTS, raw)
    if cfg["time"]["dt_min"] >= cfg["time"]["dt_max"]:
        raise ConfigError("config error at time: dt_min must be below dt_max")
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return validate(raw)


def _built(fn, *args):
    try:
        return fn(*args)
    except DP3Error as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config error: {exc}") from None


def build_grid(cfg):
    d = cfg["domain"]
    return _built(Grid, float(d["L"]), int(d["n_points"]))


def build_control(cfg):
    t = cfg["time"]
    return _built(lambda: StepControl(dt_max=t["dt_max"], t_end=t["t_end"], cfl=t["cfl"], dt_min=t["dt_min"],
                                      slope_threshold=cfg["thresholds"]["slope_threshold"]))


def build_initial(cfg, grid):
    return _built(make_initial, cfg["init"]["kind"], cfg["init"]["params"], grid)


def build_profiles(cfg, specs=None):
    specs = cfg["weights"] if specs is None else specs
    return [_built(WeightProfile, w["kind"], float(w["beta"]), float(w["N"])) for w in specs]
