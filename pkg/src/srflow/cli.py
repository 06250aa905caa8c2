"""Command line front end: ``srflow simulate | converge | verify``.

Each run is driven by one JSON config; ``--set key.sub=value`` overrides
scalar fields (values are parsed as JSON, falling back to plain strings).
Exit codes: 0 success, 1 usage or config error, 2 suite failure, 3 run
stopped by an error.
"""

import argparse
import copy
import json
import math
import os
import sys

import numpy as np

from . import profiles
from .continuum import grid_from_profile, integrate_continuum
from .errors import ConfigError, GeometryError
from .flow import FlowConfig, integrate
from .io import config_hash, header_line
from .lattice import CLOSURES, build

EXIT_OK, EXIT_CONFIG, EXIT_SUITE, EXIT_RUNTIME = 0, 1, 2, 3

DEFAULTS = {
    "profile": {"kind": "sphere", "R0": 1.0},
    "lattice": {"n_levels": 101, "xi": 0.05, "a_range": [-1.2, 1.2], "closure": None,
                "cross_section": "sphere"},
    "solver": "srf",
    "flow": {},
    "converge": {"xi_list": [0.1, 0.05, 0.025], "N_list": [51, 101, 201], "a_range": [-1.2, 1.2],
                 "closure": "none", "min_xi_order": 1.7, "min_h_order": 1.0},
    "verify": {"xi_list": [0.05, 0.025, 0.0125], "random_states": 1000, "seed": 0},
    "workers": 1,
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(cfg, items):
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        node = cfg
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot override inside non-object field {key!r}")
        node[parts[-1]] = _parse_value(val)
    return cfg


def load_config(path, overrides=()):
    user = {}
    if path:
        try:
            with open(path) as f:
                user = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
    cfg = apply_overrides(_merge(DEFAULTS, user), overrides)
    validate(cfg)
    return cfg


def _positive(name, v):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v) or v <= 0:
        raise ConfigError(f"{name} must be a positive number, got {v!r}")


def _range(name, r):
    if not (isinstance(r, (list, tuple)) and len(r) == 2 and all(isinstance(x, (int, float)) for x in r)
            and r[0] < r[1]):
        raise ConfigError(f"{name} must be [lo, hi] with lo < hi")


def _profile(cfg):
    try:
        return profiles.RadialProfile.from_config(cfg["profile"])
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"bad profile: {e}") from e


def _resolutions(name, vals, cast):
    if not isinstance(vals, list) or len(vals) < 3:
        raise ConfigError(f"{name}: need ≥ 3 resolutions")
    for v in vals:
        _positive(name, v)
    return [cast(v) for v in vals]


def validate(cfg):
    """Schema checks that run before any computation."""
    _profile(cfg)
    lat = cfg["lattice"]
    n = lat.get("n_levels")
    if not isinstance(n, int) or n < 5:
        raise ConfigError("lattice.n_levels must be an integer >= 5")
    _positive("lattice.xi", lat.get("xi"))
    _range("lattice.a_range", lat.get("a_range"))
    if lat.get("closure") not in (None,) + CLOSURES:
        raise ConfigError(f"lattice.closure must be one of {CLOSURES}")
    if lat.get("cross_section") not in ("sphere", "flat"):
        raise ConfigError("lattice.cross_section must be 'sphere' or 'flat'")
    if cfg["solver"] not in ("srf", "continuum"):
        raise ConfigError("solver must be 'srf' or 'continuum'")
    if not isinstance(cfg["flow"], dict):
        raise ConfigError("flow must be an object")
    try:
        FlowConfig(**cfg["flow"])
    except TypeError as e:
        raise ConfigError(f"bad flow settings: {e}") from e
    cv = cfg["converge"]
    _range("converge.a_range", cv.get("a_range"))
    if cv.get("closure") not in CLOSURES:
        raise ConfigError(f"converge.closure must be one of {CLOSURES}")
    w = cfg["workers"]
    if not isinstance(w, int) or w < 1:
        raise ConfigError("workers must be a positive integer")
    vf = cfg["verify"]
    if not isinstance(vf.get("random_states"), int) or vf["random_states"] < 1:
        raise ConfigError("verify.random_states must be a positive integer")


def _closure(cfg, profile):
    c = cfg["lattice"]["closure"]
    if c is not None:
        return c
    # a round sphere band has no mirror plane at its ends
    return "none" if profile.kind == "sphere" else "reflective"


def _emit(summary):
    json.dump(summary, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    return str(v)


def _clean(obj):
    """Replace non-finite floats so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return None
    return obj


def _write_json(path, obj):
    with open(path, "w") as f:
        json.dump(_clean(obj), f, indent=2, default=_jsonable)
        f.write("\n")


def cmd_simulate(cfg, out):
    profile = _profile(cfg)
    lat = cfg["lattice"]
    closure = _closure(cfg, profile)
    flow_cfg = FlowConfig(**cfg["flow"])
    h = config_hash(cfg)
    try:
        if cfg["solver"] == "continuum":
            grid = grid_from_profile(profile, lat["n_levels"], lat["a_range"], closure=closure)
            traj = integrate_continuum(grid, flow_cfg)
        else:
            state = build(profile, lat["n_levels"], lat["xi"], lat["a_range"], closure=closure,
                          cross_section=lat["cross_section"])
            traj = integrate(state, flow_cfg)
    except GeometryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as e:
        raise ConfigError(str(e)) from e
    os.makedirs(out, exist_ok=True)
    traj.write_csv(os.path.join(out, "trajectory.csv"), header=header_line(cfg, "trajectory"))
    summary = traj.summary()
    ratio = traj.ratio()
    ratio = ratio[np.isfinite(ratio)]
    summary.update({"config_hash": h, "solver": cfg["solver"], "closure": closure,
                    "ratio_final": float(ratio[-1]) if ratio.size else float("nan")})
    summary = _clean(summary)
    _write_json(os.path.join(out, "summary.json"), summary)
    _emit(summary)
    return EXIT_RUNTIME if str(traj.reason).startswith("integrator failed") else EXIT_OK


def cmd_converge(cfg, out):
    from .verification import convergence_study
    cv = cfg["converge"]
    xi = _resolutions("converge.xi_list", cv["xi_list"], float)
    N = _resolutions("converge.N_list", cv["N_list"], int)
    if any(n < 5 for n in N):
        raise ConfigError("converge.N_list entries must be >= 5")
    profile = _profile(cfg)
    try:
        rep = convergence_study(profile, xi, N, tuple(cv["a_range"]), closure=cv["closure"],
                                min_xi_order=cv["min_xi_order"], min_h_order=cv["min_h_order"],
                                workers=cfg["workers"])
    except ValueError as e:
        raise ConfigError(str(e)) from e
    os.makedirs(out, exist_ok=True)
    head = header_line(cfg, "convergence")
    with open(os.path.join(out, "convergence.json"), "w") as f:
        f.write(json.dumps({"header": head, **_clean(json.loads(rep.to_json()))}, indent=2) + "\n")
    with open(os.path.join(out, "convergence.txt"), "w") as f:
        f.write(head + "\n" + rep.to_text() + "\n")
    rep.write_csv(os.path.join(out, "convergence.csv"), header=head)
    _emit(_clean({"config_hash": config_hash(cfg), "passed": rep.passed, "orders": rep.orders,
                  "monotone": rep.monotone, "limits": rep.limits, "runtime": rep.runtime}))
    return EXIT_OK if rep.passed else EXIT_SUITE


def cmd_verify(cfg, out):
    from .verification import verify_suite, verify_text
    vf = cfg["verify"]
    xi = _resolutions("verify.xi_list", vf["xi_list"], float)
    report, hard = verify_suite(xi, count=vf["random_states"], seed=vf["seed"])
    os.makedirs(out, exist_ok=True)
    head = header_line(cfg, "verification")
    _write_json(os.path.join(out, "verify.json"), {"header": head, **report})
    with open(os.path.join(out, "verify.txt"), "w") as f:
        f.write(head + "\n" + verify_text(report) + "\n")
    for name in report["findings"]:
        print(f"warning: printed form misprint finding: {name}", file=sys.stderr)
    for fam in report["suspected_typos"]:
        print(f"warning: closed-form deficit mismatch (suspected misprint): {fam}", file=sys.stderr)
    _emit({"config_hash": config_hash(cfg), "hard_failures": hard, "findings": report["findings"],
           "suspected_typos": report["suspected_typos"]})
    return EXIT_SUITE if hard else EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "converge": cmd_converge, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="srflow", description="Simplicial Ricci flow on frustum lattices")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--workers", type=int, help="worker processes for parameter grids")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config field (dotted key)")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    try:
        sets = list(args.set)
        if args.workers is not None:
            sets.append(f"workers={args.workers}")
        cfg = load_config(args.config, sets)
        return COMMANDS[args.command](cfg, args.out)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
