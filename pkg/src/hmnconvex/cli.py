"""Command-line entry point: ``hmnconvex <command> [flags]``.

Every command prints one JSON report (or writes it to ``--json FILE``). Exit status is 0
whenever the analysis ran, whatever the verdict, and 2 when it could not run.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import sys
from typing import Any, Callable, Optional

from . import algebra, classes, hfun, jensen, means, pointwise, transforms
from .errors import ConfigError, HMNError, HypothesisFailure
from .funcs import chord_csv, emit_chord_data, parse_fn
from .report import dumps, envelope
from .sampling import DEFAULT_SEED, SamplePlan, Tolerance

DEFAULTS: dict[str, Any] = {
    "f": None, "g": None, "h": "id", "h2": None, "domain": None, "g_domain": None, "h_domain": None,
    "label": None, "g_label": None, "family": None, "direction": "convex",
    "seed": DEFAULT_SEED, "grid": 64, "random": 256, "tol": 1e-9, "eps": 1e-6,
    "weights": None, "points": None, "w": None, "m": None, "M": None, "tau": None,
    "c": 1.0, "r": 1.0, "lambda": 1.0, "x": None, "y": None, "n": 101, "chain": False,
    "limit": None, "json": None, "csv": None,
}

# argparse dest for each config key
_DEST = {"lambda": "lam", "M": "M_"}

COMMANDS = ("classify", "check", "midconvex", "transform-crosscheck", "schur", "three-point",
            "compose", "product", "functional", "jensen", "converse", "axioms", "chord", "check-h")


def _interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in str(text).split(","))
    except ValueError:
        raise ConfigError(f"expected an interval 'lo,hi', got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"empty interval {text!r}")
    return lo, hi


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


_CASTS: dict[str, Callable[[str], Any]] = {
    "seed": lambda s: int(s, 0), "grid": int, "random": int, "n": int, "limit": int,
    "tol": float, "eps": float, "m": float, "M": float, "tau": float, "c": float, "r": float,
    "lambda": float, "x": float, "y": float,
    "chain": lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
}


def read_config(path: str, command: str) -> dict:
    """Keys from ``[common]`` and ``[<command>]``; unknown sections or keys are errors."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out: dict = {}
    for section in cp.sections():
        if section != "common" and section not in COMMANDS:
            raise ConfigError(f"unknown config section [{section}]")
        if section not in ("common", command):
            continue
        for key, raw in cp.items(section):
            k = key.replace("-", "_")
            if k not in DEFAULTS or k in ("json", "csv"):
                raise ConfigError(f"unknown config key {key!r} in [{section}]")
            try:
                out[k] = _CASTS.get(k, str)(raw)
            except ValueError:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from None
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file with [common] and per-command sections")
    p.add_argument("--f", help="function: builtin name (cosh, exp, ...), pow:<lambda> or expr:<text>")
    p.add_argument("--h", help="h-function: id, one, recip, pow:<r> or expr:<text> (default id)")
    p.add_argument("--h2", help="second h-function (compose, product, chord)")
    p.add_argument("--domain", help="domain of f as lo,hi (inf allowed)")
    p.add_argument("--h-domain", dest="h_domain", help="domain of h as lo,hi (default 0,4)")
    p.add_argument("--label", help="class label such as AG")
    p.add_argument("--seed", type=lambda s: int(s, 0), help=f"RNG seed (default {DEFAULT_SEED:#x})")
    p.add_argument("--grid", type=int, help="grid points per axis (default 64)")
    p.add_argument("--random", type=int, help="random points on top of the grid (default 256)")
    p.add_argument("--tol", type=float, help="absolute and relative tolerance (default 1e-9)")
    p.add_argument("--eps", type=float, help="relative endpoint margin (default 1e-6)")
    p.add_argument("--json", nargs="?", const="-", help="write the report to FILE (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmnconvex",
        description="Classify and verify h-MN-convexity numerically; every command prints a JSON report.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "classify": "all nine classes plus lattice consistency",
        "check": "one class label",
        "midconvex": "midpoint inequality with h(1/2)",
        "transform-crosscheck": "direct vs transform-based verdicts",
        "schur": "three-point inequality for x^lambda and t^r",
        "three-point": "three-point inequality scan or a single triple (--points)",
        "compose": "composition table lookup and numeric check",
        "product": "product rule for f g",
        "functional": "extended AG/GA/GG functional inequalities",
        "jensen": "weighted n-point Jensen inequality",
        "converse": "converse Jensen bound on (m, M)",
        "axioms": "mean axioms and the generalized AM-GM-HM chain",
        "chord": "h-chord curve data as CSV",
        "check-h": "predicates on h",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name], description=helps[name])
        _common(p)
        if name in ("transform-crosscheck",):
            p.add_argument("--tau", type=float, help="G-row reparametrization constant")
        if name in ("schur",):
            p.add_argument("--r", type=float, help="exponent of h(t)=t^r (default 1)")
            p.add_argument("--lambda", dest="lam", type=float, help="exponent of f(x)=x^lambda (default 1)")
        if name in ("three-point", "jensen", "converse"):
            p.add_argument("--points", help="comma-separated points")
        if name == "three-point":
            p.add_argument("--limit", type=int, help="maximum number of triples scanned")
        if name in ("compose", "product"):
            p.add_argument("--g", help="second function")
            p.add_argument("--g-domain", dest="g_domain", help="domain of g as lo,hi")
        if name == "compose":
            p.add_argument("--g-label", dest="g_label", help="class of g")
        if name == "product":
            p.add_argument("--c", type=float, help="bound on h(t)+h(1-t) (default 1)")
        if name in ("product", "functional", "jensen", "converse"):
            p.add_argument("--direction", choices=("convex", "concave"))
        if name == "functional":
            p.add_argument("--family", choices=tuple(algebra.FUNCTIONAL_FAMILIES))
        if name in ("jensen", "converse"):
            p.add_argument("--weights", help="CSV file with columns weight,point (header optional)")
            p.add_argument("--w", help="comma-separated weights (default equal)")
            p.add_argument("--m", type=float, help="left end of the enclosing interval")
            p.add_argument("--M", dest="M_", type=float, help="right end of the enclosing interval")
        if name == "jensen":
            p.add_argument("--chain", action="store_true", default=None,
                           help="also evaluate the converse bound")
        if name == "chord":
            p.add_argument("--x", type=float, help="left chord end")
            p.add_argument("--y", type=float, help="right chord end")
            p.add_argument("--n", type=int, help="number of points (default 101)")
            p.add_argument("--csv", help="write the CSV to OUT instead of stdout")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Built-in defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config, args.command))
    for key in DEFAULTS:
        val = getattr(args, _DEST.get(key, key), None)
        if val is not None:
            cfg[key] = val
    return cfg


def _plan(cfg: dict) -> SamplePlan:
    return SamplePlan(grid_per_axis=cfg["grid"], random_count=cfg["random"], seed=cfg["seed"],
                      epsilon_margin=cfg["eps"], tol=Tolerance(cfg["tol"], cfg["tol"]))


def _need(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing required setting(s): " + ", ".join("--" + k for k in missing))


def _f(cfg: dict, key: str = "f", dom_key: str = "domain"):
    _need(cfg, key)
    dom = _interval(cfg[dom_key]) if cfg.get(dom_key) else None
    return parse_fn(cfg[key], dom)


def _h(cfg: dict, key: str = "h"):
    _need(cfg, key)
    dom = _interval(cfg["h_domain"]) if cfg.get("h_domain") else hfun.DEFAULT_H_DOMAIN
    return hfun.parse_h(cfg[key], dom)


def read_weights(path: str) -> tuple[list[float], list[float]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise ConfigError(f"cannot read weights file {path}: {exc}") from exc
    w, x = [], []
    for i, row in enumerate(rows):
        if len(row) != 2:
            raise ConfigError(f"{path}: row {i + 1} needs two columns (weight, point)")
        try:
            w.append(float(row[0]))
            x.append(float(row[1]))
        except ValueError:
            if i == 0:
                continue  # header
            raise ConfigError(f"{path}: row {i + 1} is not numeric") from None
    return w, x


def _weights_points(cfg: dict):
    if cfg.get("weights"):
        w, x = read_weights(cfg["weights"])
    else:
        _need(cfg, "points")
        x = _floats(cfg["points"])
        w = _floats(cfg["w"]) if cfg.get("w") else [1.0] * len(x)
    return means.WeightVector(tuple(w)), x


# -- commands --------------------------------------------------------------------------------

def cmd_classify(cfg):
    return classes.classify_all(_f(cfg), _h(cfg), _plan(cfg))


def cmd_check(cfg):
    _need(cfg, "label")
    return classes.check_class(cfg["label"], _f(cfg), _h(cfg), _plan(cfg))


def cmd_midconvex(cfg):
    return classes.check_midconvex(_f(cfg), _h(cfg), _plan(cfg))


def cmd_transform_crosscheck(cfg):
    f, h, plan = _f(cfg), _h(cfg), _plan(cfg)
    labels = [cfg["label"]] if cfg.get("label") else [str(lab) for lab in classes.ALL_LABELS]
    cases = [transforms.cross_check(lab, f, h, cfg.get("tau"), plan) for lab in labels]
    return {"cases": cases, "disagreements": sum(not c.agree for c in cases)}


def cmd_schur(cfg):
    _need(cfg, "label")
    return pointwise.schur_check(cfg["label"], cfg["r"], cfg["lambda"], _plan(cfg))


def cmd_three_point(cfg):
    _need(cfg, "label")
    f, h = _f(cfg), _h(cfg)
    if cfg.get("points"):
        p = pointwise.TriplePoint(*_floats(cfg["points"]))
        res = pointwise.three_point_residual(cfg["label"], f, h, p)
        return {"label": cfg["label"].upper(), "points": [p.x1, p.x2, p.x3], "residual": res,
                "holds": res >= -float(_plan(cfg).tol.slack(res, 0.0))}
    return pointwise.check_three_point(cfg["label"], f, h, _plan(cfg), cfg.get("limit"))


def cmd_compose(cfg):
    if cfg.get("f") is None and cfg.get("g") is None:
        return {"table": algebra.composition_table()}
    _need(cfg, "label", "g_label", "h2")
    return algebra.verify_composition(_f(cfg), _f(cfg, "g", "g_domain"), cfg["label"], cfg["g_label"],
                                      _h(cfg), _h(cfg, "h2"), _plan(cfg))


def cmd_product(cfg):
    _need(cfg, "label")
    lab = classes.ClassLabel.parse(cfg["label"])
    h1 = _h(cfg)
    h2 = _h(cfg, "h2") if cfg.get("h2") else h1
    return algebra.product_rule(_f(cfg), _f(cfg, "g", "g_domain"), lab.n, lab.m, h1, h2, cfg["c"],
                                _plan(cfg), cfg["direction"])


def cmd_functional(cfg):
    _need(cfg, "family")
    return algebra.functional_inequality_check(cfg["family"], _f(cfg), _h(cfg), cfg["direction"],
                                               _plan(cfg))


def cmd_jensen(cfg):
    _need(cfg, "label")
    w, x = _weights_points(cfg)
    f, h, tol = _f(cfg), _h(cfg), _plan(cfg).tol
    if cfg.get("chain"):
        return jensen.jensen_chain_check(cfg["label"], f, h, w, x, cfg.get("m"), cfg.get("M"), tol)
    return jensen.jensen_eval(cfg["label"], f, h, w, x, tol, cfg["direction"])


def cmd_converse(cfg):
    _need(cfg, "label")
    w, x = _weights_points(cfg)
    return jensen.converse_jensen_eval(cfg["label"], _f(cfg), _h(cfg), w, x, cfg.get("m"),
                                       cfg.get("M"), _plan(cfg).tol, cfg["direction"])


def cmd_axioms(cfg):
    plan, h = _plan(cfg), _h(cfg)
    out: dict = {"means": {k.value: means.check_mean_axioms(k, plan) for k in (means.A, means.G, means.H)}}
    try:
        out["am_gm_hm"] = means.check_am_gm_hm(h, plan)
    except HypothesisFailure as exc:
        out["am_gm_hm"] = {"status": "indeterminate", "samples_checked": 0, "worst_margin": None,
                           "reason": f"hypothesis failed: {exc}"}
    return out


def cmd_chord(cfg):
    f = _f(cfg)
    hs = [_h(cfg)] + ([_h(cfg, "h2")] if cfg.get("h2") else [])
    lo, hi = f.domain
    x = cfg["x"] if cfg.get("x") is not None else lo
    y = cfg["y"] if cfg.get("y") is not None else hi
    if math.isinf(x) or math.isinf(y):
        raise ConfigError("chord needs finite --x and --y")
    header, rows = emit_chord_data(f, hs, x, y, cfg["n"])
    return {"header": header, "rows": rows, "x": x, "y": y}


def cmd_check_h(cfg):
    h, plan = _h(cfg), _plan(cfg)
    return {
        "supermultiplicative": hfun.check_supermultiplicative(h, plan),
        "submultiplicative": hfun.check_submultiplicative(h, plan),
        "nondecreasing_on_unit": hfun.check_nondecreasing_on_unit(h, plan),
        "above_identity": hfun.check_dominates_identity(h, hfun.ABOVE_ID, plan),
        "below_identity": hfun.check_dominates_identity(h, hfun.BELOW_ID, plan),
        "control_function": hfun.check_control_function(h, plan),
    }


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}

_REPORTED = ("f", "g", "h", "h2", "domain", "g_domain", "h_domain", "label", "g_label", "family",
             "direction", "seed", "grid", "random", "tol", "eps", "weights", "points", "w", "m", "M",
             "tau", "c", "r", "lambda", "x", "y", "n", "chain", "limit")


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        result = HANDLERS[args.command](cfg)
        config = {k: cfg[k] for k in _REPORTED if cfg.get(k) is not None}
        report = envelope(args.command, config, result)
        if args.command == "chord" and cfg.get("csv"):
            _write(cfg["csv"], chord_csv(result["header"], result["rows"]))
        _write(cfg.get("json"), dumps(report))
    except (HMNError, OSError, ValueError) as exc:
        print(f"hmnconvex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
