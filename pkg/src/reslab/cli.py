"""Command-line front end and batch experiment driver.

Every subcommand reads a configuration either from a JSON file
(``--config``) or from one of the canonical builders (``--builder``), runs
one task and prints a JSON report on stdout.  Failures print a JSON error
object on stderr and exit with 2 (validation), 3 (numerical) or 4 (I/O).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import exppoly, roots, sizecalc
from .errors import ConfigIOError, ConfigParseError, InvalidParameterError, ReslabError
from .geometry import BUILDERS, PointConfig, dump_config, load_config
from .pseudoorbit import enumerate_irreducible, resonance_condition_pseudo

__all__ = ["ExperimentSpec", "run", "verify", "main", "TASKS"]

DEFAULT_SEED = 20180412
ALPHA_PROBES = (-1.0, 0.0, 1.0, 10.0)


# configuration sources -----------------------------------------------------


def build_config(name: str, params: dict, alpha: float = 0.0) -> PointConfig:
    if name not in BUILDERS:
        raise InvalidParameterError(
            f"unknown builder {name!r}; choose from {', '.join(sorted(BUILDERS))}"
        )
    try:
        return BUILDERS[name](alpha=alpha, **params)
    except TypeError as exc:
        raise InvalidParameterError(f"builder {name!r}: {exc}") from None


def _builder_params(ns) -> dict:
    name = ns.builder
    if name == "segment":
        return {"length": ns.length}
    if name == "triangle":
        if not ns.sides:
            raise InvalidParameterError("triangle builder needs --sides l12,l23,l13")
        l12, l23, l13 = _floats(ns.sides, 3)
        return {"l12": l12, "l23": l23, "l13": l13}
    if name in ("antipodal", "sphere-center"):
        if ns.m is None:
            raise InvalidParameterError(f"{name} builder needs --m")
        return {"m": ns.m}
    if name == "nonweyl4":
        if None in (ns.a, ns.b, ns.c):
            raise InvalidParameterError("nonweyl4 builder needs --a, --b and --c")
        return {"a": ns.a, "b": ns.b, "c": ns.c}
    return {}


def _floats(text: str, n: int) -> list:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InvalidParameterError(f"expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise InvalidParameterError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def config_from_args(ns) -> PointConfig:
    if ns.config and ns.builder:
        raise InvalidParameterError("give either --config or --builder, not both")
    if ns.config:
        config = load_config(ns.config)
    elif ns.builder:
        config = build_config(ns.builder, _builder_params(ns))
    else:
        raise InvalidParameterError("a configuration is required (--config or --builder)")
    if ns.alpha is not None:
        config = config.with_alpha(ns.alpha)
    return config


# tasks ---------------------------------------------------------------------


def task_size(config, method="brute-force", list_maximizers=True, **_):
    if method == "assignment":
        return {"v_x": sizecalc.size_assignment(config), "method": "assignment"}
    report = sizecalc.size_bruteforce(config)
    out = report.to_dict()
    out["method"] = "brute-force"
    out["n_maximizers"] = len(report.maximizers)
    if not list_maximizers:
        del out["maximizers"]
    return out


def task_effective_size(config, method="both", **_):
    F = exppoly.from_determinant(config)
    out = {"alpha": config.alpha}
    if method in ("symbolic", "both"):
        out["w_x"] = exppoly.effective_size(F)
    if method in ("growth", "both"):
        out["w_x_growth"] = exppoly.effective_size_growth_estimate(config, F=F)
    out["v_x"] = sizecalc.size_assignment(config)
    if "w_x" in out:
        out["weyl"] = F.alphabet.same_length(out["w_x"], out["v_x"])
    return out


def task_exppoly(config, **_):
    F = exppoly.from_determinant(config)
    out = F.to_dict()
    out["pruned"] = [
        {"sigma": p.sigma, "sigma_class": list(p.sigma_class), "residual": p.residual}
        for p in F.pruned
    ]
    return out


def task_pseudo_orbits(config, max_bonds=None, **_):
    from .geometry import distance_matrix

    table = enumerate_irreducible(config.n, distance_matrix(config))
    return {
        "buckets": [
            {
                "m": m,
                "orbits": [
                    {"cycles": o.cycle_lists(), "total_length": o.total_length}
                    for o in orbits
                ],
            }
            for m, orbits in table.items()
            if max_bonds is None or m <= max_bonds
        ]
    }


def task_resonances(config, rect=None, tol=1e-10, **_):
    if rect is None:
        raise InvalidParameterError("resonances needs a rectangle x0,x1,y0,y1")
    F = exppoly.from_determinant(config)
    zeros = roots.locate_zeros(F, config.alpha, rect, tol=tol)
    return {"rect": list(rect), "zeros": [z.to_dict() for z in zeros]}


def task_count(config, radius=None, **_):
    if radius is None:
        raise InvalidParameterError("count needs a radius")
    F = exppoly.from_determinant(config)
    n, used = roots.count_zeros_disc(F, config.alpha, radius, return_radius=True)
    return {"radius": used, "count": n}


def task_slope(config, rmax=None, steps=100, **_):
    if rmax is None:
        raise InvalidParameterError("slope needs --rmax")
    F = exppoly.from_determinant(config)
    curve = roots.counting_curve(F, config.alpha, rmax, steps)
    w_over_pi = exppoly.effective_size(F) / math.pi
    out = curve.to_dict()
    out["wx_over_pi"] = w_over_pi
    out["relative_error"] = abs(curve.slope - w_over_pi) / w_over_pi if w_over_pi else None
    return out


def task_verify(config, seed=DEFAULT_SEED, **_):
    return verify(config, config.alpha, seed=seed)


TASKS = {
    "size": task_size,
    "effective-size": task_effective_size,
    "exppoly": task_exppoly,
    "pseudo-orbits": task_pseudo_orbits,
    "resonances": task_resonances,
    "count": task_count,
    "slope": task_slope,
    "verify": task_verify,
}


# verification ----------------------------------------------------------------


def _check(name, passed, residual, **detail):
    return {"name": name, "passed": bool(passed), "residual": residual, **detail}


def verify(config: PointConfig, alpha=None, seed: int = DEFAULT_SEED,
           n_points: int = 100, radius: float = 20.0) -> dict:
    """Run every cross-check available for one configuration.

    (i) determinant, exponential polynomial and pseudo-orbit sum agree at
    seeded random points; (ii) symbolic and growth-rate effective sizes
    agree; (iii) the disc count matches the located zeros; (iv) the
    effective size does not depend on alpha.
    """
    if alpha is not None:
        config = config.with_alpha(alpha)
    rng = np.random.default_rng(seed)
    F = exppoly.from_determinant(config)
    checks = []

    kappa = rng.uniform(-50, 50, n_points) + 1j * rng.uniform(-50, 50, n_points)
    f_val = F(kappa)
    f_mass = F.l1_mass(kappa)
    det = exppoly.determinant(config, kappa)
    pso, p_mass = resonance_condition_pseudo(config, None, kappa, return_mass=True)
    scale = np.maximum(f_mass, p_mass)
    resid = float(np.max(np.maximum.reduce([
        np.abs(f_val - det), np.abs(f_val - pso), np.abs(det - pso)]) / scale))
    checks.append(_check("determinant-vs-pseudo-orbit", resid <= 1e-12, resid))

    w_sym = exppoly.effective_size(F)
    try:
        w_grow = exppoly.effective_size_growth_estimate(config, F=F)
        gap = abs(w_sym - w_grow)
    except ReslabError as exc:
        w_grow, gap = None, math.inf
        checks.append(_check("symbolic-vs-growth", False, None, error=str(exc)))
    else:
        checks.append(_check("symbolic-vs-growth", gap <= 1e-3, gap,
                             symbolic=w_sym, growth=w_grow))

    count, used = roots.count_zeros_disc(F, config.alpha, radius, return_radius=True)
    box = (-1.0007 * used, 1.0011 * used, -1.0013 * used, 1.0005 * used)
    zeros = roots.locate_zeros(F, config.alpha, box)
    located = sum(z.multiplicity for z in zeros if abs(z.kappa) < used)
    checks.append(_check("count-vs-locate", located == count, abs(located - count),
                         count=count, located=located, radius=used))

    tops = []
    for a in ALPHA_PROBES:
        Fa = exppoly.from_determinant(config.with_alpha(a))
        tops.append(sorted(t.sigma_class for t in exppoly.leading_terms(Fa)))
    same = all(t == tops[0] for t in tops)
    checks.append(_check("alpha-independence", same, 0 if same else 1,
                         alphas=list(ALPHA_PROBES)))

    v_x = sizecalc.size_assignment(config, F.alphabet)
    return {
        "seed": seed,
        "alpha": config.alpha,
        "v_x": v_x,
        "w_x": w_sym,
        "weyl": F.alphabet.same_length(w_sym, v_x),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


# batch driver ----------------------------------------------------------------


@dataclass
class ExperimentSpec:
    """A batch of tasks on one configuration and a list of strengths.

    ``source`` is ``{"config": path}`` or ``{"builder": name, "params": {...}}``.
    """

    source: dict
    tasks: list
    alphas: list = field(default_factory=lambda: [0.0])
    format: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tasks:
            raise InvalidParameterError("experiment needs at least one task")
        unknown = [t for t in self.tasks if t not in TASKS]
        if unknown:
            raise InvalidParameterError(f"unknown tasks: {', '.join(unknown)}")
        if not self.alphas:
            raise InvalidParameterError("alpha list is empty")
        if self.format not in ("json", "csv"):
            raise InvalidParameterError("format must be json or csv")
        if "builder" in self.source and self.source["builder"] not in BUILDERS:
            raise InvalidParameterError(f"unknown builder {self.source['builder']!r}")
        if "builder" not in self.source and "config" not in self.source:
            raise InvalidParameterError("source needs 'config' or 'builder'")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidParameterError(f"bad experiment spec: {exc}") from None

    def config(self, alpha: float) -> PointConfig:
        if "config" in self.source:
            return load_config(self.source["config"]).with_alpha(alpha)
        return build_config(self.source["builder"], self.source.get("params", {}), alpha)


def run(spec: ExperimentSpec):
    """Execute every task for every alpha in order.

    Returns ``(exit_status, reports)``; a failing task stops the batch and
    its error object is appended as the last report.
    """
    reports = []
    for alpha in spec.alphas:
        for task in spec.tasks:
            try:
                config = spec.config(alpha)
                opts = spec.options.get(task, {})
                result = TASKS[task](config, **opts)
            except ReslabError as exc:
                reports.append({"task": task, "alpha": alpha, **exc.to_dict()})
                return exc.exit_code, reports
            reports.append({"task": task, "alpha": alpha, "result": result})
            if task == "verify" and not result["passed"]:
                return 3, reports
    return 0, reports


# argument parsing --------------------------------------------------------------


def _add_source(p):
    p.add_argument("--config", help="configuration JSON file")
    p.add_argument("--builder", choices=sorted(BUILDERS), help="canonical configuration")
    p.add_argument("--alpha", type=float, help="override interaction strength")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--sides", help="triangle sides l12,l23,l13")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("builder", help="emit a canonical configuration")
    p.add_argument("name", choices=sorted(BUILDERS))
    _add_source(p)
    p.add_argument("--out", help="write to file instead of stdout")

    p = sub.add_parser("size", help="size V_X and its maximising permutations")
    _add_source(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--brute-force", dest="method", action="store_const", const="brute-force")
    g.add_argument("--assignment", dest="method", action="store_const", const="assignment")
    p.add_argument("--list-maximizers", action="store_true")

    p = sub.add_parser("effective-size", help="effective size W_X")
    _add_source(p)
    p.add_argument("--method", choices=["symbolic", "growth", "both"], default="both")

    p = sub.add_parser("exppoly", help="exponential-polynomial term list")
    _add_source(p)
    p.add_argument("--json", action="store_true", help="JSON output (the default)")

    p = sub.add_parser("pseudo-orbits", help="irreducible pseudo-orbit tables")
    _add_source(p)
    p.add_argument("--max-bonds", type=int)

    p = sub.add_parser("resonances", help="locate zeros in a rectangle")
    _add_source(p)
    p.add_argument("--rect", required=True, help="x0,x1,y0,y1")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("count", help="zeros in the disc |kappa| < R")
    _add_source(p)
    p.add_argument("--radius", type=float, required=True)

    p = sub.add_parser("slope", help="counting-function slope against W_X/pi")
    _add_source(p)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)

    p = sub.add_parser("verify", help="run all cross-checks")
    _add_source(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("run", help="run a batch experiment file")
    p.add_argument("--experiment", required=True)
    return parser


def _zeros_csv(zeros) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "multiplicity", "kind"])
    for z in zeros:
        writer.writerow([repr(z["re"]), repr(z["im"]), z["multiplicity"], z["kind"]])
    return buf.getvalue()


def _dispatch(ns) -> tuple:
    if ns.command == "run":
        try:
            with open(ns.experiment) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigIOError(f"cannot read {ns.experiment}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigParseError(f"{ns.experiment}: {exc}") from None
        status, reports = run(ExperimentSpec.from_dict(data))
        return status, json.dumps(reports, indent=2)

    if ns.command == "builder":
        ns.builder = ns.name
        config = config_from_args(ns)
        return 0, dump_config(config, ns.out)

    config = config_from_args(ns)
    if ns.command == "size":
        result = task_size(config, method=ns.method or "brute-force",
                           list_maximizers=ns.list_maximizers)
    elif ns.command == "effective-size":
        result = task_effective_size(config, method=ns.method)
    elif ns.command == "exppoly":
        result = task_exppoly(config)
    elif ns.command == "pseudo-orbits":
        result = task_pseudo_orbits(config, max_bonds=ns.max_bonds)
    elif ns.command == "resonances":
        result = task_resonances(config, rect=_floats(ns.rect, 4), tol=ns.tol)
        if ns.format == "csv":
            return 0, _zeros_csv(result["zeros"]).rstrip("\n")
    elif ns.command == "count":
        result = task_count(config, radius=ns.radius)
    elif ns.command == "slope":
        result = task_slope(config, rmax=ns.rmax, steps=ns.steps)
    elif ns.command == "verify":
        result = verify(config, seed=ns.seed)
        return (0 if result["passed"] else 3), json.dumps(result, indent=2)
    return 0, json.dumps(result, indent=2)


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    try:
        status, text = _dispatch(ns)
    except ReslabError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return exc.exit_code
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
