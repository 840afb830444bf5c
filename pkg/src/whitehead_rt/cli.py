"""Command-line front end: invariant, tv, geometry, asymptotics and verify.

Tables go to stdout as RFC 4180 CSV or JSON ({"slope", "rows", "manifest"});
logs go to stderr. Exit codes: 0 ok, 1 failed verification, 2 domain error,
3 accuracy error, 4 infeasible computation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import platform
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np
import scipy

from . import __version__
from .asymptotics import C_N, ContinuationError, solve_critical, tv_coefficient
from .geometry import in_set_S, solve_filling, vol_lower_bound
from .invariants import PRECISION_ENV, InfeasibleError, resolve_precision, rt_bruteforce, rt_reduced, turaev_viro
from .special import AccuracyError, DomainError, QuantumLevel
from .surgery import CoprimalityError, SurgeryPresentation
from .verify import SUITES, run_suite

log = logging.getLogger("whitehead_rt")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_ACCURACY, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


@dataclass
class RunManifest:
    command: str
    parameters: dict
    precision_mode: str
    versions: dict = field(default_factory=lambda: {
        "whitehead_rt": __version__, "schema": SCHEMA_VERSION, "python": platform.python_version(),
        "numpy": np.__version__, "scipy": scipy.__version__, "mpmath": mpmath.__version__,
    })
    timings: dict = field(default_factory=dict)

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.timings[name] = time.perf_counter() - t0


def fmt(x) -> str:
    """Round-trip text for a table cell: 17 significant digits for floats."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def emit(rows: list[dict], slope: dict, manifest: RunManifest, fmt_name: str, out=None) -> None:
    out = out or sys.stdout
    if fmt_name == "json":
        doc = {"slope": slope, "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows],
               "manifest": asdict(manifest)}
        json.dump(doc, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(rows[0].keys())
    for r in rows:
        w.writerow(fmt(v) for v in r.values())
    out.write(buf.getvalue())


def _slope_dict(p: int, q: int) -> dict:
    s = SurgeryPresentation.from_slope(p, q).slope
    return {"p": p, "q": q, "p_star": s.p_star, "q_star": s.q_star}


def _complex_fields(prefix: str, z: complex) -> dict:
    return {f"re_{prefix}": z.real, f"im_{prefix}": z.imag}


# --- commands ------------------------------------------------------------------------

def cmd_invariant(args) -> int:
    lv = QuantumLevel(args.N)
    mode = resolve_precision(args.precision, args.N)
    man = RunManifest("invariant", vars_of(args), mode)
    pres = SurgeryPresentation.from_slope(args.p, args.q)
    colors = [args.color] if args.color else range(1, args.N + 1)
    rows = []
    with man.stage("sum"):
        for m in colors:
            if args.method == "brute":
                s = rt_bruteforce(pres, m, lv)
            else:
                s = rt_reduced(pres, m, lv, mode)
            row = {"m": m, **_complex_fields("J_bar", s.J_bar), **_complex_fields("J", s.J_norm),
                   "abs_J": abs(s.J_norm),
                   "growth": 2 * math.pi / lv.M * math.log(abs(s.J_norm)) if s.J_norm != 0 else -math.inf}
            if args.method == "both":
                b = rt_bruteforce(pres, m, lv)
                row["residual"] = abs(s.J_bar - b.J_bar) / max(abs(b.J_bar), 1e-300)
            rows.append(row)
    emit(rows, _slope_dict(args.p, args.q), man, args.format)
    return EXIT_OK


def cmd_tv(args) -> int:
    lv = QuantumLevel(args.N)
    mode = resolve_precision(args.precision, args.N)
    man = RunManifest("tv", vars_of(args), mode)
    with man.stage("tv"):
        tv = turaev_viro((args.p, args.q), lv, args.mu, mode)
    rows, acc = [], 0.0
    for m, c in enumerate(tv.per_color, start=1):
        acc += c
        partial = tv.mu_r_sq * acc
        rows.append({"m": m, "abs_J_bar_sq": c, "partial_total": partial,
                     "growth": math.pi / lv.M * math.log(partial) if partial > 0 else -math.inf})
    log.info("TV_%d(W(%d,%d)) = %.17g", lv.r, args.p, args.q, tv.total)
    emit(rows, _slope_dict(args.p, args.q), man, args.format)
    return EXIT_OK


def cmd_geometry(args) -> int:
    man = RunManifest("geometry", vars_of(args), "double")
    with man.stage("solve"):
        sol = solve_filling(args.p, args.q)
    bound = vol_lower_bound(args.p, args.q)
    row = {**_complex_fields("z0", sol.z0), **_complex_fields("u", sol.u), **_complex_fields("v", sol.v),
           **_complex_fields("gamma", sol.gamma), **_complex_fields("z1", sol.z1), **_complex_fields("z2", sol.z2),
           "vol": sol.vol, "cs": sol.cs, "lower_bound": bound.value, "bound_vacuous": bound.vacuous,
           "in_S": in_set_S(args.p, args.q), "residual": sol.residual}
    emit([row], _slope_dict(args.p, args.q), man, args.format)
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    man = RunManifest("asymptotics", vars_of(args), "double")
    with man.stage("critical"):
        prof = solve_critical(args.p, args.q, x_samples=args.x_grid)
    pres = SurgeryPresentation.from_slope(args.p, args.q)
    quantities = [("theta1_0", prof.theta1_0), ("theta2_0", prof.theta2_0), ("z1_0", prof.z1_0),
                  ("z2_0", prof.z2_0), ("zeta", prof.zeta), ("two_pi_zeta", 2 * math.pi * prof.zeta),
                  ("omega", prof.omega), ("H", prof.H), ("tv_coefficient", complex(tv_coefficient(prof)))]
    if args.N:
        quantities.append(("C_N", C_N(pres, args.N)))
    quantities += [(f"zeta_x={x:.6g}", z) for x, z in prof.zeta_of_x]
    rows = [{"quantity": k, "re": complex(v).real, "im": complex(v).imag} for k, v in quantities]
    emit(rows, _slope_dict(args.p, args.q), man, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in suites:
        t0 = time.perf_counter()
        for c in run_suite(name, seed=args.seed):
            print(f"{name}: {c.line()}")
            ok &= c.passed
        log.info("suite %s finished in %.1f s", name, time.perf_counter() - t0)
    return EXIT_OK if ok else EXIT_FAILED


def vars_of(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="whitehead-rt", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def slope(p, need_N=True):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        if need_N:
            p.add_argument("--N", type=int, required=True)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    precision_default = os.environ.get(PRECISION_ENV, "auto")

    p = sub.add_parser("invariant", help="relative RT invariants for each color")
    slope(p)
    p.add_argument("--color", type=int)
    p.add_argument("--method", choices=("brute", "reduced", "both"), default="reduced")
    p.add_argument("--precision", choices=("auto", "double", "extended"), default=precision_default)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("tv", help="Turaev-Viro invariant with per-color contributions")
    slope(p)
    p.add_argument("--mu", choices=("asymptotic", "skein"), default="asymptotic")
    p.add_argument("--precision", choices=("auto", "double", "extended"), default=precision_default)
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("geometry", help="filling shape, holonomies, volume and CS")
    slope(p, need_N=False)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("asymptotics", help="critical point and expansion data")
    slope(p, need_N=False)
    p.add_argument("--N", type=int, help="also print the phase C_N at this level")
    p.add_argument("--x-grid", type=int, default=0, help="number of zeta(x) samples on [0, 0.01]")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.WARNING - 10 * min(args.verbose, 2))
    try:
        return args.func(args)
    except (DomainError, CoprimalityError) as e:
        log.error("domain error: %s", e)
        return EXIT_DOMAIN
    except (AccuracyError, ContinuationError) as e:
        log.error("accuracy error: %s", e)
        return EXIT_ACCURACY
    except InfeasibleError as e:
        log.error("infeasible: %s", e)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
