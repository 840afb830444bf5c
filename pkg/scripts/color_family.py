"""Critical value zeta(x) along the color deformation x = m/M - 1, next to the
quadratic prediction from the second-derivative formula."""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from whitehead_rt.asymptotics import critical_x, solve_critical, zeta_second_derivative_formula


@dataclass
class Config:
    p: int = 5
    q: int = 2
    x_max: float = 0.01
    samples: int = 11


def run(cfg: Config, out=sys.stdout):
    prof = solve_critical(cfg.p, cfg.q)
    d2 = zeta_second_derivative_formula(prof)
    w = csv.writer(out)
    w.writerow(["x", "re_zeta", "quadratic_prediction", "residual", "proven_regime"])
    for x in np.linspace(0.0, cfg.x_max, cfg.samples):
        c = critical_x(cfg.p, cfg.q, float(x), profile=prof)
        w.writerow([f"{x:.5f}", f"{c.zeta.real:.10f}", f"{prof.zeta.real + d2 * x * x / 2:.10f}",
                    f"{c.residual:.1e}", c.in_proven_regime])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--x-max", type=float, default=Config.x_max)
    ap.add_argument("--samples", type=int, default=Config.samples)
    a = ap.parse_args()
    run(Config(a.p, a.q, a.x_max, a.samples))


if __name__ == "__main__":
    main()
