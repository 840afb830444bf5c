"""Growth of |J_N| against 2 pi zeta for one slope over a range of levels.

Prints N, the error E(N) on the branch nearest M zeta, the leading-term ratio
exact/asymptotic and the prefactor contribution to the growth rate.
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

from whitehead_rt.asymptotics import asymptotic_J, log_asymptotic_J, solve_critical
from whitehead_rt.invariants import rt_reduced
from whitehead_rt.special import QuantumLevel
from whitehead_rt.verify import convergence_error


@dataclass
class Config:
    p: int = 5
    q: int = 2
    levels: tuple[int, ...] = (25, 51, 101, 201)


def run(cfg: Config, out=sys.stdout):
    prof = solve_critical(cfg.p, cfg.q)
    w = csv.writer(out)
    w.writerow(["N", "E", "ratio_re", "ratio_im", "prefactor_gap"])
    for N in cfg.levels:
        lv = QuantumLevel(N)
        exact = rt_reduced((cfg.p, cfg.q), N, lv, "extended").J_norm
        ratio = exact / asymptotic_J(cfg.p, cfg.q, lv, prof)
        gap = 2 * math.pi / lv.M * log_asymptotic_J(cfg.p, cfg.q, lv, prof).real - prof.volume
        w.writerow([N, f"{convergence_error(cfg.p, cfg.q, N, prof.zeta):.6f}",
                    f"{ratio.real:.6f}", f"{ratio.imag:.6f}", f"{gap:.6f}"])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--levels", type=int, nargs="+", default=list(Config.levels))
    a = ap.parse_args()
    run(Config(a.p, a.q, tuple(a.levels)))


if __name__ == "__main__":
    main()
