"""Turaev-Viro growth (pi/M) log TV_r against the volume, with the leading-term ratio."""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

from whitehead_rt.asymptotics import solve_critical, tv_asymptotic
from whitehead_rt.invariants import turaev_viro
from whitehead_rt.special import QuantumLevel


@dataclass
class Config:
    p: int = 1
    q: int = 1
    levels: tuple[int, ...] = (10, 25, 51)


def run(cfg: Config, out=sys.stdout):
    prof = solve_critical(cfg.p, cfg.q)
    w = csv.writer(out)
    w.writerow(["N", "growth", "volume", "ratio_to_leading_term"])
    for N in cfg.levels:
        lv = QuantumLevel(N)
        tv = turaev_viro((cfg.p, cfg.q), lv).total
        w.writerow([N, f"{math.pi / lv.M * math.log(tv):.6f}", f"{prof.volume:.6f}",
                    f"{tv / tv_asymptotic(cfg.p, cfg.q, lv, prof):.6f}"])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--levels", type=int, nargs="+", default=list(Config.levels))
    a = ap.parse_args()
    run(Config(a.p, a.q, tuple(a.levels)))


if __name__ == "__main__":
    main()
