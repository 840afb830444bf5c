"""Volume, Chern-Simons and the length lower bound for every coprime slope in a box."""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

from whitehead_rt.geometry import NonHyperbolicError, in_set_S, slope_length_sq, solve_filling, vol_lower_bound


@dataclass
class Config:
    p_max: int = 12
    q_max: int = 6


def run(cfg: Config, out=sys.stdout):
    w = csv.writer(out)
    w.writerow(["p", "q", "length_sq", "vol", "cs", "lower_bound", "in_S"])
    for q in range(1, cfg.q_max + 1):
        for p in range(-cfg.p_max, cfg.p_max + 1):
            if math.gcd(p, q) != 1:
                continue
            try:
                sol = solve_filling(p, q)
            except NonHyperbolicError:
                continue
            b = vol_lower_bound(p, q)
            w.writerow([p, q, f"{slope_length_sq(p, q):.4f}", f"{sol.vol:.10f}", f"{sol.cs:.10f}",
                        "" if b.vacuous else f"{b.value:.6f}", in_set_S(p, q)])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=Config.p_max)
    ap.add_argument("--q-max", type=int, default=Config.q_max)
    a = ap.parse_args()
    run(Config(a.p_max, a.q_max))


if __name__ == "__main__":
    main()
