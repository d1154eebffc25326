"""Print |P_N|, |SL(2,Z_N)| and |P_N x| SL(2,Z_N)| by formula and by enumeration."""
import argparse
import time
from dataclasses import dataclass

from qclifford.clifford1 import sl2_enumerate
from qclifford.numtheory import sl2_order


@dataclass
class Config:
    max_n: int = 8


def main(cfg: Config) -> None:
    print(f"{'N':>3} {'|P_N|':>6} {'formula':>8} {'enum':>6} {'semidirect':>11} {'sec':>6}")
    for n in range(2, cfg.max_n + 1):
        t0 = time.perf_counter()
        enum = len(sl2_enumerate(n))
        dt = time.perf_counter() - t0
        print(f"{n:>3} {n * n:>6} {sl2_order(n):>8} {enum:>6} {n * n * enum:>11} {dt:>6.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    main(Config(**vars(ap.parse_args())))
