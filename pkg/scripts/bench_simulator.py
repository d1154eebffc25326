"""Time the coset-level simulator on random circuits of growing size."""
import argparse
from dataclasses import dataclass, field

from qclifford.stabsim import benchmark


@dataclass
class Config:
    dims: list = field(default_factory=lambda: [3] * 50)
    gate_counts: list = field(default_factory=lambda: [1_000, 10_000, 100_000])
    seed: int = 7


def main(cfg: Config) -> None:
    for g in cfg.gate_counts:
        r = benchmark(cfg.dims, g, cfg.seed)
        print(f"{len(cfg.dims)} factors, {g:>7} gates: {r['seconds']:.3f}s "
              f"({r['seconds_per_gate'] * 1e6:.1f} us/gate)  sha256={r['tableau_sha256'][:16]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qudit", type=int, default=3)
    ap.add_argument("--factors", type=int, default=50)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(dims=[a.qudit] * a.factors, seed=a.seed))
