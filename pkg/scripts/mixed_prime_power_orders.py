"""Orders of Sp_[p^k, p^l] for small mixed prime powers, computed by generator closure.

No closed form is assumed; where the exhaustive search is affordable its count
is printed alongside as a cross-check.
"""
import argparse
import time
from dataclasses import dataclass, field

from qclifford.errors import GuardExceededError
from qclifford.multipartite import CLOSURE_GUARD, enumeration_size, sp_closure, sp_enumerate


@dataclass
class Config:
    systems: list = field(default_factory=lambda: [[2, 4], [2, 8], [4, 8], [3, 9]])
    max_closure: int = 2 * CLOSURE_GUARD
    max_enum: int = 1 << 22


def main(cfg: Config) -> None:
    for dims in cfg.systems:
        t0 = time.perf_counter()
        try:
            order = sp_closure(dims, cfg.max_closure)
        except GuardExceededError as exc:
            print(f"{str(dims):>10}  skipped: {exc}")
            continue
        dt = time.perf_counter() - t0
        enum = len(sp_enumerate(dims)) if enumeration_size(dims) <= cfg.max_enum else None
        print(f"{str(dims):>10}  closure={order:>9}  enumeration={enum}  ({dt:.1f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-closure", type=int, default=Config.max_closure)
    a = ap.parse_args()
    main(Config(max_closure=a.max_closure))
