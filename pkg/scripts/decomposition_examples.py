"""Elementary divisor decomposition of a few composite systems, with closed-form
orders where they exist."""
import argparse
from dataclasses import dataclass, field

from qclifford.multipartite import decompose_symmetry, format_decomposition


@dataclass
class Config:
    systems: list = field(default_factory=lambda: [[15, 12], [180, 150], [6], [2, 2, 2], [4, 8, 12]])


def main(cfg: Config) -> None:
    for dims in cfg.systems:
        factors = decompose_symmetry(dims)
        orders = [f.known_order() for f in factors]
        print(f"{str(dims):>16}  ->  {format_decomposition(factors)}")
        print(f"{'':>16}      orders: {['?' if o is None else o for o in orders]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dims", nargs="*", type=int, help="one system; default runs the built-in list")
    args = ap.parse_args()
    main(Config([args.dims]) if args.dims else Config())
