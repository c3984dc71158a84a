"""Print mu^r for every exact catalog fixture."""

import argparse

from starmul.catalog import list_fixtures, load_fixture
from starmul.solutions import mu_power_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=-2)
    ap.add_argument("--hi", type=int, default=4)
    ap.add_argument("names", nargs="*", default=None)
    args = ap.parse_args()
    for name in args.names or list_fixtures():
        fx = load_fixture(name)
        if fx.sys is None:
            continue
        lo = args.lo if not fx.sys.z.lower[0].is_zero() else max(args.lo, 0)
        print(f"== {name}  Z = {fx.sys.z.as_mupoly()}")
        for label, v in mu_power_table(fx.sys, lo, args.hi).members:
            print(f"  {label:>6} = {v}")


if __name__ == "__main__":
    main()
