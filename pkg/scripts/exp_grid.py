"""exp_* on the (2,2,1) eigenvalue chart: series value vs closed form, plus FD residual."""

import argparse
import math

import numpy as np

from starmul.catalog import eigen_221_system
from starmul.series import SeriesSpec, residual_at, series_eval_full


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5, help="grid points per axis")
    args = ap.parse_args()
    sys = eigen_221_system()
    spec = SeriesSpec("exp")
    worst_val = worst_res = 0.0
    print(f"{'x':>7} {'y':>7} {'V0':>12} {'V1':>12} {'|err|':>9} {'resid':>9}")
    for a in np.linspace(-1.5, 1.0, args.n):
        for b in np.linspace(-1.45, 1.05, args.n):
            res = series_eval_full(spec, sys.z, (a, b))
            v = res.value.real
            closed = ((a * math.exp(b) - b * math.exp(a)) / (a - b), (math.exp(a) - math.exp(b)) / (a - b))
            err = max(abs(v[0] - closed[0]), abs(v[1] - closed[1]))
            r = residual_at(spec, sys, (a, b))
            worst_val, worst_res = max(worst_val, err), max(worst_res, r)
            print(f"{a:7.3f} {b:7.3f} {v[0]:12.8f} {v[1]:12.8f} {err:9.1e} {r:9.1e}")
    print(f"worst closed-form error {worst_val:.2e}, worst residual {worst_res:.2e}")


if __name__ == "__main__":
    main()
