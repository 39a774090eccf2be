#!/usr/bin/env python3
"""Generate a synthetic basis time series for the regress command.

Daily basis observations driven by a funding proxy (lois) and a risk proxy
(vix) plus noise, so the fitted slopes have a known ground truth:

    basis = 0.35 - 46.0 * lois - 2.66 * vix + eps,  eps ~ N(0, 0.2)

Writes date,basis,lois,vix rows with strictly increasing business dates.
"""

import argparse
import csv
import datetime
import math
import random

INTERCEPT = 0.35
BETA_LOIS = -46.0
BETA_VIX = -2.66
NOISE_SD = 0.2


def business_days(start, count):
    d = start
    out = []
    while len(out) < count:
        if d.weekday() < 5:
            out.append(d)
        d += datetime.timedelta(days=1)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/synthetic_basis.csv")
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=914)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    dates = business_days(datetime.date(2010, 1, 4), args.n)

    rows = []
    for d in dates:
        z1 = rng.gauss(0.0, 1.0)
        z2 = rng.gauss(0.0, 1.0)
        lois = max(0.003 + 0.0015 * z1, 0.0002)
        vix = max(0.20 + 0.06 * (0.5 * z1 + math.sqrt(0.75) * z2), 0.08)
        basis = INTERCEPT + BETA_LOIS * lois + BETA_VIX * vix + rng.gauss(0.0, NOISE_SD)
        rows.append((d.isoformat(), basis, lois, vix))

    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "basis", "lois", "vix"])
        for date, basis, lois, vix in rows:
            w.writerow([date, f"{basis:.8f}", f"{lois:.8f}", f"{vix:.8f}"])
    print(f"wrote {args.out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
