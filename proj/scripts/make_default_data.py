#!/usr/bin/env python3
"""Generate the synthetic default weather series and crop-response training table.

Both files are synthetic calibration data with southwest-Kansas magnitudes.
They are not measurements. The surrogate shipped in data/ is fitted from the
training table by `gwnash fit-surrogate` (see scripts/regenerate_data.sh).
"""

import argparse
import csv
from pathlib import Path

import numpy as np

CLIMATE = dict(ps=350.0, pw=110.0, ss=22.5, sw=11.0, tx=20.8, tn=5.3)

WEATHER_HEADER = [
    "year", "precip_annual_mm", "precip_summer_mm", "precip_winter_mm",
    "solar_summer", "solar_winter", "tmax_mean_c", "tmin_mean_c",
]
TRAINING_HEADER = ["crop"] + WEATHER_HEADER[1:] + ["tr_mm", "ir_mm", "et_mm", "p_mm", "yield_bu_acre"]


def draw_weather(rng, n, spread=1.0):
    ps = np.clip(rng.normal(CLIMATE["ps"], 80.0 * spread, n), 120.0, None)
    pw = np.clip(rng.normal(CLIMATE["pw"], 30.0 * spread, n), 20.0, None)
    # The winter season straddles two calendar years, so the calendar total
    # exceeds the two seasonal sums by a small, irregular remainder.
    slack = rng.uniform(2.0, 35.0, n)
    pa = ps + pw + slack
    dps = ps - CLIMATE["ps"]
    ss = CLIMATE["ss"] - 0.004 * dps + rng.normal(0.0, 0.5 * spread, n)
    sw = rng.normal(CLIMATE["sw"], 0.5 * spread, n)
    tx = CLIMATE["tx"] - 0.006 * dps + rng.normal(0.0, 0.6 * spread, n)
    tn = tx - 15.5 + rng.normal(0.0, 0.5 * spread, n)
    return np.column_stack([pa, ps, pw, ss, sw, tx, tn])


def responses(crop, w):
    pa, ps, pw, ss, sw, tx, tn = w.T
    dps, dpw = ps - CLIMATE["ps"], pw - CLIMATE["pw"]
    dss, dsw = ss - CLIMATE["ss"], sw - CLIMATE["sw"]
    dtx, dtn = tx - CLIMATE["tx"], tn - CLIMATE["tn"]
    if crop == "corn":
        p = 0.85 * ps
        tr = 390.0 + 0.10 * dps + 14.0 * dss + 9.0 * dtx - 0.8 * dtx**2
        et = tr + 110.0 + 0.20 * dps + 4.0 * dtx
        ir = 560.0 - 0.60 * p + 18.0 * dss + 12.0 * dtx
        y = 195.0 + 0.06 * dps + 2.5 * dss - 3.0 * dtx - 2.0 * dtx**2
    elif crop == "sorghum":
        p = 0.80 * ps
        tr = 330.0 + 0.08 * dps + 10.0 * dss + 6.0 * dtx
        et = tr + 95.0 + 0.15 * dps + 3.0 * dtx
        ir = 360.0 - 0.50 * p + 10.0 * dss + 7.0 * dtx
        y = 140.0 + 0.01 * dps + 1.5 * dss - 0.5 * dtx
    elif crop == "wheat":
        p = pw + 0.30 * ps
        tr = 260.0 + 0.05 * dpw + 5.0 * dsw + 3.0 * dtn
        et = tr + 90.0 + 0.10 * dpw
        ir = 300.0 - 0.50 * p + 6.0 * dsw + 4.0 * dtn
        y = 48.0 + 0.04 * dpw + 0.01 * dps - 0.5 * dtn**2
    else:
        raise ValueError(crop)
    return np.column_stack([tr, ir, et, p, y])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=1995)
    ap.add_argument("--samples", type=int, default=160, help="training rows per crop")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    years = np.arange(1995, 2015)
    weather = draw_weather(rng, len(years))
    with open(args.out / "weather_garden_city.csv", "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(WEATHER_HEADER)
        for year, row in zip(years, weather):
            out.writerow([int(year)] + [f"{v:.1f}" if i < 3 else f"{v:.2f}" for i, v in enumerate(row)])

    with open(args.out / "surrogate_training.csv", "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(TRAINING_HEADER)
        for crop, noise in (("corn", 4.0), ("sorghum", 3.0), ("wheat", 2.0)):
            w = draw_weather(rng, args.samples, spread=1.4)
            r = responses(crop, w)
            r[:, :3] += rng.normal(0.0, noise, (args.samples, 3))
            r[:, 4] += rng.normal(0.0, noise / 2.0, args.samples)
            r = np.clip(r, 0.0, None)
            r[:, 2] = np.maximum(r[:, 2], r[:, 0])
            for wrow, rrow in zip(w, r):
                out.writerow([crop] + [f"{v:.3f}" for v in wrow] + [f"{v:.3f}" for v in rrow])


if __name__ == "__main__":
    main()
