#!/usr/bin/env python3
"""Writes a synthetic vehicle-trajectory CSV shaped like a congested corridor.

Coordinates are normalized to [0, 1] over the sensing lattice. Most vehicles
drive along the middle column (cells 1 and 4 of a 2x3 grid); a few stray
vehicles appear elsewhere.
"""

import argparse
import csv
import random


def corridor_vehicle(rng, vid, rows):
    x = rng.uniform(0.38, 0.62)
    start = rng.uniform(0.0, 60.0)
    speed = rng.uniform(0.02, 0.05)
    y, t = (0.02, start) if rng.random() < 0.5 else (0.98, start)
    step = speed if y < 0.5 else -speed
    while 0.0 <= y <= 1.0:
        rows.append((vid, round(t, 3), round(x + rng.gauss(0.0, 0.01), 4), round(y, 4)))
        y += step
        t += 1.0


def stray_vehicle(rng, vid, rows, cell_col, cell_row):
    cx = (cell_col + 0.5) / 3.0
    cy = (cell_row + 0.5) / 2.0
    t = rng.uniform(0.0, 60.0)
    for _ in range(rng.randint(2, 5)):
        rows.append((vid, round(t, 3), round(cx + rng.uniform(-0.12, 0.12), 4),
                     round(cy + rng.uniform(-0.2, 0.2), 4)))
        t += 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="fixtures/corridor_trajectories.csv")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--corridor", type=int, default=48, help="vehicles in the corridor")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = []
    vid = 0
    for _ in range(args.corridor):
        corridor_vehicle(rng, vid, rows)
        vid += 1
    # A handful of strays in the side columns, uneven on purpose.
    for cell_col, cell_row, count in [(0, 0, 4), (2, 0, 2), (0, 1, 6), (2, 1, 3)]:
        for _ in range(count):
            stray_vehicle(rng, vid, rows, cell_col, cell_row)
            vid += 1
    rows.sort(key=lambda r: (r[1], r[0]))

    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["vehicle_id", "t", "x", "y"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
