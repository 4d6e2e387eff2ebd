#!/usr/bin/env python3
"""Regenerates the seeded cluttered 2D scenarios under scenarios/."""
import json
import math
import random
import sys
from pathlib import Path

ARENA = 20.0
GAP = 2.2        # boundary gap between obstacle bounding circles
CLEAR = 1.6      # clearance of start and target from obstacle bounding circles


def convex_polygon(rng, cx, cy, r):
    k = rng.randint(4, 6)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
    pts = [[round(cx + r * math.cos(a), 3), round(cy + r * math.sin(a), 3)] for a in angles]
    return pts


def scenario(seed):
    rng = random.Random(seed)
    start = (1.5, 1.5)
    target = (round(rng.uniform(16.5, 18.5), 3), round(rng.uniform(16.5, 18.5), 3))
    placed = []
    obstacles = []
    tries = 0
    while len(obstacles) < 9 and tries < 5000:
        tries += 1
        r = rng.uniform(0.7, 1.6)
        cx, cy = rng.uniform(r + 1.0, ARENA - r - 1.0), rng.uniform(r + 1.0, ARENA - r - 1.0)
        if any(math.hypot(cx - x, cy - y) < r + q + GAP for x, y, q in placed):
            continue
        if any(math.hypot(cx - p[0], cy - p[1]) < r + CLEAR for p in (start, target)):
            continue
        placed.append((cx, cy, r))
        if rng.random() < 0.5:
            obstacles.append({"type": "disc", "center": [round(cx, 3), round(cy, 3)], "radius": round(r, 3)})
        else:
            obstacles.append({"type": "polygon", "points": convex_polygon(rng, cx, cy, r)})
    heading = round(rng.uniform(-math.pi, math.pi), 4)
    return {
        "arena": {"min": [0, 0], "max": [ARENA, ARENA]},
        "obstacles": obstacles,
        "robot": {"position": list(start), "heading": heading},
        "target": list(target),
        "controller": {"type": "reactive2d"},
        "dt": 0.1,
        "seed": seed,
    }


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "scenarios")
    out.mkdir(parents=True, exist_ok=True)
    for k in range(20):
        path = out / f"cluttered_{k:02d}.json"
        path.write_text(json.dumps(scenario(1000 + k), indent=2) + "\n")


if __name__ == "__main__":
    main()
