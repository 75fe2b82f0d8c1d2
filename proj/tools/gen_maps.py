#!/usr/bin/env python3
"""Regenerates the bundled map fixtures in maps/.

Every map is a plain ASCII grid ('.' free, '#' occupied) with a sidecar
.meta file holding resolution, origin and four start poses. The output is
deterministic; rerunning the script reproduces the committed files.
"""

import math
import random
import sys
from pathlib import Path

RES = 0.4
HEADINGS = (0.0, math.pi / 2, math.pi, -math.pi / 2)


def blank(w, h):
    g = [["." for _ in range(w)] for _ in range(h)]
    for c in range(w):
        g[0][c] = g[h - 1][c] = "#"
    for r in range(h):
        g[r][0] = g[r][w - 1] = "#"
    return g


def fill(g, r0, r1, c0, c1, ch):
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            g[r][c] = ch


def maze64():
    # 9x9 perfect maze, 6-cell corridors, 1-cell walls, a few extra openings.
    n, corridor = 9, 6
    pitch = corridor + 1
    size = n * pitch + 1
    g = [["#" for _ in range(size)] for _ in range(size)]
    rng = random.Random(7)

    def open_cell(i, j):
        r0, c0 = 1 + i * pitch, 1 + j * pitch
        fill(g, r0, r0 + corridor - 1, c0, c0 + corridor - 1, ".")

    def open_between(i, j, k, l):
        if i == k:
            c = 1 + max(j, l) * pitch - 1
            r0 = 1 + i * pitch
            fill(g, r0, r0 + corridor - 1, c, c, ".")
        else:
            r = 1 + max(i, k) * pitch - 1
            c0 = 1 + j * pitch
            fill(g, r, r, c0, c0 + corridor - 1, ".")

    seen = {(0, 0)}
    stack = [(0, 0)]
    open_cell(0, 0)
    while stack:
        i, j = stack[-1]
        nbrs = [(i + di, j + dj) for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 0 <= i + di < n and 0 <= j + dj < n and (i + di, j + dj) not in seen]
        if not nbrs:
            stack.pop()
            continue
        k, l = rng.choice(nbrs)
        seen.add((k, l))
        open_cell(k, l)
        open_between(i, j, k, l)
        stack.append((k, l))
    for i, j, k, l in ((2, 4, 2, 5), (6, 1, 7, 1), (4, 7, 5, 7)):
        open_between(i, j, k, l)

    def centre(i, j):
        return 1 + i * pitch + corridor // 2, 1 + j * pitch + corridor // 2

    starts = [centre(0, 0), centre(8, 8), centre(0, 8), centre(4, 4)]
    return g, starts


def corridor_office():
    g = blank(48, 48)
    # Plus-shaped corridor, rows/cols 21..26, four quadrants of two rooms each.
    for wall in (20, 27):
        fill(g, wall, wall, 1, 46, "#")
        fill(g, 1, 46, wall, wall, "#")
    fill(g, 21, 26, 1, 46, ".")
    fill(g, 1, 46, 21, 26, ".")
    for r0, r1 in ((1, 19), (28, 46)):
        for c0, c1 in ((1, 19), (28, 46)):
            split = (c0 + c1) // 2
            fill(g, r0, r1, split, split, "#")
            door_row = 20 if r1 == 19 else 27
            for a, b in ((c0, split - 1), (split + 1, c1)):
                mid = (a + b) // 2
                fill(g, door_row, door_row, mid - 1, mid + 2, ".")
    # One inter-room door gives the office a loop.
    fill(g, 8, 11, 10, 10, ".")
    starts = [(23, 3), (23, 44), (3, 23), (44, 23)]
    return g, starts


def open_rooms():
    g = blank(64, 64)
    # Central hall with pillars, ring of rooms behind an inner wall.
    fill(g, 14, 14, 1, 62, "#")
    fill(g, 49, 49, 1, 62, "#")
    fill(g, 14, 49, 14, 14, "#")
    fill(g, 14, 49, 49, 49, "#")
    for r, c in ((24, 24), (24, 38), (38, 24), (38, 38)):
        fill(g, r, r + 2, c, c + 2, "#")
    # Room partitions along the top and bottom bands.
    for c in (16, 32, 48):
        fill(g, 1, 13, c, c, "#")
        fill(g, 50, 62, c, c, "#")
    # Side bands split once.
    fill(g, 31, 31, 1, 13, "#")
    fill(g, 31, 31, 50, 62, "#")
    # Doors into the hall (through the inner wall) and between side rooms.
    for c in (7, 24, 40, 56):
        fill(g, 14, 14, c - 1, c + 2, ".")
        fill(g, 49, 49, c - 1, c + 2, ".")
    for r in (22, 40):
        fill(g, r - 1, r + 2, 14, 14, ".")
        fill(g, r - 1, r + 2, 49, 49, ".")
    fill(g, 5, 8, 32, 32, ".")
    starts = [(31, 31), (7, 7), (56, 56), (44, 20)]
    return g, starts


def write(out_dir, name, grid, starts):
    h, w = len(grid), len(grid[0])
    for r, c in starts:
        assert grid[r][c] == ".", (name, r, c)
    text = "\n".join("".join(row) for row in grid) + "\n"
    (out_dir / f"{name}.map").write_text(text)
    lines = [f"resolution={RES}", "origin_x=0", "origin_y=0"]
    for k, (r, c) in enumerate(starts):
        x, y = (c + 0.5) * RES, (r + 0.5) * RES
        lines.append(f"start{k}={x:.2f},{y:.2f},{HEADINGS[k]:.4f}")
    (out_dir / f"{name}.meta").write_text("\n".join(lines) + "\n")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "maps"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, make in (("maze64", maze64), ("corridor_office", corridor_office),
                       ("open_rooms", open_rooms)):
        grid, starts = make()
        write(out_dir, name, grid, starts)


if __name__ == "__main__":
    main()
