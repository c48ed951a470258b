"""Visual tour of the two-ball intersection projection.

Each epoch of the mixed-gradient solver constrains its recentered
iterates to {w : ||w + anchor|| <= R, ||w|| <= delta} -- the feasible
ball shifted by the running anchor, intersected with a shrinking local
ball. This script projects a handful of points onto such a set and
prints ASCII pictures of where they land.
"""

import numpy as np

from mixedgrad import EpochDomain, project_epoch_domain


def ascii_plot(domain, points, projections, width=61, height=31, lim=2.0):
    grid = [[" "] * width for _ in range(height)]

    def to_cell(p):
        col = int(round((p[0] + lim) / (2 * lim) * (width - 1)))
        row = int(round((lim - p[1]) / (2 * lim) * (height - 1)))
        return row, col

    for r in range(height):
        for c in range(width):
            x = -lim + 2 * lim * c / (width - 1)
            y = lim - 2 * lim * r / (height - 1)
            v = np.array([x, y])
            if domain.contains(v, tol=0.05):
                grid[r][c] = "."
    for p, q in zip(points, projections):
        r, c = to_cell(p)
        if 0 <= r < height and 0 <= c < width:
            grid[r][c] = "o"
        r, c = to_cell(q)
        grid[r][c] = "X"
    print("\n".join("".join(row) for row in grid))
    print("legend: '.' feasible set, 'o' input point, 'X' its projection")


def main():
    domain = EpochDomain(anchor=np.array([0.7, 0.0]),
                         outer_radius=1.0, inner_radius=0.9)
    print("domain: ||w + (0.7, 0)|| <= 1.0 and ||w|| <= 0.9 "
          "(a lens-shaped set)\n")

    rng = np.random.default_rng(3)
    points = [rng.uniform(-2, 2, size=2) for _ in range(6)]
    projections = [project_epoch_domain(p, domain) for p in points]

    for p, q in zip(points, projections):
        moved = np.linalg.norm(q - p)
        print(f"  ({p[0]:+.2f}, {p[1]:+.2f}) -> ({q[0]:+.2f}, {q[1]:+.2f})"
              f"   distance moved {moved:.3f}   feasible: "
              f"{domain.contains(q)}")
    print()
    ascii_plot(domain, points, projections)

    print("\neach projection is idempotent:")
    for q in projections:
        again = project_epoch_domain(q, domain)
        print(f"  re-projection moves {np.linalg.norm(again - q):.2e}")


if __name__ == "__main__":
    main()
