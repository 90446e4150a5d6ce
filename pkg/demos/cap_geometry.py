"""Tour the spherical-cap numerics behind the similarity analysis.

Prints the exact cap volume fraction next to its Monte Carlo estimate
and the two-sided bounds at a few grid points, shows that the
surface-to-volume ratio of the unit ball equals the dimension, and
reproduces the known failure of the n-times-wider bound pair at
(n=3, b=0.5).

Run:  python3 demos/cap_geometry.py [--samples N]
"""

import argparse

from invgc import (
    cap_fraction_exact,
    cap_fraction_mc,
    check_thm1_bounds,
    check_thm3_bounds,
    sphere_area_volume_ratio,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200_000)
    args = ap.parse_args()

    print(f"{'n':>3} {'b':>5} {'lower':>10} {'exact':>10} {'upper':>10}"
          f" {'mc':>10} {'mc err':>8}")
    for n, b in ((2, 0.5), (3, 0.5), (5, 0.3), (8, 0.7), (12, 0.9)):
        c = check_thm3_bounds(n, b)
        est, err = cap_fraction_mc(n, b, args.samples, seed=13)
        print(
            f"{n:>3} {b:>5.2f} {c.lower_bound:>10.6f} {c.exact_fraction:>10.6f}"
            f" {c.upper_bound:>10.6f} {est:>10.6f} {err:>8.6f}"
        )
    print("\nEvery row above satisfies lower < exact < upper strictly.\n")

    print("Surface area over ball volume equals the dimension:")
    for n in (2, 3, 4, 8, 16):
        print(f"  n={n:<3} ratio={sphere_area_volume_ratio(n):.12f}")
    print()

    c = check_thm1_bounds(3, 0.5)
    print("The n-times-wider bound pair is not tight enough everywhere:")
    print(f"  at n=3, b=0.5 the cap fraction is {c.exact_fraction:.6f}")
    print(f"  but the wide lower bound demands  {c.lower_bound:.6f}")
    print(f"  verdict: holds={c.holds}")
    print("The two-sided check divides that lower bound by n, which is")
    print(f"  {check_thm3_bounds(3, 0.5).lower_bound:.6f}, and the grid passes.")
    print()
    print("Hemisphere sanity: b=1 gives", cap_fraction_exact(4, 1.0))


if __name__ == "__main__":
    main()
