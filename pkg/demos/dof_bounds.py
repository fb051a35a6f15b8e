"""Closed-form degrees-of-freedom bounds, end to end.

Walks through the three calculator families the library ships:

1. the sharing-DoF curve d(K, r) = K*r / (r^2 - r + K) and its integer
   optimizer r* (smallest r with r(r+1) >= K),
2. the real-valued relaxation of the same curve, and
3. the sum-DoF caps as a function of the perfect-CSIT time fraction.

Run:  python demos/dof_bounds.py
"""

from fractions import Fraction

from alignsim import (curve_f, dof_cap_given_upsilon, dof_table,
                      dof_upper_bound, min_upsilon_for_max_dof, scheme_counts,
                      sharing_dof)


def main():
    print("=== optimal sharing degree per user count ===")
    print(f"{'K':>3} {'r*':>3} {'DoF':>8} {'decimal':>9}")
    for K, r_star, dof in dof_table(2, 12):
        print(f"{K:>3} {r_star:>3} {str(dof):>8} {float(dof):>9.4f}")

    print()
    print("=== the whole integer curve for K = 4 ===")
    bound = dof_upper_bound(4)
    for r, d in bound.per_r_curve:
        star = "  <- r*" if r == bound.r_star else ""
        print(f"  r={r}: d={d} = {float(d):.4f}{star}")

    print()
    print("=== scheme counts realizing the curve at K=4 ===")
    for r in (1, 2, 3):
        n, desired, total = scheme_counts(4, r)
        assert total == sharing_dof(4, r)
        print(f"  r={r}: {n} slots, {desired} desired dims per receiver, "
              f"total {total}")

    print()
    print("=== real relaxation near the K=4 optimum ===")
    for x, v in curve_f(4, [1.0, 1.5, 1.56155, 2.0, 2.5]):
        print(f"  f({x:.5f}) = {v:.6f}")
    print("  (the real maximizer sits between r=1 and r=2; the integer")
    print("   curve is evaluated at both and r*=2 wins)")

    print()
    print("=== sum-DoF caps vs. perfect-CSIT fraction ===")
    print(f"{'K':>3} {'upsilon':>8} {'cap':>8} {'decimal':>9}")
    for K in (2, 3, 4, 8):
        for u in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)):
            cap = dof_cap_given_upsilon(K, u)
            print(f"{K:>3} {str(u):>8} {str(cap):>8} {float(cap):>9.4f}")
        print(f"    K={K}: max sum-DoF needs upsilon >= "
              f"{min_upsilon_for_max_dof(K)}")


if __name__ == "__main__":
    main()
