"""Same-destination-pattern sharing: beating one DoF with four users.

When every channel arriving at a receiver shares that receiver's changing
pattern, a basis vector sent by r transmitters at once collapses to a
single dimension at each non-member receiver -- as long as its support
sits inside a slot window where all those receivers are constant.  The
members, whose own channels do change inside the window, each recover a
clean desired dimension.

This demo builds the two shipped 4-user pattern families, shows the
chosen windows, and verifies the resulting alignment by rank on sampled
channels via the Monte Carlo harness.

Run:  python demos/shared_patterns.py
"""

from fractions import Fraction

from alignsim import (Scenario, alignment_report, run_trials, sample_network,
                      scheme_counts)
from alignsim.shared import (construct_shared, demo_network_config,
                             dense_demo_patterns, pair_demo_patterns)


def show_family(name, patterns, n, expect_dof):
    print(f"=== {name}: {len(patterns)} users, {n} slots ===")
    for p, pat in enumerate(patterns):
        print(f"  rx{p+1} pattern changes at {pat.change_points}")

    scheme = construct_shared(len(patterns), 2, patterns, n, seed=0)
    print("  shared vectors (pair -> support window):")
    for v in scheme.vectors:
        tag = "fill" if v.is_fill else "pair"
        subset = tuple(t + 1 for t in v.subset)
        kept = tuple(t + 1 for t in v.kept)
        note = "" if kept == subset else f" (kept tx{kept} after repair)"
        window = (v.support[0], v.support[-1])
        print(f"    {tag} tx{subset}: slots {window[0]}..{window[1]}{note}")
    print(f"  desired dims per receiver: {scheme.expected_desired}, "
          f"total DoF {scheme.total_dof}")
    assert scheme.total_dof == expect_dof

    cfg = demo_network_config(patterns, n, seed=0)
    inst = sample_network(cfg, seed=3)
    report = alignment_report(inst, scheme.precoders)
    print(f"  rank-verified on one sampled network: "
          f"per-receiver (desired, interference, occupied) = "
          f"{report.per_receiver}; checks {report.checks}")

    scenario = Scenario(regime="shared", config=cfg, params={"r": 2},
                        trials=50, base_seed=0)
    summary = run_trials(scenario)
    passed = sum(1 for r in summary.results if all(r.checks.values()))
    print(f"  harness: {passed}/50 seeded trials verified, "
          f"total DoF {summary.results[0].total_dof} on every trial")
    print()


def main():
    pair_pats, n_pair = pair_demo_patterns()
    show_family("pair family", pair_pats, n_pair, expect_dof=Fraction(9, 8))

    dense_pats, n_dense = dense_demo_patterns()
    show_family("dense family", dense_pats, n_dense,
                expect_dof=Fraction(12, 10))

    n, desired, total = scheme_counts(4, 2)
    print(f"closed form for K=4, r=2: {n} slots, {desired} desired dims "
          f"per receiver, total {total} -- the dense family realizes it "
          f"with concrete patterns.")


if __name__ == "__main__":
    main()
