"""Same-destination-pattern regime: sharing-based precoders and DoF bounds.

When every channel arriving at a receiver shares one changing pattern, a
basis vector transmitted by r different transmitters collapses to a single
dimension at each non-sharing receiver, provided its support sits inside a
slot window where all those receivers are constant.  This module builds
such schemes greedily and evaluates the closed-form total-DoF curve
sharing_dof(K, r) = K*r / (r^2 - r + K) together with its integer optimizer.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .channel import ChangingPattern, NetworkConfig, union_pattern
from .linalg import numeric_rank

__all__ = [
    "BoundResult",
    "SharedVector",
    "SharedPatternScheme",
    "best_sharing_degree",
    "sharing_dof",
    "dof_upper_bound",
    "scheme_counts",
    "curve_f",
    "dof_table",
    "construct_shared",
    "pair_demo_patterns",
    "dense_demo_patterns",
    "demo_network_config",
]


# ---------------------------------------------------------------------------
# closed-form bounds


def sharing_dof(K, r):
    """Total DoF of the r-sharing scheme family, exact."""
    if K < 1 or r < 1:
        raise ValueError("K and r must be positive")
    return Fraction(K * r, r * r - r + K)


def best_sharing_degree(K):
    """Smallest integer r with r(r+1) >= K; maximizes sharing_dof over ints."""
    if K < 1:
        raise ValueError("K must be >= 1")
    # ceil((sqrt(1+4K)-1)/2) without floating point
    r = (math.isqrt(1 + 4 * K) - 1) // 2
    while r * (r + 1) < K:
        r += 1
    while r > 1 and (r - 1) * r >= K:
        r -= 1
    return r


@dataclass(frozen=True)
class BoundResult:
    K: int
    r_star: int
    dof: Fraction
    per_r_curve: tuple = field(default=())


def dof_upper_bound(K, with_curve=True):
    """Optimal sharing degree and its DoF; optionally the whole integer curve.

    For very large K the full curve would be K fractions, so it is trimmed
    to a window around the optimizer; r_star and dof stay exact regardless.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    r_star = best_sharing_degree(K)
    dof = sharing_dof(K, r_star)
    curve = ()
    if with_curve:
        if K <= 10_000:
            rs = range(1, K + 1)
        else:
            rs = range(max(1, r_star - 50), min(K, r_star + 50) + 1)
        curve = tuple((r, sharing_dof(K, r)) for r in rs)
    return BoundResult(K=K, r_star=r_star, dof=dof, per_r_curve=curve)


def scheme_counts(K, r):
    """Slot count, desired dims per receiver, and total DoF of the r-scheme.

    n counts one slot group per r-subset avoiding a transmitter plus the
    desired copies; the ratio provably equals sharing_dof(K, r).
    """
    if not 1 <= r <= K - 1:
        raise ValueError("r must lie in [1, K-1]")
    n = math.comb(K - 1, r) + r * math.comb(K - 1, r - 1)
    desired = math.comb(K - 1, r - 1)
    total = Fraction(K * desired, n)
    assert total == sharing_dof(K, r)
    return n, desired, total


def curve_f(K, xs):
    """The real-valued relaxation K*x/(x^2-x+K) at the given points."""
    out = []
    for x in xs:
        x = float(x)
        if x <= 0:
            raise ValueError("curve points must be positive")
        out.append((x, K * x / (x * x - x + K)))
    return out


def dof_table(k_min, k_max):
    """Rows (K, r_star, d(r_star)) for a range of user counts."""
    if k_min < 1 or k_max < k_min:
        raise ValueError("need 1 <= k_min <= k_max")
    rows = []
    for K in range(k_min, k_max + 1):
        b = dof_upper_bound(K, with_curve=False)
        rows.append((K, b.r_star, b.dof))
    return rows


# ---------------------------------------------------------------------------
# scheme construction


@dataclass
class SharedVector:
    vid: int
    subset: tuple          # transmitters that originally share the vector
    kept: tuple            # transmitters still carrying it after repair
    support: tuple         # 1-based slots allowed to be nonzero
    values: np.ndarray     # length-n column
    is_fill: bool = False


@dataclass
class SharedPatternScheme:
    K: int
    r: int
    n: int
    vectors: list                  # kept SharedVector entries (incl. fills)
    dropped: list                  # vector ids dropped during construction
    precoders: list                # per-transmitter n x d arrays
    expected_desired: tuple        # per-receiver desired dims
    expected_used: tuple           # per-receiver occupied dims
    total_dof: Fraction


def _runs_in_window(pattern: ChangingPattern, window):
    """Number of constant value-runs of the pattern inside a slot window."""
    lo, hi = window[0], window[-1]
    return 1 + sum(1 for c in pattern.change_points if lo < c <= hi)


def _feasible_runs(nonmember_patterns, n):
    if not nonmember_patterns:
        return [list(range(1, n + 1))]
    merged = union_pattern(nonmember_patterns)
    from .channel import constant_intervals
    return constant_intervals(merged)


def _pick_window(subset, patterns, n, r):
    """Best size-r window constant at all non-members; None when impossible."""
    K = len(patterns)
    nonmembers = [patterns[p] for p in range(K) if p not in subset]
    best = None
    for run in _feasible_runs(nonmembers, n):
        if len(run) < r:
            continue
        for start in range(len(run) - r + 1):
            window = run[start:start + r]
            score = min(_runs_in_window(patterns[p], window) for p in subset)
            key = (score, window[0])   # ties go to the rightmost window
            if best is None or key >= best[0]:
                best = (key, window)
    return None if best is None else tuple(best[1])


def _window_values(rank_in_group, window, n):
    """Orthogonal in-window profiles; the first vector is all ones."""
    w = len(window)
    col = np.zeros(n)
    profile = np.cos(np.pi * rank_in_group * (np.arange(w) + 0.5) / w)
    if rank_in_group == 0:
        profile = np.ones(w)
    for slot, v in zip(window, profile):
        col[slot - 1] = v
    return col


def construct_shared(K, r, patterns, n, seed=0):
    """Greedy r-sharing construction over given per-receiver patterns.

    patterns[p] is the changing pattern shared by every channel into
    receiver p.  One candidate vector per r-subset of transmitters; a
    vector survives only if it has a size-r support window constant at all
    non-member receivers; over-full windows and collapsing member copies
    are repaired by dropping vectors/members; leftover dimensions are
    filled with full-support random columns.
    """
    if not 1 <= r <= K - 1:
        raise ValueError("r must lie in [1, K-1]")
    patterns = [p if isinstance(p, ChangingPattern) else ChangingPattern(n, tuple(p))
                for p in patterns]
    if len(patterns) != K or any(p.n != n for p in patterns):
        raise ValueError("need one n-slot pattern per receiver")
    rng = np.random.default_rng(seed)

    vectors = []
    dropped = []
    for vid, subset in enumerate(combinations(range(K), r)):
        window = _pick_window(subset, patterns, n, r)
        if window is None:
            dropped.append(vid)
            continue
        vectors.append(SharedVector(vid, subset, subset, window, None))

    # capacity: an identical support window of size w carries at most w vectors
    by_window = {}
    kept = []
    for v in vectors:
        group = by_window.setdefault(v.support, [])
        if len(group) >= len(v.support):
            dropped.append(v.vid)
            continue
        v.values = _window_values(len(group), v.support, n)
        group.append(v)
        kept.append(v)
    vectors = kept

    # repair collapsing desired copies: while some member receiver sees fewer
    # value-runs in the support than the vector has carriers, remove the
    # carrier with the widest precoder (ties: lowest transmitter index)
    width = [sum(1 for v in vectors if t in v.kept) for t in range(K)]
    for v in vectors:
        while v.kept:
            need = len(v.kept)
            if all(_runs_in_window(patterns[p], v.support) >= need for p in v.kept):
                break
            victim = max(v.kept, key=lambda t: (width[t], -t))
            v.kept = tuple(t for t in v.kept if t != victim)
            width[victim] -= 1

    # expected occupied/desired dimensions per receiver
    used = [0] * K
    desired = [0] * K
    for v in vectors:
        if not v.kept:
            continue
        live = len(v.kept)
        for p in range(K):
            if p not in v.subset:
                used[p] += 1
            elif p in v.kept:
                used[p] += live
                desired[p] += 1
            else:
                used[p] += min(live, _runs_in_window(patterns[p], v.support))

    # random fill: spend leftover dimensions on unshared full-support columns,
    # handed out round-robin so no transmitter hoards the leftover space
    fills = []
    next_vid = math.comb(K, r)
    t = 0
    while all(u + 1 <= n for u in used):
        col = rng.uniform(-1.0, 1.0, size=n)
        fills.append(SharedVector(next_vid, (t,), (t,), tuple(range(1, n + 1)),
                                  col, is_fill=True))
        next_vid += 1
        used = [u + 1 for u in used]
        desired[t] += 1
        t = (t + 1) % K
    vectors = [v for v in vectors if v.kept] + fills

    precoders = []
    for t in range(K):
        cols = [v.values for v in vectors if t in v.kept]
        mat = np.column_stack(cols) if cols else np.zeros((n, 0))
        if mat.shape[1]:
            assert numeric_rank(mat) == mat.shape[1]
        precoders.append(mat)

    total = max(Fraction(sum(desired), n), Fraction(1))
    return SharedPatternScheme(K=K, r=r, n=n, vectors=vectors,
                               dropped=sorted(dropped), precoders=precoders,
                               expected_desired=tuple(desired),
                               expected_used=tuple(used), total_dof=total)


# ---------------------------------------------------------------------------
# shipped demo pattern families


def pair_demo_patterns():
    """4-user, 8-slot pattern family where pair-sharing reaches 9/8 DoF."""
    n = 8
    pts = [(3, 4, 5), (3, 4, 5, 6), (2, 7, 8), (5, 6, 7, 8)]
    return [ChangingPattern(n, p) for p in pts], n


def dense_demo_patterns():
    """4-user, 10-slot pattern family where pair-sharing reaches 12/10 DoF.

    Four disjoint two-slot windows host the pairs {1,2}, {3,4}, {1,3} and
    {2,4}; each receiver is a member of exactly two windows (2 dims each),
    sees the other two collapse to one dimension each, and the four
    leftover dimensions are filled round-robin, giving per-receiver
    desired dims (3, 3, 3, 3).
    """
    n = 10
    pts = [(2, 3, 5, 6, 7, 9, 10), (2, 3, 5, 7, 8, 9, 10),
           (3, 4, 5, 6, 7, 9, 10), (3, 4, 5, 7, 8, 9, 10)]
    return [ChangingPattern(n, p) for p in pts], n


def demo_network_config(patterns, n, seed=0):
    """Same-destination network config: every link into rx p uses pattern p."""
    K = len(patterns)
    nest = [[list(patterns[p].change_points) for _ in range(K)] for p in range(K)]
    return NetworkConfig(K=K, n=n, patterns=nest, direct_kind="identity",
                         seed=seed)
