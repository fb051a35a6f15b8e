"""Numeric rank and subspace tests.

All rank decisions in the package go through this module so the
floating-point tolerance policy lives in exactly one place: a singular
value counts toward the rank when it exceeds ``relative_threshold``
times the largest singular value.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RankTolerance",
    "DEFAULT_TOL",
    "numeric_rank",
    "balanced_rank",
    "joint_rank",
    "is_subspace",
    "normalize_columns",
]


@dataclass(frozen=True)
class RankTolerance:
    relative_threshold: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.relative_threshold < 1.0:
            raise ValueError("relative_threshold must lie in (0, 1)")


DEFAULT_TOL = RankTolerance()


def _as_matrix(m):
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError("expected a non-empty 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def normalize_columns(m):
    """Scale each column to unit Euclidean length (zero columns untouched).

    Rank is invariant to column scaling, but normalizing keeps singular
    values comparable when columns contain high powers of a diagonal.
    """
    a = _as_matrix(m)
    norms = np.linalg.norm(a, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    return a / safe


def numeric_rank(m, tol=DEFAULT_TOL):
    """Count singular values above the relative threshold."""
    a = normalize_columns(m)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.relative_threshold * s[0]))


def balanced_rank(m, tol=DEFAULT_TOL):
    """Rank after normalizing nonzero rows, then columns.

    Row scaling by a positive diagonal preserves rank exactly, and it keeps
    the threshold meaningful for matrices whose rows live on wildly
    different scales — e.g. columns that are products of many diagonal
    ratios, where a few rows can be orders of magnitude smaller than the
    rest and a true dimension would otherwise fall below the threshold.
    Only use this when every row is known to be signal, never noise.
    """
    a = _as_matrix(m)
    norms = np.linalg.norm(a, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    return numeric_rank(a / safe[:, None], tol)


def joint_rank(ms, tol=DEFAULT_TOL):
    """Rank of the column-wise concatenation of a list of matrices."""
    ms = list(ms)
    if not ms:
        raise ValueError("joint_rank needs at least one matrix")
    mats = [_as_matrix(m) for m in ms]
    rows = {m.shape[0] for m in mats}
    if len(rows) != 1:
        raise ValueError("matrices must share a row count")
    return numeric_rank(np.hstack(mats), tol)


def is_subspace(a, b, tol=DEFAULT_TOL):
    """True iff the column span of ``a`` lies inside the column span of ``b``."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError("row counts differ")
    return joint_rank([b, a], tol) == numeric_rank(b, tol)
