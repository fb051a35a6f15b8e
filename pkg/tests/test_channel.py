"""Changing patterns, channel sampling, transforms, and network configs."""

import json
from fractions import Fraction

import numpy as np
import pytest

from alignsim.channel import (ChangingPattern, DiagonalChannel, NetworkConfig,
                              UnknownSet, constant_intervals,
                              direct_transform_matrix, mobility_rate,
                              sample_channel, sample_network, union_pattern)
from alignsim.linalg import numeric_rank


def test_pattern_sorts_and_dedupes():
    p = ChangingPattern(6, (5, 3, 3))
    assert p.change_points == (3, 5)


@pytest.mark.parametrize("pts", [(1,), (0,), (7,)])
def test_pattern_rejects_out_of_range(pts):
    with pytest.raises(ValueError):
        ChangingPattern(6, pts)


def test_constant_intervals_partition():
    p = ChangingPattern(8, (3, 4, 7))
    blocks = constant_intervals(p)
    assert blocks == [[1, 2], [3], [4, 5, 6], [7, 8]]
    assert sorted(s for b in blocks for s in b) == list(range(1, 9))


def test_constant_intervals_no_changes():
    assert constant_intervals(ChangingPattern(4, ())) == [[1, 2, 3, 4]]


def test_mobility_rate():
    assert mobility_rate(ChangingPattern(8, (3, 5))) == Fraction(2, 8)
    assert mobility_rate(ChangingPattern(5, ())) == 0


def test_union_pattern():
    a = ChangingPattern(6, (2, 4))
    b = ChangingPattern(6, (4, 5))
    assert union_pattern([a, b]).change_points == (2, 4, 5)
    with pytest.raises(ValueError):
        union_pattern([a, ChangingPattern(5, ())])


def test_sample_channel_changes_exactly_at_declared_points():
    rng = np.random.default_rng(0)
    for t in range(50):
        n = int(rng.integers(2, 15))
        k = int(rng.integers(0, n - 1))
        pts = tuple(sorted(rng.choice(range(2, n + 1), size=k, replace=False)))
        h = sample_channel(ChangingPattern(n, pts), seed=t).array()
        realized = tuple(i + 1 for i in range(1, n) if h[i] != h[i - 1])
        assert realized == tuple(sorted(set(pts)))


def test_sample_channel_globally_distinct_blocks():
    p = ChangingPattern(9, (3, 5, 7))
    h = sample_channel(p, seed=5, distinct_blocks="all").array()
    block_vals = [h[b[0] - 1] for b in constant_intervals(p)]
    assert len(set(block_vals)) == len(block_vals)


def test_sample_channel_range_and_determinism():
    p = ChangingPattern(10, (4,))
    a = sample_channel(p, seed=3, h_min=0.5, h_max=2.0).array()
    b = sample_channel(p, seed=3).array()
    assert np.array_equal(a, b)
    assert np.all((a >= 0.5) & (a <= 2.0))


def test_diagonal_channel_matrix():
    d = DiagonalChannel((1.0, 2.0))
    assert np.array_equal(d.matrix(), np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        DiagonalChannel((np.inf,))


def test_unknown_set_validation():
    UnknownSet(5, frozenset({1, 5}))
    with pytest.raises(ValueError):
        UnknownSet(5, frozenset({0}))
    with pytest.raises(ValueError):
        UnknownSet(5, frozenset({6}))


@pytest.mark.parametrize("kind", ["identity", "memory", "permutation"])
def test_direct_transform_full_rank(kind):
    for seed in range(10):
        t = direct_transform_matrix(kind, 3, 8, seed)
        assert numeric_rank(t.matrix) == 8
        assert t.kind == kind


def test_memory_transform_is_banded_lower_triangular():
    t = direct_transform_matrix("memory", 2, 7, 0)
    m = t.matrix
    for row in range(7):
        for col in range(7):
            if col > row or col < row - 2:
                assert m[row, col] == 0.0


def test_permutation_transform_displacement_bounded():
    for seed in range(20):
        t = direct_transform_matrix("permutation", 2, 9, seed)
        cols = np.argmax(t.matrix != 0, axis=1)
        assert np.all(np.abs(cols - np.arange(9)) <= 2)
        assert sorted(cols.tolist()) == list(range(9))


def test_direct_transform_validation():
    with pytest.raises(ValueError):
        direct_transform_matrix("memory", 0, 5, 0)
    with pytest.raises(ValueError):
        direct_transform_matrix("wavelet", 1, 5, 0)


def test_network_config_json_round_trip(tmp_path):
    cfg = NetworkConfig(K=2, n=4, patterns=[[[2], [3]], [[], [2, 4]]],
                        unknown=[[[], [1]], [[2], []]],
                        direct_kind="memory", memory_distance=2, seed=9)
    path = tmp_path / "cfg.json"
    cfg.save(path)
    loaded = NetworkConfig.load(path)
    assert loaded == cfg
    raw = json.loads(path.read_text())
    for key in ("K", "n", "h_min", "h_max", "patterns", "unknown",
                "direct_kind", "memory_distance", "seed"):
        assert key in raw


def test_network_config_shape_validation():
    with pytest.raises(ValueError):
        NetworkConfig(K=2, n=4, patterns=[[[]]])


def test_sample_network_deterministic_and_link_independent():
    cfg = NetworkConfig(K=3, n=6, patterns=[[[2, 4]] * 3] * 3, seed=1)
    a = sample_network(cfg, seed=5)
    b = sample_network(cfg, seed=5)
    for p in range(3):
        for q in range(3):
            assert a.channel(p, q) == b.channel(p, q)
    vals = {a.channel(p, q).values for p in range(3) for q in range(3)}
    assert len(vals) == 9  # links draw independent gains


def test_received_matrix_applies_transform_only_on_direct_link():
    cfg = NetworkConfig(K=2, n=5, patterns=[[[3], [3]], [[3], [3]]],
                        direct_kind="memory", memory_distance=2, seed=2)
    inst = sample_network(cfg, seed=0)
    x = np.eye(5)
    direct = inst.received_matrix(0, 0, x)
    cross = inst.received_matrix(0, 1, x)
    h00 = inst.channel(0, 0).array()[:, None]
    h01 = inst.channel(0, 1).array()[:, None]
    assert np.allclose(direct, h00 * (inst.transforms[0].matrix @ x))
    assert np.allclose(cross, h01 * x)
