"""Effect-size ranking: ordering, merging, and invariance properties."""
from __future__ import annotations

import numpy as np
import pytest

from ownlens.stats import npsk_rank


def test_single_group_gets_rank_one():
    assignment = npsk_rank({"only": [5.0, 6.0, 7.0]})
    assert assignment.as_dict() == {"only": 1}


def test_identical_groups_share_rank_one():
    values = [3.0, 4.0, 5.0]
    assignment = npsk_rank({"a": values, "b": list(values)})
    assert assignment.as_dict() == {"a": 1, "b": 1}


def test_complete_dominance_orders_ranks():
    assignment = npsk_rank({"A": [10.0, 11.0, 12.0], "B": [1.0, 2.0, 3.0]})
    assert assignment.as_dict() == {"A": 1, "B": 2}


def test_three_separated_groups():
    groups = {
        "low": [1.0, 1.1, 1.2],
        "mid": [5.0, 5.1, 5.2],
        "high": [9.0, 9.1, 9.2],
    }
    assert npsk_rank(groups).as_dict() == {"high": 1, "mid": 2, "low": 3}


def test_negligible_neighbors_merge():
    # x and y interleave with zero dominance either way; z sits far below
    groups = {
        "x": [10.0, 10.2, 10.4, 10.6],
        "y": [9.95, 10.25, 10.35, 10.65],
        "z": [0.0, 0.1, 0.2, 0.3],
    }
    ranks = npsk_rank(groups).as_dict()
    assert ranks["x"] == ranks["y"] == 1
    assert ranks["z"] == 2


def test_ranks_contiguous_from_one():
    rng = np.random.default_rng(7)
    for _ in range(50):
        groups = {
            f"g{i}": rng.normal(loc=rng.uniform(0, 10), size=rng.integers(1, 12))
            for i in range(int(rng.integers(1, 7)))
        }
        assignment = npsk_rank(groups)
        ranks = sorted(set(assignment.ranks))
        assert ranks == list(range(1, max(assignment.ranks) + 1))


def test_invariant_under_group_relabeling():
    rng = np.random.default_rng(12345)
    for trial in range(100):
        n_groups = int(rng.integers(2, 7))
        groups = {}
        for i in range(n_groups):
            size = int(rng.integers(1, 10))
            groups[f"g{i}"] = (rng.normal(loc=rng.uniform(0, 5), size=size)).tolist()
        baseline = npsk_rank(groups).as_dict()
        permutation = rng.permutation(n_groups)
        relabeled = {f"h{permutation[i]}": groups[f"g{i}"] for i in range(n_groups)}
        renamed = npsk_rank(relabeled).as_dict()
        for i in range(n_groups):
            assert renamed[f"h{permutation[i]}"] == baseline[f"g{i}"], (
                f"trial {trial}: relabeling changed a rank"
            )


def test_invariant_under_within_group_permutation():
    rng = np.random.default_rng(31)
    groups = {f"g{i}": rng.normal(size=9).tolist() for i in range(4)}
    baseline = npsk_rank(groups).as_dict()
    shuffled = {
        gid: list(rng.permutation(np.asarray(vals))) for gid, vals in groups.items()
    }
    assert npsk_rank(shuffled).as_dict() == baseline


def test_single_value_groups_are_ranked():
    assignment = npsk_rank({"a": [5.0], "b": [1.0], "c": [5.0]})
    ranks = assignment.as_dict()
    assert ranks["a"] == ranks["c"] == 1
    assert ranks["b"] == 2


def test_empty_group_rejected():
    with pytest.raises(ValueError):
        npsk_rank({"a": []})
    with pytest.raises(ValueError):
        npsk_rank({})
