from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from paritymatch.core import build_complete_double, violation_count
from paritymatch.family import PermutationFamily, build_permutation_family
from paritymatch.partitions import Triple, labeling_in_L_all, matching_in_M_all
from paritymatch.samplers import (
    KINDS,
    alternative_sample_mu3,
    batch_membership,
    draw_batch,
    iter_batches,
    sample_mu3,
    sample_mu4k3,
)


@pytest.fixture(scope="module")
def family_k1():
    return PermutationFamily.load(Path(__file__).parent / "fixtures" / "family_k1.json")


def concat(kind, k, m, count, seed, family=None, **kw):
    batches = list(iter_batches(kind, k, m, count, seed, family, **kw))
    return np.concatenate([b.order for b in batches]), np.concatenate([b.violations for b in batches])


@pytest.mark.parametrize("kind", ["mu3", "mu4k3"])
def test_streams_are_deterministic_and_thread_independent(kind):
    a = concat(kind, 1, 1, 5000, 3, chunk=1000)
    b = concat(kind, 1, 1, 5000, 3, chunk=1000, threads=4)
    c = concat(kind, 1, 1, 5000, 4, chunk=1000)
    assert (a[0] == b[0]).all() and (a[1] == b[1]).all()
    assert not (a[0] == c[0]).all()


@given(st.integers(0, 10**6), st.sampled_from([(1, 1), (1, 2), (2, 1)]))
def test_single_samples_by_objects(seed, km):
    k, m = km
    mt, lab, tr = sample_mu3(None, k, m, seed)
    t = tr.partition
    g = build_complete_double(t.n)
    assert matching_in_M_all(t, mt) and labeling_in_L_all(t, lab)
    assert violation_count(mt, lab, g) == 3
    core_m, core_l = tr.core()
    assert all(e in mt.edges for e in core_m.edges)

    mt, lab, t, c = sample_mu4k3(None, k, m, seed)
    assert matching_in_M_all(t, mt) and labeling_in_L_all(t, lab)
    assert violation_count(mt, lab, g) == 4 * k + 3
    assert set(c) == t.c_set


@given(st.integers(0, 10**6))
def test_alternative_sampler_by_objects(seed):
    family = build_permutation_family(1, seed)
    mt, lab, tr = alternative_sample_mu3(None, 1, 1, family, seed)
    t = tr.partition
    assert isinstance(tr, Triple)
    assert matching_in_M_all(t, mt) and labeling_in_L_all(t, lab)
    assert violation_count(mt, lab, build_complete_double(t.n)) == 3


def test_parameter_checks(family_k1):
    with pytest.raises(ValueError):
        sample_mu3(16, 1, 1, 0)
    with pytest.raises(ValueError):
        next(iter_batches("mu5", 1, 1, 1, 0))
    with pytest.raises(ValueError):
        next(iter_batches("mu3_alt", 1, 1, 1, 0))
    with pytest.raises(ValueError):
        next(iter_batches("mu3_alt", 2, 1, 1, 0, family_k1))
    with pytest.raises(ValueError):
        list(iter_batches("mu3", 1, 1, -1, 0))


def test_records_are_one_based(family_k1):
    for kind in KINDS:
        b = draw_batch(kind, 1, 1, 3, np.random.default_rng(0), family_k1, seed=0)
        rec = b.record(2)
        assert rec["index"] == 2 and rec["kind"] == kind
        pairs = [p for blk in rec["T"]["A"] + rec["T"]["B"] for p in blk] + rec["T"]["C"]
        assert sorted(pairs) == list(range(1, 16))
        assert len(rec["L"]) == 30 and len(rec["M"]) == 15
        assert ("C" in rec) == (kind == "mu4k3")


def test_membership_check_catches_tampering():
    b = draw_batch("mu3", 1, 1, 200, np.random.default_rng(1))
    assert batch_membership(b).all()
    b.lu[5, b.order[5, 0]] ^= 1          # break an A-block labeling
    b.color[7, b.order[7, 4]] ^= 1       # recolor a B-block edge
    ok = batch_membership(b)
    assert not ok[5] and not ok[7] and ok.sum() == 198


@pytest.mark.parametrize("kind", ["mu3", "mu3_alt"])
def test_pair_zero_lands_uniformly(kind, family_k1):
    # pair 0 sits in A, B, H or D with probabilities 4:4:3:4 out of 15
    order, _ = concat(kind, 1, 1, 30000, 12, family_k1 if kind == "mu3_alt" else None)
    pos = np.argmax(order == 0, axis=1)
    groups = np.select([pos < 4, pos < 8, pos < 11], [0, 1, 2], 3)
    observed = np.bincount(groups, minlength=4)
    expected = np.array([4, 4, 3, 4]) / 15 * len(order)
    assert chisquare(observed, expected).pvalue > 1e-4


def test_b_block_matchings_uniform():
    b = draw_batch("mu3", 1, 1, 24000, np.random.default_rng(2))
    blk = b.order[:, 4:8]
    mates = np.take_along_axis(b.mate, blk, axis=1)
    # position of each mate inside the block gives the permutation
    perm = np.argmax(mates[:, :, None] == blk[:, None, :], axis=2)
    codes = perm @ np.array([64, 16, 4, 1])
    counts = np.unique(codes, return_counts=True)[1]
    assert len(counts) == 24
    assert chisquare(counts).pvalue > 1e-4
