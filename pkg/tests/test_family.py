import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paritymatch.family import (
    PermutationFamily,
    build_permutation_family,
    check_set,
    family_is_good,
    find_family,
    largest_unseparated_collection,
    separates,
    separation_graph,
    universe_triples,
    verify_family,
)


def separation_matrix(f: PermutationFamily) -> np.ndarray:
    """sep[a, b]: some v1, v2 in t_b - t_a map to opposite halves under sigma_{t_a}."""
    ts = f.triples()
    out = np.zeros((len(ts), len(ts)), dtype=bool)
    for a, t in enumerate(ts):
        for b, t2 in enumerate(ts):
            extra = [v for v in t2 if v not in t]
            out[a, b] = any((f.sigma[t][v1] <= f.k) != (f.sigma[t][v2] <= f.k)
                            for v1, v2 in itertools.combinations(extra, 2))
    return out


def test_universe():
    assert len(universe_triples(1)) == 10
    assert len(universe_triples(2)) == 35


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_family_bijections(seed, k):
    f = build_permutation_family(k, seed)
    for t, s in f.sigma.items():
        assert sorted(s) == sorted(set(range(1, 2 * k + 4)) - set(t))
        assert sorted(s.values()) == list(range(1, 2 * k + 1))
    assert PermutationFamily.from_json(f.to_json()) == f


def test_invalid_family_rejected():
    f = build_permutation_family(1, 0)
    sigma = {t: dict(s) for t, s in f.sigma.items()}
    t = next(iter(sigma))
    a, b = list(sigma[t])
    sigma[t][a] = sigma[t][b]
    with pytest.raises(ValueError):
        PermutationFamily(1, sigma)


@given(st.integers(0, 10**6))
def test_separation_routes_agree(seed):
    f = build_permutation_family(2, seed)
    sep = separation_matrix(f)
    ts = f.triples()
    for a, b in itertools.combinations(range(len(ts)), 2):
        assert separates(f, ts[a], ts[b]) == sep[a, b]
    g = separation_graph(f)
    assert g.number_of_edges() == int((sep | sep.T)[np.triu_indices(len(ts), 1)].sum())


def test_exact_check_against_subsets_k1():
    for seed in range(20):
        f = build_permutation_family(1, seed)
        assert family_is_good(f) == verify_family(f, [universe_triples(1)])
        big = largest_unseparated_collection(f)
        sep = separation_matrix(f)
        idx = [f.triples().index(t) for t in big]
        assert not sep[np.ix_(idx, idx)].any()


def test_k2_monte_carlo(fixtures_dir):
    f = PermutationFamily.load(fixtures_dir / "family_k2.json")
    assert f == find_family(2, 0)[0]
    sep = separation_matrix(f)
    sym = sep | sep.T
    rng = np.random.default_rng(2)
    ts = f.triples()
    hits = 0
    for trial in range(10_000):
        idx = rng.choice(len(ts), size=20, replace=False)
        ok = sym[np.ix_(idx, idx)].any()
        hits += ok
        if trial % 100 == 0:
            assert check_set(f, [ts[i] for i in idx]) == ok
    assert hits == 10_000
    assert family_is_good(f)


def test_collection_validation():
    f = build_permutation_family(1, 0)
    with pytest.raises(ValueError):
        check_set(f, universe_triples(1)[:9])
    with pytest.raises(ValueError):
        check_set(f, universe_triples(1)[:9] + [(1, 2, 9)])
    with pytest.raises(ValueError):
        check_set(f, universe_triples(1)[:9] + [(1, 2, 3)])


def test_retry_cap():
    with pytest.raises(RuntimeError):
        find_family(1, 0, retries=3, accept=lambda f: False)
