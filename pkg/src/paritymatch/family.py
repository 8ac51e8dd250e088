"""Families of bijections indexed by 3-subsets, and the separation property.

For a parameter k the universe is [2k+3] (1-based, as in the files).  A
family assigns to every 3-subset t a bijection sigma_t from [2k+3] - t onto
[2k].  A pair (t, t') *separates* when two elements v1, v2 of t' - t land on
opposite halves: sigma_t(v1) <= k < sigma_t(v2).  A family is good when
every collection S of at least 10k subsets contains a separating pair.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .polytope import SCHEMA_VERSION

RETRY_CAP = 10_000

Triple3 = tuple[int, int, int]


def universe_triples(k: int) -> list[Triple3]:
    return list(itertools.combinations(range(1, 2 * k + 4), 3))


@dataclass(frozen=True)
class PermutationFamily:
    k: int
    sigma: Mapping[Triple3, Mapping[int, int]]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        expected = universe_triples(self.k)
        if sorted(self.sigma) != expected:
            raise ValueError("family must have one bijection per 3-subset of [2k+3]")
        full = set(range(1, 2 * self.k + 4))
        target = set(range(1, 2 * self.k + 1))
        for t, s in self.sigma.items():
            if set(s) != full - set(t) or set(s.values()) != target:
                raise ValueError(f"sigma_{t} is not a bijection onto [2k]")

    def triples(self) -> list[Triple3]:
        return universe_triples(self.k)

    def image(self, t: Iterable[int], v: int) -> int:
        return self.sigma[tuple(sorted(t))][v]

    def arrays(self) -> tuple[list[Triple3], np.ndarray, np.ndarray, np.ndarray]:
        """Vectorisation helpers, all 0-based.

        Returns (triples, positions (T,3), remaining positions (T,2k) in
        increasing order, slot of each remaining position (T,2k)).
        """
        ts = self.triples()
        pos = np.array([[p - 1 for p in t] for t in ts], dtype=np.int64)
        rest = np.array([[v - 1 for v in sorted(self.sigma[t])] for t in ts], dtype=np.int64)
        slot = np.array([[self.sigma[t][v] - 1 for v in sorted(self.sigma[t])] for t in ts],
                        dtype=np.int64)
        return ts, pos, rest, slot

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "k": self.k,
            "entries": [{"t": list(t), "sigma": [[v, self.sigma[t][v]] for v in sorted(self.sigma[t])]}
                        for t in self.triples()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PermutationFamily":
        sigma = {tuple(sorted(int(x) for x in e["t"])): {int(v): int(w) for v, w in e["sigma"]}
                 for e in obj["entries"]}
        return cls(int(obj["k"]), sigma)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "PermutationFamily":
        return cls.from_json(json.loads(Path(path).read_text()))


def build_permutation_family(k: int, seed) -> PermutationFamily:
    """Independent uniform bijection for every 3-subset."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(seed)
    full = range(1, 2 * k + 4)
    sigma = {}
    for t in universe_triples(k):
        dom = [v for v in full if v not in t]
        img = rng.permutation(2 * k) + 1
        sigma[t] = {v: int(w) for v, w in zip(dom, img)}
    return PermutationFamily(k, sigma)


def separates(f: PermutationFamily, t: Sequence[int], t2: Sequence[int]) -> bool:
    s = f.sigma[tuple(sorted(t))]
    images = [s[v] for v in set(t2) - set(t)]
    return any(w <= f.k for w in images) and any(w > f.k for w in images)


def _check_collection(f: PermutationFamily, S: Iterable[Iterable[int]]) -> list[Triple3]:
    out = []
    top = 2 * f.k + 3
    for t in S:
        tt = tuple(sorted(int(x) for x in t))
        if len(tt) != 3 or len(set(tt)) != 3 or not all(1 <= x <= top for x in tt):
            raise ValueError(f"{t} is not a 3-subset of [1..{top}]")
        out.append(tt)
    if len(set(out)) != len(out):
        raise ValueError("collection lists a subset twice")
    if len(out) < 10 * f.k:
        raise ValueError(f"collection has {len(out)} subsets, the property needs at least {10 * f.k}")
    return out


def check_set(f: PermutationFamily, S: Iterable[Iterable[int]]) -> bool:
    """Does S contain t, t' with a separating pair of elements in t' - t?"""
    ts = _check_collection(f, S)
    return any(separates(f, t, t2) for t in ts for t2 in ts if t != t2)


def verify_family(f: PermutationFamily, s_sets: Iterable[Iterable[Iterable[int]]]) -> bool:
    return all(check_set(f, S) for S in s_sets)


def separation_graph(f: PermutationFamily) -> nx.Graph:
    g = nx.Graph()
    ts = f.triples()
    g.add_nodes_from(ts)
    for t, t2 in itertools.combinations(ts, 2):
        if separates(f, t, t2) or separates(f, t2, t):
            g.add_edge(t, t2)
    return g


def largest_unseparated_collection(f: PermutationFamily) -> list[Triple3]:
    """A maximum collection with no separating pair (an independent set)."""
    comp = nx.complement(separation_graph(f))
    clique, _ = nx.max_weight_clique(comp, weight=None)
    return sorted(clique)


def family_is_good(f: PermutationFamily) -> bool:
    """Exact check over every collection of size >= 10k."""
    return len(largest_unseparated_collection(f)) < 10 * f.k


def find_family(k: int, seed: int, retries: int = RETRY_CAP,
                accept=family_is_good) -> tuple[PermutationFamily, int]:
    """Rebuild with fresh seeds until ``accept`` holds; returns (family, attempts)."""
    for attempt in range(1, retries + 1):
        f = build_permutation_family(k, [seed, attempt])
        if accept(f):
            return f, attempt
    raise RuntimeError(f"no accepted family for k={k} within {retries} attempts")
