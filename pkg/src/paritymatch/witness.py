"""A single-violation pair on C built from two triples that share D2.

Given (T, H, D) and (T, H', D') with D2 = D'2, |H & H'| <= 1 and two pairs
p1, p2 of H' - H whose right vertices get different canonical labels under
D, the construction is

* L': every vertex of C labeled 1, except the right vertices of H' (0);
* M': straight red edges on C, except the blue cross u1-v2, u2-v1.

Exactly one edge of M' then violates L': the straight edge of the third
pair of H'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import BLUE, RED, Edge, Matching
from .partitions import (
    PartialLabeling,
    Partition,
    Triple,
    count_violations,
    edge_violates_partial,
    is_consistent,
    lb_labeling,
    ma_matching,
    partition_from_order,
    partition_size,
    restrict_matching,
    violation_core,
)


class WitnessPreconditionError(ValueError):
    """Lists every failed precondition, one message each."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class Witness:
    matching: Matching
    labeling: PartialLabeling
    crossed: tuple[int, int]
    violating: Edge | None


def precondition_problems(t: Partition, h, d, h_prime, d_prime) -> list[str]:
    problems = []
    k = t.k
    for name, hh, dd in (("(H, D)", h, d), ("(H', D')", h_prime, d_prime)):
        try:
            Triple(t, frozenset(hh), tuple(dd))
        except ValueError as exc:
            problems.append(f"{name} is not a triple of the partition: {exc}")
    if problems:
        return problems
    if tuple(d[2 * k:]) != tuple(d_prime[2 * k:]):
        problems.append("D2 and D'2 differ")
    if len(set(h) & set(h_prime)) > 1:
        problems.append(f"|H & H'| = {len(set(h) & set(h_prime))} exceeds 1")
    if not split_pairs(k, h, d, h_prime):
        problems.append("no two pairs of H' - H have different L_B(D) labels on their right vertices")
    return problems


def split_pairs(k: int, h, d, h_prime) -> list[tuple[int, int]]:
    """Pairs (p1, p2) in H' - H with L_B(D)(v_p1) != L_B(D)(v_p2)."""
    lb = lb_labeling(tuple(d)).right
    cands = sorted(p for p in set(h_prime) - set(h) if p in lb)
    return [(a, b) for a, b in itertools.combinations(cands, 2) if lb[a] != lb[b]]


def one_violation_witness(t: Partition, h, d, h_prime, d_prime,
                          pair: tuple[int, int] | None = None) -> Witness:
    problems = precondition_problems(t, h, d, h_prime, d_prime)
    if problems:
        raise WitnessPreconditionError(problems)
    options = split_pairs(t.k, h, d, h_prime)
    if pair is None:
        p1, p2 = options[0]
    else:
        p1, p2 = pair
        if (p1, p2) not in options and (p2, p1) not in options:
            raise WitnessPreconditionError([f"pairs {pair} do not split the L_B(D) labels"])
    c = sorted(t.c_set)
    hp = set(h_prime)
    labeling = PartialLabeling({p: 1 for p in c}, {p: 0 if p in hp else 1 for p in c})
    edges = [Edge(p, p, RED) for p in c if p not in (p1, p2)]
    edges += [Edge(p1, p2, BLUE), Edge(p2, p1, BLUE)]
    matching = Matching.of(edges)
    bad = [e for e in matching.edges if edge_violates_partial(e, labeling)]
    return Witness(matching, labeling, (p1, p2), bad[0] if len(bad) == 1 else None)


def check_witness_conditions(h, d, h_prime, d_prime, matching: Matching,
                             labeling: PartialLabeling) -> dict[str, bool]:
    """The five requirements on (M', L'), each checked from scratch."""
    _, l3 = violation_core(h_prime)
    m3, _ = violation_core(h)
    sub_d = restrict_matching(matching, d)
    return {
        "i": labeling.restrict(h_prime) == l3,
        "ii": is_consistent(ma_matching(tuple(d_prime)).edges, labeling.restrict(d_prime)),
        "iii": restrict_matching(matching, h) == m3,
        "iv": sub_d is not None and is_consistent(sub_d.edges, lb_labeling(tuple(d))),
        "v": count_violations(matching.edges, labeling) == 1,
    }


# -- random valid configurations ---------------------------------------------

@dataclass(frozen=True)
class Configuration:
    partition: Partition
    h: frozenset
    d: tuple
    h_prime: frozenset
    d_prime: tuple

    @property
    def overlap(self) -> int:
        return len(self.h & self.h_prime)


def random_configuration(k: int, rng: np.random.Generator, overlap: int | None = None,
                         m: int = 1, max_tries: int = 1000) -> Configuration:
    """Rejection sampler over configurations meeting every precondition.

    H' has to live inside H + D1, because D'2 = D2.  At k = 1 that forces
    |H & H'| = 1; ``overlap=0`` is only reachable from k = 2 on.
    """
    if overlap not in (None, 0, 1):
        raise ValueError("overlap must be 0, 1 or None")
    if k == 1 and overlap == 0:
        raise ValueError("at k=1 every valid configuration has |H & H'| = 1")
    n = partition_size(k, m)
    for _ in range(max_tries):
        order = rng.permutation(n)
        t = partition_from_order(order, k, m)
        c = [int(p) for p in order[8 * k * m:]]
        h, d = c[:3], c[3:]
        pool = h + d[:2 * k]
        if overlap is not None:
            want = overlap
        else:
            want = 1 if k == 1 else int(rng.integers(0, 2))
        from_h = [int(x) for x in rng.choice(h, size=want, replace=False)]
        from_d1 = [int(x) for x in rng.choice(d[:2 * k], size=3 - want, replace=False)]
        hp = from_h + from_d1
        rest = [p for p in pool if p not in hp]
        d_prime = [int(x) for x in rng.permutation(rest)] + d[2 * k:]
        if precondition_problems(t, h, d, hp, d_prime):
            continue
        return Configuration(t, frozenset(h), tuple(d), frozenset(hp), tuple(d_prime))
    raise RuntimeError("no valid configuration found")
