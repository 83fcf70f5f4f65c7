"""Shared corpus generators for the test suite.

Structures are drawn from a fixed seed so every run sees the same corpus;
sizes stay at desk scale (default 12 points, 15 tuples, arities up to 3)
where the exponential subset oracle is still comfortable.
"""

from __future__ import annotations

import random
from itertools import permutations

import pytest

from amalgam.structures import FinStruct, Signature

SIGNATURE_POOL = (
    Signature.of(("R", 2)),
    Signature.of(("R", 3)),
    Signature.of(("R", 2), ("S", 3)),
    Signature.of(("U", 1), ("R", 3)),
)

CORPUS_SEED = 20260822


def random_structure(
    rng: random.Random,
    max_points: int = 12,
    max_tuples: int = 15,
    signature: Signature | None = None,
    min_points: int = 1,
) -> FinStruct:
    sig = signature or rng.choice(SIGNATURE_POOL)
    size = rng.randint(min_points, max_points)
    arities = [(name, arity) for name, arity in sig.relations if arity <= size]
    tuples: dict[str, set[tuple[int, ...]]] = {name: set() for name in sig.names()}
    budget = rng.randint(0, max_tuples)
    for _ in range(budget):
        if not arities:
            break
        name, arity = rng.choice(arities)
        tup = tuple(rng.sample(range(size), arity))
        tuples[name].add(tup)
    return FinStruct.build(sig, size, tuples)


def corpus(count: int, seed: int = CORPUS_SEED, **kwargs) -> list[FinStruct]:
    rng = random.Random(seed)
    return [random_structure(rng, **kwargs) for _ in range(count)]


def random_subset(rng: random.Random, s: FinStruct) -> frozenset[int]:
    if s.size == 0:
        return frozenset()
    k = rng.randint(0, s.size)
    return frozenset(rng.sample(range(s.size), k))


def brute_isomorphic(a: FinStruct, b: FinStruct) -> bool:
    """Reference isomorphism test by checking every bijection.

    Per-relation tuple counts are compared first, so forward inclusion of
    the a-tuples under a bijection already forces tuple sets equal.
    """
    if a.signature != b.signature or a.size != b.size:
        return False
    if any(len(ta) != len(tb) for ta, tb in zip(a.rels, b.rels)):
        return False
    b_sets = {name: set(b.tuples_of(name)) for name in a.signature.names()}
    for perm in permutations(range(b.size)):
        if all(
            tuple(perm[p] for p in tup) in b_sets[name]
            for name, tup in a.iter_tuples()
        ):
            return True
    return False


@pytest.fixture(scope="session")
def small_corpus() -> list[FinStruct]:
    return corpus(120, max_points=7, max_tuples=8)


@pytest.fixture(scope="session")
def main_corpus() -> list[FinStruct]:
    return corpus(500)


def random_amalgam_triples(rng: random.Random, count: int, f, max_tries: int = 20000):
    """Seeded stream of valid free-amalgamation inputs under control f.

    Each item is (common, left, right, into_left, into_right) where both
    factors lie in the growth class, the common part is self-sufficient in
    the left factor by construction (a closure), and the chosen image is
    self-sufficient in the right factor (a strong embedding).
    """
    from amalgam.control import kf_member
    from amalgam.predimension import closure, find_leq_embeddings
    from amalgam.structures import induced_substructure

    triples = []
    tries = 0
    while len(triples) < count and tries < max_tries:
        tries += 1
        sig = rng.choice(SIGNATURE_POOL)
        left = random_structure(rng, max_points=6, max_tuples=6, signature=sig)
        right = random_structure(rng, max_points=6, max_tuples=6, signature=sig)
        if not kf_member(left, f) or not kf_member(right, f):
            continue
        seed = frozenset(rng.sample(range(left.size), rng.randint(0, min(2, left.size))))
        common_points = closure(left, seed).points
        common, order = induced_substructure(left, common_points)
        into_left = tuple(order)
        strong = find_leq_embeddings(common, right)
        if not strong:
            continue
        into_right = rng.choice(strong).mapping
        triples.append((common, left, right, into_left, into_right))
    if len(triples) < count:
        raise AssertionError(f"only {len(triples)} triples after {tries} draws")
    return triples


def random_gadget_instances(rng: random.Random, count: int, max_tries: int = 40000):
    """Seeded stream of valid extension-gadget inputs.

    Each item is (common, c_struct, t_struct, into_c, into_t, c_point,
    targets) with both factors of at most 8 points inside the log:8 growth
    class, the shared part strictly smaller than either factor, and at most
    3 pairwise d-independent targets.
    """
    from amalgam.control import LogBase, kf_member
    from amalgam.predimension import (
        closure,
        find_leq_embeddings,
        is_d_independent,
    )
    from amalgam.structures import Signature, induced_substructure

    f = LogBase(8)
    sig = Signature.of(("R", 3))
    instances = []
    tries = 0
    while len(instances) < count and tries < max_tries:
        tries += 1
        c_struct = random_structure(
            rng, max_points=8, max_tuples=6, signature=sig, min_points=2
        )
        t_struct = random_structure(
            rng, max_points=8, max_tuples=6, signature=sig, min_points=2
        )
        if not kf_member(c_struct, f) or not kf_member(t_struct, f):
            continue
        seed = frozenset(
            rng.sample(range(c_struct.size), rng.randint(0, min(2, c_struct.size - 1)))
        )
        common_points = closure(c_struct, seed).points
        if len(common_points) >= c_struct.size:
            continue
        common, order = induced_substructure(c_struct, common_points)
        into_c = tuple(order)
        c_point = rng.choice(sorted(set(range(c_struct.size)) - common_points))
        strong = find_leq_embeddings(common, t_struct)
        candidates = []
        for emb in strong:
            outside = sorted(set(range(t_struct.size)) - set(emb.mapping))
            if outside:
                candidates.append((emb.mapping, outside))
        if not candidates:
            continue
        into_t, outside = rng.choice(candidates)
        r = rng.randint(0, min(3, len(outside)))
        targets = tuple(rng.sample(outside, r))
        if not is_d_independent(t_struct, [{t} for t in targets], over=into_t):
            continue
        instances.append((common, c_struct, t_struct, into_c, into_t, c_point, targets))
    if len(instances) < count:
        raise AssertionError(f"only {len(instances)} instances after {tries} draws")
    return instances
