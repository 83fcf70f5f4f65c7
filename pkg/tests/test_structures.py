"""Structure representation, file format, amalgams, and isomorphism."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amalgam.predimension import delta
from amalgam.structures import (
    Embedding,
    FinStruct,
    PreconditionError,
    Signature,
    StructParseError,
    canonical_key,
    find_embeddings,
    find_isomorphism,
    free_amalgam,
    induced_substructure,
    parse_structure,
    serialize,
)

from conftest import brute_isomorphic, corpus, random_structure

SIG_R3 = Signature.of(("R", 3))

S1 = FinStruct.build(SIG_R3, 3, {"R": [(0, 1, 2)]})
S2 = FinStruct.build(SIG_R3, 4, {"R": [(0, 1, 2), (0, 1, 3)]})


# ---------------------------------------------------------------------------
# parsing and serialization


def test_parse_basic():
    s = parse_structure("points 3\nrel R 3\nR 0 1 2\n")
    assert s == S1


def test_parse_empty_structure():
    s = parse_structure("points 0\n")
    assert s.size == 0
    assert s.signature.relations == ()


def test_parse_comments_and_blanks():
    text = "# header\n\npoints 2\n  # indented comment\nrel E 2\nE 0 1\n"
    s = parse_structure(text)
    assert s.size == 2
    assert s.tuples_of("E") == ((0, 1),)


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("points 2\nrel R 3\nR 0 1 1\n", 3, "repeated entry"),
        ("points 2\nrel R 3\nR 0 1\n", 3, "expects 3 entries"),
        ("points 2\nrel R 2\nR 0 5\n", 3, "out of range"),
        ("points 2\nR 0 1\n", 2, "undeclared"),
        ("points 2\nrel R 2\nR 0 1\nR 0 1\n", 4, "duplicate"),
        ("rel R 2\n", 1, "points declaration"),
        ("points 2\npoints 3\n", 2, "duplicate points"),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(StructParseError) as exc:
        parse_structure(text)
    assert exc.value.line == lineno
    assert fragment in str(exc.value)


def test_round_trip_examples():
    for s in (S1, S2, FinStruct.empty(SIG_R3)):
        assert parse_structure(serialize(s)) == s


def test_round_trip_corpus():
    for s in corpus(200):
        text = serialize(s)
        assert parse_structure(text) == s
        assert serialize(parse_structure(text)) == text


@st.composite
def structures(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    rng = random.Random(seed)
    return random_structure(rng, max_points=9, max_tuples=10)


@given(structures())
@settings(max_examples=150, deadline=None)
def test_round_trip_property(s):
    assert parse_structure(serialize(s)) == s


# ---------------------------------------------------------------------------
# substructures


def test_induced_drops_straddling_tuples():
    sub, order = induced_substructure(S1, {0, 1})
    assert sub.size == 2
    assert sub.total_tuples == 0
    assert order == (0, 1)


def test_induced_identity():
    sub, order = induced_substructure(S2, range(4))
    assert sub == S2
    assert order == (0, 1, 2, 3)


def test_induced_filters_exactly():
    sub, order = induced_substructure(S2, {0, 1, 2})
    assert sub.size == 3
    assert sub.tuples_of("R") == ((0, 1, 2),)
    assert order == (0, 1, 2)


def test_induced_relabels_densely():
    sub, order = induced_substructure(S2, {1, 3})
    assert order == (1, 3)
    assert sub.size == 2


def test_induced_rejects_out_of_range():
    with pytest.raises(ValueError):
        induced_substructure(S1, {0, 7})


# ---------------------------------------------------------------------------
# embeddings


def test_embedding_requires_induced():
    sub, _ = induced_substructure(S1, {0, 1})
    Embedding(sub, S1, (0, 1))  # fine: no tuples on either side of the pair
    Embedding(S1, S2, (0, 1, 3))  # sends the instance onto R(0,1,3)
    with pytest.raises(PreconditionError):
        Embedding(S1, S2, (1, 0, 2))  # R(1,0,2) does not hold in S2


def test_embedding_rejects_non_injective():
    single = FinStruct.build(SIG_R3, 1)
    with pytest.raises(PreconditionError):
        Embedding(single, S1, (0, 0))  # wrong length as well as repeated
    pair = FinStruct.build(SIG_R3, 2)
    with pytest.raises(PreconditionError):
        Embedding(pair, S1, (1, 1))


def test_find_embeddings_ordered_tuples():
    # With ordered instance semantics the only self-map of S1 preserving the
    # single instance is the identity.
    assert find_embeddings(S1, S1) == [(0, 1, 2)]


def test_find_embeddings_point_into_s1():
    point = FinStruct.build(SIG_R3, 1)
    assert find_embeddings(point, S1) == [(0,), (1,), (2,)]


def test_find_embeddings_into_empty():
    assert find_embeddings(S1, FinStruct.empty(SIG_R3)) == []


# ---------------------------------------------------------------------------
# free amalgamation


def test_amalgam_two_s1_over_point():
    common = FinStruct.build(SIG_R3, 1)
    result = free_amalgam(S1, S1, common, (0,), (0,))
    assert result.structure.size == 5
    assert result.structure.total_tuples == 2
    assert delta(result.structure) == 3


def test_amalgam_over_whole_left():
    result = free_amalgam(S1, S1, S1, (0, 1, 2), (0, 1, 2))
    assert result.structure == S1


def test_amalgam_rejects_non_induced_identification():
    bare_triple = FinStruct.build(SIG_R3, 3)
    with pytest.raises(PreconditionError):
        # the identified triple carries an instance in S1 but not in the
        # common part, so the identification is not induced
        free_amalgam(S1, S1, bare_triple, (0, 1, 2), (0, 1, 2))
    with pytest.raises(ValueError):
        free_amalgam(S1, S1, bare_triple, (0, 1), (0, 1, 2))  # wrong map length


def test_amalgam_identity_on_delta_corpus():
    rng = random.Random(7)
    checked = 0
    structures_pool = corpus(300, max_points=8, max_tuples=8)
    for outer in structures_pool:
        if outer.size < 2:
            continue
        k = rng.randint(1, outer.size - 1)
        shared = rng.sample(range(outer.size), k)
        common, order = induced_substructure(outer, shared)
        try:
            result = free_amalgam(outer, outer, common, order, order)
        except PreconditionError:
            continue
        expect = 2 * delta(outer) - delta(common)
        assert delta(result.structure) == expect
        checked += 1
    assert checked >= 200


def test_amalgam_symmetric_up_to_isomorphism():
    rng = random.Random(11)
    for outer in corpus(40, max_points=6, max_tuples=6, seed=5):
        if outer.size < 2:
            continue
        k = rng.randint(1, outer.size - 1)
        shared = rng.sample(range(outer.size), k)
        common, order = induced_substructure(outer, shared)
        ab = free_amalgam(outer, outer, common, order, order).structure
        ba = free_amalgam(outer, outer, common, order, order).structure
        assert find_isomorphism(ab, ba) is not None


def test_amalgam_injections_are_embeddings():
    common = FinStruct.build(SIG_R3, 1)
    result = free_amalgam(S2, S1, common, (0,), (2,))
    Embedding(S2, result.structure, result.into_left)
    Embedding(S1, result.structure, result.into_right)


# ---------------------------------------------------------------------------
# canonical forms and isomorphism


def test_canonical_relabeling_invariance():
    relabeled = FinStruct.build(SIG_R3, 3, {"R": [(2, 0, 1)]})
    assert canonical_key(S1) == canonical_key(relabeled)


def test_canonical_distinguishes_tuple_loss():
    bare = FinStruct.build(SIG_R3, 3)
    assert canonical_key(S1) != canonical_key(bare)


def test_canonical_flower_petal_permutation():
    from amalgam.counterexample import FlowerParams, build_flower, flower_signature

    flower = build_flower(FlowerParams(3, 3))
    sig = flower_signature(3)
    # swap two petals (points 3 and 4) wholesale
    swap = {3: 4, 4: 3}
    mapped = {
        name: [tuple(swap.get(p, p) for p in tup) for tup in flower.tuples_of(name)]
        for name in sig.names()
    }
    permuted = FinStruct.build(sig, flower.size, mapped)
    assert canonical_key(flower) == canonical_key(permuted)


def test_canonical_matches_brute_force(small_corpus):
    smalls = [s for s in small_corpus if s.size <= 6][:60]
    agreements = 0
    for i, a in enumerate(smalls):
        for b in smalls[i + 1 : i + 6]:
            expected = brute_isomorphic(a, b)
            assert (canonical_key(a) == canonical_key(b)) == expected
            iso = find_isomorphism(a, b)
            assert (iso is not None) == expected
            if iso is not None:
                for name, tup in a.iter_tuples():
                    image = tuple(iso[p] for p in tup)
                    assert image in set(b.tuples_of(name))
            agreements += 1
    assert agreements >= 100


def test_canonical_key_stable_under_shuffle():
    rng = random.Random(3)
    for s in corpus(60, max_points=8, max_tuples=9, seed=13):
        perm = list(range(s.size))
        rng.shuffle(perm)
        mapped = {
            name: [tuple(perm[p] for p in tup) for tup in s.tuples_of(name)]
            for name in s.signature.names()
        }
        shuffled = FinStruct.build(s.signature, s.size, mapped)
        assert canonical_key(s) == canonical_key(shuffled)


def test_find_isomorphism_respects_pins():
    relabeled = FinStruct.build(SIG_R3, 3, {"R": [(1, 2, 0)]})
    free = find_isomorphism(S1, relabeled)
    assert free is not None
    pinned = find_isomorphism(S1, relabeled, {0: 0})
    assert pinned is None  # 0 must land on 1 to preserve the instance
