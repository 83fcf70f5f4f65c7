"""Finite approximations to the generic structure for a control function.

A chain is a sequence of growth-class stages, each sitting self-sufficiently
inside the next.  Extending a chain amalgamates a new structure freely over a
self-sufficient base in the tail, which preserves both chain invariants when
the control function is certified good and is re-verified explicitly when it
is not.  Closures computed in any stage agree with closures in every later
stage, so the tail answers closure and type questions for the whole chain.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .budget import enumeration_budget
from .control import (
    ControlFunction,
    control_from_json,
    control_to_json,
    good_f_report,
    kf_member,
)
from .predimension import closure, is_self_sufficient
from .structures import (
    Embedding,
    FinStruct,
    PreconditionError,
    Signature,
    canonical_key,
    check_points,
    find_isomorphism,
    free_amalgam,
    induced_substructure,
    parse_structure,
    serialize,
)

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class GenericChain:
    """Stages of one growing approximation; links embed stage k into k+1."""

    control: ControlFunction
    stages: tuple[FinStruct, ...]
    links: tuple[Embedding, ...]

    def __post_init__(self):
        if not self.stages:
            raise PreconditionError("a chain needs at least one stage")
        if len(self.links) != len(self.stages) - 1:
            raise PreconditionError("need exactly one link between adjacent stages")
        for k, link in enumerate(self.links):
            if link.source != self.stages[k] or link.target != self.stages[k + 1]:
                raise PreconditionError(f"link {k} does not join stages {k} and {k+1}")

    @property
    def tail(self) -> FinStruct:
        return self.stages[-1]


def new_chain(control: ControlFunction, signature: Signature) -> GenericChain:
    """A one-stage chain holding the empty structure."""
    return GenericChain(control, (FinStruct.empty(signature),), ())


def extend_chain(
    chain: GenericChain,
    base_points: Iterable[int],
    extension: FinStruct,
    ident: Sequence[int],
    max_points: int | None = None,
) -> GenericChain:
    """Amalgamate `extension` freely over a self-sufficient base in the tail.

    `ident` maps the base's induced substructure (points in increasing order)
    into `extension`, and that image must be self-sufficient there.  The new
    tail is checked against the growth class explicitly whenever the control
    function is not certified good, and rejected on violation.
    """
    tail = chain.tail
    base = check_points(tail, base_points)
    if not is_self_sufficient(tail, base, max_points=max_points):
        raise PreconditionError("base is not self-sufficient in the tail")
    sub, order = induced_substructure(tail, base)
    ident = tuple(ident)
    image_emb = Embedding(sub, extension, ident)  # validates the identification
    if not is_self_sufficient(extension, image_emb.image, max_points=max_points):
        raise PreconditionError("base image is not self-sufficient in the extension")
    if not kf_member(extension, chain.control, max_points=max_points):
        raise PreconditionError("extension is not in the growth class")
    amalgam = free_amalgam(tail, extension, sub, order, ident)
    new_tail = amalgam.structure
    report = good_f_report(chain.control)
    if not (report.authoritative and report.free_amalgamation):
        if not kf_member(new_tail, chain.control, max_points=max_points):
            raise PreconditionError(
                "amalgamated tail left the growth class "
                "(control function not certified good)"
            )
    link = Embedding(tail, new_tail, amalgam.into_left)
    return GenericChain(chain.control, chain.stages + (new_tail,), chain.links + (link,))


# ---------------------------------------------------------------------------
# extension scheduling


@dataclass(frozen=True)
class Extension:
    """One candidate: glue `structure` over the base along the identity of
    the base's induced substructure with points 0..k-1 of `structure`."""

    base_points: tuple[int, ...]
    structure: FinStruct
    ident: tuple[int, ...]


@dataclass(frozen=True)
class ExtensionList:
    items: tuple[Extension, ...]
    complete: bool  # false when the enumeration budget cut the listing short


def _self_sufficient_bases(
    tail: FinStruct, max_base: int, max_points: int | None
) -> list[tuple[int, ...]]:
    bases: list[tuple[int, ...]] = []
    for size in range(min(max_base, tail.size) + 1):
        for combo in combinations(tail.points(), size):
            if is_self_sufficient(tail, combo, max_points=max_points):
                bases.append(combo)
    return bases


def enumerate_extensions(
    chain: GenericChain,
    max_base: int,
    max_new: int,
    budget: int | None = None,
    max_points: int | None = None,
) -> ExtensionList:
    """All candidate (base, extension) pairs, deterministically ordered and
    deduplicated by the extension's canonical form with the base pinned.

    Bases are the self-sufficient tail subsets of size at most max_base; the
    extension adds 1..max_new fresh points and any instance set touching the
    fresh points, filtered to the growth class.  Candidates appear sparsest
    first.  When the enumeration budget runs out the list is returned with
    complete=False.
    """
    if max_base < 0 or max_new < 0:
        raise ValueError("enumeration caps must be non-negative")
    tail = chain.tail
    limit = enumeration_budget(budget)
    spent = 0
    items: list[Extension] = []
    seen: set[tuple] = set()
    for base in _self_sufficient_bases(tail, max_base, max_points):
        sub, _order = induced_substructure(tail, base)
        pins = tuple(range(sub.size))
        for fresh in range(1, max_new + 1):
            total = sub.size + fresh
            universe: list[tuple[str, tuple[int, ...]]] = []
            for name in sub.signature.names():
                arity = sub.signature.arity(name)
                if arity > total:
                    continue
                for tup in permutations(range(total), arity):
                    if any(p >= sub.size for p in tup):
                        universe.append((name, tup))
            for count in range(len(universe) + 1):
                for combo in combinations(universe, count):
                    spent += 1
                    if spent > limit:
                        return ExtensionList(tuple(items), False)
                    tuples: dict[str, list[tuple[int, ...]]] = {
                        name: list(sub.tuples_of(name)) for name in sub.signature.names()
                    }
                    for name, tup in combo:
                        tuples[name].append(tup)
                    candidate = FinStruct.build(sub.signature, total, tuples)
                    if not kf_member(candidate, chain.control, max_points=max_points):
                        continue
                    key = (base, canonical_key(candidate, pinned=pins))
                    if key in seen:
                        continue
                    seen.add(key)
                    items.append(Extension(base, candidate, pins))
    return ExtensionList(tuple(items), True)


def grow_chain(
    chain: GenericChain,
    rounds: int = 1,
    max_base: int = 2,
    max_new: int = 1,
    seed: int = 0,
    budget: int | None = None,
    max_points: int | None = None,
) -> GenericChain:
    """Realize every admissible candidate once per round, in seeded order.

    Candidates whose base image is not self-sufficient in the extension are
    skipped (the free amalgam over them would not keep the tail
    self-sufficient); the rest are applied via extend_chain.  Identical seeds
    reproduce identical chains.
    """
    rng = random.Random(seed)
    for _ in range(rounds):
        listing = enumerate_extensions(
            chain, max_base, max_new, budget=budget, max_points=max_points
        )
        candidates = [
            ext
            for ext in listing.items
            if is_self_sufficient(ext.structure, ext.ident, max_points=max_points)
        ]
        rng.shuffle(candidates)
        for ext in candidates:
            try:
                chain = extend_chain(
                    chain, ext.base_points, ext.structure, ext.ident, max_points
                )
            except PreconditionError:
                continue  # possible only when the control is not certified good
    return chain


# ---------------------------------------------------------------------------
# closure and types in the tail


def acl(chain: GenericChain, xs: Iterable[int], max_points: int | None = None) -> frozenset[int]:
    """Closure of xs in the tail; stable under any further valid extension."""
    return closure(chain.tail, xs, max_points=max_points).points


def same_type(
    chain: GenericChain,
    left: Sequence[int],
    right: Sequence[int],
    max_points: int | None = None,
) -> bool:
    """True iff some isomorphism of closures carries one tuple onto the other
    coordinatewise."""
    if len(left) != len(right):
        raise PreconditionError("tuples must have equal length")
    tail = chain.tail
    pattern: dict[int, int] = {}
    for x, y in zip(left, right):
        if pattern.setdefault(x, y) != y:
            return False
    if len(set(pattern.values())) != len(pattern):
        return False
    cl_left = closure(tail, set(left), max_points=max_points).points
    cl_right = closure(tail, set(right), max_points=max_points).points
    if len(cl_left) != len(cl_right):
        return False
    sub_left, order_left = induced_substructure(tail, cl_left)
    sub_right, order_right = induced_substructure(tail, cl_right)
    index_left = {p: i for i, p in enumerate(order_left)}
    index_right = {p: i for i, p in enumerate(order_right)}
    pins = {index_left[x]: index_right[y] for x, y in pattern.items()}
    return find_isomorphism(sub_left, sub_right, pins) is not None


# ---------------------------------------------------------------------------
# persistence


def save_chain(chain: GenericChain, directory: str) -> None:
    """Write stages as structure files plus a manifest with links and the
    control function; deterministic bytes for identical chains."""
    os.makedirs(directory, exist_ok=True)
    names = []
    for k, stage in enumerate(chain.stages):
        name = f"stage_{k:04d}.struct"
        names.append(name)
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            fh.write(serialize(stage))
    manifest = {
        "control": control_to_json(chain.control),
        "stages": names,
        "links": [list(link.mapping) for link in chain.links],
    }
    with open(os.path.join(directory, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_chain(directory: str) -> GenericChain:
    with open(os.path.join(directory, MANIFEST_NAME), encoding="utf-8") as fh:
        manifest = json.load(fh)
    control = control_from_json(manifest["control"])
    stages = []
    for name in manifest["stages"]:
        with open(os.path.join(directory, name), encoding="utf-8") as fh:
            stages.append(parse_structure(fh.read()))
    links = tuple(
        Embedding(stages[k], stages[k + 1], tuple(mapping))
        for k, mapping in enumerate(manifest["links"])
    )
    return GenericChain(control, tuple(stages), links)
