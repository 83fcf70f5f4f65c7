"""Finite relational structures: parsing, substructures, amalgams, canonical forms.

A structure carries points 0..size-1 and, for each relation symbol of its
signature, a set of relation instances.  An instance is an ordered tuple of
pairwise distinct points; two tuples on the same points in different orders
are distinct instances.  Values are immutable, operations return new values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class StructParseError(ValueError):
    """Structure file rejected; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PreconditionError(ValueError):
    """An operation was called on inputs that violate its stated preconditions."""


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities, in declaration order."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise ValueError("duplicate relation name in signature")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"relation {name} must have arity >= 1")

    @classmethod
    def of(cls, *relations: tuple[str, int]) -> "Signature":
        return cls(tuple((str(name), int(arity)) for name, arity in relations))

    @cached_property
    def _arities(self) -> dict[str, int]:
        return dict(self.relations)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def has(self, name: str) -> bool:
        return name in self._arities

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise KeyError(f"relation {name} not in signature") from None


@dataclass(frozen=True)
class FinStruct:
    """A finite relational structure.

    `rels` is aligned with `signature.relations`; each entry is the sorted,
    duplicate-free tuple of instances of that relation.  Equality is
    literal (same signature, same size, same instances), not isomorphism.
    """

    signature: Signature
    size: int
    rels: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be >= 0")
        if len(self.rels) != len(self.signature.relations):
            raise ValueError("rels not aligned with signature")
        for (name, arity), tuples in zip(self.signature.relations, self.rels):
            previous = None
            for tup in tuples:
                if len(tup) != arity:
                    raise ValueError(f"{name}{tup}: expected arity {arity}")
                if len(set(tup)) != len(tup):
                    raise ValueError(f"{name}{tup}: repeated entry")
                for p in tup:
                    if not 0 <= p < self.size:
                        raise ValueError(f"{name}{tup}: point {p} out of range")
                if previous is not None and tup <= previous:
                    raise ValueError(f"{name}{tup}: instances must be sorted and distinct")
                previous = tup

    @classmethod
    def build(
        cls,
        signature: Signature,
        size: int,
        tuples: Mapping[str, Iterable[Sequence[int]]] | None = None,
    ) -> "FinStruct":
        """Normalize a name -> instances mapping into a structure."""
        per_name: dict[str, set[tuple[int, ...]]] = {name: set() for name in signature.names()}
        for name, tups in (tuples or {}).items():
            if not signature.has(name):
                raise ValueError(f"relation {name} not in signature")
            for tup in tups:
                tup = tuple(int(p) for p in tup)
                if tup in per_name[name]:
                    raise ValueError(f"duplicate instance {name}{tup}")
                per_name[name].add(tup)
        rels = tuple(tuple(sorted(per_name[name])) for name in signature.names())
        return cls(signature, size, rels)

    @classmethod
    def empty(cls, signature: Signature) -> "FinStruct":
        return cls.build(signature, 0)

    def points(self) -> range:
        return range(self.size)

    def tuples_of(self, name: str) -> tuple[tuple[int, ...], ...]:
        return self.rels[self._rel_index[name]]

    @cached_property
    def _rel_index(self) -> dict[str, int]:
        return {name: i for i, (name, _) in enumerate(self.signature.relations)}

    def iter_tuples(self) -> Iterator[tuple[str, tuple[int, ...]]]:
        for (name, _), tuples in zip(self.signature.relations, self.rels):
            for tup in tuples:
                yield name, tup

    @cached_property
    def total_tuples(self) -> int:
        return sum(len(tuples) for tuples in self.rels)

    @cached_property
    def tuple_masks(self) -> tuple[int, ...]:
        """Point bitmask of every instance, with multiplicity, sorted.

        The predimension of a subset depends only on this multiset: distinct
        instances on the same point set contribute one mask each.
        """
        masks = []
        for tuples in self.rels:
            for tup in tuples:
                m = 0
                for p in tup:
                    m |= 1 << p
                masks.append(m)
        return tuple(sorted(masks))


# ---------------------------------------------------------------------------
# file format


def parse_structure(text: str) -> FinStruct:
    """Parse the line-oriented structure format.

    Grammar: comment lines start with '#', blanks are ignored; 'points <N>'
    appears exactly once before anything else; 'rel <Name> <arity>' declares a
    relation before its instances; '<Name> <p1> ... <pk>' adds one instance.
    """
    size: int | None = None
    rel_order: list[tuple[str, int]] = []
    arities: dict[str, int] = {}
    seen: dict[str, set[tuple[int, ...]]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "points":
            if size is not None:
                raise StructParseError("duplicate points declaration", lineno)
            if rel_order:
                raise StructParseError("points must precede rel declarations", lineno)
            if len(tokens) != 2 or not _is_int(tokens[1]):
                raise StructParseError("expected: points <N>", lineno)
            size = int(tokens[1])
            if size < 0:
                raise StructParseError("point count must be >= 0", lineno)
        elif tokens[0] == "rel":
            if size is None:
                raise StructParseError("points declaration must come first", lineno)
            if len(tokens) != 3 or not _is_int(tokens[2]):
                raise StructParseError("expected: rel <Name> <arity>", lineno)
            name, arity = tokens[1], int(tokens[2])
            if name in arities:
                raise StructParseError(f"relation {name} declared twice", lineno)
            if arity < 1:
                raise StructParseError(f"relation {name} must have arity >= 1", lineno)
            rel_order.append((name, arity))
            arities[name] = arity
            seen[name] = set()
        else:
            name = tokens[0]
            if size is None:
                raise StructParseError("points declaration must come first", lineno)
            if name not in arities:
                raise StructParseError(f"undeclared relation {name}", lineno)
            entries = tokens[1:]
            if len(entries) != arities[name]:
                raise StructParseError(
                    f"{name} expects {arities[name]} entries, got {len(entries)}", lineno
                )
            if not all(_is_int(tok) for tok in entries):
                raise StructParseError(f"non-integer entry in {name} instance", lineno)
            tup = tuple(int(tok) for tok in entries)
            for p in tup:
                if not 0 <= p < size:
                    raise StructParseError(f"point {p} out of range 0..{size - 1}", lineno)
            if len(set(tup)) != len(tup):
                raise StructParseError(f"repeated entry in {name}{tup}", lineno)
            if tup in seen[name]:
                raise StructParseError(f"duplicate instance {name}{tup}", lineno)
            seen[name].add(tup)

    if size is None:
        raise StructParseError("missing points declaration", 1)
    signature = Signature(tuple(rel_order))
    return FinStruct.build(signature, size, seen)


def serialize(s: FinStruct) -> str:
    """Canonical text form: points, rel lines in declaration order, then all
    instances sorted by (relation name, entries).  Round-trips bit-exactly."""
    lines = [f"points {s.size}"]
    for name, arity in s.signature.relations:
        lines.append(f"rel {name} {arity}")
    for name, tup in sorted(s.iter_tuples()):
        lines.append(" ".join([name, *map(str, tup)]))
    return "\n".join(lines) + "\n"


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# substructures and embeddings


def check_points(s: FinStruct, xs: Iterable[int]) -> frozenset[int]:
    xs = frozenset(int(p) for p in xs)
    for p in xs:
        if not 0 <= p < s.size:
            raise ValueError(f"point {p} out of range 0..{s.size - 1}")
    return xs


def induced_substructure(s: FinStruct, xs: Iterable[int]) -> tuple[FinStruct, tuple[int, ...]]:
    """Substructure on xs, relabeled 0..|xs|-1 in increasing point order.

    Returns (substructure, old_points) with old_points[new_id] = old_id.
    """
    xs = check_points(s, xs)
    old_points = tuple(sorted(xs))
    new_id = {old: new for new, old in enumerate(old_points)}
    tuples: dict[str, list[tuple[int, ...]]] = {}
    for name, tup in s.iter_tuples():
        if all(p in xs for p in tup):
            tuples.setdefault(name, []).append(tuple(new_id[p] for p in tup))
    return FinStruct.build(s.signature, len(old_points), tuples), old_points


@dataclass(frozen=True)
class Embedding:
    """An injective map carrying source instances exactly onto the target
    instances inside its image (strong / induced embedding)."""

    source: FinStruct
    target: FinStruct
    mapping: tuple[int, ...]

    def __post_init__(self):
        src, tgt, m = self.source, self.target, self.mapping
        if src.signature != tgt.signature:
            raise PreconditionError("embedding endpoints have different signatures")
        if len(m) != src.size:
            raise PreconditionError("mapping length differs from source size")
        if len(set(m)) != len(m):
            raise PreconditionError("mapping is not injective")
        for q in m:
            if not 0 <= q < tgt.size:
                raise PreconditionError(f"mapping hits point {q} outside target")
        image = set(m)
        for name in src.signature.names():
            mapped = {tuple(m[p] for p in tup) for tup in src.tuples_of(name)}
            inside = {tup for tup in tgt.tuples_of(name) if all(p in image for p in tup)}
            if mapped - inside:
                raise PreconditionError(f"{name} instance not preserved by mapping")
            if inside - mapped:
                raise PreconditionError(f"extra {name} instance inside the image")

    @cached_property
    def image(self) -> frozenset[int]:
        return frozenset(self.mapping)


@dataclass(frozen=True)
class AmalgamResult:
    structure: FinStruct
    into_left: tuple[int, ...]
    into_right: tuple[int, ...]


def free_amalgam(
    left: FinStruct,
    right: FinStruct,
    common: FinStruct,
    into_left: Sequence[int],
    into_right: Sequence[int],
) -> AmalgamResult:
    """Glue `left` and `right` along the common part, adding no instances.

    The identification maps must embed `common` onto induced substructures of
    both sides.  Left keeps its point ids; fresh right points follow.
    """
    emb_left = Embedding(common, left, tuple(into_left))
    emb_right = Embedding(common, right, tuple(into_right))

    to_new: dict[int, int] = {}
    for a_point, l_point in enumerate(emb_left.mapping):
        to_new[emb_right.mapping[a_point]] = l_point
    next_id = left.size
    for q in right.points():
        if q not in to_new:
            to_new[q] = next_id
            next_id += 1

    tuples: dict[str, set[tuple[int, ...]]] = {name: set() for name in left.signature.names()}
    for name, tup in left.iter_tuples():
        tuples[name].add(tup)
    for name, tup in right.iter_tuples():
        tuples[name].add(tuple(to_new[p] for p in tup))

    glued = FinStruct.build(left.signature, next_id, tuples)
    right_map = tuple(to_new[q] for q in right.points())
    return AmalgamResult(glued, tuple(left.points()), right_map)


# ---------------------------------------------------------------------------
# isomorphism and canonical forms


def _incidence(s: FinStruct) -> list[list[tuple[int, int, tuple[int, ...]]]]:
    """Per point: (relation index, position, instance) for every occurrence."""
    inc: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in range(s.size)]
    for ri, tuples in enumerate(s.rels):
        for tup in tuples:
            for pos, p in enumerate(tup):
                inc[p].append((ri, pos, tup))
    return inc


def _refine(incidence, colors: tuple[int, ...]) -> tuple[int, ...]:
    """Iterated color refinement; stable under every automorphism, and the
    rank normalization makes the result independent of input labeling."""
    while True:
        sigs = []
        for p, occ in enumerate(incidence):
            local = sorted(
                (ri, pos, tuple(colors[q] for q in tup)) for ri, pos, tup in occ
            )
            sigs.append((colors[p], tuple(local)))
        ranking = {sig: rank for rank, sig in enumerate(sorted(set(sigs)))}
        new_colors = tuple(ranking[sig] for sig in sigs)
        if new_colors == colors:
            return colors
        colors = new_colors


def _transposition_fixes(s: FinStruct, p: int, q: int) -> bool:
    for tuples in s.rels:
        have = set(tuples)
        for tup in tuples:
            if p in tup or q in tup:
                swapped = tuple(q if x == p else p if x == q else x for x in tup)
                if swapped not in have:
                    return False
    return True


@dataclass(frozen=True)
class CanonicalResult:
    structure: FinStruct
    relabeling: tuple[int, ...]  # relabeling[old_id] = new_id


def canonical_form(s: FinStruct, pinned: Sequence[int] = ()) -> CanonicalResult:
    """Label-invariant canonical representative.

    Isomorphic structures yield equal canonical structures; with `pinned`,
    equality holds exactly for isomorphisms matching the pinned points up in
    order.  Color refinement handles most inputs; non-discrete colorings fall
    back to individualization with transposition pruning.
    """
    pinned = tuple(pinned)
    check_points(s, pinned)
    if len(set(pinned)) != len(pinned):
        raise ValueError("pinned points must be distinct")
    if s.size == 0:
        return CanonicalResult(s, ())

    incidence = _incidence(s)
    pin_rank = {p: i for i, p in enumerate(pinned)}
    start = tuple(pin_rank.get(p, len(pinned)) for p in s.points())
    best: list[tuple] = [None, None]  # certificate key, permutation

    def certificate(colors: tuple[int, ...]):
        order = sorted(s.points(), key=lambda p: colors[p])
        relabel = [0] * s.size
        for new, old in enumerate(order):
            relabel[old] = new
        key = tuple(
            tuple(sorted(tuple(relabel[p] for p in tup) for tup in tuples))
            for tuples in s.rels
        )
        if best[0] is None or key < best[0]:
            best[0], best[1] = key, tuple(relabel)

    def individualize(colors: tuple[int, ...], p: int) -> tuple[int, ...]:
        return tuple(
            2 * c + (0 if q == p else 1) for q, c in enumerate(colors)
        )

    def search(colors: tuple[int, ...]) -> None:
        colors = _refine(incidence, colors)
        classes: dict[int, list[int]] = {}
        for p in s.points():
            classes.setdefault(colors[p], []).append(p)
        target = None
        for color in sorted(classes):
            if len(classes[color]) > 1:
                target = classes[color]
                break
        if target is None:
            certificate(colors)
            return
        reps: list[int] = []
        for p in target:
            if any(_transposition_fixes(s, p, r) for r in reps):
                continue
            reps.append(p)
        for p in reps:
            search(individualize(colors, p))

    search(start)
    relabel = best[1]
    tuples: dict[str, list[tuple[int, ...]]] = {}
    for name, tup in s.iter_tuples():
        tuples.setdefault(name, []).append(tuple(relabel[p] for p in tup))
    canon = FinStruct.build(s.signature, s.size, tuples)
    return CanonicalResult(canon, relabel)


def canonical_key(s: FinStruct, pinned: Sequence[int] = ()):
    """Hashable isomorphism-class key (pinned points must correspond)."""
    return canonical_form(s, pinned).structure


def _point_profile(s: FinStruct) -> list[tuple]:
    profile: list[dict] = [dict() for _ in range(s.size)]
    for ri, tuples in enumerate(s.rels):
        for tup in tuples:
            for pos, p in enumerate(tup):
                key = (ri, pos)
                profile[p][key] = profile[p].get(key, 0) + 1
    return [tuple(sorted(d.items())) for d in profile]


def find_isomorphism(
    a: FinStruct, b: FinStruct, pins: Mapping[int, int] | None = None
) -> tuple[int, ...] | None:
    """Backtracking isomorphism search; returns a point map or None.

    `pins` forces specific point correspondences.  Used as the ground-truth
    comparison for canonical forms and for type comparison over closures.
    """
    if a.signature != b.signature or a.size != b.size:
        return None
    if any(len(ta) != len(tb) for ta, tb in zip(a.rels, b.rels)):
        return None
    prof_a, prof_b = _point_profile(a), _point_profile(b)
    pins = dict(pins or {})
    for p, q in pins.items():
        if prof_a[p] != prof_b[q]:
            return None

    b_sets = [set(tuples) for tuples in b.rels]
    inc_a = _incidence(a)
    order = sorted(a.points(), key=lambda p: (p not in pins, -len(inc_a[p]), p))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(p: int, q: int) -> bool:
        for ri, _pos, tup in inc_a[p]:
            if all(x in mapping or x == p for x in tup):
                img = tuple(q if x == p else mapping[x] for x in tup)
                if img not in b_sets[ri]:
                    return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        p = order[k]
        candidates = [pins[p]] if p in pins else [
            q for q in b.points() if q not in used and prof_a[p] == prof_b[q]
        ]
        for q in candidates:
            if q in used or not consistent(p, q):
                continue
            mapping[p] = q
            used.add(q)
            if extend(k + 1):
                return True
            del mapping[p]
            used.remove(q)
        return False

    if not extend(0):
        return None
    return tuple(mapping[p] for p in a.points())


def find_embeddings(a: FinStruct, m: FinStruct) -> list[tuple[int, ...]]:
    """Every induced embedding of a into m, in lexicographic mapping order."""
    if a.signature != m.signature:
        raise PreconditionError("embedding endpoints have different signatures")
    inc_a = _incidence(a)
    m_sets = [set(tuples) for tuples in m.rels]
    results: list[tuple[int, ...]] = []
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def forward_ok(p: int, q: int) -> bool:
        for ri, _pos, tup in inc_a[p]:
            if all(x in mapping or x == p for x in tup):
                img = tuple(q if x == p else mapping[x] for x in tup)
                if img not in m_sets[ri]:
                    return False
        return True

    def induced_ok() -> bool:
        reverse = {q: p for p, q in mapping.items()}
        image = set(mapping.values())
        for ri, tuples in enumerate(m.rels):
            a_set = set(a.rels[ri])
            for tup in tuples:
                if all(p in image for p in tup):
                    if tuple(reverse[p] for p in tup) not in a_set:
                        return False
        return True

    def extend(p: int) -> None:
        if p == a.size:
            if induced_ok():
                results.append(tuple(mapping[x] for x in a.points()))
            return
        for q in m.points():
            if q in used or not forward_ok(p, q):
                continue
            mapping[p] = q
            used.add(q)
            extend(p + 1)
            del mapping[p]
            used.remove(q)

    extend(0)
    return results
