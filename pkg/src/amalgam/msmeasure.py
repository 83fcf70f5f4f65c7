"""Dimension-measure catalogs and their axiom checks.

A catalog declares finite families of abstract definable sets, each carrying
a value h(X) = (dimension, positive rational measure), together with maps
whose fibre classes are declared piecewise over a partition of the target.
Checks are exact: the finite-set axiom ties h to cardinality, the family
axiom requires constant h on each declared piece, and the fibration axiom
recomputes h of a map's source from the fibre data and compares.  The
normalized measure of a subset is the measure quotient in equal dimension
and zero otherwise, and declared products must split dimension additively
and measure multiplicatively, compatibly with push-forward.

"Definable" is modeled as "declared": there is no formula engine, so the
checks cover exactly the finite consequences a catalog writes down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


class CatalogParseError(ValueError):
    """A malformed catalog line, with its 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class HValue:
    dim: int
    mu: Fraction

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if self.mu <= 0:
            raise ValueError("measure must be positive")

    def __str__(self) -> str:
        return f"({self.dim}, {self.mu})"


@dataclass(frozen=True)
class CatalogSet:
    name: str
    h: HValue
    explicit: int | None = None  # declared cardinality, when the set is finite


@dataclass(frozen=True)
class FibreClass:
    piece: str  # target piece over which the fibres are constant
    value: HValue  # h of each fibre
    count: int  # number of target points in the piece


@dataclass(frozen=True)
class CatalogMap:
    name: str
    source: str
    target: str
    fibres: tuple[FibreClass, ...] = ()


@dataclass(frozen=True)
class Family:
    name: str
    pieces: tuple[tuple[str, ...], ...]  # one piece per declaration line


@dataclass(frozen=True)
class Product:
    name: str
    factors: tuple[str, ...]


@dataclass
class DimMeasureCatalog:
    sets: dict[str, CatalogSet] = field(default_factory=dict)
    subsets: set[tuple[str, str]] = field(default_factory=set)  # (child, parent)
    maps: dict[str, CatalogMap] = field(default_factory=dict)
    families: dict[str, Family] = field(default_factory=dict)
    products: dict[str, Product] = field(default_factory=dict)

    def h(self, name: str) -> HValue:
        if name not in self.sets:
            raise ValueError(f"unknown catalog set {name!r}")
        return self.sets[name].h

    def is_subset(self, child: str, parent: str) -> bool:
        return child == parent or (child, parent) in self.subsets


# ---------------------------------------------------------------------------
# parsing


def _parse_fraction(token: str, line: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise CatalogParseError(f"bad rational {token!r}: {exc}", line) from None
    return value


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CatalogParseError(f"bad {what} {token!r}", line) from None


def parse_catalog(text: str) -> DimMeasureCatalog:
    """Parse the line-oriented catalog format.

    Lines: `set <name> <dim> <num>/<den> [explicit <k>]`,
    `subset <name> of <name>`, `map <name> from <X> to <Y>`,
    `fibre <map> over <piece> value <dim> <num>/<den> count <n>`,
    `family <name> = <set,set,...>` (repeats accumulate pieces), and
    `product <name> = <A> x <B>`.  `#` starts a comment line.
    """
    catalog = DimMeasureCatalog()
    pending_fibres: list[tuple[int, str, FibreClass]] = []
    pending_refs: list[tuple[int, str]] = []
    family_pieces: dict[str, list[tuple[str, ...]]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        kind = tokens[0]
        if kind == "set":
            if len(tokens) not in (4, 6):
                raise CatalogParseError("expected: set <name> <dim> <mu> [explicit <k>]", lineno)
            name = tokens[1]
            if name in catalog.sets:
                raise CatalogParseError(f"duplicate set {name!r}", lineno)
            dim = _parse_int(tokens[2], lineno, "dimension")
            mu = _parse_fraction(tokens[3], lineno)
            explicit = None
            if len(tokens) == 6:
                if tokens[4] != "explicit":
                    raise CatalogParseError(f"expected 'explicit', got {tokens[4]!r}", lineno)
                explicit = _parse_int(tokens[5], lineno, "cardinality")
            try:
                h = HValue(dim, mu)
            except ValueError as exc:
                raise CatalogParseError(str(exc), lineno) from None
            catalog.sets[name] = CatalogSet(name, h, explicit)
        elif kind == "subset":
            if len(tokens) != 4 or tokens[2] != "of":
                raise CatalogParseError("expected: subset <name> of <name>", lineno)
            catalog.subsets.add((tokens[1], tokens[3]))
            pending_refs.extend([(lineno, tokens[1]), (lineno, tokens[3])])
        elif kind == "map":
            if len(tokens) != 6 or tokens[2] != "from" or tokens[4] != "to":
                raise CatalogParseError("expected: map <name> from <X> to <Y>", lineno)
            name = tokens[1]
            if name in catalog.maps:
                raise CatalogParseError(f"duplicate map {name!r}", lineno)
            catalog.maps[name] = CatalogMap(name, tokens[3], tokens[5])
            pending_refs.extend([(lineno, tokens[3]), (lineno, tokens[5])])
        elif kind == "fibre":
            expected = "expected: fibre <map> over <piece> value <dim> <mu> count <n>"
            if (
                len(tokens) != 9
                or tokens[2] != "over"
                or tokens[4] != "value"
                or tokens[7] != "count"
            ):
                raise CatalogParseError(expected, lineno)
            map_name = tokens[1]
            piece = tokens[3]
            dim = _parse_int(tokens[5], lineno, "dimension")
            mu = _parse_fraction(tokens[6], lineno)
            count = _parse_int(tokens[8], lineno, "count")
            try:
                value = HValue(dim, mu)
            except ValueError as exc:
                raise CatalogParseError(str(exc), lineno) from None
            pending_fibres.append((lineno, map_name, FibreClass(piece, value, count)))
            pending_refs.append((lineno, piece))
        elif kind == "family":
            if len(tokens) < 3 or tokens[2] != "=":
                raise CatalogParseError("expected: family <name> = <set,...>", lineno)
            name = tokens[1]
            members = tuple(
                part.strip() for part in " ".join(tokens[3:]).split(",") if part.strip()
            )
            if not members:
                raise CatalogParseError("empty family piece", lineno)
            family_pieces.setdefault(name, []).append(members)
            pending_refs.extend((lineno, member) for member in members)
        elif kind == "product":
            if len(tokens) < 6 or tokens[2] != "=" or len(tokens) % 2 != 0:
                raise CatalogParseError("expected: product <name> = <A> x <B>", lineno)
            name = tokens[1]
            factors = tuple(tokens[3::2])
            separators = tokens[4::2]
            if len(factors) < 2 or any(sep != "x" for sep in separators):
                raise CatalogParseError("expected: product <name> = <A> x <B>", lineno)
            if name in catalog.products:
                raise CatalogParseError(f"duplicate product {name!r}", lineno)
            catalog.products[name] = Product(name, factors)
            pending_refs.append((lineno, name))
            pending_refs.extend((lineno, f) for f in factors)
        else:
            raise CatalogParseError(f"unknown directive {kind!r}", lineno)

    for lineno, map_name, fibre in pending_fibres:
        if map_name not in catalog.maps:
            raise CatalogParseError(f"fibre for unknown map {map_name!r}", lineno)
        old = catalog.maps[map_name]
        catalog.maps[map_name] = CatalogMap(
            old.name, old.source, old.target, old.fibres + (fibre,)
        )
    for name, pieces in family_pieces.items():
        catalog.families[name] = Family(name, tuple(pieces))
    for lineno, name in pending_refs:
        if name not in catalog.sets:
            raise CatalogParseError(f"reference to undeclared set {name!r}", lineno)
    return catalog


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: {self.detail}"


@dataclass(frozen=True)
class CatalogReport:
    title: str
    items: tuple[CheckItem, ...]

    @property
    def all_pass(self) -> bool:
        return all(item.passed for item in self.items)

    def text_lines(self) -> list[str]:
        lines = [f"[{self.title}]"]
        lines.extend(item.line() for item in self.items)
        return lines

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "pass": self.all_pass,
            "items": [
                {"name": i.name, "pass": i.passed, "detail": i.detail}
                for i in self.items
            ],
        }


def check_axiom_finite(catalog: DimMeasureCatalog) -> CatalogReport:
    """Every set with a declared cardinality must have h = (0, cardinality)."""
    items = []
    for name in sorted(catalog.sets):
        cset = catalog.sets[name]
        if cset.explicit is None:
            continue
        expected = (0, Fraction(cset.explicit))
        actual = (cset.h.dim, cset.h.mu)
        items.append(
            CheckItem(
                f"finite:{name}",
                actual == expected,
                f"h = {cset.h}, {cset.explicit} elements",
            )
        )
    return CatalogReport("axiom_finite", tuple(items))


def check_axiom_family(catalog: DimMeasureCatalog) -> CatalogReport:
    """h must be constant on each declared piece of each family."""
    items = []
    for name in sorted(catalog.families):
        family = catalog.families[name]
        for idx, piece in enumerate(family.pieces):
            values = {catalog.h(member) for member in piece}
            items.append(
                CheckItem(
                    f"family:{name}[{idx}]",
                    len(values) == 1,
                    f"values {{{', '.join(sorted(str(v) for v in values))}}} "
                    f"over {len(piece)} sets",
                )
            )
    return CatalogReport("axiom_family", tuple(items))


def check_axiom_fubini(catalog: DimMeasureCatalog, map_name: str) -> CatalogReport:
    """Recompute h(source) from the declared fibre classes.

    The combined dimension is the largest fibre-plus-piece dimension, and the
    measure adds fibre measure times piece measure over the classes attaining
    it; the result must equal the declared h of the source.
    """
    if map_name not in catalog.maps:
        raise ValueError(f"unknown map {map_name!r}")
    cmap = catalog.maps[map_name]
    if not cmap.fibres:
        raise ValueError(f"map {map_name!r} has no declared fibre classes")
    items = []
    levels = []
    for fibre in cmap.fibres:
        piece_h = catalog.h(fibre.piece)
        levels.append((fibre.value.dim + piece_h.dim, fibre.value.mu * piece_h.mu))
        piece_set = catalog.sets[fibre.piece]
        if piece_set.explicit is not None:
            items.append(
                CheckItem(
                    f"fubini:{map_name}:count:{fibre.piece}",
                    piece_set.explicit == fibre.count,
                    f"declared count {fibre.count}, piece has {piece_set.explicit}",
                )
            )
    c = max(level for level, _ in levels)
    mu = sum((m for level, m in levels if level == c), start=Fraction(0))
    declared = catalog.h(cmap.source)
    items.append(
        CheckItem(
            f"fubini:{map_name}:formula",
            (declared.dim, declared.mu) == (c, mu),
            f"computed ({c}, {mu}), declared {declared}",
        )
    )
    source_set = catalog.sets[cmap.source]
    if source_set.explicit is not None and all(f.value.dim == 0 for f in cmap.fibres):
        total = sum((f.value.mu * f.count for f in cmap.fibres), start=Fraction(0))
        items.append(
            CheckItem(
                f"fubini:{map_name}:cardinality",
                total == source_set.explicit,
                f"fibres cover {total} of {source_set.explicit} source elements",
            )
        )
    return CatalogReport(f"axiom_fubini:{map_name}", tuple(items))


def nu_normalize(catalog: DimMeasureCatalog, s_name: str, d_name: str) -> Fraction:
    """Normalized measure of D inside S: the measure quotient when the
    dimensions agree, zero when D has strictly smaller dimension."""
    h_s = catalog.h(s_name)
    h_d = catalog.h(d_name)
    if not catalog.is_subset(d_name, s_name):
        raise ValueError(f"{d_name!r} is not declared a subset of {s_name!r}")
    if h_d.dim == h_s.dim:
        return h_d.mu / h_s.mu
    return Fraction(0)


def check_product_pushforward(catalog: DimMeasureCatalog) -> CatalogReport:
    """Product identities and push-forward agreement.

    For every declared product: dimension must add and measure must multiply
    across the factors; and for every declared subset D of a factor, the
    cylinder D x (other factors) must get the same normalized measure in the
    product as D gets in its factor.
    """
    items = []
    for name in sorted(catalog.products):
        product = catalog.products[name]
        h_p = catalog.h(name)
        factor_hs = [catalog.h(f) for f in product.factors]
        dim_sum = sum(h.dim for h in factor_hs)
        mu_prod = Fraction(1)
        for h in factor_hs:
            mu_prod *= h.mu
        items.append(
            CheckItem(
                f"product:{name}:dim",
                h_p.dim == dim_sum,
                f"dim {h_p.dim} vs factor sum {dim_sum}",
            )
        )
        items.append(
            CheckItem(
                f"product:{name}:mu",
                h_p.mu == mu_prod,
                f"mu {h_p.mu} vs factor product {mu_prod}",
            )
        )
        for idx, factor in enumerate(product.factors):
            rest_dim = dim_sum - factor_hs[idx].dim
            rest_mu = mu_prod / factor_hs[idx].mu
            for child, parent in sorted(catalog.subsets):
                if parent != factor:
                    continue
                h_d = catalog.h(child)
                cyl_dim = h_d.dim + rest_dim
                cyl_mu = h_d.mu * rest_mu
                via_product = (
                    cyl_mu / h_p.mu if cyl_dim == h_p.dim else Fraction(0)
                )
                via_factor = nu_normalize(catalog, factor, child)
                items.append(
                    CheckItem(
                        f"product:{name}:pushforward:{child}",
                        via_product == via_factor,
                        f"cylinder gives {via_product}, factor gives {via_factor}",
                    )
                )
    return CatalogReport("product_pushforward", tuple(items))


def run_all_checks(catalog: DimMeasureCatalog) -> list[CatalogReport]:
    """Finite, family, per-map fibration, and product reports, in order."""
    reports = [check_axiom_finite(catalog), check_axiom_family(catalog)]
    for map_name in sorted(catalog.maps):
        reports.append(check_axiom_fubini(catalog, map_name))
    reports.append(check_product_pushforward(catalog))
    return reports


# ---------------------------------------------------------------------------
# generated catalogs


def counting_catalog(
    sizes: dict[str, int],
    subsets: Iterable[tuple[str, str]] = (),
    products: Iterable[tuple[str, str, str]] = (),
) -> DimMeasureCatalog:
    """Catalog where every set is finite with h = (0, cardinality).

    Declared products get the product cardinality and a projection map onto
    each factor whose fibre class is the opposite factor's count.  All axiom
    checks pass on such catalogs by construction.
    """
    catalog = DimMeasureCatalog()
    for name, size in sizes.items():
        if size <= 0:
            raise ValueError(f"set {name!r} needs positive cardinality")
        catalog.sets[name] = CatalogSet(name, HValue(0, Fraction(size)), size)
    for child, parent in subsets:
        for name in (child, parent):
            if name not in catalog.sets:
                raise ValueError(f"unknown set {name!r} in subset declaration")
        catalog.subsets.add((child, parent))
    for name, left, right in products:
        for factor in (left, right):
            if factor not in catalog.sets:
                raise ValueError(f"unknown factor {factor!r} in product {name!r}")
        size = sizes[left] * sizes[right]
        catalog.sets[name] = CatalogSet(name, HValue(0, Fraction(size)), size)
        catalog.products[name] = Product(name, (left, right))
        for factor, other in ((left, right), (right, left)):
            map_name = f"pi_{name}_{factor}"
            catalog.maps[map_name] = CatalogMap(
                map_name,
                name,
                factor,
                (FibreClass(factor, HValue(0, Fraction(sizes[other])), sizes[factor]),),
            )
    return catalog
