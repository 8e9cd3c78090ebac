"""Stable stems π^s(0..11) with a partial composition-product table.

The groups, generator names, 3-primary annotations and known products are
read from a JSON data file (the bundled one is ``data/stems.json``).
Element coordinates are taken with respect to the cyclic decomposition
declared in that file, torsion factors first and then free generators.

Products are extended bilinearly from the stored entries and by graded
skew-commutativity ``x∘y = (-1)^{|x||y|} y∘x``.  A product is also known to
vanish when no nonzero element of the target can be killed by the orders of
both factors (e.g. anything landing in a trivial group).  Anything else that
is not in the table raises :class:`UnknownProduct`; nothing is guessed.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import gcd
from pathlib import Path
from typing import BinaryIO, Iterable, TextIO

import jsonschema

from .fga import (
    FinAbGroup,
    GroupHom,
    Localization,
    Subquotient,
    element_order,
    induced_matrix,
    relation_vectors,
    unit_vectors,
)

MAX_DEGREE = 11

# Canonical forms of π^s(0), ..., π^s(11) as (rank, invariant factors).
KNOWN_STEMS: dict[int, FinAbGroup] = {
    n: FinAbGroup.from_orders(orders)
    for n, orders in enumerate(
        [[0], [2], [2], [24], [], [], [2], [240], [2, 2], [2, 2, 2], [6], [56, 9]]
    )
}

# Named generators of the nontrivial 3-primary parts and their orders.
KNOWN_THREE_PRIMARY: dict[int, tuple[str, int]] = {
    3: ("alpha1", 3),
    7: ("alpha2", 3),
    10: ("beta1", 3),
    11: ("alpha3", 9),
}

STEMS_ENV = "CUSPCOB_STEMS"


class StemTableError(ValueError):
    """The stems data file is malformed or contradicts the known stems."""


class UnknownProduct(LookupError):
    """A composition product needed for a computation is not in the table."""

    def __init__(self, lhs: str, rhs: str):
        super().__init__(f"unknown product {lhs} ∘ {rhs}")
        self.lhs, self.rhs = lhs, rhs


class OutOfRange(ValueError):
    """A stem degree above the table's maximum was requested."""


_ELEMENT = {
    "type": "object",
    "required": ["n", "coords"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "coords": {"type": "array", "items": {"type": "integer"}},
    },
}

SCHEMA = {
    "type": "object",
    "required": ["max_degree", "groups", "three_primary", "products"],
    "properties": {
        "schema": {"type": "string", "enum": ["1"]},
        "max_degree": {"type": "integer", "minimum": 0, "maximum": MAX_DEGREE},
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "rank", "torsion", "generators"],
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "rank": {"type": "integer", "minimum": 0},
                    "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                    "generators": {"type": "array", "items": {"type": "string", "minLength": 1}},
                },
            },
        },
        "three_primary": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "name", "element"],
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "name": {"type": "string", "minLength": 1},
                    "element": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "products": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lhs", "rhs", "result"],
                "properties": {
                    "lhs": {"type": "string"},
                    "rhs": {"type": "string"},
                    "result": _ELEMENT,
                },
            },
        },
    },
}


@dataclass(frozen=True)
class StemElement:
    """Element of π^s(degree) in coordinates of the declared cyclic decomposition."""

    degree: int
    coords: tuple[int, ...]
    orders: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if len(self.coords) != len(self.orders):
            raise ValueError("coordinate count does not match the cyclic decomposition")
        reduced = tuple(x % o if o else x for x, o in zip(self.coords, self.orders))
        object.__setattr__(self, "coords", reduced)

    def _new(self, coords: Iterable[int]) -> StemElement:
        return StemElement(self.degree, tuple(coords), self.orders)

    def __add__(self, other: StemElement) -> StemElement:
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degrees")
        return self._new(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> StemElement:
        return self._new(-a for a in self.coords)

    def __sub__(self, other: StemElement) -> StemElement:
        return self + (-other)

    def __mul__(self, k: int) -> StemElement:
        return self._new(k * a for a in self.coords)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        """Additive order; 0 means infinite."""
        return element_order(self.coords, self.orders)


@dataclass(frozen=True)
class StemGroup:
    n: int
    rank: int
    torsion: tuple[int, ...]
    generators: tuple[str, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.rank

    @property
    def group(self) -> FinAbGroup:
        return FinAbGroup.from_orders(self.orders)

    def subquotient(self, loc: Localization | None = None) -> Subquotient:
        """This group (optionally localized) as a subquotient of its coordinate lattice."""
        k = len(self.orders)
        den = relation_vectors(self.orders)
        if loc is not None:
            den += loc.discarded_torsion(self.orders)
        return Subquotient(k, unit_vectors(k), den)

    def label(self) -> str:
        """Group in the layout of the classical stems table, e.g. ``ℤ₂²`` or ``ℤ₅₆×ℤ₉``."""
        parts: list[str] = []
        runs: list[list[int]] = []
        for o in self.orders:
            if runs and runs[-1][0] == o:
                runs[-1][1] += 1
            else:
                runs.append([o, 1])
        for o, count in runs:
            base = "ℤ" if o == 0 else f"ℤ{_sub(o)}"
            parts.append(base + (_sup(count) if count > 1 else ""))
        return "×".join(parts) if parts else "0"


_SUBS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUPS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sub(n: int) -> str:
    return str(n).translate(_SUBS)


def _sup(n: int) -> str:
    return str(n).translate(_SUPS)


GREEK = {
    "iota": "ι",
    "eta": "η",
    "nu": "ν",
    "sigma": "σ",
    "epsilon": "ε",
    "mu": "μ",
    "alpha1": "α₁",
    "alpha2": "α₂",
    "alpha3": "α₃",
    "beta1": "β₁",
}


class StemTable:
    """Immutable view of the stems data; build with :func:`load_stem_table`."""

    def __init__(self, max_degree: int, groups: dict[int, StemGroup],
                 three_primary: list[tuple[int, str, tuple[int, ...]]],
                 products: list[tuple[str, str, StemElement]]):
        self.max_degree = max_degree
        self._groups = groups
        self.three_primary = tuple(three_primary)
        self._named: dict[str, StemElement] = {}
        for g in groups.values():
            for j, name in enumerate(g.generators):
                self._named[name] = self.element(g.n, [int(i == j) for i in range(len(g.orders))])
        for n, name, coords in three_primary:
            self._named[name] = self.element(n, coords)
        self.products = tuple(products)
        self._entries = [(self._named[a], self._named[b], z) for a, b, z in products]

    # -- groups and elements ------------------------------------------------

    def stem(self, n: int) -> StemGroup:
        if n > self.max_degree:
            raise OutOfRange(f"π^s({n}) is beyond the table (max degree {self.max_degree})")
        if n < 0:
            return StemGroup(n, 0, (), ())
        return self._groups[n]

    def group(self, n: int) -> FinAbGroup:
        return self.stem(n).group

    def element(self, n: int, coords: Iterable[int]) -> StemElement:
        return StemElement(n, tuple(coords), self.stem(n).orders)

    def zero(self, n: int) -> StemElement:
        return self.element(n, [0] * len(self.stem(n).orders))

    def named(self, name: str) -> StemElement:
        try:
            return self._named[name]
        except KeyError:
            raise KeyError(f"no stem element named {name!r}") from None

    def names(self) -> list[str]:
        return list(self._named)

    def generator(self, n: int, j: int) -> StemElement:
        return self.named(self.stem(n).generators[j])

    def _name_of(self, x: StemElement) -> str:
        for name, y in self._named.items():
            if y == x:
                return name
        return f"{list(x.coords)}∈π^s({x.degree})"

    # -- products -----------------------------------------------------------

    def _forced_zero(self, a: StemElement, b: StemElement) -> bool:
        n = a.degree + b.degree
        if a.is_zero or b.is_zero:
            return True
        k = gcd(a.order, b.order)
        if k == 0:
            return not self.stem(n).orders
        return all(gcd(k, o) == 1 for o in self.stem(n).orders if o)

    def _stored(self, a: StemElement, h: StemElement) -> StemElement | None:
        """``a ∘ h`` when ``a`` is a multiple of a stored left factor paired with ``h``."""
        for x, y, z in self._entries:
            if y == h:
                c = _multiple(a, x)
                if c is not None:
                    return c * z
            if x == h:
                c = _multiple(a, y)
                if c is not None:
                    return (c if (a.degree * h.degree) % 2 == 0 else -c) * z
        return None

    def _on_generator(self, a: StemElement, h: StemElement) -> StemElement:
        n = a.degree + h.degree
        if self._forced_zero(a, h):
            return self.zero(n)
        found = self._stored(a, h)
        if found is not None:
            return found
        total = self.zero(n)
        for i, c in enumerate(a.coords):
            if not c:
                continue
            g = self.generator(a.degree, i)
            if self._forced_zero(g, h):
                continue
            found = self._stored(g, h)
            if found is None:
                raise UnknownProduct(self._name_of(g), self._name_of(h))
            total = total + c * found
        return total

    def _expand(self, a: StemElement, b: StemElement) -> StemElement:
        total = self.zero(a.degree + b.degree)
        for j, c in enumerate(b.coords):
            if c:
                total = total + c * self._on_generator(a, self.generator(b.degree, j))
        return total

    def compose(self, a: StemElement, b: StemElement) -> StemElement:
        """Composition product ``a ∘ b`` in π^s(|a| + |b|)."""
        n = a.degree + b.degree
        if n > self.max_degree:
            raise OutOfRange(f"product lands in π^s({n}), beyond degree {self.max_degree}")
        if self._forced_zero(a, b):
            return self.zero(n)
        try:
            return self._expand(a, b)
        except UnknownProduct as first:
            try:
                swapped = self._expand(b, a)
            except UnknownProduct:
                raise first from None
            return swapped if (a.degree * b.degree) % 2 == 0 else -swapped

    def left_mult_matrix(self, g: StemElement, n: int) -> list[list[int]]:
        """Matrix of ``x ↦ g ∘ x`` from π^s(n) to π^s(n + |g|) in declared coordinates."""
        src, tgt = self.stem(n), self.stem(n + g.degree)
        cols = [self.compose(g, self.generator(n, j)).coords for j in range(len(src.orders))] if tgt.orders else []
        return [[col[i] for col in cols] for i in range(len(tgt.orders))]

    def left_mult_hom(self, g: StemElement, n: int) -> GroupHom:
        """``x ↦ g ∘ x`` as a homomorphism of canonical groups π^s(n) → π^s(n + |g|)."""
        src, tgt = self.stem(n), self.stem(n + g.degree)
        s, t = src.subquotient(), tgt.subquotient()
        m = induced_matrix(self.left_mult_matrix(g, n), s, t)
        return GroupHom(s.group, t.group, tuple(map(tuple, m)))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "max_degree": self.max_degree,
            "groups": [
                {"n": g.n, "rank": g.rank, "torsion": list(g.torsion), "generators": list(g.generators)}
                for g in (self._groups[n] for n in range(self.max_degree + 1))
            ],
            "three_primary": [
                {"n": n, "name": name, "element": list(c)} for n, name, c in self.three_primary
            ],
            "products": [
                {"lhs": a, "rhs": b, "result": {"n": z.degree, "coords": list(z.coords)}}
                for a, b, z in self.products
            ],
        }

    def three_primary_label(self, n: int) -> str:
        """Entry of the 3-primary row, e.g. ``ℤ₃⟨α₁⟩``; ``ℤ`` for free parts, blank if trivial."""
        g = self.group(n)
        part = Localization("primary", 3).apply(g)
        if part.is_trivial:
            return ""
        for m, name, _ in self.three_primary:
            if m == n:
                return f"{part}⟨{GREEK.get(name, name)}⟩"
        return str(part)


def _multiple(a: StemElement, x: StemElement) -> int | None:
    """Integer ``c`` with ``c·x == a``, if any."""
    if a.degree != x.degree:
        return None
    k = x.order
    if k == 0:
        free = [(ai, xi) for ai, xi, o in zip(a.coords, x.coords, x.orders) if o == 0 and xi]
        ai, xi = free[0]
        if ai % xi:
            return None
        c = ai // xi
        return c if c * x == a else None
    for c in range(k):
        if c * x == a:
            return c
    return None


def _read(source) -> dict:
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
    elif isinstance(source, str):
        text = source
    elif isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StemTableError(f"stems file is not valid JSON: {exc}") from None


def load_stem_table(source: bytes | str | Path | BinaryIO | TextIO) -> StemTable:
    """Parse and validate a stems document.

    Raises :class:`StemTableError` on schema violations, groups that differ
    from the classical values, non-graded products, or products that break
    skew-commutativity or bilinearity.
    """
    doc = _read(source)
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise StemTableError(f"schema violation: {exc.message}") from None

    max_degree = doc["max_degree"]
    groups: dict[int, StemGroup] = {}
    for entry in doc["groups"]:
        n = entry["n"]
        if n > max_degree:
            raise StemTableError(f"group for n={n} exceeds max_degree {max_degree}")
        if n in groups:
            raise StemTableError(f"duplicate group entry for n={n}")
        g = StemGroup(n, entry["rank"], tuple(entry["torsion"]), tuple(entry["generators"]))
        if len(g.generators) != len(g.orders):
            raise StemTableError(f"π^s({n}): {len(g.orders)} cyclic factors but {len(g.generators)} generator names")
        if g.group != KNOWN_STEMS[n]:
            raise StemTableError(f"π^s({n}) declared as {g.group}, expected {KNOWN_STEMS[n]}")
        groups[n] = g
    missing = sorted(set(range(max_degree + 1)) - set(groups))
    if missing:
        raise StemTableError(f"missing groups for degrees {missing}")

    names = [name for g in groups.values() for name in g.generators]
    three = []
    for entry in doc["three_primary"]:
        n, name, coords = entry["n"], entry["name"], tuple(entry["element"])
        if n not in groups:
            raise StemTableError(f"3-primary annotation {name!r} refers to missing degree {n}")
        if len(coords) != len(groups[n].orders):
            raise StemTableError(f"3-primary annotation {name!r} has wrong coordinate count")
        if name in groups[n].generators:
            # an annotation may name a generator itself, but only that generator
            j = groups[n].generators.index(name)
            if coords != tuple(int(i == j) for i in range(len(coords))):
                raise StemTableError(f"annotation {name!r} conflicts with the generator of that name")
        else:
            names.append(name)
        three.append((n, name, coords))
    dupes = {x for x in names if names.count(x) > 1}
    if dupes:
        raise StemTableError(f"duplicate element names {sorted(dupes)}")

    loc3 = Localization("primary", 3)
    for n, name, coords in three:
        g = groups[n]
        sq = g.subquotient(loc3)
        part = sq.group
        if part.rank or len(part.torsion) != 1:
            raise StemTableError(f"3-primary part of π^s({n}) is not finite cyclic")
        img = sq.project(list(coords))
        if element_order(img, part.orders) != part.torsion[0] or element_order(coords, g.orders) != part.torsion[0]:
            raise StemTableError(f"{name!r} does not generate the 3-primary part of π^s({n})")

    table = StemTable(max_degree, groups, three, [])
    products = []
    seen: dict[tuple[str, str], StemElement] = {}
    for entry in doc["products"]:
        a, b, res = entry["lhs"], entry["rhs"], entry["result"]
        try:
            x, y = table.named(a), table.named(b)
        except KeyError as exc:
            raise StemTableError(str(exc)) from None
        n = x.degree + y.degree
        if res["n"] != n:
            raise StemTableError(f"product {a} ∘ {b} is not graded: {res['n']} != {x.degree} + {y.degree}")
        if n > max_degree:
            raise StemTableError(f"product {a} ∘ {b} lands beyond max_degree")
        if len(res["coords"]) != len(groups[n].orders):
            raise StemTableError(f"product {a} ∘ {b}: wrong coordinate count")
        z = table.element(n, res["coords"])
        for k in (x.order, y.order):
            if k and not (k * z).is_zero:
                raise StemTableError(f"product {a} ∘ {b} is not killed by the order {k} of a factor")
        sign = -1 if (x.degree * y.degree) % 2 else 1
        if a == b and not (z - sign * z).is_zero:
            raise StemTableError(f"{a} ∘ {a} violates skew-commutativity")
        if (b, a) in seen and seen[(b, a)] != sign * z:
            raise StemTableError(f"{a} ∘ {b} and {b} ∘ {a} violate skew-commutativity")
        seen[(a, b)] = z
        products.append((a, b, z))
    return StemTable(max_degree, groups, three, products)


def bundled_stems_path() -> Path:
    return Path(str(resources.files("cuspcob") / "data" / "stems.json"))


@lru_cache(maxsize=None)
def _load_path(path: str) -> StemTable:
    with open(path, "rb") as fh:
        return load_stem_table(fh)


def default_table() -> StemTable:
    """Bundled table, or the file named by ``$CUSPCOB_STEMS`` when set."""
    return _load_path(os.environ.get(STEMS_ENV) or str(bundled_stems_path()))


def load_path(path: str | os.PathLike) -> StemTable:
    return _load_path(os.fspath(path))


def dumps(table: StemTable) -> str:
    buf = io.StringIO()
    json.dump(table.to_json(), buf, indent=1, ensure_ascii=False)
    return buf.getvalue()
