"""Finitely generated abelian groups over exact integer linear algebra.

Everything is built on one primitive, the Smith normal form, computed with
Python ints (arbitrary precision).  Matrices are plain lists of rows.

Coordinate conventions
----------------------
A :class:`FinAbGroup` has canonical generators ordered torsion first (in
divisibility order) then free.  Element coordinates are column vectors; a
:class:`GroupHom` matrix has ``target.ngens`` rows and ``source.ngens``
columns, column ``j`` being the image of generator ``j``.

A :class:`Subquotient` is ``N / D`` for lattices ``D ⊆ N ⊆ Z^dim`` and carries
the explicit isomorphism onto its canonical group.  Kernels, images,
cokernels, localizations and spectral-sequence cells are all subquotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Callable, Iterable, Sequence

Matrix = list[list[int]]
Vector = list[int]


# ---------------------------------------------------------------------------
# matrices


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """``a @ b``; ``cols`` gives the width of ``b`` when it has no rows."""
    if not a:
        return []
    inner = len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    if any(len(row) != inner for row in a):
        raise ValueError("matrix dimensions do not agree")
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence[int]], rows: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(rows or 0)]
    return [list(col) for col in zip(*a)]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNF:
    """``u @ a @ v == d`` with ``u``, ``v`` unimodular and inverses kept."""

    u: Matrix
    u_inv: Matrix
    d: Matrix
    v: Matrix
    v_inv: Matrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i][i] for i in range(min(len(self.d), len(self.v)))]


def _snf(a: Sequence[Sequence[int]], cols: int | None = None) -> SNF:
    m = len(a)
    n = len(a[0]) if m else (cols or 0)
    d = [list(map(int, row)) for row in a]
    u, u_inv = identity(m), identity(m)
    v, v_inv = identity(n), identity(n)

    def add_row(i: int, j: int, c: int) -> None:
        # row_i += c * row_j
        d[i] = [x + c * y for x, y in zip(d[i], d[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
        for row in u_inv:
            row[j] -= c * row[i]

    def add_col(i: int, j: int, c: int) -> None:
        # col_j += c * col_i
        for row in d:
            row[j] += c * row[i]
        for row in v:
            row[j] += c * row[i]
        v_inv[i] = [x - c * y for x, y in zip(v_inv[i], v_inv[j])]

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def negate_row(i: int) -> None:
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    def best(cells: Iterable[tuple[int, int]]) -> tuple[int, int] | None:
        # smallest |entry|, ties broken by lowest row then lowest column
        found = None
        for i, j in cells:
            x = d[i][j]
            if x and (found is None or (abs(x), i, j) < found[0]):
                found = ((abs(x), i, j), (i, j))
        return None if found is None else found[1]

    t = 0
    while t < min(m, n):
        pivot = best((i, j) for i in range(t, m) for j in range(t, n))
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
            line = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
            if any(d[i][j] for i, j in line if (i, j) != (t, t)):
                pivot = best(line)
                swap_rows(t, pivot[0])
                swap_cols(t, pivot[1])
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return SNF(u, u_inv, d, v, v_inv, t)


def smith_normal_form(a: Sequence[Sequence[int]], cols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(u, d, v)`` with ``u @ a @ v == d``.

    ``u`` and ``v`` are unimodular and ``d`` is diagonal, nonnegative, with
    ``d[0][0] | d[1][1] | ...``.  Pivots are chosen by smallest absolute value
    (ties: lowest row, then lowest column) so the transforms are
    reproducible.  ``cols`` gives the width of a matrix with no rows.
    """
    res = _snf(a, cols)
    return res.u, res.d, res.v


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """Sublattice of ``Z^dim`` spanned by ``gens`` with an explicit basis."""

    def __init__(self, dim: int, gens: Iterable[Sequence[int]]):
        self.dim = dim
        gens = [list(g) for g in gens]
        if any(len(g) != dim for g in gens):
            raise ValueError("generator length does not match lattice dimension")
        gens = [g for g in gens if any(g)]
        if not gens:
            self.basis: list[Vector] = []
            self._snf = None
            return
        res = _snf(transpose(gens), cols=len(gens))
        self._snf = res
        diag = res.diagonal
        self.basis = [
            [diag[i] * res.u_inv[r][i] for r in range(dim)] for i in range(res.rank)
        ]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, vec: Sequence[int]) -> Vector | None:
        """Coordinates of ``vec`` in :attr:`basis`, or None if not in the lattice."""
        if self._snf is None:
            return [] if not any(vec) else None
        w = matvec(self._snf.u, vec)
        diag = self._snf.diagonal
        out = []
        for i, x in enumerate(w):
            if i < self.rank:
                if x % diag[i]:
                    return None
                out.append(x // diag[i])
            elif x:
                return None
        return out

    def __contains__(self, vec: Sequence[int]) -> bool:
        return self.coords(vec) is not None

    def contains_lattice(self, other: Lattice) -> bool:
        return all(b in self for b in other.basis)


def kernel_basis(a: Sequence[Sequence[int]], cols: int) -> list[Vector]:
    """Basis of ``{x in Z^cols : a x = 0}``."""
    if not a:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    res = _snf(a, cols)
    return [[res.v[r][j] for r in range(cols)] for j in range(res.rank, cols)]


def unit_vectors(n: int) -> list[Vector]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FinAbGroup:
    """``Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk`` with ``d1 | d2 | ... | dk`` and each ``di >= 2``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"invariant factors must be >= 2: {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisor chain: {self.torsion}")

    @classmethod
    def cyclic(cls, n: int) -> FinAbGroup:
        """``Z/n``; ``n == 0`` gives ``Z`` and ``n == 1`` the trivial group."""
        if n == 0:
            return cls(1)
        return cls(0, (abs(n),) if abs(n) > 1 else ())

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FinAbGroup:
        """Canonical form of a direct sum of cyclic groups (0 meaning ``Z``)."""
        return Subquotient(len(orders), unit_vectors(len(orders)), relation_vectors(orders)).group

    @classmethod
    def from_json(cls, obj: dict) -> FinAbGroup:
        return cls.from_orders(list(obj.get("torsion", [])) + [0] * int(obj.get("rank", 0)))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @property
    def orders(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.rank

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int | None:
        """Cardinality, or None for an infinite group."""
        return prod(self.torsion) if self.is_finite else None

    def __add__(self, other: FinAbGroup) -> FinAbGroup:
        return FinAbGroup.from_orders(self.orders + other.orders)

    def __str__(self) -> str:
        parts = [f"ℤ{_subscript(d)}" for d in self.torsion] + ["ℤ"] * self.rank
        return " ⊕ ".join(parts) if parts else "0"

    def ascii(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _subscript(n: int) -> str:
    return str(n).translate(_SUB)


def relation_vectors(orders: Sequence[int]) -> list[Vector]:
    n = len(orders)
    return [[o if i == j else 0 for i in range(n)] for j, o in enumerate(orders) if o]


def reduce_coords(vec: Sequence[int], orders: Sequence[int]) -> Vector:
    return [x % o if o else x for x, o in zip(vec, orders)]


def element_order(vec: Sequence[int], orders: Sequence[int]) -> int:
    """Order of an element of ``⊕ Z/orders[i]``; 0 means infinite order."""
    out = 1
    for x, o in zip(vec, orders):
        if o == 0:
            if x:
                return 0
        elif x % o:
            k = o // gcd(x, o)
            out = out * k // gcd(out, k)
    return out


class Subquotient:
    """``N / D`` for lattices ``D ⊆ N`` in ``Z^dim``, with its canonical iso.

    ``D`` is automatically added to ``N``.  :meth:`project` sends a vector of
    ``N`` to canonical coordinates of :attr:`group`; :meth:`lift` sends a
    canonical generator back to a representative in ``N``.
    """

    def __init__(self, dim: int, numerator: Iterable[Sequence[int]], denominator: Iterable[Sequence[int]]):
        self.dim = dim
        den = [list(g) for g in denominator]
        self.num = Lattice(dim, [list(g) for g in numerator] + den)
        self.den = Lattice(dim, den)
        k = self.num.rank
        rel = [self.num.coords(b) for b in self.den.basis]
        res = _snf(rel, cols=k)
        self._v, self._v_inv = res.v, res.v_inv
        diag = res.diagonal
        torsion = [(i, diag[i]) for i in range(res.rank) if diag[i] != 1]
        free = [(i, 0) for i in range(res.rank, k)]
        self._slots = torsion + free
        self.group = FinAbGroup(len(free), tuple(o for _, o in torsion))

    def project(self, vec: Sequence[int]) -> Vector:
        c = self.num.coords(vec)
        if c is None:
            raise ValueError("vector does not lie in the numerator lattice")
        y = [sum(c[r] * self._v[r][i] for r in range(len(c))) for i in range(len(c))]
        return [y[i] % o if o else y[i] for i, o in self._slots]

    def lift(self, j: int) -> Vector:
        row = self._v_inv[self._slots[j][0]]
        out = [0] * self.dim
        for c, b in zip(row, self.num.basis):
            if c:
                for r in range(self.dim):
                    out[r] += c * b[r]
        return out

    def lifts(self) -> list[Vector]:
        return [self.lift(j) for j in range(self.group.ngens)]

    def contains(self, vec: Sequence[int]) -> bool:
        return vec in self.num

    def is_zero(self, vec: Sequence[int]) -> bool:
        return vec in self.den


def induced_matrix(ambient: Sequence[Sequence[int]], source: Subquotient, target: Subquotient) -> Matrix:
    """Matrix (canonical coords) of the map ``source -> target`` induced by ``ambient``.

    ``ambient`` is ``target.dim x source.dim`` and must send the numerator
    and denominator of ``source`` into those of ``target``.
    """
    for b in source.den.basis:
        if not target.is_zero(matvec(ambient, b)):
            raise ValueError("ambient map does not respect denominators")
    cols = []
    for vec in source.lifts():
        image = matvec(ambient, vec)
        if not target.contains(image):
            raise ValueError("ambient map does not respect numerators")
        cols.append(target.project(image))
    return transpose(cols, rows=target.group.ngens)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism of canonical groups; columns are images of source generators."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows, cols = self.target.ngens, self.source.ngens
        m = [list(r) for r in self.matrix] if self.matrix else zeros(rows, cols)
        if len(m) != rows or any(len(r) != cols for r in m):
            raise ValueError(f"matrix must be {rows}x{cols}")
        to = self.target.orders
        m = [[x % to[i] if to[i] else x for x in row] for i, row in enumerate(m)]
        for j, o in enumerate(self.source.orders):
            if o and any((o * m[i][j]) % to[i] if to[i] else o * m[i][j] for i in range(rows)):
                raise ValueError(f"generator {j} of order {o} has an image of wrong order")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in m))

    @classmethod
    def zero(cls, source: FinAbGroup, target: FinAbGroup) -> GroupHom:
        return cls(source, target)

    @property
    def columns(self) -> list[Vector]:
        return [[row[j] for row in self.matrix] for j in range(self.source.ngens)]

    def __call__(self, vec: Sequence[int]) -> Vector:
        return reduce_coords(matvec(self.matrix, vec), self.target.orders)

    def __mul__(self, k: int) -> GroupHom:
        return GroupHom(self.source, self.target, tuple(tuple(k * x for x in row) for row in self.matrix))

    __rmul__ = __mul__

    def then(self, other: GroupHom) -> GroupHom:
        """``other ∘ self``."""
        if other.source != self.target:
            raise ValueError("homomorphisms are not composable")
        return GroupHom(self.source, other.target, tuple(map(tuple, matmul(other.matrix, self.matrix, self.source.ngens))))

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)


def group_from_presentation(generators: int, relations: Sequence[Sequence[int]]) -> FinAbGroup:
    """Canonical form of ``Z^generators`` modulo the row lattice of ``relations``."""
    relations = [list(r) for r in relations]
    if any(len(r) != generators for r in relations):
        raise ValueError(f"relations must have {generators} columns")
    return Subquotient(generators, unit_vectors(generators), relations).group


def _target_relations(h: GroupHom) -> list[Vector]:
    return relation_vectors(h.target.orders)


def kernel_subquotient(h: GroupHom) -> Subquotient:
    s, t = h.source.ngens, h.target.ngens
    rels = _target_relations(h)
    # x with h(x) in the target relation lattice: kernel of [H | -R]
    block = [list(h.matrix[i]) + [-r[i] for r in rels] for i in range(t)]
    pre = [w[:s] for w in kernel_basis(block, s + len(rels))] if t else unit_vectors(s)
    return Subquotient(s, pre, relation_vectors(h.source.orders))


def image_subquotient(h: GroupHom) -> Subquotient:
    rels = _target_relations(h)
    return Subquotient(h.target.ngens, h.columns + rels, rels)


def cokernel_subquotient(h: GroupHom) -> Subquotient:
    t = h.target.ngens
    return Subquotient(t, unit_vectors(t), h.columns + _target_relations(h))


def hom_kernel(h: GroupHom) -> FinAbGroup:
    return kernel_subquotient(h).group


def hom_image(h: GroupHom) -> FinAbGroup:
    return image_subquotient(h).group


def hom_cokernel(h: GroupHom) -> FinAbGroup:
    return cokernel_subquotient(h).group


# ---------------------------------------------------------------------------
# primes and localization


def prime_factors(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == {n: 1}


@dataclass(frozen=True)
class Localization:
    """Which torsion survives: all (integral), odd primes only, or one prime."""

    kind: str = "integral"
    prime: int | None = None

    def __post_init__(self):
        if self.kind not in ("integral", "odd", "primary"):
            raise ValueError(f"unknown localization kind {self.kind!r}")
        if self.kind == "primary" and not (self.prime and is_prime(self.prime)):
            raise ValueError(f"{self.prime} is not a prime")

    @classmethod
    def parse(cls, text: str | int) -> Localization:
        text = str(text).strip().lower()
        if text in ("integral", "odd"):
            return cls(text)
        if text.isdigit():
            return cls("primary", int(text))
        raise ValueError(f"unknown localization {text!r}")

    def keeps(self, q: int) -> bool:
        if self.kind == "integral":
            return True
        if self.kind == "odd":
            return q != 2
        return q == self.prime

    def kept_part(self, n: int) -> int:
        return prod(q**e for q, e in prime_factors(n).items() if self.keeps(q))

    def discarded_torsion(self, orders: Sequence[int]) -> list[Vector]:
        """Generators of the torsion whose order involves only discarded primes."""
        n = len(orders)
        out = []
        for j, o in enumerate(orders):
            if o:
                k = self.kept_part(o)
                if k != o:
                    out.append([k if i == j else 0 for i in range(n)])
        return out

    def subquotient(self, orders: Sequence[int]) -> Subquotient:
        n = len(orders)
        return Subquotient(n, unit_vectors(n), relation_vectors(orders) + self.discarded_torsion(orders))

    def apply(self, g: FinAbGroup) -> FinAbGroup:
        return FinAbGroup(g.rank, tuple(k for k in map(self.kept_part, g.torsion) if k > 1))

    def apply_hom(self, h: GroupHom) -> GroupHom:
        s = self.subquotient(h.source.orders)
        t = self.subquotient(h.target.orders)
        return GroupHom(s.group, t.group, tuple(map(tuple, induced_matrix(h.matrix, s, t))))

    @property
    def label(self) -> str:
        if self.kind == "integral":
            return "integral"
        if self.kind == "odd":
            return "odd"
        return str(self.prime)

    def __str__(self) -> str:
        return self.label


INTEGRAL = Localization("integral")
ODD = Localization("odd")


def p_primary_part(g: FinAbGroup, p: int) -> FinAbGroup:
    """Quotient by torsion of order prime to ``p``; the free rank is kept."""
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    return Localization("primary", p).apply(g)


def odd_part(g: FinAbGroup) -> FinAbGroup:
    """Quotient by the 2-primary torsion; the free rank is kept."""
    return ODD.apply(g)
