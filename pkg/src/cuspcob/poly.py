"""Exact polynomial arithmetic over the rationals.

:class:`MultiPoly` is a sparse multivariate polynomial over an ordered list
of variable names; two polynomials combine only if their variable lists
agree.  :class:`UniPoly` is a dense univariate polynomial with Sturm
sequences and root isolation.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


class VariableMismatch(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class MultiPoly:
    """Sparse polynomial ``{exponent tuple: Fraction}`` over ``variables``."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError("exponent vector length does not match the variables")
            c = _frac(c)
            if c:
                clean[e] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar, variables: Sequence[str]) -> MultiPoly:
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        i = variables.index(name)
        return cls(variables, {tuple(int(k == i) for k in range(len(variables))): 1})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> MultiPoly:
        return cls(variables)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        return MultiPoly.const(_frac(other), self.variables)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = _frac(other)
            return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: Scalar) -> MultiPoly:
        return self * _frac(c)

    def __truediv__(self, c: Scalar) -> MultiPoly:
        return self * (1 / _frac(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(other, self.variables).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # -- structure ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        e = tuple(monomial.get(v, 0) for v in self.variables)
        return self.terms.get(e, Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def monomials(self) -> list[MultiPoly]:
        return [MultiPoly(self.variables, {e: c}) for e, c in self.sorted_terms()]

    # -- calculus and substitution --------------------------------------------

    def diff(self, name: str) -> MultiPoly:
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.variables, out)

    def subs(self, mapping: Mapping[str, MultiPoly | Scalar], variables: Sequence[str] | None = None) -> MultiPoly:
        """Replace variables by polynomials over ``variables`` (default: the same ring)."""
        target = tuple(variables) if variables is not None else self.variables
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                img = img if isinstance(img, MultiPoly) else MultiPoly.const(img, target)
            elif v in target:
                img = MultiPoly.var(v, target)
            else:
                raise VariableMismatch(f"variable {v!r} has no image in {target}")
            if img.variables != target:
                raise VariableMismatch(f"image of {v!r} lives over {img.variables}, expected {target}")
            images.append(img)
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        out = MultiPoly.zero(target)
        for e, c in self.terms.items():
            term = MultiPoly.const(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def __call__(self, *point, **named) -> Fraction:
        return self.evaluate(point if point else named)

    def evaluate(self, point: Sequence[Scalar] | Mapping[str, Scalar]) -> Fraction:
        if isinstance(point, Mapping):
            vals = [_frac(point[v]) for v in self.variables]
        else:
            vals = [_frac(x) for x in point]
            if len(vals) != len(self.variables):
                raise VariableMismatch("point has the wrong number of coordinates")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x**k
            total += t
        return total

    def extend(self, variables: Sequence[str]) -> MultiPoly:
        """Same polynomial viewed in a ring with more (or reordered) variables."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in variables:
                raise VariableMismatch(f"{v!r} missing from {variables}")
            idx.append(variables.index(v))
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(variables)
            for i, k in zip(idx, e):
                f[i] = k
            out[tuple(f)] = c
        return MultiPoly(variables, out)

    def exact_div(self, other: MultiPoly) -> MultiPoly:
        """Quotient of an exact division; raises ArithmeticError if it leaves a remainder."""
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (e0, c0), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                f = tuple(a - b for a, b in zip(e, e0))
                if min(f, default=0) < 0:
                    raise ArithmeticError("division leaves a remainder")
                out[f] = c / c0
            return MultiPoly(self.variables, out)
        lead_e, lead_c = other.leading_term()
        rem = self
        quot: dict[tuple[int, ...], Fraction] = {}
        while rem.terms:
            e, c = rem.leading_term()
            f = tuple(a - b for a, b in zip(e, lead_e))
            if min(f) < 0:
                raise ArithmeticError("division leaves a remainder")
            q = c / lead_c
            quot[f] = quot.get(f, 0) + q
            rem = rem - other * MultiPoly(self.variables, {f: q})
        return MultiPoly(self.variables, quot)

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self})"


def ring(*names: str) -> tuple[MultiPoly, ...]:
    """Generators of ``Q[names]``, like ``x, y = ring("x", "y")``."""
    return tuple(MultiPoly.var(n, names) for n in names)


def is_even_monomial_sum(p: MultiPoly) -> bool:
    """Every term has a positive coefficient and only even exponents."""
    return all(c > 0 and all(k % 2 == 0 for k in e) for e, c in p.terms.items())


# ---------------------------------------------------------------------------
# matrices and maps


class PolyMatrix:
    """Rectangular matrix of MultiPolys over a shared variable list."""

    def __init__(self, rows: Sequence[Sequence[MultiPoly | Scalar]], variables: Sequence[str]):
        self.variables = tuple(variables)
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows have different lengths")
        self.rows = [
            [x if isinstance(x, MultiPoly) else MultiPoly.const(x, self.variables) for x in r]
            for r in rows
        ]
        for r in self.rows:
            for x in r:
                if x.variables != self.variables:
                    raise VariableMismatch("entry lives over a different variable list")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij: tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list[MultiPoly]:
        return [r[j] for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.variables == other.variables and self.rows == other.rows

    def transpose(self) -> PolyMatrix:
        return PolyMatrix([list(c) for c in zip(*self.rows)], self.variables)

    def evaluate(self, point) -> list[list[Fraction]]:
        return [[x.evaluate(point) for x in r] for r in self.rows]

    def subs(self, mapping, variables=None) -> PolyMatrix:
        rows = [[x.subs(mapping, variables) for x in r] for r in self.rows]
        return PolyMatrix(rows, variables if variables is not None else self.variables)

    def det_cofactor(self) -> MultiPoly:
        """Laplace expansion along the first row, memoized on column subsets."""
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        memo: dict[tuple[int, tuple[int, ...]], MultiPoly] = {}

        def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
            if row == n:
                return MultiPoly.const(1, self.variables)
            key = (row, cols)
            if key not in memo:
                total = MultiPoly.zero(self.variables)
                for k, c in enumerate(cols):
                    entry = self.rows[row][c]
                    if entry.is_zero:
                        continue
                    sub = minor(row + 1, cols[:k] + cols[k + 1:])
                    term = entry * sub
                    total = total - term if k % 2 else total + term
                memo[key] = total
            return memo[key]

        return minor(0, tuple(range(n)))

    def det_bareiss(self) -> MultiPoly:
        """Fraction-free elimination with exact polynomial division."""
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return MultiPoly.const(1, self.variables)
        a = [list(r) for r in self.rows]
        sign = 1
        prev = MultiPoly.const(1, self.variables)
        for k in range(n - 1):
            if a[k][k].is_zero:
                swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero), None)
                if swap is None:
                    return MultiPoly.zero(self.variables)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            prev = a[k][k]
        return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]

    def det_leibniz(self) -> MultiPoly:
        """Permutation expansion; only for small matrices (independent oracle)."""
        n, _ = self.shape
        total = MultiPoly.zero(self.variables)
        for perm in permutations(range(n)):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            term = MultiPoly.const(-1 if inv % 2 else 1, self.variables)
            for i, j in enumerate(perm):
                term = term * self.rows[i][j]
                if term.is_zero:
                    break
            total = total + term
        return total


def rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    """Exact rank of a rational matrix by Gaussian elimination."""
    a = [[_frac(x) for x in r] for r in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


class PolyMap:
    """Polynomial map given by coordinate functions over ``variables``."""

    def __init__(self, variables: Sequence[str], coords: Iterable[MultiPoly | Scalar]):
        self.variables = tuple(variables)
        self.coords = tuple(
            c if isinstance(c, MultiPoly) else MultiPoly.const(c, self.variables) for c in coords
        )
        for c in self.coords:
            if c.variables != self.variables:
                raise VariableMismatch("coordinate lives over a different variable list")

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int) -> MultiPoly:
        return self.coords[k]

    def __call__(self, point) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(point) for c in self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMap) and self.variables == other.variables and self.coords == other.coords

    def subs(self, mapping, variables=None) -> PolyMap:
        target = variables if variables is not None else self.variables
        return PolyMap(target, [c.subs(mapping, variables) for c in self.coords])

    def jacobian(self) -> PolyMatrix:
        return PolyMatrix([[c.diff(v) for v in self.variables] for c in self.coords], self.variables)


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Dense rational polynomial, coefficients from the constant term up."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar]):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> UniPoly:
        p = cls([1])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other: UniPoly) -> UniPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> UniPoly:
        return UniPoly(-x for x in self.coeffs)

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            return UniPoly(x * _frac(other) for x in self.coeffs)
        if self.is_zero or other.is_zero:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - other.degree)
        while len(rem) - 1 >= other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            f = rem[-1] / other.lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(q), UniPoly(rem)

    def __mod__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[0]

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> UniPoly:
        return self * (1 / self.lead)

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic() if not a.is_zero else a

    def squarefree_part(self) -> UniPoly:
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def squarefree_factorization(self) -> list[tuple[UniPoly, int]]:
        """Yun's algorithm: ``[(q_i, i)]`` with ``self ∝ ∏ q_i^i`` and each ``q_i`` squarefree."""
        if self.degree < 1:
            return []
        out = []
        f = self.monic()
        d = f.derivative()
        a = f.gcd(d)
        b = f // a
        c = d // a
        i = 1
        while b.degree > 0:
            y = c - b.derivative()
            g = b.gcd(y)
            if g.degree > 0:
                out.append((g, i))
            b = b // g
            c = y // g
            i += 1
        return out


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero:
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(p: UniPoly, positive: bool) -> Fraction:
    if positive or p.degree % 2 == 0:
        return p.lead
    return -p.lead


def count_real_roots(p: UniPoly, lo: Scalar | None = None, hi: Scalar | None = None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (whole line by default), by Sturm."""
    if p.is_zero:
        raise ValueError("the zero polynomial has infinitely many roots")
    seq = sturm_sequence(p)
    v_lo = _sign_changes(_sign_at_infinity(q, False) for q in seq) if lo is None else _sign_changes(q(lo) for q in seq)
    v_hi = _sign_changes(_sign_at_infinity(q, True) for q in seq) if hi is None else _sign_changes(q(hi) for q in seq)
    return v_lo - v_hi


def is_real_rooted(p: UniPoly) -> bool:
    """True iff every complex root of ``p`` is real (counting multiplicity)."""
    if p.is_zero:
        raise ValueError("the zero polynomial is not admissible")
    return count_real_roots(p) == p.squarefree_part().degree


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every root has absolute value below it."""
    return 1 + max((abs(c / p.lead) for c in p.coeffs[:-1]), default=Fraction(0))


def _descartes(p: UniPoly, a: Fraction, b: Fraction) -> int:
    """Sign variations bounding the roots of ``p`` in the open interval ``(a, b)``."""
    # (1 + y)^n p((a + b y) / (1 + y)) has as positive roots the images of roots in (a, b)
    n = p.degree
    num = UniPoly([a, b])
    den = UniPoly([1, 1])
    total = UniPoly([])
    for k, c in enumerate(p.coeffs):
        term = UniPoly([c])
        for _ in range(k):
            term = term * num
        for _ in range(n - k):
            term = term * den
        total = total + term
    return _sign_changes(total.coeffs)


def isolate_real_roots(p: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals, each holding exactly one distinct real root, in increasing order.

    Bisection on rational endpoints with Descartes' rule of signs as the
    counting test; an exact rational root ``r`` found at a split point is
    returned as ``(r, r)``.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial is not admissible")
    q = p.squarefree_part() if p.degree > 0 else p
    if q.degree < 1:
        return []
    bound = root_bound(q)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        v = _descartes(q, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if q(m) == 0:
            out.append((m, m))
        stack.append((a, m))
        stack.append((m, b))
    return sorted(out)


def count_roots_by_bisection(p: UniPoly) -> int:
    return len(isolate_real_roots(p))


def real_root_multiplicities(p: UniPoly) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """Isolating intervals of the distinct real roots with multiplicities, left to right."""
    found = []
    for q, mult in p.squarefree_factorization():
        for iv in isolate_real_roots(q):
            found.append([iv, mult, q])
    # shrink until the intervals from different factors are disjoint
    while True:
        found.sort(key=lambda t: t[0])
        clash = next(
            (k for k in range(len(found) - 1) if found[k][0][1] >= found[k + 1][0][0]), None
        )
        if clash is None:
            break
        for item in (found[clash], found[clash + 1]):
            (a, b), _, q = item
            if a == b:
                continue
            m = (a + b) / 2
            if q(m) == 0:
                item[0] = (m, m)
            elif _descartes(q, a, m) == 1:
                item[0] = (a, m)
            else:
                item[0] = (m, b)
    return [(iv, mult) for iv, mult, _ in found]
