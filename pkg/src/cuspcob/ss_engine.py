"""Pages of the spectral sequence for prim Σ^{1_i}-maps, i ≤ 2.

Cell ``(i, j)`` of the first page is the stem π^s(j - i).  Every cell on
every page is held as a :class:`~cuspcob.fga.Subquotient` of the coordinate
lattice of that stem, so differentials are induced from integer matrices on
stem coordinates:

* ``d¹`` out of column 1 is left composition with η, out of column 2 it is 0;
* ``d²`` out of column 2 is left composition with α₁ on odd or 3-primary
  pages.  Integrally it is pinned only at ``(2, 2)``, where ι₂ goes to
  ``2ν``, whose class in ``E²(0,3) = ℤ₁₂`` has order 6.

Localizations are applied by adding the discarded torsion to each cell's
denominator, so they commute with taking homology.  A cell whose stem lies
beyond the table, or which depends on a product missing from the table, is
*unknown* (``None``) and stays unknown on later pages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from math import gcd

from .fga import (
    INTEGRAL,
    ODD,
    FinAbGroup,
    GroupHom,
    Lattice,
    Localization,
    Subquotient,
    induced_matrix,
    kernel_basis,
    matvec,
    unit_vectors,
    zeros,
)
from .stems import OutOfRange, StemTable, UnknownProduct, default_table

COLUMNS = 3
JMAX_DEFAULT = 13
JMAX_LIMIT = 13
THREE = Localization("primary", 3)


class IndeterminateDifferential(ValueError):
    """An integral d² other than at (2, 2) is only determined modulo 𝒞₂."""


Cell = tuple[int, int]


@dataclass
class _Diff:
    ambient: list[list[int]] | None  # None: unknown
    reason: str = ""
    indeterminate: bool = False


@dataclass(frozen=True, eq=False)
class SSPage:
    """One page ``E^r``: cell groups and the differentials leaving each cell.

    ``cells[(i, j)]`` is ``None`` when the group is unknown;
    ``differentials[(i, j)]`` maps cell ``(i, j)`` to ``(i - r, j + r - 1)``
    and is ``None`` when unknown.
    """

    r: int
    jmax: int
    localization: Localization
    cells: dict[Cell, FinAbGroup | None]
    differentials: dict[Cell, GroupHom | None]
    columns: int = COLUMNS
    middle_zero: bool = False
    reasons: dict[Cell, str] = field(default_factory=dict)
    _subs: dict[Cell, Subquotient | None] = field(default_factory=dict, repr=False)
    _ambient: dict[Cell, _Diff] = field(default_factory=dict, repr=False)

    def target(self, cell: Cell) -> Cell:
        i, j = cell
        return (i - self.r, j + self.r - 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SSPage):
            return NotImplemented
        return (self.r, self.jmax, self.localization, self.cells, self.differentials) == (
            other.r, other.jmax, other.localization, other.cells, other.differentials)

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "r": self.r,
            "jmax": self.jmax,
            "localization": self.localization.label,
            "cells": [
                {"i": i, "j": j, "group": None if g is None else g.to_json()}
                for (i, j), g in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))
                if i <= j  # below the diagonal every stem is negative, hence 0
            ],
            "differentials": [
                {
                    "source": [i, j],
                    "target": list(self.target((i, j))),
                    "matrix": None if d is None else [list(row) for row in d.matrix],
                }
                for (i, j), d in sorted(self.differentials.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }

    def render(self) -> str:
        """Grid in the layout of the hand-drawn pages: i to the right, j upward."""
        width = 8
        for g in self.cells.values():
            width = max(width, len(str(g)) + 2)
        lines = [f"E^{self.r}  ({self.localization.label})"]
        for j in range(self.jmax, -1, -1):
            label = f"j={j}" if j == 0 else f"{j}"
            row = [label.rjust(4) + " |"]
            for i in range(self.columns):
                if j < i:
                    text = ""
                else:
                    g = self.cells[(i, j)]
                    text = "?" if g is None else str(g)
                row.append(text.center(width))
            lines.append("".join(row).rstrip())
        lines.append("     +" + "-" * (width * self.columns))
        lines.append("      " + "".join(("i=0" if i == 0 else str(i)).center(width) for i in range(self.columns)).rstrip())
        return "\n".join(lines)


def _stem_sub(table: StemTable, n: int, loc: Localization) -> Subquotient | None:
    try:
        return table.stem(n).subquotient(loc)
    except OutOfRange:
        return None


def _no_torsion_of(k: int, g: FinAbGroup) -> bool:
    return all(gcd(k, o) == 1 for o in g.torsion)


def _mult_ambient(table: StemTable, name: str, n: int, src: Subquotient, tgt: Subquotient) -> _Diff:
    """Ambient matrix of left composition with a named element, or an unknown marker."""
    g = table.named(name)
    if src.group.is_trivial or tgt.group.is_trivial or (g.order and _no_torsion_of(g.order, tgt.group)):
        return _Diff(zeros(tgt.dim, src.dim))
    try:
        return _Diff(table.left_mult_matrix(g, n))
    except (UnknownProduct, OutOfRange) as exc:
        return _Diff(None, str(exc))


def _finish(r, jmax, loc, columns, middle_zero, subs, ambient, reasons) -> SSPage:
    cells = {c: (s.group if s is not None else None) for c, s in subs.items()}
    diffs: dict[Cell, GroupHom | None] = {}
    for c, d in ambient.items():
        i, j = c
        t = (i - r, j + r - 1)
        if d.ambient is None or subs[c] is None or subs[t] is None:
            diffs[c] = None
            continue
        s, u = subs[c], subs[t]
        diffs[c] = GroupHom(s.group, u.group, tuple(map(tuple, induced_matrix(d.ambient, s, u))))
    return SSPage(r, jmax, loc, cells, diffs, columns, middle_zero, reasons, subs, ambient)


def _check_jmax(jmax: int) -> None:
    if not 0 <= jmax <= JMAX_LIMIT:
        raise ValueError(f"jmax must lie in [0, {JMAX_LIMIT}], got {jmax}")


def build_prim_first_page(jmax: int = JMAX_DEFAULT, table: StemTable | None = None,
                          localization: Localization = INTEGRAL, *, columns: int = COLUMNS,
                          middle_zero: bool = False) -> SSPage:
    """First page: ``E¹(i, j) = π^s(j - i)`` with ``d¹`` attached.

    ``columns=2`` gives the fold (Σ^{1,0}) sequence.  ``middle_zero`` replaces
    column 1 by zero groups, modelling the non-prim sequence after odd
    localization.
    """
    _check_jmax(jmax)
    table = table or default_table()
    subs: dict[Cell, Subquotient | None] = {}
    reasons: dict[Cell, str] = {}
    for i in range(columns):
        for j in range(jmax + 1):
            sub = _stem_sub(table, j - i, localization)
            if middle_zero and i == 1 and sub is not None:
                sub = Subquotient(sub.dim, unit_vectors(sub.dim), unit_vectors(sub.dim))
            if sub is None:
                reasons[(i, j)] = f"π^s({j - i}) is beyond the stems table"
            subs[(i, j)] = sub
    ambient: dict[Cell, _Diff] = {}
    for j in range(1, jmax + 1):
        for i in (1, 2):
            if i >= columns:
                continue
            src, tgt = subs[(i, j)], subs[(i - 1, j)]
            if src is None or tgt is None:
                ambient[(i, j)] = _Diff(None, "cell beyond the stems table")
            elif i == 1:
                ambient[(i, j)] = _mult_ambient(table, "eta", j - 1, src, tgt)
            else:
                ambient[(i, j)] = _Diff(zeros(tgt.dim, src.dim))
    return _finish(1, jmax, localization, columns, middle_zero, subs, ambient, reasons)


def prim_d1(i: int, j: int, table: StemTable | None = None,
            localization: Localization = INTEGRAL) -> GroupHom:
    """``d¹`` out of cell ``(i, j)``: η∘ for i = 1, zero for i = 2."""
    if i not in (1, 2) or j < 1:
        raise ValueError(f"no d¹ leaves cell ({i}, {j})")
    page = build_prim_first_page(j, table, localization)
    d = page.differentials[(i, j)]
    if d is None:
        raise UnknownProduct(*_unknown_names(page._ambient[(i, j)].reason))
    return d


def _unknown_names(reason: str) -> tuple[str, str]:
    if reason.startswith("unknown product "):
        lhs, _, rhs = reason[len("unknown product "):].partition(" ∘ ")
        return lhs, rhs
    return reason, ""


def _preimage(a: list[list[int]], num: Lattice, den: Lattice) -> list[list[int]]:
    """Vectors x of ``num`` with ``a x`` in ``den``."""
    basis = num.basis
    if not basis:
        return []
    images = [matvec(a, b) for b in basis]
    rows = len(images[0])
    if rows == 0:
        return basis
    block = [[im[r] for im in images] + [-d[r] for d in den.basis] for r in range(rows)]
    out = []
    for w in kernel_basis(block, len(basis) + len(den.basis)):
        c = w[: len(basis)]
        out.append([sum(c[k] * basis[k][r] for k in range(len(basis))) for r in range(num.dim)])
    return out


def _d2_ambient(page: SSPage, j: int, table: StemTable, subs) -> _Diff:
    src, tgt = subs[(2, j)], subs[(0, j + 1)]
    if src is None or tgt is None:
        return _Diff(None, "cell unknown")
    if src.group.is_trivial or tgt.group.is_trivial:
        return _Diff(zeros(tgt.dim, src.dim))
    if page.localization.kind == "integral":
        if j == 2:
            # ι₂ ↦ 2ν: order 6 in E²(0,3) = ℤ₂₄/⟨η³⟩ = ℤ₁₂
            return _Diff([[2]])
        return _Diff(None, f"integral d² out of (2, {j}) is indeterminate modulo 𝒞₂; "
                           "use odd or 3-primary localization", indeterminate=True)
    return _mult_ambient(table, "alpha1", j - 2, src, tgt)


def turn_page(page: SSPage, table: StemTable | None = None) -> SSPage:
    """Homology of ``page``; attaches ``d²`` when moving to page 2.

    From page 3 on there are no differentials in three columns, so turning
    only advances ``r``.
    """
    if page.r >= 3:
        return replace(page, r=page.r + 1)
    table = table or default_table()
    subs: dict[Cell, Subquotient | None] = {}
    reasons = dict(page.reasons)
    for cell, sub in page._subs.items():
        if sub is None:
            subs[cell] = None
            continue
        out = page._ambient.get(cell)
        i, j = cell
        src_cell = (i + page.r, j - page.r + 1)
        inc = page._ambient.get(src_cell)
        if (out is not None and out.ambient is None) or (inc is not None and inc.ambient is None):
            bad = out if out is not None and out.ambient is None else inc
            if bad.indeterminate:
                raise IndeterminateDifferential(bad.reason)
            subs[cell] = None
            reasons[cell] = bad.reason or "adjacent differential unknown"
            continue
        num = sub.num.basis
        if out is not None:
            num = _preimage(out.ambient, sub.num, page._subs[page.target(cell)].den)
        den = list(sub.den.basis)
        if inc is not None:
            den += [matvec(inc.ambient, b) for b in page._subs[src_cell].num.basis]
        subs[cell] = Subquotient(sub.dim, num, den)
    r = page.r + 1
    ambient: dict[Cell, _Diff] = {}
    if r == 2 and page.columns > 2:
        draft = SSPage(r, page.jmax, page.localization, {}, {}, page.columns, page.middle_zero)
        for j in range(2, page.jmax):
            ambient[(2, j)] = _d2_ambient(draft, j, table, subs)
    return _finish(r, page.jmax, page.localization, page.columns, page.middle_zero, subs, ambient, reasons)


def prim_d2(j: int, table: StemTable | None = None, localization: Localization = THREE) -> GroupHom:
    """``d²`` from ``E²(2, j)`` to ``E²(0, j + 1)``."""
    if j < 2:
        raise ValueError("d² leaves column 2 only from row j >= 2")
    page = turn_page(build_prim_first_page(j + 1, table, localization), table)
    d = page.differentials[(2, j)]
    if page._ambient[(2, j)].indeterminate:
        raise IndeterminateDifferential(page._ambient[(2, j)].reason)
    if d is None:
        raise UnknownProduct(*_unknown_names(page._ambient[(2, j)].reason))
    return d


def e_infinity(jmax: int = JMAX_DEFAULT, table: StemTable | None = None,
               localization: Localization = INTEGRAL, **kwargs) -> SSPage:
    """Page 3, where the three-column sequence stabilizes."""
    table = table or default_table()
    page = build_prim_first_page(jmax, table, localization, **kwargs)
    while page.r < 3:
        page = turn_page(page, table)
    return page


def page(r: int, jmax: int = JMAX_DEFAULT, table: StemTable | None = None,
         localization: Localization = INTEGRAL, **kwargs) -> SSPage:
    if r < 1:
        raise ValueError(f"page index must be at least 1, got {r}")
    table = table or default_table()
    p = build_prim_first_page(jmax, table, localization, **kwargs)
    while p.r < r:
        p = turn_page(p, table)
    return p


def d_squared_violations(page: SSPage) -> list[tuple[Cell, Cell]]:
    """Pairs of composable differentials whose composite is nonzero."""
    bad = []
    for cell, d in page.differentials.items():
        nxt = page.target(cell)
        e = page.differentials.get(nxt)
        if d is None or e is None:
            continue
        if not d.then(e).is_zero:
            bad.append((cell, nxt))
    return bad


# ---------------------------------------------------------------------------
# assembled answers


@dataclass(frozen=True)
class GradedAnswer:
    """Filtration quotients ``[E∞(0,n), E∞(1,n-1), E∞(2,n-2)]`` and the extension data.

    ``sub`` and ``quotient`` are the two ends of the short exact sequence the
    group fits into; ``total`` is set only when the extension is forced.
    ``None`` marks an unknown group (see ``unknown``).
    """

    n: int
    pieces: tuple[FinAbGroup | None, FinAbGroup | None, FinAbGroup | None]
    qualifier: str
    sub: FinAbGroup | None = None
    quotient: FinAbGroup | None = None
    total: FinAbGroup | None = None
    unknown: str = ""

    def to_json(self) -> dict:
        def enc(g):
            return None if g is None else g.to_json()

        return {
            "schema": "1",
            "n": self.n,
            "qualifier": self.qualifier,
            "pieces": [enc(g) for g in self.pieces],
            "sub": enc(self.sub),
            "quotient": enc(self.quotient),
            "total": enc(self.total),
            "unknown": self.unknown or None,
        }

    def render(self) -> str:
        def s(g):
            return "?" if g is None else str(g)

        lines = [
            f"n = {self.n}   [{self.qualifier}]",
            "pieces  E∞(0,n) | E∞(1,n-1) | E∞(2,n-2):  " + " | ".join(s(g) for g in self.pieces),
            f"0 → {s(self.sub)} → G → {s(self.quotient)} → 0",
        ]
        if self.total is not None:
            lines.append(f"G ≅ {self.total}")
        if self.unknown:
            lines.append(f"unknown: {self.unknown}")
        return "\n".join(lines)


def _resolve(sub: FinAbGroup, quotient: FinAbGroup) -> FinAbGroup | None:
    if quotient.is_trivial:
        return sub
    if sub.is_trivial:
        return quotient
    if not quotient.torsion:
        return sub + quotient  # free quotient: the sequence splits
    return None


def _check_n(n: int, table: StemTable) -> None:
    if not 0 <= n <= table.max_degree:
        raise OutOfRange(f"n must lie in [0, {table.max_degree}], got {n}")


def _cell(page: SSPage, i: int, j: int) -> FinAbGroup | None:
    if j < 0:
        return FinAbGroup()
    return page.cells[(i, j)]


@dataclass(frozen=True)
class FoldReport:
    n: int
    integral: GradedAnswer
    odd: GradedAnswer


def prim_fold_group(n: int, table: StemTable | None = None) -> FoldReport:
    """``0 → Coker η_{n-1} → Prim Σ^{1,0}(n+1) → ker η_{n-2} → 0`` and its odd part."""
    table = table or default_table()
    _check_n(n, table)
    answers = []
    for loc in (INTEGRAL, ODD):
        p = page(2, n, table, loc, columns=2)
        sub, quo = _cell(p, 0, n), _cell(p, 1, n - 1)
        pieces = (sub, quo, FinAbGroup())
        if sub is None or quo is None:
            why = p.reasons.get((0, n)) or p.reasons.get((1, n - 1)) or "unknown"
            answers.append(GradedAnswer(n, pieces, "unknown", sub, quo, None, why))
            continue
        if loc is ODD:
            answers.append(GradedAnswer(n, pieces, "mod 𝒞₂", sub, quo, sub + quo))
        else:
            total = _resolve(sub, quo)
            answers.append(GradedAnswer(n, pieces, "exact" if total is not None else "up to extension",
                                        sub, quo, total))
    return FoldReport(n, *answers)


def prim_cusp_3primary(n: int, table: StemTable | None = None) -> GradedAnswer:
    """3-primary part of Prim Σ^{1,1,0}(n+1) from the 3-local page 3."""
    table = table or default_table()
    _check_n(n, table)
    p = e_infinity(n, table, THREE)
    pieces = (_cell(p, 0, n), _cell(p, 1, n - 1), _cell(p, 2, n - 2))
    if any(g is None for g in pieces):
        return GradedAnswer(n, pieces, "3-primary, unknown", unknown="cell unknown")
    sub = pieces[0] + pieces[1]
    quo = pieces[2]
    total = _resolve(sub, quo)
    qual = "3-primary" if total is not None else "3-primary, up to extension"
    return GradedAnswer(n, pieces, qual, sub, quo, total)


def cusp_cob_sequence(n: int, table: StemTable | None = None) -> GradedAnswer:
    """Ends of the 𝒞₂-exact sequence for Cob Σ^{1,1,0}(n+1), via odd localization."""
    table = table or default_table()
    _check_n(n, table)
    p = e_infinity(n, table, ODD, middle_zero=True)
    pieces = (_cell(p, 0, n), FinAbGroup(), _cell(p, 2, n - 2))
    sub, quo = pieces[0], pieces[2]
    if sub is None or quo is None:
        return GradedAnswer(n, pieces, "mod 𝒞₂, unknown", sub, quo, unknown="cell unknown")
    total = _resolve(sub, quo)
    qual = "mod 𝒞₂" if total is not None else "mod 𝒞₂, up to extension"
    return GradedAnswer(n, pieces, qual, sub, quo, total)


def three_primary_closed_form(n: int, table: StemTable | None = None) -> tuple[FinAbGroup, FinAbGroup, FinAbGroup]:
    """``(E³(0,n))₃, (E³(1,n-1))₃, (E³(2,n-2))₃`` straight from the stems table.

    Coker and ker of α₁ are taken integrally and then 3-localized; this does
    not touch the page machinery.
    """
    from .fga import hom_cokernel, hom_kernel, p_primary_part

    table = table or default_table()
    alpha1 = table.named("alpha1")

    def stem(m: int) -> FinAbGroup:
        return table.group(m) if m >= 0 else FinAbGroup()

    def coker(src: int) -> FinAbGroup:
        if src < 0:
            return stem(src + 3)
        return hom_cokernel(table.left_mult_hom(alpha1, src))

    def ker(src: int) -> FinAbGroup:
        if src < 0:
            return FinAbGroup()
        return hom_kernel(table.left_mult_hom(alpha1, src))

    return (
        p_primary_part(coker(n - 3), 3),
        p_primary_part(stem(n - 2), 3),
        p_primary_part(ker(n - 4), 3),
    )


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), ensure_ascii=False, indent=1)
