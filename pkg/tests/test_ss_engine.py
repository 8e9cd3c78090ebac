"""Prim spectral sequence pages and the assembled groups."""

import copy
import json

import pytest

from cuspcob.fga import INTEGRAL, ODD, FinAbGroup, Localization, element_order, odd_part, p_primary_part
from cuspcob.ss_engine import (
    THREE,
    IndeterminateDifferential,
    build_prim_first_page,
    cusp_cob_sequence,
    d_squared_violations,
    e_infinity,
    page,
    prim_cusp_3primary,
    prim_d1,
    prim_d2,
    prim_fold_group,
    three_primary_closed_form,
    turn_page,
)
from cuspcob.stems import bundled_stems_path, default_table, load_stem_table

Z, O = FinAbGroup(1), FinAbGroup()


def C(n):
    return FinAbGroup.cyclic(n)


@pytest.fixture(scope="module")
def table():
    return default_table()


def test_first_page_is_shifted_stems(table):
    p = build_prim_first_page(11, table)
    for (i, j), g in p.cells.items():
        assert g == table.group(j - i)


def test_d1_is_eta_then_zero(table):
    d = prim_d1(1, 2, table)  # η: π^s(1) → π^s(2)
    assert d.matrix == ((1,),)
    assert prim_d1(2, 2, table).is_zero  # d¹(ι₂) = 0
    assert prim_d1(1, 1, table).matrix == ((1,),)  # ι ↦ η
    with pytest.raises(ValueError):
        prim_d1(0, 3, table)


def test_integral_second_page(table):
    p = page(2, 3, table, INTEGRAL)
    want = {(0, 0): Z, (0, 1): O, (0, 2): O, (0, 3): C(12), (1, 1): Z, (1, 2): O, (1, 3): O,
            (2, 2): Z, (2, 3): C(2)}
    for cell, g in want.items():
        assert p.cells[cell] == g, cell


def test_d2_order_six(table):
    d = prim_d2(2, table, INTEGRAL)
    assert d.source == Z and d.target == C(12)
    img = d([1])
    assert element_order(img, d.target.orders) == 6
    d3 = prim_d2(2, table, THREE)
    assert d3.target == C(3) and element_order(d3([1]), d3.target.orders) == 3


def test_indeterminate_integral_d2(table):
    with pytest.raises(IndeterminateDifferential):
        prim_d2(5, table, INTEGRAL)
    with pytest.raises(IndeterminateDifferential):
        page(3, 6, table, INTEGRAL)
    page(2, 13, table, INTEGRAL)  # page 2 itself is fine
    assert page(3, 5, table, INTEGRAL).cells[(2, 2)] == Z


@pytest.mark.parametrize("loc", [INTEGRAL, ODD, THREE], ids=str)
@pytest.mark.parametrize("r", [1, 2, 3])
def test_d_squared_is_zero(table, loc, r):
    jmax = 5 if (loc is INTEGRAL and r == 3) else 13
    for kw in ({}, {"columns": 2}, {"middle_zero": True}):
        assert d_squared_violations(page(r, jmax, table, loc, **kw)) == []


def test_page_three_is_stable(table):
    for loc in (ODD, THREE):
        p3 = page(3, 13, table, loc)
        p5 = page(5, 13, table, loc)
        assert p3.cells == p5.cells and p5.differentials == {}
        assert turn_page(p3, table).cells == p3.cells
        assert page(3, 13, table, loc) == p3


@pytest.mark.parametrize("r", [1, 2])
def test_localization_commutes_with_pages(table, r):
    integral = page(r, 13, table, INTEGRAL)
    for loc, part in ((THREE, lambda g: p_primary_part(g, 3)), (ODD, odd_part)):
        local = page(r, 13, table, loc)
        for cell, g in integral.cells.items():
            if g is not None and local.cells[cell] is not None:
                assert part(g) == local.cells[cell], (loc, cell)


def _with_alpha1(k):
    doc = json.loads(bundled_stems_path().read_text(encoding="utf-8"))
    doc["three_primary"][0]["element"] = [k]
    for prod in doc["products"]:
        if prod["lhs"] == "alpha1" and prod["rhs"] == "iota":
            prod["result"]["coords"] = [k]
    return load_stem_table(json.dumps(doc))


def test_alpha1_sign_invariance(table):
    other = _with_alpha1(16)
    for loc in (THREE, ODD):
        for r in (2, 3):
            assert page(r, 13, table, loc).cells == page(r, 13, other, loc).cells
    for n in range(12):
        assert prim_cusp_3primary(n, table).pieces == prim_cusp_3primary(n, other).pieces


def test_fold_groups(table):
    rep = prim_fold_group(3, table)
    assert rep.integral.total == C(12) and rep.integral.qualifier == "exact"
    assert prim_fold_group(2, table).integral.total == Z
    assert prim_fold_group(7, table).integral.qualifier == "unknown"
    for n in range(2, 12):
        want = odd_part(table.group(n) + table.group(n - 2))
        assert prim_fold_group(n, table).odd.total == want


def test_cusp_three_primary_matches_closed_form(table):
    for n in range(0, 12):
        ans = prim_cusp_3primary(n, table)
        assert ans.pieces == three_primary_closed_form(n, table)
    assert prim_cusp_3primary(7, table).pieces == (C(3), O, C(3))
    assert prim_cusp_3primary(11, table).pieces == (C(9), O, C(3))
    assert prim_cusp_3primary(4, table).pieces == (O, O, Z)


def test_cusp_cob_ends(table):
    ends = {0: (Z, O), 3: (O, O), 4: (O, Z), 7: (C(15), C(3)), 10: (C(3), O), 11: (C(63), C(15))}
    for n, (sub, quo) in ends.items():
        ans = cusp_cob_sequence(n, table)
        assert (ans.sub, ans.quotient) == (sub, quo), n
        assert ans.qualifier.startswith("mod 𝒞₂")


def test_jmax_bounds(table):
    with pytest.raises(ValueError):
        build_prim_first_page(14, table)
    with pytest.raises(ValueError):
        page(0, 3, table)


def test_json_and_render(table):
    p = page(2, 3, table, INTEGRAL)
    doc = p.to_json()
    assert doc["schema"] == "1" and doc["r"] == 2
    cell = next(c for c in doc["cells"] if (c["i"], c["j"]) == (0, 3))
    assert FinAbGroup.from_json(cell["group"]) == C(12)
    text = p.render()
    assert "ℤ₁₂" in text.splitlines()[1]
    unknown = page(2, 13, table, THREE).render()
    assert "?" in unknown
