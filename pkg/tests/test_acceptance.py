"""The ten acceptance criteria, each at its stated tolerance and time limit.

Every criterion prints one PASS/FAIL line (collected in the terminal
summary); run this file directly to get just those lines.
"""

import random
from contextlib import contextmanager
from time import perf_counter

import pytest

from cuspcob import cli
from cuspcob.fga import (
    INTEGRAL,
    ODD,
    FinAbGroup,
    determinant,
    element_order,
    matmul,
    odd_part,
    p_primary_part,
    smith_normal_form,
)
from cuspcob.poly import UniPoly, count_real_roots, isolate_real_roots
from cuspcob.ss_engine import (
    THREE,
    cusp_cob_sequence,
    d_squared_violations,
    page,
    prim_cusp_3primary,
    prim_d2,
    prim_fold_group,
    three_primary_closed_form,
)
from cuspcob.stems import UnknownProduct, default_table
from cuspcob.verify import verify_appendix1, verify_appendix2

Z, O = FinAbGroup(1), FinAbGroup()


def C(n):
    return FinAbGroup.cyclic(n)


@contextmanager
def criterion(log, num, title, limit=None):
    start = perf_counter()
    try:
        yield
        elapsed = perf_counter() - start
        if limit is not None and elapsed > limit:
            raise AssertionError(f"took {elapsed:.2f}s, limit {limit}s")
    except BaseException as exc:
        line = f"{title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        log.append((num, False, line))
        print(f"FAIL  {num}. {line}")
        raise
    line = f"{title} ({elapsed:.2f}s)"
    log.append((num, True, line))
    print(f"PASS  {num}. {line}")


@pytest.fixture(scope="module")
def table():
    return default_table()


def test_1_stems_table(acceptance_log, table):
    with criterion(acceptance_log, 1, "stems table incl. 3-primary generators", 1.0):
        text = cli.render_stems(table).splitlines()
        cells = [[c.strip() for c in line.split("|")][1:] for line in text[::2]]
        assert cells[0] == [str(n) for n in range(12)]
        assert cells[1] == ["ℤ", "ℤ₂", "ℤ₂", "ℤ₂₄", "0", "0", "ℤ₂", "ℤ₂₄₀", "ℤ₂²", "ℤ₂³", "ℤ₆", "ℤ₅₆×ℤ₉"]
        assert cells[3] == ["ℤ", "", "", "ℤ₃⟨α₁⟩", "", "", "", "ℤ₃⟨α₂⟩", "", "", "ℤ₃⟨β₁⟩", "ℤ₉⟨α₃⟩"]


def test_2_first_page(acceptance_log, table):
    with criterion(acceptance_log, 2, "first page cells j ≤ 3", 1.0):
        p = page(1, 3, table, INTEGRAL)
        want = {(0, 3): C(24), (1, 3): C(2), (2, 3): C(2), (1, 2): C(2), (2, 2): Z, (1, 1): Z, (0, 0): Z}
        for cell, g in want.items():
            assert p.cells[cell] == g, cell


def test_3_second_page(acceptance_log, table):
    with criterion(acceptance_log, 3, "second page cells j ≤ 3", 1.0):
        p = page(2, 3, table, INTEGRAL)
        want = {(0, 3): C(12), (0, 1): O, (0, 2): O, (1, 2): O, (1, 3): O, (1, 1): Z, (2, 2): Z}
        for cell, g in want.items():
            assert p.cells[cell] == g, cell


def test_4_d2_order(acceptance_log, table):
    with criterion(acceptance_log, 4, "d²(ι₂) has order 6 in ℤ₁₂, 3-part order 3"):
        d = prim_d2(2, table, INTEGRAL)
        assert d.target == C(12)
        assert element_order(d([1]), d.target.orders) == 6
        d3 = prim_d2(2, table, THREE)
        assert d3.target == C(3) and element_order(d3([1]), d3.target.orders) == 3


def test_5_fold_odd_parts(acceptance_log, table):
    with criterion(acceptance_log, 5, "odd part of prim fold group, n = 2..11", 5.0):
        for n in range(2, 12):
            got = prim_fold_group(n, table).odd.total
            assert got == odd_part(table.group(n) + table.group(n - 2)), n


def test_6_three_primary_pieces(acceptance_log, table):
    with criterion(acceptance_log, 6, "3-primary E∞ pieces vs closed formulas, n = 4..11", 5.0):
        for n in range(4, 12):
            assert prim_cusp_3primary(n, table).pieces == three_primary_closed_form(n, table), n


# Hand oracle for the cusp cobordism ends: odd parts of π^s(0..11) typed in
# from the classical table, and α₁ acts nontrivially on odd parts only via
# π^s(0) → π^s(3), which it maps onto the ℤ₃.
ODD_STEMS = {0: Z, 1: O, 2: O, 3: C(3), 4: O, 5: O, 6: O, 7: C(15), 8: O, 9: O, 10: C(3), 11: C(63)}


def hand_ends(n):
    def stem(m):
        return ODD_STEMS.get(m, O)

    sub = O if n == 3 else stem(n)  # coker of α₁ into degree n
    quo = Z if n == 4 else stem(n - 4)  # ker of α₁ out of degree n-4; 3ℤ ≅ ℤ when n = 4
    return sub, quo


def test_7_cusp_cob_spot_values(acceptance_log, table):
    with criterion(acceptance_log, 7, "cusp cobordism ends n = 0, 3, 4, 10 (+ hand oracle for all n)"):
        ends = {n: cusp_cob_sequence(n, table) for n in range(12)}
        assert (ends[0].sub, ends[0].quotient) == (Z, O)
        assert tuple(p_primary_part(g, 3) for g in (ends[3].sub, ends[3].quotient)) == (O, O)
        assert ends[4].quotient == Z
        assert tuple(p_primary_part(g, 3) for g in (ends[10].sub, ends[10].quotient)) == (C(3), O)
        for n, ans in ends.items():
            assert (ans.sub, ans.quotient) == hand_ends(n), n


APPENDIX1_CHECKS = {
    "dsigma2-matrix", "normal-orthogonality", "normal-vanishes-on-singular-set", "singular-set",
    "singular-image", "v1-tangent", "v2-limit", "v3-limit", "normal-sum", "normal-difference",
    "detM-expansion", "detM-constant-term", "detM-sos-identity", "detM-positivity",
    "boundary-map", "boundary-framing",
}


def test_8_appendix1(acceptance_log):
    with criterion(acceptance_log, 8, "cusp link framing identities, exact", 10.0):
        report = verify_appendix1()
        names = {c.name for c in report.checks}
        assert APPENDIX1_CHECKS <= names, APPENDIX1_CHECKS - names
        assert report.passed, "; ".join(f"{c.name}: {c.residual}" for c in report.failures())


def test_9_appendix2(acceptance_log):
    with criterion(acceptance_log, 9, "Vandermonde k = 2..5, strata, orthant faces, multiple points", 20.0):
        report = verify_appendix2(r=4, samples=20, seed=0, orthant_samples=100)
        names = [c.name for c in report.checks]
        assert names[:4] == [f"vandermonde-k{k}" for k in range(2, 6)]
        assert report.passed, "; ".join(c.name for c in report.failures())


def test_10_property_suites(acceptance_log, table):
    with criterion(acceptance_log, 10, "SNF ×500, Sturm vs bisection ×50, d∘d = 0, skew-commutativity", 20.0):
        rng = random.Random(10)
        for _ in range(500):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            a = [[rng.randint(-30, 30) for _ in range(n)] for _ in range(m)]
            u, d, v = smith_normal_form(a)
            assert matmul(matmul(u, a), v) == d
            assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
            diag = [d[i][i] for i in range(min(m, n))]
            assert all(d[i][j] == 0 for i in range(m) for j in range(n) if i != j)
            assert all(x >= 0 for x in diag)
            assert all((y % x == 0) if x else y == 0 for x, y in zip(diag, diag[1:]))

        for _ in range(50):
            deg = rng.randint(1, 6)
            p = UniPoly([rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-2, -1, 1, 2])])
            assert count_real_roots(p) == len(isolate_real_roots(p))

        for loc in (INTEGRAL, ODD, THREE):
            for r in (1, 2, 3):
                jmax = 5 if (loc is INTEGRAL and r == 3) else 13
                for kw in ({}, {"columns": 2}, {"middle_zero": True}):
                    assert d_squared_violations(page(r, jmax, table, loc, **kw)) == []

        pairs = 0
        for a in table.names():
            for b in table.names():
                x, y = table.named(a), table.named(b)
                if x.degree + y.degree > table.max_degree:
                    continue
                try:
                    xy, yx = table.compose(x, y), table.compose(y, x)
                except UnknownProduct:
                    continue
                sign = -1 if (x.degree * y.degree) % 2 else 1
                assert xy == sign * yx, (a, b)
                pairs += 1
        assert pairs > 0


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
