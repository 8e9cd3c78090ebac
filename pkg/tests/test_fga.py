"""Smith normal form, canonical groups, homomorphism quotients, localization."""

import random
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from cuspcob.fga import (
    INTEGRAL,
    ODD,
    FinAbGroup,
    GroupHom,
    Localization,
    determinant,
    group_from_presentation,
    hom_cokernel,
    hom_image,
    hom_kernel,
    identity,
    matmul,
    odd_part,
    p_primary_part,
    smith_normal_form,
)

small_ints = st.integers(min_value=-12, max_value=12)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def check_snf(a):
    u, d, v = smith_normal_form(a)
    m, n = len(a), len(a[0])
    assert matmul(matmul(u, a), v) == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    diag = [d[i][i] for i in range(min(m, n))]
    assert all(d[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    assert all(x >= 0 for x in diag)
    for a_, b_ in zip(diag, diag[1:]):
        assert (b_ % a_ == 0) if a_ else b_ == 0
    return diag


def minors_gcd(a, k):
    m, n = len(a), len(a[0])
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            g = gcd(g, determinant([[a[i][j] for j in cols] for i in rows]))
    return g


def test_snf_worked_example():
    u, d, v = smith_normal_form([[2, 4], [6, 8]])
    assert d == [[2, 0], [0, 4]]


def test_snf_500_random_matrices():
    rng = random.Random(20240611)
    for _ in range(500):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        check_snf(a)


@settings(max_examples=150, deadline=None, derandomize=True)
@given(matrices())
def test_snf_diagonal_matches_determinantal_divisors(a):
    diag = check_snf(a)
    prev = 1
    for k in range(1, len(diag) + 1):
        dk = minors_gcd(a, k)
        want = dk // prev if prev else 0
        assert diag[k - 1] == want
        prev = dk if dk else 0
        if not dk:
            assert all(x == 0 for x in diag[k - 1:])
            break


def test_empty_and_zero_matrices():
    assert group_from_presentation(3, []) == FinAbGroup(3)
    assert group_from_presentation(2, [[0, 0]]) == FinAbGroup(2)
    assert group_from_presentation(0, []) == FinAbGroup()


@pytest.mark.parametrize(
    "gens,rels,want",
    [
        (2, [[3, 0], [0, 8]], FinAbGroup(0, (24,))),
        (2, [[2, 0], [0, 12]], FinAbGroup(0, (2, 12))),
        (2, [[4, 0], [0, 6]], FinAbGroup(0, (2, 12))),
        (1, [[1]], FinAbGroup()),
        (3, [[2, 4, 0]], FinAbGroup(2, (2,))),
    ],
)
def test_presentations(gens, rels, want):
    assert group_from_presentation(gens, rels) == want


@settings(max_examples=100, deadline=None, derandomize=True)
@given(matrices(3, 3), st.integers(0, 10**6))
def test_presentation_invariant_under_unimodular_change(rels, seed):
    rng = random.Random(seed)
    n = len(rels[0])
    p = identity(n)
    for _ in range(6):  # random elementary column operations
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            c = rng.randint(-3, 3)
            for row in p:
                row[i] += c * row[j]
    q = identity(len(rels))
    if len(rels) > 1:
        q[0], q[1] = q[1], q[0]
    assert group_from_presentation(n, matmul(matmul(q, rels), p)) == group_from_presentation(n, rels)


def test_canonical_form_and_printing():
    g = FinAbGroup.from_orders([56, 9])
    assert g == FinAbGroup(0, (504,))
    assert str(FinAbGroup(0, (2, 12))) == "ℤ₂ ⊕ ℤ₁₂"
    assert str(FinAbGroup(1)) == "ℤ" and str(FinAbGroup()) == "0"
    assert FinAbGroup.from_json(g.to_json()) == g
    assert FinAbGroup.cyclic(2) + FinAbGroup.cyclic(3) == FinAbGroup.cyclic(6)
    with pytest.raises(ValueError):
        FinAbGroup(0, (4, 6))


def _elements(g):
    return list(product(*(range(o) for o in g.orders)))


def _order_profile(n, elements, orders):
    """Number of x with k·x = 0 for each k | n: determines a finite abelian group of order n."""
    return [
        sum(1 for x in elements if all((k * c) % o == 0 for c, o in zip(x, orders)))
        for k in range(1, n + 1)
        if n % k == 0
    ]


finite_groups = st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), min_size=0, max_size=2).map(FinAbGroup.from_orders)


@settings(max_examples=80, deadline=None, derandomize=True)
@given(finite_groups, finite_groups, st.integers(0, 10**6))
def test_kernel_image_cokernel_brute_force(src, tgt, seed):
    rng = random.Random(seed)
    cols = []
    for o in src.orders:
        # any column c with o·c = 0 in the target
        col = []
        for t in tgt.orders:
            step = t // gcd(t, o)
            col.append(step * rng.randint(0, t))
        cols.append(col)
    matrix = tuple(tuple(cols[j][i] for j in range(src.ngens)) for i in range(tgt.ngens))
    h = GroupHom(src, tgt, matrix)
    elements = _elements(src)
    images = {tuple(h(list(x))) for x in elements}
    kernel = [x for x in elements if not any(h(list(x)))]
    assert hom_kernel(h).order == len(kernel)
    assert hom_image(h).order == len(images)
    assert hom_cokernel(h).order * len(images) == tgt.order
    k = hom_kernel(h)
    assert _order_profile(k.order, _elements(k), k.orders) == _order_profile(k.order, kernel, src.orders)


def test_homomorphism_examples():
    z, z2, z4 = FinAbGroup(1), FinAbGroup.cyclic(2), FinAbGroup.cyclic(4)
    h = GroupHom(z, z2, ((1,),))
    assert hom_kernel(h) == z and hom_cokernel(h) == FinAbGroup()
    two = GroupHom(z4, z4, ((2,),))
    assert hom_kernel(two) == z2 and hom_cokernel(two) == z2 and hom_image(two) == z2
    with pytest.raises(ValueError):
        GroupHom(z2, z4, ((1,),))


def test_localization():
    g = FinAbGroup.from_orders([0, 56, 9])
    assert p_primary_part(g, 3) == FinAbGroup(1, (9,))
    assert odd_part(g) == FinAbGroup(1, (63,))
    assert INTEGRAL.apply(g) == g
    assert ODD.apply(FinAbGroup.cyclic(240)) == FinAbGroup.cyclic(15)
    assert Localization.parse("3") == Localization("primary", 3)
    with pytest.raises(ValueError):
        p_primary_part(g, 4)
    with pytest.raises(ValueError):
        Localization.parse("two")


@settings(max_examples=100, deadline=None, derandomize=True)
@given(st.lists(st.integers(0, 60), max_size=4))
def test_localization_is_idempotent_and_splits(orders):
    g = FinAbGroup.from_orders(orders)
    for loc in (ODD, Localization("primary", 3), Localization("primary", 2)):
        assert loc.apply(loc.apply(g)) == loc.apply(g)
    if g.is_finite:
        assert p_primary_part(g, 2).order * odd_part(g).order == g.order
