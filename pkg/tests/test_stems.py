"""Stable stems table: loading, validation, products."""

import copy
import json
from itertools import product

import pytest

from cuspcob.fga import FinAbGroup, Localization, hom_cokernel
from cuspcob.stems import (
    KNOWN_STEMS,
    OutOfRange,
    StemTableError,
    UnknownProduct,
    bundled_stems_path,
    default_table,
    dumps,
    load_stem_table,
)

THREE = Localization("primary", 3)


@pytest.fixture(scope="module")
def table():
    return default_table()


@pytest.fixture
def doc():
    return json.loads(bundled_stems_path().read_text(encoding="utf-8"))


# classical values, written out independently of the bundled file
CLASSICAL = {
    0: FinAbGroup(1), 1: FinAbGroup(0, (2,)), 2: FinAbGroup(0, (2,)), 3: FinAbGroup(0, (24,)),
    4: FinAbGroup(), 5: FinAbGroup(), 6: FinAbGroup(0, (2,)), 7: FinAbGroup(0, (240,)),
    8: FinAbGroup(0, (2, 2)), 9: FinAbGroup(0, (2, 2, 2)), 10: FinAbGroup(0, (6,)),
    11: FinAbGroup(0, (504,)),
}


def test_groups_match_classical_values(table):
    for n, g in CLASSICAL.items():
        assert table.group(n) == g == KNOWN_STEMS[n]


def test_negative_and_out_of_range(table):
    assert table.group(-1) == FinAbGroup()
    with pytest.raises(OutOfRange):
        table.stem(12)


def test_three_primary_parts(table):
    want = {0: FinAbGroup(1), 3: FinAbGroup.cyclic(3), 7: FinAbGroup.cyclic(3),
            10: FinAbGroup.cyclic(3), 11: FinAbGroup.cyclic(9)}
    for n in range(12):
        assert THREE.apply(table.group(n)) == want.get(n, FinAbGroup())
    assert table.three_primary_label(3) == "ℤ₃⟨α₁⟩"
    assert table.three_primary_label(11) == "ℤ₉⟨α₃⟩"
    assert table.three_primary_label(5) == ""


def test_classical_table_labels(table):
    assert table.stem(8).label() == "ℤ₂²"
    assert table.stem(9).label() == "ℤ₂³"
    assert table.stem(11).label() == "ℤ₅₆×ℤ₉"


def test_known_products(table):
    eta, nu, a1 = table.named("eta"), table.named("nu"), table.named("alpha1")
    eta2 = table.compose(eta, eta)
    assert eta2 == table.named("eta2")
    assert table.compose(eta, eta2) == 12 * nu
    assert table.compose(a1, table.named("alpha2")).is_zero
    assert table.compose(a1, a1).is_zero
    assert table.compose(table.named("iota"), nu) == nu


def test_unknown_product_raises(table):
    with pytest.raises(UnknownProduct):
        table.compose(table.named("eta"), table.named("nu2"))


def _pairs(table):
    names = table.names()
    for a, b in product(names, names):
        x, y = table.named(a), table.named(b)
        if x.degree + y.degree > table.max_degree:
            continue
        try:
            xy, yx = table.compose(x, y), table.compose(y, x)
        except UnknownProduct:
            continue
        yield x, y, xy, yx


def test_skew_commutativity(table):
    count = 0
    for x, y, xy, yx in _pairs(table):
        sign = -1 if (x.degree * y.degree) % 2 else 1
        assert xy == sign * yx
        count += 1
    assert count > 20


def test_bilinearity_on_small_groups(table):
    a1 = table.named("alpha1")
    for n in range(0, 9):
        g = table.stem(n)
        if not g.orders or g.rank:
            continue
        for coords in product(*(range(o) for o in g.orders)):
            x = table.element(n, coords)
            want = table.zero(n + 3)
            for c, j in zip(coords, range(len(coords))):
                want = want + c * table.compose(a1, table.generator(n, j))
            assert table.compose(a1, x) == want


def test_alpha1_on_three_primary_parts(table):
    # nonzero only on π^s(0) → π^s(3) after 3-localization
    a1 = table.named("alpha1")
    for n in range(0, 9):
        h = THREE.apply_hom(table.left_mult_hom(a1, n))
        if n == 0:
            assert hom_cokernel(h) == FinAbGroup()
        else:
            assert h.is_zero


def test_round_trip(table):
    again = load_stem_table(dumps(table))
    assert again.to_json() == table.to_json()
    assert json.loads(dumps(table))["schema"] == "1"


@pytest.mark.parametrize(
    "corrupt,match",
    [
        (lambda d: d["groups"][3].update(torsion=[12]), "expected"),
        (lambda d: d["groups"].pop(5), "missing"),
        (lambda d: d["groups"][8].update(generators=["x"]), "generator names"),
        (lambda d: d["three_primary"][0].update(element=[3]), "generate"),
        (lambda d: d["products"].append({"lhs": "eta", "rhs": "nu", "result": {"n": 5, "coords": []}}), "graded"),
        (lambda d: d["products"].append({"lhs": "eta", "rhs": "eta", "result": {"n": 2, "coords": [0]}}), "skew|conflict|disagree"),
        (lambda d: d.update(max_degree="eleven"), "schema"),
        (lambda d: d["three_primary"].append({"n": 3, "name": "eta", "element": [8]}), "duplicate"),
    ],
)
def test_corrupted_tables_rejected(doc, corrupt, match):
    bad = copy.deepcopy(doc)
    corrupt(bad)
    with pytest.raises(StemTableError, match=match):
        load_stem_table(json.dumps(bad))


def test_not_json():
    with pytest.raises(StemTableError):
        load_stem_table("{not json")


def test_env_override(tmp_path, monkeypatch, table):
    from cuspcob import stems

    path = tmp_path / "stems.json"
    path.write_text(dumps(table), encoding="utf-8")
    monkeypatch.setenv(stems.STEMS_ENV, str(path))
    assert stems.default_table().to_json() == table.to_json()
