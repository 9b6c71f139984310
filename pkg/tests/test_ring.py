import json
import threading

import pytest
from hypothesis import given, strategies as st

from convring.formal_group import multiplicative_law
from convring.kernel import Multiplicities, char_zero_product, product_multiplicities
from convring.ring import (
    CacheMiss,
    ProductTable,
    RingElement,
    TableError,
    basis,
    char_zero_polynomial_coordinates,
    evaluate_polynomial,
    format_element,
    product_table,
    ring_add,
    ring_mul,
    ring_neg,
    ring_power,
    scalar_mul,
    zero,
)

elements = st.dictionaries(st.integers(1, 10), st.integers(-5, 5), max_size=4).map(RingElement)


def test_basis_and_zero():
    assert basis(1).coeffs == {1: 1}
    assert basis(4).coeffs == {4: 1}
    assert zero().coeffs == {} and not zero()
    assert RingElement({0: 5}) == zero()  # f_0 = 0
    with pytest.raises(ValueError):
        basis(0)


def test_group_operations():
    assert ring_add(RingElement({2: 1}), RingElement({2: -1})) == zero()
    assert scalar_mul(3, RingElement({1: 1, 5: 2})).coeffs == {1: 3, 5: 6}
    x = RingElement({3: 2, 7: -1})
    assert ring_add(x, zero()) == x
    assert ring_neg(x).coeffs == {3: -2, 7: 1}
    assert x - x == 0


def test_format():
    assert format_element(RingElement({1: 1, 4: 2})) == "f1 + 2 f4"
    assert format_element(RingElement({2: -1, 5: 3, 6: -2})) == "-f2 + 3 f5 - 2 f6"
    assert format_element(zero()) == "0"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_non_integrality_witness(p):
    table = ProductTable(p)
    x = basis(2) - 2 * basis(1)
    assert x and ring_mul(x, basis(p), table) == 0


@pytest.mark.parametrize("p", [0, 2, 3, 5, 7])
def test_two_relation(p):
    table = ProductTable(p)
    for n in range(2, 30):
        want = 2 * basis(n) if p and n % p == 0 else basis(n - 1) + basis(n + 1)
        assert ring_mul(basis(2), basis(n), table) == want


@given(elements)
def test_unit(x):
    assert ring_mul(basis(1), x, ProductTable(3)) == x


@given(elements, elements, elements)
def test_ring_axioms_on_combinations(x, y, z):
    t = ProductTable(2)
    assert ring_mul(x, y + z, t) == ring_mul(x, y, t) + ring_mul(x, z, t)
    assert ring_mul(ring_mul(x, y, t), z, t) == ring_mul(x, ring_mul(y, z, t), t)


def test_product_table_examples():
    assert product_table(0, 3).lookup(2, 3).as_dict() == {2: 1, 4: 1}
    assert product_table(2, 3).lookup(3, 3).as_dict() == {1: 1, 4: 2}
    assert product_table(3, 3).lookup(3, 3).as_dict() == {3: 3}


def test_table_symmetric_storage():
    t = product_table(2, 4)
    assert len(t) == 10
    assert t.lookup(4, 2) is t.lookup(2, 4)


def test_cache_miss_policy():
    t = ProductTable(3, fill_on_miss=False)
    with pytest.raises(CacheMiss):
        ring_mul(basis(2), basis(3), t)
    t = ProductTable.from_json(product_table(3, 3).to_json(), fill_on_miss=False)
    assert ring_mul(basis(2), basis(3), t) == 2 * basis(3)


def test_serialization_is_canonical():
    a = product_table(2, 7).to_json()
    b = product_table(2, 7, workers=4).to_json()
    assert a == b
    doc = json.loads(a)
    assert [(c["m"], c["n"]) for c in doc["cells"]] == sorted((c["m"], c["n"]) for c in doc["cells"])
    assert ProductTable.from_json(a).to_json() == a


def test_csv_columns():
    text = product_table(0, 2).to_csv().splitlines()
    assert text[0] == "m,n,i,lambda"
    assert text[1:] == ["1,1,1,1", "1,2,2,1", "2,2,1,1", "2,2,3,1"]


@pytest.mark.parametrize(
    "cell",
    [
        {"m": 2, "n": 3, "lambda": [[2, 1], [5, 1]]},  # wrong dimension
        {"m": 3, "n": 3, "lambda": [[3, 3]]},  # right sums, wrong largest block at p=2
        {"m": 3, "n": 2, "lambda": [[2, 1], [4, 1]]},  # stored with m > n
        {"m": 2, "n": 2, "lambda": [[0, 4]]},  # f_0 index
    ],
)
def test_corrupt_tables_rejected(cell):
    text = json.dumps({"char": 2, "max_rank": 3, "cells": [cell]})
    with pytest.raises(TableError):
        ProductTable.from_json(text)


def test_not_a_table():
    with pytest.raises(TableError):
        ProductTable.from_json("[1, 2]")


def test_concurrent_fill():
    t = ProductTable(5)
    errors = []

    def work(offset):
        try:
            for m in range(1, 12):
                t.lookup(m, (m + offset) % 11 + 1)
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(6)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert not errors
    fresh = ProductTable(5)
    for (m, n), lam in t.cells():
        assert lam == fresh.lookup(m, n)


def test_table_with_other_law_matches():
    a = ProductTable(3, law=multiplicative_law(3, 12, 12)).populate(8)
    b = ProductTable(3).populate(8)
    assert a.cells() == b.cells()


def test_char_zero_table_against_elimination():
    # the p = 0 table is filled from the closed form; check it against ranks
    t = ProductTable(0).populate(20)
    for (m, n), lam in t.cells():
        assert lam == char_zero_product(m, n)
        assert lam == product_multiplicities(m, n, 0, method="graded")


@pytest.mark.parametrize("n, poly", [(1, [1]), (2, [0, 1]), (3, [-1, 0, 1]), (4, [0, -2, 0, 1])])
def test_polynomial_coordinates(n, poly):
    assert char_zero_polynomial_coordinates(basis(n)) == poly


def test_polynomial_round_trip():
    t = ProductTable(0)
    for n in range(1, 21):
        coords = char_zero_polynomial_coordinates(basis(n), t)
        assert evaluate_polynomial(coords, t) == basis(n)
    x = 3 * basis(5) - basis(2)
    assert evaluate_polynomial(char_zero_polynomial_coordinates(x), t) == x


def test_polynomial_coordinates_reject_positive_char():
    with pytest.raises(ValueError):
        char_zero_polynomial_coordinates(basis(3), ProductTable(2))


def test_power():
    t = ProductTable(2)
    assert ring_power(basis(2), 2, t) == 2 * basis(2)
    assert ring_power(basis(4), 3, t) == 16 * basis(4)
    assert ring_power(basis(3), 0, t) == basis(1)


def test_multiplicities_cells_are_exact_ints():
    lam = ProductTable(2).lookup(16, 16)
    assert isinstance(lam, Multiplicities) and lam.as_dict() == {16: 16}
