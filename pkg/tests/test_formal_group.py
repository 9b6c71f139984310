import json

import numpy as np
import pytest

from convring.formal_group import (
    GroupLaw,
    LawError,
    additive_law,
    check_law,
    evaluate_on_nilpotents,
    law_from_json,
    law_operator_blocks,
    law_to_json,
    multiplicative_law,
    validate_law,
)


def images(mat, m, n):
    """Column images as {basis label: {label: coeff}} on monomials x^a y^b."""
    label = lambda k: (k // n, k % n)
    out = {}
    for j in range(m * n):
        out[label(j)] = {label(i): int(mat[i, j]) for i in range(m * n) if mat[i, j]}
    return out


def test_additive_coeffs():
    assert dict(additive_law(2, 3, 3).coeffs) == {(1, 0): 1, (0, 1): 1}
    assert dict(additive_law(0, 5, 5).coeffs) == {(1, 0): 1, (0, 1): 1}


def test_multiplicative_coeffs():
    law = multiplicative_law(3, 4, 4)
    assert dict(law.coeffs) == {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    assert dict(multiplicative_law(2, 2, 2).coeffs) == dict(law.coeffs)


def test_unit_axioms_on_formal_arguments():
    # F(x, 0) keeps only the b = 0 terms, F(0, y) only the a = 0 terms
    for law in (additive_law(2, 3, 3), multiplicative_law(3, 4, 4)):
        assert {a: c for (a, b), c in law.coeffs.items() if b == 0} == {1: 1}
        assert {b: c for (a, b), c in law.coeffs.items() if a == 0} == {1: 1}


def test_validate_law():
    assert validate_law(additive_law(2, 3, 3))
    assert validate_law(multiplicative_law(5, 6, 6))
    bad = GroupLaw(2, 3, 3, {(1, 0): 1, (0, 1): 1, (2, 0): 1})
    assert not validate_law(bad)
    with pytest.raises(LawError, match=r"\(2, 0\)"):
        check_law(bad)


def test_coefficients_reduced_mod_p():
    law = GroupLaw(3, None, None, {(1, 0): 4, (0, 1): 1, (1, 1): 3})
    assert dict(law.coeffs) == {(1, 0): 1, (0, 1): 1}
    assert law.is_additive()


def test_additive_operator_m2_n2():
    mat = evaluate_on_nilpotents(additive_law(0, 2, 2), 2, 2)
    one, x, y, xy = (0, 0), (1, 0), (0, 1), (1, 1)
    assert images(mat, 2, 2) == {one: {x: 1, y: 1}, x: {xy: 1}, y: {xy: 1}, xy: {}}


def test_multiplicative_operator_m2_n2_p2():
    mat = evaluate_on_nilpotents(multiplicative_law(2, 2, 2), 2, 2)
    one, x, y, xy = (0, 0), (1, 0), (0, 1), (1, 1)
    assert images(mat, 2, 2) == {one: {x: 1, y: 1, xy: 1}, x: {xy: 1}, y: {xy: 1}, xy: {}}


@pytest.mark.parametrize("law", [additive_law(2, 1, 1), multiplicative_law(0, 1, 1)])
def test_one_by_one_is_zero(law):
    mat = evaluate_on_nilpotents(law, 1, 1)
    assert mat.shape == (1, 1) and mat[0, 0] == 0


@pytest.mark.parametrize("m, n", [(2, 3), (3, 3), (4, 2), (5, 5)])
def test_nilpotent_at_m_plus_n_minus_1(m, n):
    mat = evaluate_on_nilpotents(multiplicative_law(0, m, n), m, n)
    power = np.linalg.matrix_power(mat.astype(np.int64), m + n - 1)
    assert not power.any()


@pytest.mark.parametrize("law_fn", [additive_law, multiplicative_law])
def test_sparsity_contract(law_fn):
    mat = evaluate_on_nilpotents(law_fn(5, 6, 7), 6, 7)
    assert (np.count_nonzero(mat, axis=0) <= 3).all()


def test_kron_ordering():
    m, n = 3, 4
    J = lambda k: np.eye(k, k=-1, dtype=np.int64)
    expected = np.kron(J(m), np.eye(n, dtype=np.int64)) + np.kron(np.eye(m, dtype=np.int64), J(n))
    assert (evaluate_on_nilpotents(additive_law(7, m, n), m, n) == expected).all()


def test_operator_blocks_match_dense():
    m, n, p = 3, 4, 5
    law = multiplicative_law(p, m, n)
    blocks = law_operator_blocks(law, m, n)
    dense = evaluate_on_nilpotents(law, m, n)
    # reassemble: y-index is the block index, x-polynomials act by shifts
    rebuilt = np.zeros_like(dense)
    for r in range(n):
        for c in range(n):
            for a, coeff in enumerate(blocks[r, c]):
                for src in range(m - a):
                    rebuilt[(src + a) * n + r, src * n + c] += coeff
    assert (rebuilt % p == dense).all()


def test_bounds_are_enforced():
    law = GroupLaw(2, 3, 3, {(1, 0): 1, (0, 1): 1, (1, 2): 1})
    with pytest.raises(LawError):
        evaluate_on_nilpotents(law, 4, 3)
    assert evaluate_on_nilpotents(law, 3, 3).shape == (9, 9)


def test_json_round_trip(tmp_path):
    path = tmp_path / "law.json"
    path.write_text(json.dumps({"p": 3, "coeffs": [[1, 0, 1], [0, 1, 1], [1, 1, 2], [2, 1, 1]]}))
    law = law_from_json(path)
    assert law.char == 3 and law.xbound is None
    assert law.coeff(1, 1) == 2
    again = law_from_json(law_to_json(law))
    assert dict(again.coeffs) == dict(law.coeffs)


def test_json_unit_violation_names_bidegree():
    with pytest.raises(LawError, match=r"\(0, 3\)"):
        law_from_json({"p": 2, "coeffs": [[1, 0, 1], [0, 1, 1], [0, 3, 1]]})


def test_json_missing_keys():
    with pytest.raises(LawError):
        law_from_json({"coeffs": []})
