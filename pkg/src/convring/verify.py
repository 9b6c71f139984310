"""Property suites run by ``convring verify``.

Each suite stops at its first counterexample and reports it as
``(m, n, p, expected, got)`` (with suite-specific meanings for m and n).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .formal_group import additive_law, multiplicative_law
from .kernel import (
    char_zero_product,
    hilbert_profile,
    max_block_index,
    multiplicities_from_hilbert,
    multiplicities_from_ranks,
    operator_rank_profile,
    product_multiplicities,
    unipotent_tensor_multiplicities,
)
from .modp import binomial_exact, lucas_binomial_mod, lucas_zero_block
from .ring import ProductTable, basis, ring_mul
from .subring import (
    NotInImage,
    conductor_check,
    conductor_generator,
    fiber_ring_check,
    idempotent_check,
    image_membership,
    phi_map,
    phi_matrix,
    phi_preimage,
    random_element,
    smith_normal_form,
    square_leading_term_check,
)

SUITES = ("kernel", "laws", "lucas", "structure", "ring")
LUCAS_BASES = {2: (2, 4), 3: (3, 9), 5: (5,)}


class Counterexample(Exception):
    def __init__(self, m, n, p, expected, got, what=""):
        super().__init__(what)
        self.row = (m, n, p, expected, got)
        self.what = what


@dataclass
class SuiteReport:
    suite: str
    checked: int = 0
    failure: dict | None = None
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure is None

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checked": self.checked,
            "params": self.params,
            "failure": self.failure,
        }


def _expect(expected, got, m, n, p, what):
    if expected != got:
        raise Counterexample(m, n, p, str(expected), str(got), what)


def _run(name: str, params: dict, body) -> SuiteReport:
    report = SuiteReport(name, params=params)
    try:
        for _ in body():
            report.checked += 1
    except Counterexample as exc:
        m, n, p, expected, got = exc.row
        report.failure = {"m": m, "n": n, "p": p, "expected": expected, "got": got, "check": exc.what}
    return report


def kernel_suite(chars, max_rank: int) -> SuiteReport:
    """Dimension, summand, nilpotence, symmetry, largest block and the
    rank/Hilbert/closed-form agreement for all m, n <= max_rank."""

    def body():
        for p in chars:
            for m in range(1, max_rank + 1):
                for n in range(1, max_rank + 1):
                    profile = operator_rank_profile(m, n, p, method="graded")
                    lam = multiplicities_from_ranks(profile)
                    _expect(m * n, lam.total_dimension(), m, n, p, "sum i*lambda_i = mn")
                    _expect(min(m, n), lam.total_count(), m, n, p, "sum lambda_i = min(m, n)")
                    _expect(True, lam.max_index() < m + n, m, n, p, "lambda_i = 0 for i >= m+n")
                    _expect(max_block_index(m, n, p), lam.max_index(), m, n, p, "largest block")
                    hil = multiplicities_from_hilbert(hilbert_profile(m, n, p))
                    _expect(lam, hil, m, n, p, "ranks vs Hilbert function")
                    if m > n:
                        other = multiplicities_from_ranks(operator_rank_profile(n, m, p, method="graded"))
                        _expect(other, lam, m, n, p, "symmetry")
                    if p == 0 or p > m + n - 2:
                        _expect(char_zero_product(m, n), lam, m, n, p, "closed form")
                    yield

    return _run("kernel", {"chars": list(chars), "max": max_rank}, body)


def laws_suite(chars, max_rank: int) -> SuiteReport:
    """Additive law, multiplicative law and unipotent tensor product agree."""

    def body():
        for p in chars:
            if p == 0:
                continue
            for m in range(1, max_rank + 1):
                for n in range(1, max_rank + 1):
                    add = product_multiplicities(m, n, p, additive_law(p, m, n), method="graded")
                    mul = product_multiplicities(m, n, p, multiplicative_law(p, m, n), method="module")
                    uni = unipotent_tensor_multiplicities(m, n, p)
                    _expect(add, mul, m, n, p, "additive vs multiplicative law")
                    _expect(add, uni, m, n, p, "additive law vs unipotent tensor product")
                    yield

    return _run("laws", {"chars": list(chars), "max": max_rank}, body)


def lucas_suite(chars, bound: int = 2000, zero_block_max_q: int = 125) -> SuiteReport:
    """q-adic Lucas congruence against exact binomials, and the zero block."""

    def body():
        for p in chars:
            if p == 0:
                continue
            qs = LUCAS_BASES.get(p, (p, p * p))
            for a in range(bound + 1):
                for b in range(a + 1):
                    exact = binomial_exact(a, b) % p
                    for q in qs:
                        _expect(exact, lucas_binomial_mod(a, b, p, q), a, b, p, f"Lucas q={q}")
                yield
            q = p
            while q <= zero_block_max_q:
                for m in range(q + 1):
                    _expect(True, lucas_zero_block(m, q, p), m, q, p, "zero block")
                    yield
                q *= p

    return _run("lucas", {"chars": list(chars), "bound": bound}, body)


def structure_suite(chars, max_nu: int, samples: int = 500, seed: int = 0) -> SuiteReport:
    """Phi_nu round trips, Smith form, conductor maximality, fiber ring,
    idempotents and reducedness witnesses."""
    rng = random.Random(seed)

    def body():
        for p in chars:
            if p == 0:
                continue
            for nu in range(max_nu + 1):
                _expect(
                    [p**i for i in range(nu + 1)],
                    smith_normal_form(phi_matrix(p, nu)),
                    nu,
                    None,
                    p,
                    "Smith form of Phi",
                )
                for _ in range(samples):
                    x = random_element(p, nu, rng)
                    t = phi_map(x)
                    _expect(True, image_membership(t, p, nu), nu, str(x.coeffs), p, "image congruences")
                    _expect(x, phi_preimage(t, p, nu), nu, str(t), p, "preimage of image")
                    t2 = tuple(rng.randint(-100, 100) for _ in range(nu + 1))
                    if image_membership(t2, p, nu):
                        _expect(t2, phi_map(phi_preimage(t2, p, nu)), nu, str(t2), p, "image of preimage")
                    else:
                        try:
                            phi_preimage(t2, p, nu)
                        except NotInImage:
                            pass
                        else:
                            raise Counterexample(nu, str(t2), p, "NotInImage", "preimage", "non-member")
                    if not x.is_zero():
                        _expect(True, square_leading_term_check(x), nu, str(x.coeffs), p, "x^2 leading term")
                if nu >= 1:
                    c = conductor_generator(p, nu)
                    _expect(True, conductor_check(c, p, nu), nu, str(c), p, "conductor")
                    for k in range(nu + 1):
                        smaller = list(c)
                        smaller[k] //= p
                        _expect(False, conductor_check(smaller, p, nu), nu, str(smaller), p, "conductor maximal")
                    _expect(True, fiber_ring_check(p, nu), nu, None, p, "fiber ring")
                _expect(True, idempotent_check(p, nu), nu, None, p, "idempotents")
                yield

    return _run("structure", {"chars": list(chars), "nu": max_nu}, body)


def ring_suite(chars, max_index: int = 12) -> SuiteReport:
    """Associativity and commutativity on basis triples; (f_2 - 2) f_p = 0."""

    def body():
        for p in chars:
            table = ProductTable(p)
            f = basis
            for a in range(1, max_index + 1):
                for b in range(1, max_index + 1):
                    ab = ring_mul(f(a), f(b), table)
                    _expect(ab, ring_mul(f(b), f(a), table), a, b, p, "commutativity")
                    for c in range(1, max_index + 1):
                        left = ring_mul(ab, f(c), table)
                        right = ring_mul(f(a), ring_mul(f(b), f(c), table), table)
                        _expect(left, right, (a, b), c, p, "associativity")
                    yield
            if p:
                x = f(2) - 2 * f(1)
                _expect(0, ring_mul(x, f(p), table), 2, p, p, "(f2 - 2 f1) f_p = 0")

    return _run("ring", {"chars": list(chars), "max": max_index}, body)


def run_suites(names, chars, max_rank: int, nu: int) -> list[SuiteReport]:
    reports = []
    for name in names:
        if name == "kernel":
            reports.append(kernel_suite(chars, max_rank))
        elif name == "laws":
            reports.append(laws_suite(chars, max_rank))
        elif name == "lucas":
            reports.append(lucas_suite(chars))
        elif name == "structure":
            reports.append(structure_suite(chars, nu))
        elif name == "ring":
            reports.append(ring_suite(chars, min(max_rank, 12)))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return reports
