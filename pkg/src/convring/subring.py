"""Arithmetic of the subrings R_nu = Z f_1 + Z f_p + ... + Z f_(p^nu) and
their union R_inf.

Products of generators are f_(p^i) f_(p^j) = p^min(i,j) f_(p^max(i,j)).
The embedding Phi_nu: R_nu -> Z^(nu+1) sends f_(p^i) to
(0, ..., 0, p^i, ..., p^i) with i leading zeros; its image is cut out by
b_j = b_(j-1) mod p^j, and Z^(nu+1) is the normalization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .modp import char_of
from .ring import ProductTable, RingElement, basis, ring_mul

EmbeddedTuple = tuple


class NotInImage(ValueError):
    """The tuple violates the image congruences, so it has no preimage."""


def _prime(p) -> int:
    p = char_of(p)
    if p == 0:
        raise ValueError("subrings R_nu are defined for p > 0")
    return p


@dataclass(frozen=True)
class SubringElement:
    """sum_i coeffs[i] * f_(p^i), i = 0 .. nu.  Coefficients may be Fractions
    when working in R_nu tensor Q."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", _prime(self.p))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a subring element needs nu + 1 >= 1 coordinates")

    @property
    def nu(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def generator(cls, p, nu: int, i: int) -> "SubringElement":
        """f_(p^i) inside R_nu."""
        if not 0 <= i <= nu:
            raise ValueError(f"generator index {i} outside 0..{nu}")
        return cls(p, tuple(int(k == i) for k in range(nu + 1)))

    @classmethod
    def zero(cls, p, nu: int) -> "SubringElement":
        return cls(p, (0,) * (nu + 1))

    def _check(self, other: "SubringElement"):
        if (self.p, self.nu) != (other.p, other.nu):
            raise ValueError(
                f"mismatched subrings: (p={self.p}, nu={self.nu}) vs (p={other.p}, nu={other.nu})"
            )

    def __add__(self, other):
        if not isinstance(other, SubringElement):
            return NotImplemented
        self._check(other)
        return SubringElement(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return SubringElement(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SubringElement):
            return subring_mul(self, other)
        if isinstance(other, Rational):
            return SubringElement(self.p, tuple(other * a for a in self.coeffs))
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, Rational):
            return SubringElement(self.p, tuple(c * a for a in self.coeffs))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def extended(self, nu: int) -> "SubringElement":
        """The same element viewed in R_nu for a larger nu."""
        if nu < self.nu:
            raise ValueError("can only extend to a larger nu")
        return SubringElement(self.p, self.coeffs + (0,) * (nu - self.nu))

    def to_ring_element(self) -> RingElement:
        if any(Fraction(a).denominator != 1 for a in self.coeffs):
            raise ValueError("only integral elements live in R")
        return RingElement({self.p**i: int(a) for i, a in enumerate(self.coeffs)})

    @classmethod
    def from_ring_element(cls, x: RingElement, p, nu: int) -> "SubringElement":
        p = _prime(p)
        index = {p**i: i for i in range(nu + 1)}
        coeffs = [0] * (nu + 1)
        for n, c in x.coeffs.items():
            if n not in index:
                raise ValueError(f"f{n} is not in R_{nu} for p={p}")
            coeffs[index[n]] = c
        return cls(p, tuple(coeffs))


def subring_mul(x: SubringElement, y: SubringElement) -> SubringElement:
    """Bilinear extension of f_(p^i) f_(p^j) = p^min(i,j) f_(p^max(i,j))."""
    x._check(y)
    p = x.p
    out = [0] * (x.nu + 1)
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if b:
                out[max(i, j)] += a * b * p ** min(i, j)
    return SubringElement(p, tuple(out))


def phi_map(x: SubringElement) -> EmbeddedTuple:
    """(phi_0(x), ..., phi_nu(x)) with phi_k(x) = sum_{i <= k} coeffs[i] p^i."""
    out = []
    acc = 0
    for i, a in enumerate(x.coeffs):
        acc += a * x.p**i
        out.append(acc)
    return tuple(out)


def phi_matrix(p, nu: int) -> list[list[int]]:
    """Column i is phi_map(f_(p^i)); lower triangular with diagonal p^i."""
    p = _prime(p)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    return [[p**i if i <= k else 0 for i in range(nu + 1)] for k in range(nu + 1)]


def image_membership(t: Sequence[int], p, nu: int) -> bool:
    """True iff b_j = b_(j-1) mod p^j for 1 <= j <= nu."""
    p = _prime(p)
    if len(t) != nu + 1:
        raise ValueError(f"expected a tuple of length {nu + 1}, got {len(t)}")
    return all((t[j] - t[j - 1]) % p**j == 0 for j in range(1, nu + 1))


def phi_preimage(t: Sequence[int], p, nu: int) -> SubringElement:
    """The unique x in R_nu with phi_map(x) = t; raises NotInImage otherwise."""
    p = _prime(p)
    if not image_membership(t, p, nu):
        bad = next(j for j in range(1, nu + 1) if (t[j] - t[j - 1]) % p**j)
        raise NotInImage(f"{tuple(t)}: entry {bad} differs from entry {bad - 1} mod {p}^{bad}")
    coeffs = [t[0]] + [(t[j] - t[j - 1]) // p**j for j in range(1, nu + 1)]
    return SubringElement(p, tuple(coeffs))


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix.

    Pivots on the entry of least absolute value; returns min(rows, cols)
    values with zeros last.
    """
    A = [[int(v) for v in row] for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(A[r][c]), r, c) for r in range(t, rows) for c in range(t, cols) if A[r][c]]
            if not nonzero:
                break
            _, r, c = min(nonzero)
            A[t], A[r] = A[r], A[t]
            for row in A:
                row[t], row[c] = row[c], row[t]
            piv = A[t][t]
            done = True
            for r in range(t + 1, rows):
                q = A[r][t] // piv
                if q:
                    A[r] = [a - q * b for a, b in zip(A[r], A[t])]
                if A[r][t]:
                    done = False
            for c in range(t + 1, cols):
                q = A[t][c] // piv
                if q:
                    for row in A:
                        row[c] -= q * row[t]
                if A[t][c]:
                    done = False
            if not done:
                continue
            # pivot must divide the rest; otherwise fold the offending row in
            bad = next(
                (r for r in range(t + 1, rows) for c in range(t + 1, cols) if A[r][c] % piv),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]) if t < rows and t < cols else 0)
    nonzero = sorted(d for d in diag if d)
    return nonzero + [0] * (len(diag) - len(nonzero))


def conductor_generator(p, nu: int) -> EmbeddedTuple:
    """(p, p^2, ..., p^nu, p^nu)."""
    p = _prime(p)
    if nu < 1:
        raise ValueError("the conductor is proper only for nu >= 1")
    return tuple(p ** (k + 1) for k in range(nu)) + (p**nu,)


def unit_tuples(nu: int) -> list[tuple[int, ...]]:
    return [tuple(int(k == i) for k in range(nu + 1)) for i in range(nu + 1)]


def conductor_check(c: Sequence[int], p, nu: int, trials: Sequence[Sequence[int]] = ()) -> bool:
    """True iff c * a lies in the image of Phi_nu for every trial a.

    The unit tuples are always among the trials; since the image is a
    subgroup they already decide membership in the conductor.
    """
    samples = unit_tuples(nu) + [tuple(a) for a in trials]
    return all(
        image_membership(tuple(ci * ai for ci, ai in zip(c, a)), p, nu) for a in samples
    )


def square_leading_term_check(x: SubringElement) -> bool:
    """x^2 has coefficient mu_j^2 p^j at the lowest index j where x is nonzero."""
    if x.is_zero():
        raise ValueError("square_leading_term_check needs a nonzero element")
    j = next(i for i, a in enumerate(x.coeffs) if a)
    sq = subring_mul(x, x)
    return sq.coeffs[j] == x.coeffs[j] ** 2 * x.p**j and not sq.is_zero()


def fiber_ring_check(p, nu: int) -> bool:
    """Products of f_(p^i), f_(p^j) with i, j >= 1 vanish mod p."""
    p = _prime(p)
    gens = [SubringElement.generator(p, nu, i) for i in range(nu + 1)]
    return all(
        all(a % p == 0 for a in subring_mul(gens[i], gens[j]).coeffs)
        for i in range(1, nu + 1)
        for j in range(1, nu + 1)
    )


def rational_idempotents(p, nu: int) -> list[SubringElement]:
    """e_i = f_(p^i) / p^i in R_nu tensor Q."""
    p = _prime(p)
    return [Fraction(1, p**i) * SubringElement.generator(p, nu, i) for i in range(nu + 1)]


def idempotent_check(p, nu: int) -> bool:
    """e_i e_j = e_j for 0 <= i <= j <= nu."""
    e = rational_idempotents(p, nu)
    return all(subring_mul(e[i], e[j]) == e[j] for j in range(nu + 1) for i in range(j + 1))


def primitive_idempotents(p, nu: int) -> list[SubringElement]:
    """e_j - e_(j+1) (and e_nu): they map to the unit tuples under Phi_nu."""
    e = rational_idempotents(p, nu)
    return [e[j] - e[j + 1] for j in range(nu)] + [e[nu]]


def orthogonal_idempotents_check(p, nu: int) -> bool:
    """The nu + 1 primitive idempotents are nonzero, orthogonal and sum to 1.

    One for each of the nu + 1 points of Spec(R_nu tensor Q); as nu grows
    this count is unbounded.
    """
    eps = primitive_idempotents(p, nu)
    one = SubringElement.generator(p, nu, 0)
    total = SubringElement.zero(p, nu)
    for i, a in enumerate(eps):
        if a.is_zero():
            return False
        for j, b in enumerate(eps):
            expected = a if i == j else SubringElement.zero(p, nu)
            if subring_mul(a, b) != expected:
                return False
        total = total + a
    return total == one


@dataclass(frozen=True)
class AlmostConstantSequence:
    """Rational sequence equal to ``tail`` from index len(prefix) on."""

    prefix: tuple
    tail: Fraction

    def __post_init__(self):
        tail = Fraction(self.tail)
        prefix = [Fraction(a) for a in self.prefix]
        while prefix and prefix[-1] == tail:
            prefix.pop()
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def from_values(cls, values: Sequence) -> "AlmostConstantSequence":
        """Extend a finite tuple by repeating its last entry."""
        if not values:
            raise ValueError("need at least one value")
        return cls(tuple(values[:-1]), values[-1])

    def __getitem__(self, i: int) -> Fraction:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def head(self, k: int) -> tuple:
        return tuple(self[i] for i in range(k))

    def _pointwise(self, other, op):
        k = max(len(self.prefix), len(other.prefix))
        return AlmostConstantSequence(
            tuple(op(self[i], other[i]) for i in range(k)), op(self.tail, other.tail)
        )

    def __add__(self, other):
        return self._pointwise(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._pointwise(other, lambda a, b: a * b)


def almost_constant_embedding(x: SubringElement) -> AlmostConstantSequence:
    """Image of x in R_inf tensor Q: Phi_nu(x), continued by its last entry."""
    return AlmostConstantSequence.from_values(phi_map(x))


def localization_check(m: int, p, table: ProductTable | None = None) -> bool:
    """f_m f_q = m f_q in R for the least q = p^nu >= m."""
    p = _prime(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    q = 1
    while q < m:
        q *= p
    table = table if table is not None else ProductTable(p)
    return ring_mul(basis(m), basis(q), table) == m * basis(q)


def random_element(p, nu: int, rng: random.Random, bound: int = 100) -> SubringElement:
    return SubringElement(p, tuple(rng.randint(-bound, bound) for _ in range(nu + 1)))


def structure_report(p, nu: int, *, samples: int = 200, seed: int = 0) -> dict:
    """JSON-ready summary of Phi_nu, its Smith form, the conductor and checks."""
    p = _prime(p)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    rng = random.Random(seed)
    witnesses = 0
    while witnesses < samples:
        x = random_element(p, nu, rng)
        if x.is_zero():
            continue
        if not square_leading_term_check(x):
            break
        witnesses += 1
    mat = phi_matrix(p, nu)
    report = {"p": p, "nu": nu, "phi_matrix": mat, "snf": smith_normal_form(mat)}
    if nu >= 1:
        report["conductor"] = list(conductor_generator(p, nu))
    report["checks"] = {
        "fiber_ring": fiber_ring_check(p, nu),
        "idempotents": idempotent_check(p, nu),
        "reduced_witnesses": witnesses,
    }
    return report
