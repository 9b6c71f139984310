"""Multiplicities of f_m * f_n, computed several independent ways.

The product f_m * f_n = sum_i lambda_i f_i records the Jordan type of the
nilpotent operator F(J_m, J_n), i.e. multiplication by F(x, y) on
A = k[x, y]/(x^m, y^n).  Routes to the same answer:

``graded``
    additive law only: (x + y)^i is homogeneous, so its rank splits over the
    degree pieces of A, each at most min(m, n) wide.
``module``
    any law, p > 0: A is free of rank n over C = F_p[x]/(x^m) and F acts
    C-linearly, so ranks come from Smith forms over the chain ring C.
``explicit``
    eliminate powers of the mn x mn matrix directly (small sizes).
``closed``
    the Clebsch-Gordan formula, valid for p = 0 or p > m + n - 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from . import linalg
from .formal_group import (
    GroupLaw,
    LawError,
    additive_law,
    check_law,
    evaluate_on_nilpotents,
    law_operator_blocks,
)
from .modp import binomial_exact, char_of, lucas_binomial_mod

METHODS = ("auto", "graded", "module", "explicit", "closed")


@dataclass(frozen=True)
class Multiplicities:
    """Sparse block counts ``{i: lambda_i}`` with every count positive."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = 0
        for i, lam in self.entries:
            if i <= prev:
                raise ValueError(f"indices must be increasing and >= 1: {self.entries}")
            if lam <= 0:
                raise ValueError(f"multiplicity at {i} must be positive, got {lam}")
            prev = i

    @classmethod
    def from_dict(cls, counts: Mapping[int, int]) -> "Multiplicities":
        bad = {i: c for i, c in counts.items() if c < 0 or (c and i < 1)}
        if bad:
            raise ValueError(f"not a valid block count: {bad}")
        return cls(tuple(sorted((int(i), int(c)) for i, c in counts.items() if c)))

    def __getitem__(self, i: int) -> int:
        return dict(self.entries).get(i, 0)

    def __iter__(self) -> Iterator[int]:
        return (i for i, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def total_count(self) -> int:
        """sum lambda_i, the number of Jordan blocks."""
        return sum(lam for _, lam in self.entries)

    def total_dimension(self) -> int:
        """sum i * lambda_i."""
        return sum(i * lam for i, lam in self.entries)

    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def __str__(self):
        return "{" + ", ".join(f"{i}: {lam}" for i, lam in self.entries) + "}"


@dataclass(frozen=True)
class RankProfile:
    """r_0, r_1, ..., r_s = 0 with r_i the rank of the i-th power."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        r = self.ranks
        if not r or r[-1] != 0:
            raise ValueError(f"rank profile must end in 0: {r}")
        for i in range(1, len(r)):
            if r[i] >= r[i - 1] and r[i - 1] != 0:
                raise ValueError(f"ranks must strictly decrease: {r}")
        drops = [r[i - 1] - r[i] for i in range(1, len(r))]
        if any(drops[i] > drops[i - 1] for i in range(1, len(drops))):
            raise ValueError(f"rank drops must be nonincreasing: {r}")


@dataclass(frozen=True)
class HilbertProfile:
    """l(0) = 0, l(1), ..., l(T); constant at l(T) from T on."""

    values: tuple[int, ...]

    def __post_init__(self):
        v = self.values
        if not v or v[0] != 0:
            raise ValueError(f"Hilbert profile must start at 0: {v}")
        steps = [v[i] - v[i - 1] for i in range(1, len(v))]
        if any(s < 0 for s in steps):
            raise ValueError(f"Hilbert profile must be nondecreasing: {v}")
        if any(steps[i] > steps[i - 1] for i in range(1, len(steps))):
            raise ValueError(f"Hilbert profile must be concave: {v}")

    def __call__(self, i: int) -> int:
        if i <= 0:
            return 0
        return self.values[min(i, len(self.values) - 1)]


def rank_profile(operator, p=0) -> RankProfile:
    """Ranks of successive powers of an explicit nilpotent matrix.

    Exact elimination throughout: residues for p > 0 (bit-packed rows when
    p = 2), fraction-free integer elimination for p = 0.
    """
    return RankProfile(tuple(linalg.explicit_rank_profile(operator, char_of(p))))


def multiplicities_from_ranks(profile: RankProfile) -> Multiplicities:
    """lambda_i = r_(i-1) - 2 r_i + r_(i+1), the Jordan block count."""
    r = list(profile.ranks) + [0, 0]
    return Multiplicities.from_dict(
        {i: r[i - 1] - 2 * r[i] + r[i + 1] for i in range(1, len(profile.ranks))}
    )


def multiplicities_from_hilbert(profile: HilbertProfile) -> Multiplicities:
    """lambda_i = 2 l(i) - l(i+1) - l(i-1), with l constant past the end."""
    l = profile
    return Multiplicities.from_dict(
        {i: 2 * l(i) - l(i + 1) - l(i - 1) for i in range(1, len(profile.values))}
    )


def _graded_profile(m: int, n: int, p: int) -> RankProfile:
    table = linalg.graded_rank_table(m, n, p)
    ranks = [m * n]
    for i in range(1, m + n + 1):
        r = int(table[i].sum()) if i < table.shape[0] else 0
        ranks.append(r)
        if r == 0:
            break
    return RankProfile(tuple(ranks))


def _resolve_law(m: int, n: int, p: int, law: GroupLaw | None) -> GroupLaw:
    if law is None:
        return additive_law(p, m, n)
    check_law(law)
    if law.char != p:
        raise LawError(f"law is over characteristic {law.char}, requested {p}")
    if not law.covers(m, n):
        raise LawError(
            f"law {law.name!r} known below ({law.xbound}, {law.ybound}), need ({m}, {n})"
        )
    return law


def operator_rank_profile(
    m: int, n: int, p=0, law: GroupLaw | None = None, *, method: str = "auto"
) -> RankProfile:
    """Rank profile of F(J_m, J_n) for the given law (default additive)."""
    p = char_of(p)
    _check_sizes(m, n)
    law = _resolve_law(m, n, p, law)
    if method == "auto":
        if law.is_additive():
            method = "graded"
        elif p:
            method = "module"
        else:
            method = "explicit"
    if method == "graded":
        if not law.is_additive():
            raise ValueError("the graded route needs the additive law")
        return _graded_profile(m, n, p)
    if method == "module":
        if p == 0:
            raise ValueError("the module route works over F_p only")
        blocks = law_operator_blocks(law, m, n)
        return RankProfile(tuple(linalg.chain_ring_rank_profile(blocks, p)))
    if method == "explicit":
        return rank_profile(evaluate_on_nilpotents(law, m, n), p)
    raise ValueError(f"no rank profile for method {method!r}")


def hilbert_profile(m: int, n: int, p=0, law: GroupLaw | None = None, *, method: str = "auto") -> HilbertProfile:
    """l(i) = dim k[[x, y]]/(x^m, y^n, F^i), listed until it reaches mn.

    For the additive law the quotient is graded and l(i) is summed degree by
    degree as the cokernel dimension of (x+y)^i landing in that degree.
    """
    p = char_of(p)
    _check_sizes(m, n)
    law = _resolve_law(m, n, p, law)
    if method in ("auto", "graded") and law.is_additive():
        table = linalg.graded_rank_table(m, n, p)
        dims = linalg.degree_dimensions(m, n)
        values = [0]
        for i in range(1, m + n + 1):
            quotient = 0
            for t, dim in enumerate(dims):
                image = int(table[i, t - i]) if i < table.shape[0] and t >= i else 0
                quotient += dim - image if t >= i else dim
            values.append(quotient)
            if quotient == m * n:
                break
        return HilbertProfile(tuple(values))
    profile = operator_rank_profile(m, n, p, law, method=method)
    return HilbertProfile(tuple(m * n - r for r in profile.ranks))


def char_zero_product(m: int, n: int) -> Multiplicities:
    """f_m f_n = sum_{i<m} f_(m+n-1-2i) for m <= n."""
    _check_sizes(m, n)
    if m > n:
        m, n = n, m
    return Multiplicities.from_dict({m + n - 1 - 2 * i: 1 for i in range(m)})


def max_block_index(m: int, n: int, p=0) -> int:
    """Smallest s >= 1 with (x + y)^s in (x^m, y^n), read off binomials.

    (x+y)^s reduces to sum C(s, j) x^j y^(s-j) over max(0, s-n+1) <= j <= m-1.
    """
    p = char_of(p)
    _check_sizes(m, n)
    s = 1
    while True:
        lo, hi = max(0, s - n + 1), min(s, m - 1)
        if p:
            survives = any(lucas_binomial_mod(s, j, p, p) for j in range(lo, hi + 1))
        else:
            survives = any(binomial_exact(s, j) for j in range(lo, hi + 1))
        if not survives:
            return s
        s += 1


def product_multiplicities(
    m: int, n: int, p=0, law: GroupLaw | None = None, *, method: str = "auto"
) -> Multiplicities:
    """Jordan type of F(J_m, J_n), i.e. the expansion of f_m * f_n.

    ``auto`` uses the closed form when p = 0 or p > m + n - 2 (additive law),
    the graded route for other additive cases and the module route for other
    laws.  The answer does not depend on the law.
    """
    p = char_of(p)
    _check_sizes(m, n)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "closed" or (
        method == "auto" and (law is None or law.is_additive()) and (p == 0 or p > m + n - 2)
    ):
        if p and p <= m + n - 2:
            raise ValueError(f"closed form needs p = 0 or p > {m + n - 2}")
        _resolve_law(m, n, p, law)
        return char_zero_product(m, n)
    return multiplicities_from_ranks(operator_rank_profile(m, n, p, law, method=method))


def unipotent_tensor_blocks(m: int, n: int, p) -> np.ndarray:
    """(J_n + E) (x) (J_m + E) - E as an n x n matrix of blocks in F_p[J_m].

    Block (r, c) of the Kronecker product is (J_n + E)[r, c] * (J_m + E); each
    block is a polynomial in J_m, stored by its coefficients (J_m <-> x).
    """
    p = char_of(p)
    if p == 0:
        raise ValueError("unipotent representations are taken over F_p, p > 0")
    _check_sizes(m, n)
    outer = np.eye(n, dtype=np.int64) + np.eye(n, k=-1, dtype=np.int64)
    inner = np.zeros(m, dtype=np.int64)
    inner[0] = 1
    if m > 1:
        inner[1] = 1
    blocks = outer[:, :, None] * inner[None, None, :]
    for r in range(n):
        blocks[r, r, 0] -= 1
    return blocks % p


def unipotent_tensor_matrix(m: int, n: int, p) -> np.ndarray:
    """The explicit mn x mn matrix (J_m + E) (x) (J_n + E) - E over F_p."""
    p = char_of(p)
    Jm = np.eye(m, dtype=np.int64) + np.eye(m, k=-1, dtype=np.int64)
    Jn = np.eye(n, dtype=np.int64) + np.eye(n, k=-1, dtype=np.int64)
    return (np.kron(Jm, Jn) - np.eye(m * n, dtype=np.int64)) % p


def unipotent_tensor_multiplicities(m: int, n: int, p, *, explicit: bool = False) -> Multiplicities:
    """Jordan type of the tensor product of unipotent Jordan blocks, minus E.

    By default the Kronecker product is kept in block form over F_p[J_m] and
    ranked by chain-ring Smith forms; ``explicit=True`` eliminates the dense
    mn x mn matrix instead.
    """
    p = char_of(p)
    if explicit:
        return multiplicities_from_ranks(rank_profile(unipotent_tensor_matrix(m, n, p), p))
    profile = linalg.chain_ring_rank_profile(unipotent_tensor_blocks(m, n, p), p)
    return multiplicities_from_ranks(RankProfile(tuple(profile)))


def _check_sizes(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be positive, got ({m}, {n})")
