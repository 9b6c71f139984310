"""The convolution ring R: the free abelian group on f_1, f_2, ... with the
product f_m * f_n = sum lambda_i f_i.

f_1 is the unit and f_0 = 0 is the empty element.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Mapping

from .formal_group import GroupLaw
from .kernel import Multiplicities, max_block_index, product_multiplicities
from .modp import char_of


class CacheMiss(KeyError):
    """A product was needed that the table does not hold, and filling is off."""


class TableError(ValueError):
    """A serialized table is malformed or fails the cheap product identities."""


class RingElement:
    """Finite integer combination of basis classes f_n, n >= 1."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean = {}
        for n, c in (coeffs or {}).items():
            n, c = int(n), int(c)
            if n < 0:
                raise ValueError(f"negative basis index {n}")
            if n == 0 or c == 0:
                continue  # f_0 = 0
            clean[n] = c
        self._coeffs = dict(sorted(clean.items()))
        self._hash = None

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def support(self) -> list[int]:
        return list(self._coeffs)

    def __getitem__(self, n: int) -> int:
        return self._coeffs.get(n, 0)

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == ({1: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = RingElement({1: other})
        if not isinstance(other, RingElement):
            return NotImplemented
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            out[n] = out.get(n, 0) + c
        return RingElement(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement({n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = RingElement({1: other})
        if not isinstance(other, RingElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, int) and not isinstance(c, bool):
            return RingElement({n: c * v for n, v in self._coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"RingElement({self._coeffs})"

    def __str__(self):
        return format_element(self)


def basis(n: int) -> RingElement:
    """The class f_n; basis(1) is the unit."""
    if n < 1:
        raise ValueError("basis index must be >= 1 (f_0 = 0 is RingElement())")
    return RingElement({n: 1})


def zero() -> RingElement:
    return RingElement()


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def ring_neg(x: RingElement) -> RingElement:
    return -x


def scalar_mul(c: int, x: RingElement) -> RingElement:
    return c * x


def format_element(x: RingElement) -> str:
    """Render as ``f1 + 2 f4 - f7``; the zero element renders as ``0``."""
    if not x:
        return "0"
    parts = []
    for n, c in x.coeffs.items():
        mag = abs(c)
        term = f"f{n}" if mag == 1 else f"{mag} f{n}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


def check_cell(m: int, n: int, lam: Multiplicities) -> str | None:
    """Cheap product identities; returns a reason string when one fails."""
    if lam.total_dimension() != m * n:
        return f"sum i*lambda_i = {lam.total_dimension()} != {m * n}"
    if lam.total_count() != min(m, n):
        return f"sum lambda_i = {lam.total_count()} != {min(m, n)}"
    if lam.max_index() >= m + n:
        return f"block of size {lam.max_index()} >= m + n = {m + n}"
    return None


class ProductTable:
    """Memoized cells f_m * f_n for m <= n, symmetric lookup.

    Reads are safe from many threads; cell inserts take a lock.  With
    ``fill_on_miss=False`` a lookup outside the stored cells raises CacheMiss,
    which pins exactly which products a run is allowed to use.
    """

    def __init__(
        self,
        p,
        max_rank: int = 0,
        cells: Mapping[tuple[int, int], Multiplicities] | None = None,
        *,
        law: GroupLaw | None = None,
        fill_on_miss: bool = True,
    ):
        self.char = char_of(p)
        self.max_rank = max_rank
        self.law = law
        self.fill_on_miss = fill_on_miss
        self._cells: dict[tuple[int, int], Multiplicities] = {}
        self._lock = threading.Lock()
        for (m, n), lam in (cells or {}).items():
            self._cells[min(m, n), max(m, n)] = lam

    def __contains__(self, key):
        m, n = key
        return (min(m, n), max(m, n)) in self._cells

    def __len__(self):
        return len(self._cells)

    def cells(self) -> list[tuple[tuple[int, int], Multiplicities]]:
        return sorted(self._cells.items())

    def _compute(self, m: int, n: int) -> Multiplicities:
        law = self.law.truncated(m, n) if self.law is not None else None
        return product_multiplicities(m, n, self.char, law)

    def lookup(self, m: int, n: int) -> Multiplicities:
        key = (min(m, n), max(m, n))
        lam = self._cells.get(key)
        if lam is not None:
            return lam
        if not self.fill_on_miss:
            raise CacheMiss(f"f{key[0]}*f{key[1]} is not in the table (p={self.char})")
        lam = self._compute(*key)
        with self._lock:
            self._cells.setdefault(key, lam)
        return lam

    def populate(self, max_rank: int, workers: int | None = None) -> "ProductTable":
        """Fill every cell m <= n <= max_rank, optionally across threads."""
        todo = [(m, n) for n in range(1, max_rank + 1) for m in range(1, n + 1) if (m, n) not in self._cells]
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda mn: self._compute(*mn), todo))
        else:
            results = [self._compute(*mn) for mn in todo]
        with self._lock:
            for key, lam in zip(todo, results):
                self._cells.setdefault(key, lam)
        self.max_rank = max(self.max_rank, max_rank)
        return self

    def to_json(self) -> str:
        """Canonical JSON: cells sorted by (m, n), lambda sorted by i."""
        doc = {
            "char": self.char,
            "max_rank": self.max_rank,
            "cells": [
                {"m": m, "n": n, "lambda": [[i, lam] for i, lam in cell.items()]}
                for (m, n), cell in self.cells()
                if n <= self.max_rank
            ],
        }
        return json.dumps(doc, separators=(", ", ": ")) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "n", "i", "lambda"])
        for (m, n), cell in self.cells():
            if n <= self.max_rank:
                for i, lam in cell.items():
                    writer.writerow([m, n, i, lam])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str, *, fill_on_miss: bool = True) -> "ProductTable":
        """Load a serialized table, re-checking every cell before trusting it."""
        try:
            doc = json.loads(text)
            p, max_rank = int(doc["char"]), int(doc["max_rank"])
            raw = doc["cells"]
        except (ValueError, KeyError, TypeError) as exc:
            raise TableError(f"not a product table: {exc}") from exc
        cells = {}
        for cell in raw:
            try:
                m, n = int(cell["m"]), int(cell["n"])
                lam = Multiplicities.from_dict({int(i): int(c) for i, c in cell["lambda"]})
            except (ValueError, KeyError, TypeError) as exc:
                raise TableError(f"malformed cell {cell!r}: {exc}") from exc
            if not 1 <= m <= n:
                raise TableError(f"cell ({m}, {n}) is not stored with m <= n")
            reason = check_cell(m, n, lam)
            if reason is None and lam.max_index() != max_block_index(m, n, p):
                reason = f"largest block {lam.max_index()} != {max_block_index(m, n, p)}"
            if reason:
                raise TableError(f"cell ({m}, {n}) rejected: {reason}")
            cells[m, n] = lam
        return cls(p, max_rank, cells, fill_on_miss=fill_on_miss)


def product_table(p, max_rank: int, *, law: GroupLaw | None = None, workers: int | None = None) -> ProductTable:
    """All products f_m * f_n with m <= n <= max_rank."""
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    return ProductTable(p, max_rank, law=law).populate(max_rank, workers)


def ring_mul(x: RingElement, y: RingElement, table: ProductTable) -> RingElement:
    """Bilinear extension of the table products."""
    out: dict[int, int] = {}
    for m, a in x.coeffs.items():
        for n, b in y.coeffs.items():
            for i, lam in table.lookup(m, n).items():
                out[i] = out.get(i, 0) + a * b * lam
    return RingElement(out)


def ring_power(x: RingElement, k: int, table: ProductTable) -> RingElement:
    result = basis(1)
    for _ in range(k):
        result = ring_mul(result, x, table)
    return result


def _basis_polynomials(top: int) -> list[list[int]]:
    # polys[n] expresses f_n in powers of X = f_2: f_1 = 1, f_(n+1) = X f_n - f_(n-1)
    polys = [[], [1], [0, 1]]
    for k in range(2, top):
        prev, cur = polys[k - 1], polys[k]
        nxt = [0] + cur
        for j, c in enumerate(prev):
            nxt[j] -= c
        polys.append(nxt)
    return polys


def char_zero_polynomial_coordinates(x: RingElement, table: ProductTable | None = None) -> list[int]:
    """Coefficients (constant term first) of the P in Z[X] with P(f_2) = x.

    Only meaningful in characteristic 0, where X -> f_2 is an isomorphism.
    """
    if table is not None and table.char != 0:
        raise ValueError(f"polynomial coordinates need characteristic 0, table is p={table.char}")
    if not x:
        return []
    polys = _basis_polynomials(max(x.support()))
    out = [0] * max(len(polys[n]) for n in x.support())
    for n, c in x.coeffs.items():
        for j, a in enumerate(polys[n]):
            out[j] += c * a
    while out and out[-1] == 0:
        out.pop()
    return out


def evaluate_polynomial(coeffs: Iterable[int], table: ProductTable) -> RingElement:
    """P(f_2) computed with the ring product of ``table`` (Horner)."""
    coeffs = list(coeffs)
    result = RingElement()
    f2 = basis(2)
    for c in reversed(coeffs):
        result = ring_mul(result, f2, table) + c * basis(1)
    return result
