"""Truncated one-dimensional formal group laws over F_p (or Z when p = 0).

A law is stored as a finite table of coefficients ``(a, b) -> c`` of
``x**a * y**b``.  Only the unit axioms F(x, 0) = x and F(0, y) = y are
enforced; associativity of custom laws is not checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .modp import char_of


class LawError(ValueError):
    """A group law violates the unit axioms or does not cover a request."""


@dataclass(frozen=True)
class GroupLaw:
    """Coefficient table of F(x, y), known at bidegrees below the bounds.

    ``xbound``/``ybound`` of None mean the listed coefficients are the whole
    law (a polynomial law such as x + y + xy), so any truncation is exact.
    Coefficients at or past a bound are kept but never used, since x^m and
    y^n vanish on the quotient the law is evaluated on.
    """

    char: int
    xbound: int | None
    ybound: int | None
    coeffs: Mapping[tuple[int, int], int] = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        p = char_of(self.char)
        object.__setattr__(self, "char", p)
        for bound in (self.xbound, self.ybound):
            if bound is not None and bound < 1:
                raise ValueError("bounds must be positive")
        clean = {}
        for (a, b), c in self.coeffs.items():
            a, b, c = int(a), int(b), int(c)
            if a < 0 or b < 0:
                raise ValueError(f"negative bidegree ({a}, {b})")
            if p:
                c %= p
            if c:
                clean[a, b] = c
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(clean.items()))))

    def coeff(self, a: int, b: int) -> int:
        return self.coeffs.get((a, b), 0)

    def covers(self, m: int, n: int) -> bool:
        """True if all bidegrees a < m, b < n are known."""
        return (self.xbound is None or self.xbound >= m) and (
            self.ybound is None or self.ybound >= n
        )

    def is_additive(self) -> bool:
        return dict(self.coeffs) == {(1, 0): 1, (0, 1): 1}

    def truncated(self, m: int, n: int) -> "GroupLaw":
        if not self.covers(m, n):
            raise LawError(f"law {self.name} is only known below ({self.xbound}, {self.ybound})")
        return GroupLaw(self.char, m, n, self.coeffs, self.name)


def additive_law(p, xbound: int, ybound: int) -> GroupLaw:
    """F(x, y) = x + y."""
    return GroupLaw(p, xbound, ybound, {(1, 0): 1, (0, 1): 1}, "additive")


def multiplicative_law(p, xbound: int, ybound: int) -> GroupLaw:
    """F(x, y) = x + y + xy = (1 + x)(1 + y) - 1."""
    return GroupLaw(p, xbound, ybound, {(1, 0): 1, (0, 1): 1, (1, 1): 1}, "multiplicative")


def unit_axiom_violations(law: GroupLaw) -> list[tuple[int, int]]:
    """Bidegrees whose coefficient contradicts F(x, 0) = x or F(0, y) = y."""
    bad = []
    if law.coeff(1, 0) != 1:
        bad.append((1, 0))
    if law.coeff(0, 1) != 1:
        bad.append((0, 1))
    for a, b in law.coeffs:
        if (a == 0 or b == 0) and (a, b) not in ((1, 0), (0, 1)):
            bad.append((a, b))
    return sorted(bad)


def validate_law(law: GroupLaw) -> bool:
    return not unit_axiom_violations(law)


def check_law(law: GroupLaw) -> GroupLaw:
    """Return ``law`` unchanged or raise LawError naming the offending bidegree."""
    bad = unit_axiom_violations(law)
    if bad:
        a, b = bad[0]
        raise LawError(
            f"law {law.name!r} violates the unit axioms at bidegree ({a}, {b}): "
            f"coefficient {law.coeff(a, b)}"
        )
    return law


def law_from_json(source) -> GroupLaw:
    """Load ``{"p": 2, "coeffs": [[a, b, c], ...]}`` from a dict, str or path.

    Optional ``"xbound"``/``"ybound"`` keys mark the table as a truncation;
    without them the law is taken to be the polynomial it lists.
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        name = Path(source).stem
        doc = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        name, doc = "custom", json.loads(source)
    else:
        name, doc = "custom", source
    try:
        p = doc["p"]
        triples = doc["coeffs"]
    except (KeyError, TypeError) as exc:
        raise LawError("law document needs keys 'p' and 'coeffs'") from exc
    coeffs: dict[tuple[int, int], int] = {}
    for entry in triples:
        if len(entry) != 3:
            raise LawError(f"coefficient entries are [a, b, c] triples, got {entry!r}")
        a, b, c = (int(v) for v in entry)
        coeffs[a, b] = coeffs.get((a, b), 0) + c
    law = GroupLaw(p, doc.get("xbound"), doc.get("ybound"), coeffs, doc.get("name", name))
    return check_law(law)


def law_to_json(law: GroupLaw) -> str:
    doc = {"p": law.char, "coeffs": [[a, b, c] for (a, b), c in law.coeffs.items()]}
    if law.xbound is not None:
        doc["xbound"] = law.xbound
    if law.ybound is not None:
        doc["ybound"] = law.ybound
    return json.dumps(doc, sort_keys=True)


def evaluate_on_nilpotents(law: GroupLaw, m: int, n: int) -> np.ndarray:
    """Matrix of multiplication by F(x, y) on k[x, y]/(x^m, y^n).

    The monomial x^a y^b has index ``a*n + b``, which is the numpy ``kron``
    ordering: multiplication by x is ``kron(J_m, I_n)`` and by y is
    ``kron(I_m, J_n)`` with J the lower shift matrix.  Column j is the image
    of basis vector j.  Entries are int64 residues for p > 0 and Python ints
    (object dtype) for p = 0.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if not law.covers(m, n):
        raise LawError(
            f"law {law.name!r} known below ({law.xbound}, {law.ybound}), need ({m}, {n})"
        )
    p = law.char
    size = m * n
    if p:
        mat = np.zeros((size, size), dtype=np.int64)
    else:
        mat = np.zeros((size, size), dtype=object)
    terms = [(a, b, c) for (a, b), c in law.coeffs.items() if a < m and b < n]
    for a in range(m):
        for b in range(n):
            col = a * n + b
            for da, db, c in terms:
                if a + da < m and b + db < n:
                    mat[(a + da) * n + b + db, col] += c
    if p:
        mat %= p
    return mat


def law_operator_blocks(law: GroupLaw, m: int, n: int) -> np.ndarray:
    """Multiplication by F as an n x n matrix over C = F_p[x]/(x^m).

    Entry ``[r, c]`` is the coefficient of y^(r-c) in F, a polynomial in x of
    length m.  Shape ``(n, n, m)``.
    """
    if not law.covers(m, n):
        raise LawError(
            f"law {law.name!r} known below ({law.xbound}, {law.ybound}), need ({m}, {n})"
        )
    if law.char == 0:
        raise ValueError("block form is only used over F_p")
    blocks = np.zeros((n, n, m), dtype=np.int64)
    for (a, b), c in law.coeffs.items():
        if a < m and b < n:
            for col in range(n - b):
                blocks[col + b, col, a] = (blocks[col + b, col, a] + c) % law.char
    return blocks
