"""Command-line front end.

Exit codes: 0 success, 1 verification failure or internal inconsistency,
2 bad arguments, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .formal_group import GroupLaw, LawError, additive_law, law_from_json, multiplicative_law
from .kernel import (
    Multiplicities,
    char_zero_product,
    max_block_index,
    multiplicities_from_ranks,
    operator_rank_profile,
    product_multiplicities,
)
from .modp import Characteristic
from .ring import ProductTable, RingElement, TableError, check_cell, format_element
from .subring import structure_report
from .verify import SUITES, run_suites

CACHE_ENV = "CONVRING_CACHE_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("convring")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _char(text: str) -> int:
    try:
        return Characteristic(int(text)).p
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _char_list(text: str) -> list[int]:
    return [_char(t) for t in text.split(",") if t.strip()]


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convring", description="Multiplication tables of the convolution ring R in characteristic p."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    cache_help = f"table cache file (default: ${CACHE_ENV}/table-p<char>.json when set)"

    prod = sub.add_parser("product", help="expand f_m * f_n")
    prod.add_argument("--char", type=_char, required=True)
    prod.add_argument("-m", type=_positive, required=True)
    prod.add_argument("-n", type=_positive, required=True)
    prod.add_argument("--law", default="additive", help="additive, multiplicative or a JSON law file")
    prod.add_argument("--format", choices=("text", "json"), default="text")
    prod.add_argument("--oracle", action="store_true", help="cross-check by exact elimination")
    prod.add_argument("--cache", type=Path, help=cache_help)

    table = sub.add_parser("table", help="write the product table for m <= n <= max")
    table.add_argument("--char", type=_char, required=True)
    table.add_argument("--max", type=_positive, required=True, dest="max_rank")
    table.add_argument("--out", type=Path)
    table.add_argument("--format", choices=("json", "csv"), default="json")
    table.add_argument("--workers", type=_positive, default=1)
    table.add_argument("--cache", type=Path, help=cache_help)

    ver = sub.add_parser("verify", help="run property suites")
    ver.add_argument("--suite", default="all", help=f"comma list from {', '.join(SUITES)} or 'all'")
    ver.add_argument("--char", type=_char_list, default=[2, 3, 5])
    ver.add_argument("--max", type=_positive, default=12, dest="max_rank")
    ver.add_argument("--nu", type=_nonnegative, default=4)

    st = sub.add_parser("structure", help="report on R_nu for p > 0")
    st.add_argument("--char", type=_char, required=True)
    st.add_argument("--nu", type=_nonnegative, required=True)
    return parser


def _law(selector: str, p: int, m: int, n: int) -> GroupLaw:
    if selector == "additive":
        return additive_law(p, m, n)
    if selector == "multiplicative":
        return multiplicative_law(p, m, n)
    try:
        law = law_from_json(Path(selector))
    except OSError as exc:
        raise CliError(f"cannot read law file {selector}: {exc.strerror or exc}", EXIT_IO) from None
    except (LawError, ValueError) as exc:
        raise CliError(f"bad law file {selector}: {exc}", EXIT_USAGE) from None
    if law.char != p:
        raise CliError(f"law file {selector} is over p={law.char}, requested --char {p}", EXIT_USAGE)
    return law


def _cache_path(arg: Path | None, p: int) -> Path | None:
    if arg is not None:
        return arg
    root = os.environ.get(CACHE_ENV)
    return Path(root) / f"table-p{p}.json" if root else None


def _load_cache(path: Path | None, p: int) -> ProductTable:
    if path is None or not path.exists():
        return ProductTable(p)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"cannot read cache {path}: {exc.strerror or exc}", EXIT_IO) from None
    try:
        table = ProductTable.from_json(text)
    except TableError as exc:
        raise CliError(f"refusing corrupt cache {path}: {exc}", EXIT_FAIL) from None
    if table.char != p:
        raise CliError(f"cache {path} holds p={table.char}, requested p={p}", EXIT_USAGE)
    log.info("loaded %d cells from %s", len(table), path)
    return table


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from None


def _oracle(m: int, n: int, p: int, law: GroupLaw) -> Multiplicities:
    """An independent elimination route for the same product."""
    if p == 0:
        # Bareiss on the whole operator while that is cheap, else per degree
        method = "explicit" if m * n <= 144 else "graded"
        return multiplicities_from_ranks(operator_rank_profile(m, n, 0, method=method))
    if law.is_additive():
        return multiplicities_from_ranks(operator_rank_profile(m, n, p, law, method="module"))
    return multiplicities_from_ranks(operator_rank_profile(m, n, p, method="graded"))


def cmd_product(args, out) -> int:
    p, m, n = args.char, args.m, args.n
    law = _law(args.law, p, m, n)
    if args.law == "additive":
        path = _cache_path(args.cache, p)
        table = _load_cache(path, p)
        before = len(table)
        lam = table.lookup(m, n)
        if path is not None and len(table) > before:
            table.max_rank = max(table.max_rank, max(m, n))
            _write(path, table.to_json())
    else:
        lam = product_multiplicities(m, n, p, law)

    problems = []
    reason = check_cell(m, n, lam)
    if reason:
        problems.append(reason)
    if lam.max_index() != max_block_index(m, n, p):
        problems.append(f"largest block {lam.max_index()} != {max_block_index(m, n, p)}")
    if args.oracle:
        other = _oracle(m, n, p, law)
        if other != lam:
            problems.append(f"oracle disagrees: {other} != {lam}")
        if (p == 0 or p > m + n - 2) and char_zero_product(m, n) != lam:
            problems.append(f"closed form disagrees: {char_zero_product(m, n)} != {lam}")

    expansion = format_element(RingElement(lam.as_dict()))
    if args.format == "json":
        doc = {
            "m": m,
            "n": n,
            "char": p,
            "lambda": [[i, c] for i, c in lam.items()],
            "sum_lambda": lam.total_count(),
            "sum_i_lambda": lam.total_dimension(),
            "consistent": not problems,
        }
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(f"f{m}*f{n} = {expansion}\n")
        out.write(f"sum lambda = {lam.total_count()} (expected {min(m, n)})\n")
        out.write(f"sum i*lambda = {lam.total_dimension()} (expected {m * n})\n")
    if problems:
        for msg in problems:
            print(f"inconsistent: {msg}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_table(args, out) -> int:
    p = args.char
    path = _cache_path(args.cache, p)
    table = _load_cache(path, p)
    table.populate(args.max_rank, workers=args.workers)
    if path is not None:
        _write(path, table.to_json())
    # emit exactly the requested range, whatever the cache held
    view = ProductTable(p, args.max_rank, {k: v for k, v in table.cells() if k[1] <= args.max_rank})
    text = view.to_json() if args.format == "json" else view.to_csv()
    if args.out is not None:
        _write(args.out, text)
        log.info("wrote %d cells to %s", len(view), args.out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = SUITES if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise CliError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}", EXIT_USAGE)
    reports = run_suites(names, args.char, args.max_rank, args.nu)
    passed = all(r.passed for r in reports)
    out.write(json.dumps({"passed": passed, "suites": [r.as_dict() for r in reports]}, indent=2) + "\n")
    for r in reports:
        if not r.passed:
            f = r.failure
            print(
                f"{r.suite}: {f['check']} failed at "
                f"({f['m']}, {f['n']}, {f['p']}, {f['expected']}, {f['got']})",
                file=sys.stderr,
            )
            break
    return EXIT_OK if passed else EXIT_FAIL


def cmd_structure(args, out) -> int:
    if args.char == 0:
        raise CliError("structure reports need --char p > 0", EXIT_USAGE)
    out.write(json.dumps(structure_report(args.char, args.nu)) + "\n")
    return EXIT_OK


COMMANDS = {
    "product": cmd_product,
    "table": cmd_table,
    "verify": cmd_verify,
    "structure": cmd_structure,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"convring: {exc}", file=sys.stderr)
        return exc.code
    except LawError as exc:
        print(f"convring: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
