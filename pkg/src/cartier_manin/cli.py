"""Command-line interface.

Exit codes: 0 success, 1 verification disagreement, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .curves import CurveModel, Family, make_fermat, make_general, make_hurwitz
from .engine import build_cartier_matrix, compute_invariants, invariants_from_matrix, scan_singular_points
from .errors import CartierError, ParseError
from .formulas import (
    VARIANTS_FERMAT,
    VARIANTS_HURWITZ,
    closed_form,
    closed_form_fermat,
    closed_form_hurwitz,
    count_pairs,
    detect_variant,
    variant_degree,
)
from .modp import check_prime
from .poly import SparseBivarPoly
from .report import (
    SweepRow,
    dumps_json,
    ranks_agree,
    render_csv,
    render_document_table,
    render_table,
    report_document,
)

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT = 0, 1, 2
DEFAULT_MAX_GENUS = 2500


class UsageError(CartierError):
    pass


def parse_poly_file(path: str | os.PathLike) -> tuple[int, SparseBivarPoly]:
    """Read ``p <prime>`` followed by ``<coeff> <i> <j>`` lines; ``#`` starts a comment."""
    p = None
    terms = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if p is None:
                if len(tok) != 2 or tok[0] != "p":
                    raise ParseError("expected 'p <prime>' header", lineno)
                try:
                    p = int(tok[1])
                except ValueError:
                    raise ParseError(f"modulus {tok[1]!r} is not an integer", lineno) from None
                check_prime(p)
                continue
            if len(tok) != 3:
                raise ParseError(f"expected '<coeff> <i> <j>', got {line!r}", lineno)
            try:
                c, i, j = (int(t) for t in tok)
            except ValueError:
                raise ParseError(f"non-integer field in {line!r}", lineno) from None
            if i < 0 or j < 0:
                raise ParseError("exponents must be nonnegative", lineno)
            terms.append(((i, j), c))
    if p is None:
        raise ParseError("missing 'p <prime>' header")
    return p, SparseBivarPoly(terms, p)


def write_poly_file(path: str | os.PathLike, F: SparseBivarPoly) -> None:
    lines = [f"p {F.p}"] + [f"{c} {i} {j}" for (i, j), c in F.terms()]
    Path(path).write_text("\n".join(lines) + "\n")


def _curve(family: str, p: int, n: int) -> CurveModel:
    return make_fermat(p, n) if Family(family) is Family.FERMAT else make_hurwitz(p, n)


def _check_genus(genus: int, limit: int, what: str) -> None:
    if genus > limit:
        raise UsageError(f"{what} has genus {genus} > --max-genus {limit}")


# --- single curve -------------------------------------------------------------


def cmd_invariants(args) -> int:
    if args.family == "general":
        p, F = parse_poly_file(args.file)
        curve = make_general(p, F)
    else:
        curve = _curve(args.family, args.p, args.n)
    _check_genus(curve.g, args.max_genus, "curve")

    rep = compute_invariants(curve)
    doc = report_document(rep)

    if args.format == "json":
        print(dumps_json(doc))
    elif args.format == "csv":
        counting = closed = None
        if curve.family is not Family.GENERAL:
            counting = count_pairs(curve.family, curve.p, curve.n)
            cf = closed_form(detect_variant(curve.family, curve.p, curve.n))
            closed = cf[0] if cf else None
        row = [curve.family.value, curve.p, curve.n, curve.d, curve.g, rep.cartier_rank, counting, closed,
               rep.a_number, rep.p_rank, ranks_agree(rep.cartier_rank, counting, closed)]
        sys.stdout.write(render_csv([row]))
    else:
        print(render_document_table(doc))

    if args.family == "general" and args.scan:
        pts = scan_singular_points(curve, args.scan)
        if pts:
            print(f"singular points found: {pts}", file=sys.stderr)
        else:
            print(f"no singular point found up to degree {args.scan}", file=sys.stderr)
    return EXIT_OK


# --- grids ---------------------------------------------------------------------


def evaluate_cell(family: str, p: int, n: int, variant: str | None, s: int | None, with_matrix: bool) -> SweepRow:
    """All available rank computations for one (family, p, n)."""
    fam = Family(family)
    curve = _curve(fam, p, n)
    rank_m = p_rank = a = None
    if with_matrix:
        rep = invariants_from_matrix(build_cartier_matrix(curve))
        rank_m, a, p_rank = rep.cartier_rank, rep.a_number, rep.p_rank
    counting = count_pairs(fam, p, n)
    if variant is None:
        q = detect_variant(fam, p, n)
        variant, s = q.variant, q.s
    closed = None
    if variant is not None:
        fn = closed_form_fermat if fam is Family.FERMAT else closed_form_hurwitz
        closed, a_closed = fn(p, s, variant)
        if a is None:
            a = a_closed
    return SweepRow(fam.value, variant, p, s, n, curve.d, curve.g, rank_m, counting, closed, a, p_rank)


def _evaluate_cell_args(args):
    return evaluate_cell(*args)


def run_cells(cells: list[tuple], jobs: int) -> list[SweepRow]:
    """Evaluate cells, concurrently when ``jobs > 1``; results keep the input order."""
    if jobs <= 1 or len(cells) <= 1:
        return [evaluate_cell(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_cell_args, cells, chunksize=max(1, len(cells) // (4 * jobs))))


def _emit_rows(rows: list[SweepRow], fmt: str) -> None:
    if fmt == "json":
        for r in rows:
            print(dumps_json(r.as_dict()))
    elif fmt == "csv":
        sys.stdout.write(render_csv([r.csv_values() for r in rows]))
    else:
        header = ("family", "variant", "p", "s", "n", "genus", "rank_matrix", "rank_counting",
                  "rank_closed", "a_number", "p_rank", "agree")
        print(render_table(header, [[getattr(r, h) if h != "agree" else r.agree for h in header] for r in rows]))


def _families(choice: str) -> list[str]:
    return ["fermat", "hurwitz"] if choice == "both" else [choice]


def verify_cells(p_list: list[int], n_max: int, families: list[str], max_genus: int) -> list[tuple]:
    cells = []
    for fam in families:
        for p in p_list:
            start = 3 if fam == "fermat" else 2
            for n in range(start, n_max + 1):
                if fam == "fermat" and n % p == 0:
                    continue
                if fam == "hurwitz" and (n * n - n + 1) % p == 0:
                    continue
                d = n if fam == "fermat" else n + 1
                _check_genus((d - 1) * (d - 2) // 2, max_genus, f"{fam} n={n}")
                cells.append((fam, p, n, None, None, True))
    return cells


def cmd_verify(args) -> int:
    for p in args.p_list:
        check_prime(p)
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    families = _families(args.family)
    cells = verify_cells(args.p_list, args.n_max, families, args.max_genus)
    rows = run_cells(cells, args.jobs)
    _emit_rows(rows, args.format)

    if args.seed_goldens:
        seed_goldens(args.seed_goldens, args.p_list, args.n_max, families)

    bad = [r for r in rows if not r.agree]
    for r in bad:
        print(f"disagreement: {r.family} p={r.p} n={r.n} matrix={r.rank_matrix} "
              f"counting={r.rank_counting} closed={r.rank_closed}", file=sys.stderr)
    return EXIT_DISAGREE if bad else EXIT_OK


def seed_goldens(path, p_list: list[int], n_max: int, families: list[str]) -> None:
    """Write matrix-path invariants for the grid to ``path`` (closed forms are never consulted)."""
    out = {}
    for fam in families:
        for p in p_list:
            for n in range(3 if fam == "fermat" else 2, n_max + 1):
                try:
                    curve = _curve(fam, p, n)
                except CartierError:
                    continue
                rep = compute_invariants(curve)
                out.setdefault(fam, {}).setdefault(str(p), {})[str(n)] = {
                    "genus": rep.genus,
                    "cartier_rank": rep.cartier_rank,
                    "a_number": rep.a_number,
                    "p_rank": rep.p_rank,
                    "nilpotency_index": rep.nilpotency_index,
                }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(out, indent=1, sort_keys=False) + "\n")


def cmd_sweep(args) -> int:
    variants = VARIANTS_FERMAT if args.family == "fermat" else VARIANTS_HURWITZ
    if args.variant not in variants:
        raise UsageError(f"variant {args.variant} has no closed form for {args.family}; choose from {variants}")
    s_lo, s_hi = args.s
    cells = []
    for p in sorted(set(args.p_list)):
        check_prime(p)
        for s in range(s_lo, s_hi + 1):
            n = variant_degree(p, s, args.variant)
            try:
                curve = _curve(args.family, p, n)
            except CartierError:
                continue  # outside the family hypotheses, e.g. sp-1 < 4
            if not args.no_matrix:
                _check_genus(curve.g, args.max_genus, f"{args.family} n={n}")
            cells.append((args.family, p, n, args.variant, s, not args.no_matrix))
    rows = run_cells(cells, args.jobs)
    _emit_rows(rows, args.format)
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _s_range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("..")
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if lo_i < 1 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return lo_i, hi_i


def _available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on every platform
        return os.cpu_count() or 1


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _common(default_format: str = "table") -> argparse.ArgumentParser:
    # A fresh parent per subcommand: parents share action objects, so defaults would leak.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default=default_format)
    common.add_argument("--max-genus", type=int, default=DEFAULT_MAX_GENUS, help="refuse curves above this genus")
    return common


def build_parser() -> argparse.ArgumentParser:

    parallel = argparse.ArgumentParser(add_help=False)
    parallel.add_argument("--jobs", type=_positive, default=_available_cpus())

    parser = argparse.ArgumentParser(prog="cartier-manin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invariants", help="invariants of a single curve")
    inv_sub = inv.add_subparsers(dest="family", required=True)
    for fam in ("fermat", "hurwitz"):
        sp = inv_sub.add_parser(fam, parents=[_common()])
        sp.add_argument("-p", type=int, required=True)
        sp.add_argument("-n", type=int, required=True)
        sp.set_defaults(func=cmd_invariants)
    gen = inv_sub.add_parser("general", parents=[_common()])
    gen.add_argument("--file", required=True)
    gen.add_argument("--scan", type=int, default=0, metavar="K",
                     help="search for singular points over F_(p^k), k <= K (at most 4)")
    gen.set_defaults(func=cmd_invariants)

    ver = sub.add_parser("verify", parents=[_common(), parallel], help="cross-check matrix, counting and closed forms")
    ver.add_argument("--p-list", type=_int_list, required=True)
    ver.add_argument("--n-max", type=int, required=True)
    ver.add_argument("--family", choices=("fermat", "hurwitz", "both"), default="both")
    ver.add_argument("--seed-goldens", metavar="PATH", help="also write matrix-path goldens for the grid")
    ver.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", parents=[_common("csv"), parallel], help="closed forms over (p, s), optionally checked")
    sw.add_argument("family", choices=("fermat", "hurwitz"))
    sw.add_argument("--variant", choices=("sp+1", "sp-1", "sp"), required=True)
    sw.add_argument("--p-list", type=_int_list, required=True)
    sw.add_argument("--s", type=_s_range, required=True)
    sw.add_argument("--no-matrix", action="store_true")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CartierError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
