"""Batch command-line interface.

One binary, subcommand style.  JSON is the machine contract (schemas
versioned "tw/1", byte-identical for identical arguments and seed);
--format table renders the same data as aligned text grids.  Exit
codes: 0 success, 1 generic or failed verification, 2 structural
complex error (d^2 != 0, inhomogeneous entries), 3 inconsistent pages,
4 insufficient couple window.

The TW_SEED environment variable overrides --seed wherever a seed is
accepted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import exactla, jsonio
from .algebra import BigradedTable, GradedModuleDescriptor
from .complexes import (
    ComplexError,
    GradedComplex,
    first_differential,
    specialize_a_to_1,
)
from .corpus import item_seeds, verify_item
from .couples import InsufficientWindow, couple_from_decomposition, couple_pages
from .decompose import (
    Decomposition,
    decompose,
    hn_table,
    thickness,
    torsion_width,
)
from .jsonio import SchemaError
from .links import (
    LinkDiagram,
    Sl2Potential,
    TwoBraidSpec,
    build_sl2_cube,
    build_twobraid,
    delta_battery,
)
from .pages import PageTable, assembled_pages, collapse_page, generic_pages
from .recover import InconsistentPages, pages_from_decomposition, recover

EXIT_OK = 0
EXIT_GENERIC = 1
EXIT_COMPLEX = 2
EXIT_PAGES = 3
EXIT_WINDOW = 4


# -- input plumbing ----------------------------------------------------


def _read_document(spec: str):
    """Path, "-" for stdin, or inline JSON text."""
    if spec == "-":
        text = sys.stdin.read()
    elif spec.lstrip().startswith("{"):
        text = spec
    elif os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise SchemaError("input %r is neither a file nor inline JSON" % spec)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("cannot parse JSON input: %s" % e)


def _load_decomposition(spec: str):
    """Decomposition from a decomposition or complex document; the
    complex is returned too when available."""
    data = _read_document(spec)
    kind = data.get("type") if isinstance(data, dict) else None
    if kind == "decomposition":
        return jsonio.decomposition_from_json(data), None
    if kind == "complex":
        c = jsonio.complex_from_json(data)
        return decompose(c), c
    raise SchemaError("expected a decomposition or complex document, got %r" % kind)


def _emit(payload: str):
    sys.stdout.write(payload)
    if not payload.endswith("\n"):
        sys.stdout.write("\n")


# -- text rendering ----------------------------------------------------


def _descriptor_str(d: GradedModuleDescriptor) -> str:
    parts = ["F{%d}" % s for s in d.free_shifts]
    parts += ["T^%d{%d}" % (m, s) for m, s in d.torsions]
    return "+".join(parts) if parts else "0"


def render_grid(entries, corner: str) -> str:
    """Aligned grid of a {(row, col): text} map; rows print top-down in
    decreasing order, columns left-right increasing."""
    if not entries:
        return "(empty)"
    rows = sorted({a for a, _ in entries}, reverse=True)
    cols = sorted({b for _, b in entries})
    head = [corner] + [str(c) for c in cols]
    body = [
        [str(r)] + [str(entries.get((r, c), ".")) for c in cols] for r in rows
    ]
    widths = [
        max(len(line[j]) for line in [head] + body) for j in range(len(head))
    ]
    lines = [
        "  ".join(cell.rjust(widths[j]) for j, cell in enumerate(line))
        for line in [head] + body
    ]
    return "\n".join(lines)


def render_bigraded(t: BigradedTable) -> str:
    """(i, s) tables print with polynomial degree as rows."""
    return render_grid({(s, i): d for (i, s), d in t.items()}, "s\\i")


def render_page(page: PageTable) -> str:
    entries = {
        (q, p): (v if page.hat else _descriptor_str(v))
        for (p, q), v in page.items()
    }
    return render_grid(entries, "q\\p")


def _render_decomposition(d: Decomposition) -> str:
    lines = ["k = %d" % d.k]
    lines.append(
        "free pieces: "
        + (" ".join("(%d,%d)" % p for p in d.free_pieces) if d.free_pieces else "none")
    )
    lines.append(
        "torsion pieces: "
        + (
            " ".join("(i=%d,m=%d,s=%d)" % p for p in d.torsion_pieces)
            if d.torsion_pieces
            else "none"
        )
    )
    return "\n".join(lines)


# -- reports -----------------------------------------------------------


def _full_report(c: GradedComplex) -> dict:
    d = decompose(c)
    table = hn_table(d)
    tw = torsion_width(d)
    ht = lht = None
    if table:
        try:
            ht, lht = thickness(table)
        except ValueError:
            pass
    cp = collapse_page(d)
    fd = first_differential(c)
    return {
        "format": jsonio.FORMAT,
        "type": "report",
        "k": d.k,
        "decomposition": jsonio.decomposition_to_data(d),
        "hn": jsonio.table_to_entries(table),
        "tw": tw,
        "ht": ht,
        "lht": lht,
        "collapse_page": cp,
        "pages": [
            jsonio.page_to_data(assembled_pages(d, True, r))
            for r in range(1, cp + 1)
        ],
        "delta_rank": fd.rank(),
        "delta_ranks": {
            str(i): exactla.rank(fd.block(i)) for i in sorted(fd.blocks)
        },
    }


def _render_report(rep: dict) -> str:
    d = jsonio.decomposition_from_json(rep["decomposition"])
    out = [_render_decomposition(d)]
    out.append("")
    out.append("mod-a homology:")
    out.append(
        render_bigraded(
            BigradedTable({(i, s): v for i, s, v in rep["hn"]})
        )
    )
    out.append("")
    out.append(
        "tw = %d   ht = %s   lht = %s   collapse page = %d"
        % (rep["tw"], rep["ht"], rep["lht"], rep["collapse_page"])
    )
    for pd in rep["pages"]:
        out.append("")
        out.append("page r=%d:" % pd["r"])
        out.append(render_page(jsonio.page_from_json(pd)))
    by_degree = ", ".join(
        "%s -> %d" % (i, r) for i, r in sorted(rep["delta_ranks"].items())
    )
    out.append("")
    out.append(
        "delta rank = %d%s"
        % (rep["delta_rank"], (" (by degree: %s)" % by_degree) if by_degree else "")
    )
    return "\n".join(out)


# -- subcommands -------------------------------------------------------


def cmd_decompose(args) -> int:
    data = _read_document(args.input)
    c = jsonio.complex_from_json(data)
    d = decompose(c)
    if args.format == "table":
        _emit(_render_decomposition(d))
    else:
        _emit(jsonio.dumps(jsonio.decomposition_to_data(d)))
    return EXIT_OK


def cmd_pages(args) -> int:
    d, c = _load_decomposition(args.input)
    if args.generic and c is None:
        raise SchemaError("--generic needs a complex document as input")

    def page_at(r):
        if args.module:
            return assembled_pages(d, False, r)
        if args.generic:
            return generic_pages(specialize_a_to_1(c), r)
        return assembled_pages(d, True, r)

    if args.page is not None:
        page = page_at(args.page)
        if args.format == "table":
            _emit("page r=%d:\n%s" % (page.r, render_page(page)))
        else:
            _emit(jsonio.dumps(jsonio.page_to_data(page)))
        return EXIT_OK

    # the sequence output samples one page per stability block (indices
    # 1, 2k+1, 4k+1, ...) -- the derived-page indexing that recover
    # consumes, stable from position tau+1 on
    if args.module:
        raise SchemaError("--module needs an explicit --page index")
    count = args.r_max if args.r_max is not None else len(pages_from_decomposition(d))
    if args.generic:
        tables = [page_at(2 * d.k * (r - 1) + 1) for r in range(1, count + 1)]
    else:
        tables = [
            assembled_pages(d, True, 2 * d.k * (r - 1) + 1)
            for r in range(1, count + 1)
        ]
    if args.format == "table":
        chunks = [
            "page %d (filtered index %d):\n%s"
            % (n + 1, p.r, render_page(p))
            for n, p in enumerate(tables)
        ]
        _emit("\n\n".join(chunks))
    else:
        hom = [p.table().to_hom_poly() for p in tables]
        _emit(jsonio.dumps(jsonio.raw_pages_to_data(d.k, hom)))
    return EXIT_OK


def cmd_recover(args) -> int:
    ps = jsonio.pages_from_json(_read_document(args.input))
    d = recover(ps)
    if args.format == "table":
        _emit(_render_decomposition(d))
    else:
        _emit(jsonio.dumps(jsonio.decomposition_to_data(d)))
    return EXIT_OK


def cmd_couple(args) -> int:
    d, _ = _load_decomposition(args.input)
    couple = couple_from_decomposition(d)
    r_lo = r_hi = args.r if args.r is not None else None
    if r_lo is None:
        r_lo, r_hi = 1, (args.r_max if args.r_max is not None else torsion_width(d) + 2)
    dumps = []
    texts = []
    for r in range(r_lo, r_hi + 1):
        table = couple_pages(couple, r)
        if args.hat_index:
            # E-hat position (q, p - q) at page 2k(r-1)+1 carries the
            # same dimension as the derived-couple page r at (p, q)
            label = 2 * d.k * (r - 1) + 1
            entries = {
                (q, p - q): dim for (p, q), dim in table.to_page().items()
            }
        else:
            label = r
            entries = dict(table.to_page().items())
        page = PageTable(label, entries, True)
        dumps.append(jsonio.page_to_data(page))
        texts.append("page r=%d:\n%s" % (label, render_page(page)))
    if args.format == "table":
        _emit("\n\n".join(texts))
    elif len(dumps) == 1:
        _emit(jsonio.dumps(dumps[0]))
    else:
        _emit("\n".join(jsonio.dumps(x) for x in dumps))
    return EXIT_OK


def _parse_lambdas(text: str):
    """"1=-1,2=1/3" -> ((1, Fraction(-1)), (2, Fraction(1, 3)))."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        j, _, val = chunk.partition("=")
        out.append((int(j), Fraction(val)))
    return tuple(out)


def cmd_twobraid(args) -> int:
    if args.i is not None:
        spec = TwoBraidSpec.power_basis(args.N, args.i, Fraction(args.coefficient))
    else:
        if args.k is None or args.lambdas is None:
            raise SchemaError("need either --i or both --k and --lambdas")
        spec = TwoBraidSpec(args.N, args.k, _parse_lambdas(args.lambdas))
    rep = _full_report(build_twobraid(spec))
    _emit(_render_report(rep) if args.format == "table" else jsonio.dumps(rep))
    return EXIT_OK


def cmd_link(args) -> int:
    if args.braid is not None:
        diagram = LinkDiagram.from_braid_text(args.braid, args.strands)
    elif args.pd is not None:
        raw = args.pd
        if os.path.exists(raw):
            with open(raw, "r", encoding="utf-8") as fh:
                raw = fh.read()
        try:
            entries = json.loads(raw)
        except json.JSONDecodeError as e:
            raise SchemaError("cannot parse PD JSON: %s" % e)
        diagram = LinkDiagram(
            tuple((sign, tuple(arcs)) for sign, arcs in entries), args.free_loops
        )
    else:
        raise SchemaError("need --braid or --pd")
    if args.lambdas is not None:
        potential = Sl2Potential(args.k, _parse_lambdas(args.lambdas))
    else:
        potential = Sl2Potential.standard()
    rep = _full_report(build_sl2_cube(diagram, potential))
    _emit(_render_report(rep) if args.format == "table" else jsonio.dumps(rep))
    return EXIT_OK


def cmd_delta(args) -> int:
    scalings = (
        tuple(Fraction(x) for x in args.scalings.split(","))
        if args.scalings
        else (Fraction(1), Fraction(5), Fraction(-2, 3))
    )
    battery = delta_battery(args.N, scalings)
    data = {
        "format": jsonio.FORMAT,
        "type": "delta",
        "N": battery.N,
        "ranks": {str(i): r for i, r in sorted(battery.ranks.items())},
        "concentrated": battery.concentrated,
        "top_vanishes": battery.top_vanishes,
        "anticommute": battery.anticommute,
        "scaling_ok": battery.scaling_ok,
        "ok": battery.ok(),
        "matrices": {
            str(i): {
                str(h): [[str(x) for x in row] for row in fd.blocks[h]]
                for h in sorted(fd.blocks)
            }
            for i, fd in sorted(battery.deltas.items())
        },
    }
    if args.format == "table":
        lines = ["N = %d" % battery.N]
        lines.append(
            "ranks: "
            + "  ".join("delta_%d -> %d" % (i, r) for i, r in sorted(battery.ranks.items()))
        )
        for name in ("concentrated", "top_vanishes", "anticommute", "scaling_ok"):
            lines.append("%s: %s" % (name, "yes" if data[name] else "NO"))
        lines.append("verdict: %s" % ("ok" if battery.ok() else "FAIL"))
        _emit("\n".join(lines))
    else:
        _emit(jsonio.dumps(data))
    return EXIT_OK if battery.ok() else EXIT_GENERIC


def cmd_verify(args) -> int:
    seed = args.seed
    env = os.environ.get("TW_SEED")
    if env is not None:
        seed = int(env)
    seeds = item_seeds(seed, args.count)
    workers = args.jobs if args.jobs else min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(verify_item, seeds))
    failures = [
        {"item": n, "seed": s, "failures": fails}
        for n, (s, fails) in enumerate(zip(seeds, results))
        if fails
    ]
    passed = args.count - len(failures)
    if args.format == "table":
        lines = ["%d/%d pass" % (passed, args.count)]
        for f in failures:
            lines.append(
                "item %d (seed %d): %s" % (f["item"], f["seed"], "; ".join(f["failures"]))
            )
        _emit("\n".join(lines))
    else:
        _emit(
            jsonio.dumps(
                {
                    "format": jsonio.FORMAT,
                    "type": "verify",
                    "seed": seed,
                    "count": args.count,
                    "passed": passed,
                    "failures": failures,
                }
            ),
        )
    return EXIT_OK if passed == args.count else EXIT_GENERIC


# -- parser ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twkit",
        description="Exact decomposition, spectral-sequence, and recovery "
        "toolkit for graded complexes over k[a].",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument(
            "--format",
            choices=("json", "table"),
            default="json",
            help="json is the machine contract; table is for reading",
        )

    p = sub.add_parser("decompose", help="split a complex into elementary pieces")
    p.add_argument("input", help="complex document: path, inline JSON, or -")
    add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pages", help="spectral-sequence pages of a complex or decomposition")
    p.add_argument("input", help="complex or decomposition document")
    p.add_argument(
        "--r-max",
        type=int,
        default=None,
        help="sequence length (default: tau+1, what recover needs)",
    )
    p.add_argument(
        "--page",
        type=int,
        default=None,
        help="dump one page at this raw filtered index instead",
    )
    p.add_argument("--module", action="store_true", help="module-valued page (needs --page)")
    p.add_argument(
        "--generic",
        action="store_true",
        help="compute from the a=1 specialization instead of the closed form",
    )
    add_common(p)
    p.set_defaults(func=cmd_pages)

    p = sub.add_parser("recover", help="reconstruct a decomposition from its pages")
    p.add_argument("input", help="pages document")
    add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("couple", help="derived exact-couple pages")
    p.add_argument("input", help="complex or decomposition document")
    p.add_argument("--r", type=int, default=None, help="single page index")
    p.add_argument("--r-max", type=int, default=None, help="last page (default: tw+2)")
    p.add_argument(
        "--hat-index",
        action="store_true",
        help="report positions and page labels in the filtered-complex indexing",
    )
    add_common(p)
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("twobraid", help="closed 2-braid report for general N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--i", type=int, default=None, help="power-basis potential exponent")
    p.add_argument("--coefficient", default="1", help="coefficient on the b x^i term")
    p.add_argument("--k", type=int, default=None, help="half the degree of a (general potential)")
    p.add_argument("--lambdas", default=None, help='general potential, e.g. "1=-1,2=1/3"')
    add_common(p)
    p.set_defaults(func=cmd_twobraid)

    p = sub.add_parser("link", help="equivariant sl(2) report for a link diagram")
    p.add_argument("--braid", default=None, help='braid word, e.g. "s1 s1 s1" or "1 1 1"')
    p.add_argument("--strands", type=int, default=None)
    p.add_argument("--pd", default=None, help="PD code JSON: [[sign,[a,b,c,d]],...] or a path")
    p.add_argument("--free-loops", type=int, default=0)
    p.add_argument("--k", type=int, default=2, choices=(1, 2))
    p.add_argument("--lambdas", default=None, help='potential coefficients, e.g. "1=-1"')
    add_common(p)
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("delta", help="induced-differential battery for the 2-braid family")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--scalings", default=None, help='comma list of rationals, e.g. "1,5,-2/3"')
    add_common(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("verify", help="run the seeded cross-check suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--jobs", type=int, default=None)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ComplexError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_COMPLEX
    except InconsistentPages as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_PAGES
    except InsufficientWindow as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_WINDOW
    except (SchemaError, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_GENERIC


if __name__ == "__main__":
    sys.exit(main())
