"""Command line front end.

Exit codes: 0 success, 1 parse or usage error (including unknown family),
2 a generator or query perm moves a point beyond the declared degree,
3 ``member`` found the perm is not in the group.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .analysis import check_bounds, growth_fit, write_csv
from .families import GeneratorSet, parse_family_spec
from .perm import DegreeMismatch, PermParseError, PointOutOfRange, format_cycles, parse_cycles
from .sims import Strategy, build
from .transversal import order, sift, strong_generators

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DEGREE = 2
EXIT_NON_MEMBER = 3


class GeneratorFileError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GeneratorDegreeError(GeneratorFileError):
    pass


@dataclass(frozen=True)
class GeneratorFile:
    path: str
    degree: int
    generators: GeneratorSet


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_generator_text(text: str, path: str = "<string>") -> GeneratorFile:
    """Parse ``degree n`` followed by one cycle-notation generator per line.

    Blank lines and ``#`` comments are ignored anywhere.
    """
    degree = None
    perms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if degree is None:
            head, _, value = line.partition(" ")
            if head != "degree":
                raise GeneratorFileError("expected 'degree n' as the first line", lineno)
            try:
                degree = int(value.strip())
            except ValueError:
                raise GeneratorFileError(f"bad degree {value.strip()!r}", lineno) from None
            if degree < 1:
                raise GeneratorFileError("degree must be at least 1", lineno)
            continue
        try:
            perms.append(parse_cycles(line, degree))
        except PointOutOfRange as exc:
            raise GeneratorDegreeError(str(exc), lineno) from None
        except PermParseError as exc:
            raise GeneratorFileError(str(exc), lineno) from None
    if degree is None:
        raise GeneratorFileError("missing 'degree n' line", 1)
    return GeneratorFile(path, degree, GeneratorSet(degree, tuple(perms), Path(path).name))


def read_generator_file(path: str) -> GeneratorFile:
    with open(path, encoding="utf-8") as fh:
        return parse_generator_text(fh.read(), path)


def _parse_int_list(text: str) -> list[int]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, dots, hi = part.partition("..")
        if dots:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permsims", description="Build and query transversal systems of perm groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    strategies = [s.value for s in Strategy]

    p = sub.add_parser("build", help="build a transversal system from a generator file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="generator file")
    src.add_argument("--family", help="use a named family instead of a file")
    p.add_argument("--strategy", choices=strategies, default="recursive")
    p.add_argument("--stats", action="store_true", help="print build counters")
    p.add_argument("--dump", action="store_true", help="print every stored transversal perm")
    p.add_argument("--bounds", action="store_true", help="print the structural bound report")

    p = sub.add_parser("member", help="test whether a perm lies in the generated group")
    p.add_argument("file")
    p.add_argument("perm", help="perm in cycle notation, e.g. '[1,2][3,4]'")
    p.add_argument("--strategy", choices=strategies, default="recursive")

    p = sub.add_parser("bench", help="measure cost growth across sizes")
    p.add_argument("--family", required=True)
    p.add_argument("--sizes", default="-", help="comma list of sizes, or '-' for the family's own parameters")
    p.add_argument("--strategy", choices=strategies, default="recursive")
    p.add_argument("--seeds", default=None, help="seed list such as '1..20' or '1,5,9'")
    p.add_argument("--out", default=None, help="CSV path; default writes CSV to stdout")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cost-limit", type=int, default=None)
    p.add_argument(
        "--metric",
        choices=["auto", "mult_cost_units", "total_cost_units"],
        default="auto",
        help="cost used for exponents; auto uses total cost for the doubling families",
    )
    return parser


def _load(args) -> GeneratorSet:
    if getattr(args, "family", None):
        return parse_family_spec(args.family).instantiate()
    return read_generator_file(args.file).generators


def cmd_build(args, out, err) -> int:
    gens = _load(args)
    system, stats = build(gens, args.strategy)
    print(f"order {order(system)}", file=out)
    for k in range(1, system.degree + 1):
        if system.s(k) > 1:
            print(f"level {k} s={system.s(k)} t={system.t(k)}", file=out)
    print(f"strong_generators {len(strong_generators(system))}", file=out)
    if args.stats:
        for key, value in stats.as_dict().items():
            print(f"stats.{key} {value}", file=out)
    if args.bounds:
        rep = check_bounds(system)
        print(f"bounds.theta_g {rep.theta_g}", file=out)
        print(f"bounds.l_n_g {rep.l_n_g}", file=out)
        print(f"bounds.log_n_g {rep.log_n_g:.4f}", file=out)
        print(f"bounds.sum_s_minus_1 {rep.sum_s_minus_1}", file=out)
        print(f"bounds.minimal_product {rep.minimal_product_bound}", file=out)
        print(f"bounds.ok {str(rep.ok).lower()}", file=out)
        for v in rep.violations:
            print(f"bounds.violation {v}", file=out)
    if args.dump:
        for k in range(1, system.degree + 1):
            for j, p in system.transversal(k).items():
                if j != k:
                    print(f"sigma {k},{j} {format_cycles(p)}", file=out)
    return EXIT_OK


def cmd_member(args, out, err) -> int:
    gf = read_generator_file(args.file)
    try:
        p = parse_cycles(args.perm, gf.degree)
    except PointOutOfRange as exc:
        print(f"permsims: perm: {exc}", file=err)
        return EXIT_DEGREE
    system, _ = build(gf.generators, args.strategy)
    tr = sift(system, p)
    if tr.member:
        path = "".join(f"({k},{j})" for k, j in tr.path)
        print(f"MEMBER path={path} multiplications={len(tr.path)} cost={tr.cost_units}", file=out)
        return EXIT_OK
    print(
        f"NON-MEMBER level={tr.failure_level} column={tr.failure_column} "
        f"residue={format_cycles(tr.residue)}",
        file=out,
    )
    return EXIT_NON_MEMBER


def cmd_bench(args, out, err) -> int:
    spec = parse_family_spec(args.family)
    sizes: list[Optional[int]] = [None] if args.sizes.strip() == "-" else _parse_int_list(args.sizes)
    seeds = _parse_int_list(args.seeds) if args.seeds else None
    metric = args.metric
    if metric == "auto":
        metric = "total_cost_units" if spec.name.startswith("doubling") else "mult_cost_units"
    fit = growth_fit(
        spec,
        sizes,
        args.strategy,
        seeds,
        cost_limit=args.cost_limit,
        workers=args.workers,
        metric=metric,
    )
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(fit.rows, fh)
        summary = out
    else:
        write_csv(fit.rows, out)
        summary = err
    print(f"# {fit.label} metric={fit.metric}", file=summary)
    for i, (n, c) in enumerate(zip(fit.sizes, fit.costs)):
        line = f"n={n} cost={c:g}"
        if i:
            line += f" exponent={fit.pairwise_exponents[i - 1]:.3f}"
        print(line, file=summary)
    if len(fit.sizes) == 1:
        slots = [r.slots_filled for r in fit.rows]
        print(f"slots_filled {sum(slots) / len(slots):g}", file=summary)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "member": cmd_member, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = _make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out, err)
    except GeneratorDegreeError as exc:
        print(f"permsims: {exc}", file=err)
        return EXIT_DEGREE
    except (GeneratorFileError, PermParseError) as exc:
        print(f"permsims: {exc}", file=err)
        return EXIT_PARSE
    except DegreeMismatch as exc:
        print(f"permsims: {exc}", file=err)
        return EXIT_DEGREE
    except OSError as exc:
        print(f"permsims: {exc}", file=err)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"permsims: {exc}", file=err)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
