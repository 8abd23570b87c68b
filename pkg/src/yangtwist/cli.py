"""Command line: ``yangtwist spectrum|build|verify --spec chain.json``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .chain import ChainSpec, NonGenericSpecError, SpecError, monodromy
from .fba import spectrum
from .rmatrix import higher_spin_r
from .twist import f_matrix, q_factor_left, tilde_ops
from .verify import SUITES, run_suite

OBJECTS = ("monodromy", "tilde", "f", "f-inverse", "r", "q")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Problem worth a one-line message and a nonzero exit."""


def load_spec(path: str) -> ChainSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read spec file {path}: {exc.strerror}") from None
    try:
        return ChainSpec.from_json(text)
    except SpecError as exc:
        raise CliError(f"{path}: {exc}") from None


def guard_dimension(spec: ChainSpec, max_dim: int) -> None:
    dim = spec.shape.total_dim
    if dim > max_dim:
        raise CliError(
            f"chain space has dimension {dim}, above --max-dim {max_dim}; "
            "raise the limit explicitly to run it"
        )


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(spec: ChainSpec, args) -> int:
    lattice = spectrum(spec)
    doc = {"version": __version__, "spec": spec.to_dict(), **lattice.to_json()}
    if not spec.is_generic():
        doc["warning"] = spec.genericity_violation()
        print(f"warning: {doc['warning']}", file=sys.stderr)
    for i, lat in enumerate(lattice.lattices):
        print(f"Lambda_{i + 1} = {{{', '.join(str(x) for x in lat)}}}", file=sys.stderr)
    print(f"disjoint: {str(lattice.disjoint).lower()}", file=sys.stderr)
    emit(dumps(doc), args.out)
    if args.strict and not (lattice.disjoint and spec.is_generic()):
        return EXIT_FAIL
    return EXIT_OK


def _polys(named) -> dict:
    return {name: poly.to_json() for name, poly in named}


def build_object(spec: ChainSpec, name: str) -> dict:
    if name == "monodromy":
        t = monodromy(spec)
        body = _polys((k, t.entry(k)) for k in "ABCD")
    elif name == "tilde":
        t = tilde_ops(spec)
        body = _polys((k, t.entry(k)) for k in "ABCD")
    elif name == "f":
        body = {"matrix": f_matrix(spec).op.to_json()}
    elif name == "f-inverse":
        body = {"matrix": f_matrix(spec).inverse.to_json()}
    elif name == "q":
        if spec.n_sites < 2:
            raise CliError("object 'q' needs at least two sites")
        body = {"matrix": q_factor_left(spec).to_json()}
    elif name == "r":
        if spec.n_sites != 2:
            raise CliError(f"object 'r' needs exactly 2 sites, got {spec.n_sites}")
        a, b = spec.sites
        r = higher_spin_r(a.two_l, a.delta, b.two_l, b.delta, spec.eta).to_json()
        body = {"params": r["params"], "matrix": r["matrix"]}
    else:
        raise CliError(f"unknown object {name!r}")
    return {"version": __version__, "object": name, "spec": spec.to_dict(), **body}


def cmd_build(spec: ChainSpec, args) -> int:
    emit(dumps(build_object(spec, args.object)), args.out)
    return EXIT_OK


def cmd_verify(spec: ChainSpec, args) -> int:
    report = run_suite(spec, args.suite)
    emit(dumps(report.to_json()), args.out)
    for check in report.checks:
        if not check.status:
            print(check, file=sys.stderr)
    print(
        f"{report.suite}: {'pass' if report.passed else 'fail'} "
        f"({len(report.checks)} checks)",
        file=sys.stderr,
    )
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yangtwist",
        description="Build and verify exact F-matrices of inhomogeneous rational sl2 spin chains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="chain spec JSON file")
    common.add_argument("--max-dim", type=int, default=4096, help="refuse larger chain spaces")
    common.add_argument("--out", help="write JSON here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="per-site lattices and disjointness")
    p.add_argument("--strict", action="store_true", help="exit nonzero when lattices overlap")
    p.set_defaults(run=cmd_spectrum)

    p = sub.add_parser("build", parents=[common], help="dump one object as exact JSON")
    p.add_argument("--object", required=True, choices=OBJECTS)
    p.set_defaults(run=cmd_build)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        guard_dimension(spec, args.max_dim)
        return args.run(spec, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonGenericSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
