"""Command-line front door.

Subcommands: verify, spectrum, positivity, check-integral-rep, matrix-unit,
verify-units, fock, mehler, emit, williamson.  Exit codes: 0 pass,
1 assertion failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fock as fk
from . import gaussian as ga
from . import serialize as se
from . import spectral as sp
from . import symplectic as sy
from . import units as un
from .grid import PhaseGrid
from .suites import SUITE_ORDER, RunConfig, run_suites


def _parse_complex(text: str) -> complex:
    return complex(text.replace("i", "j"))


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--grid-L", type=float, default=10.0, help="grid half-width")
    p.add_argument("--grid-N", type=int, default=96, help="nodes per axis")
    p.add_argument("--dim", type=int, default=32, help="Fock truncation dimension")
    p.add_argument("--tol", type=float, default=2e-4, help="suite tolerance")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out-dir", type=Path, default=Path("."))


def _config(args) -> RunConfig:
    return RunConfig(
        grid_L=args.grid_L,
        grid_N=args.grid_N,
        dim=args.dim,
        tol=args.tol,
        seed=args.seed,
    )


def _load_element(path) -> ga.GaussianElement:
    return se.gaussian_from_json(se.read_json(path))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccrweyl",
        description="Exact Gaussian calculus and verification for the twisted-convolution algebra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", choices=SUITE_ORDER + ("all",), default="all")
    p.add_argument("--max-index", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("verify-units", help="matrix-unit relation report")
    p.add_argument("--max", dest="max_index", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("spectrum", help="eigenvalue table of a Gaussian element")
    p.add_argument("--gamma", type=_parse_complex, default=None)
    p.add_argument("--element", type=Path, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--emit", choices=("json", "csv"), default=None)
    _add_common(p)

    p = sub.add_parser("positivity", help="positivity of a hermitian Gaussian element")
    p.add_argument("--element", type=Path, required=True)
    _add_common(p)

    p = sub.add_parser("check-integral-rep", help="coherent-kernel integral residual")
    p.add_argument("--gamma", type=_parse_complex, required=True)
    _add_common(p)

    p = sub.add_parser("matrix-unit", help="evaluate and export a matrix unit")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--emit-grid", type=Path, default=None)
    p.add_argument("--emit-plot", type=Path, default=None)
    _add_common(p)

    p = sub.add_parser("fock", help="truncated number-basis matrix of an element")
    p.add_argument("--element", type=Path, required=True)
    p.add_argument("--emit", type=Path, default=None)
    _add_common(p)

    p = sub.add_parser("mehler", help="kernel cross-check for pi(g_gamma)")
    p.add_argument("--gamma", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("emit", help="grid samples, heatmap and descriptor of an element")
    p.add_argument("--element", type=Path, default=None)
    p.add_argument("--gamma", type=_parse_complex, default=None)
    p.add_argument("--plot", action="store_true")
    _add_common(p)

    p = sub.add_parser("williamson", help="normal form of a positive-definite form")
    p.add_argument("--matrix", type=Path, required=True, help="JSON {n, matrix}")
    _add_common(p)

    return parser


def cmd_verify(args) -> int:
    cfg = RunConfig(
        grid_L=args.grid_L,
        grid_N=args.grid_N,
        dim=args.dim,
        tol=args.tol,
        seed=args.seed,
        max_index=getattr(args, "max_index", 4),
    )
    names = SUITE_ORDER if args.suite == "all" else (args.suite,)
    results = run_suites(names, cfg)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_verify_units(args) -> int:
    cfg = _config(args)
    report = un.verify_matrix_unit_relations(args.max_index, cfg.grid())
    print(
        f"{len(report.checks)} relations checked, max residual "
        f"{report.max_residual:.3e}, adjoint residual {report.adjoint_residual:.3e}"
    )
    ok = report.max_residual <= args.tol and report.adjoint_residual <= 1e-10
    print("pass" if ok else "FAIL")
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    if (args.gamma is None) == (args.element is None):
        print("spectrum needs exactly one of --gamma / --element", file=sys.stderr)
        return 2
    if args.gamma is not None:
        data = sp.spectrum_single(args.gamma, cutoff=args.cutoff)
    else:
        data = sp.spectrum_gaussian(_load_element(args.element), cutoff=args.cutoff)
    emit = args.emit or args.format
    if emit == "csv":
        out = args.out_dir / "spectrum.csv"
        se.spectrum_to_csv(data.entries, out)
        print(f"wrote {out}")
    else:
        payload = {
            "schema": se.SCHEMA,
            "prefactor": se._c2pair(data.prefactor),
            "ratios": se._carray2pairs(data.ratios),
            "eigenvalues": se.spectrum_rows(data.entries),
        }
        out = args.out_dir / "spectrum.json"
        se.write_json(payload, out)
        print(f"wrote {out}")
    for idx, lam in data.entries[:12]:
        print(f"  {idx}: {lam.real:+.12g}{lam.imag:+.12g}j")
    return 0


def cmd_positivity(args) -> int:
    f = _load_element(args.element)
    pos = sp.is_positive(f)
    gammas = sy.symplectic_gammas(f.Q.real)
    print("invariants:", " ".join(f"{g:.12g}" for g in gammas))
    print("positive" if pos else "not positive")
    return 0


def cmd_check_integral_rep(args) -> int:
    cfg = _config(args)
    resid = sp.integral_representation_check(args.gamma, cfg.grid())
    print(f"residual {resid:.3e}")
    ok = resid <= 1e-3
    print("pass" if ok else "FAIL")
    return 0 if ok else 1


def cmd_matrix_unit(args) -> int:
    cfg = _config(args)
    cutoff = max(un.DEFAULT_CUTOFF, args.k, args.l)
    pg = un.matrix_unit(args.k, args.l, cutoff=cutoff)
    samples = pg.evaluate(cfg.grid())
    print(
        f"g_{{{args.k},{args.l}}}: polynomial degree {pg.degree}, "
        f"L1 norm {samples.grid.weight * np.abs(samples.values).sum():.12g}"
    )
    if args.emit_grid is not None:
        se.write_json(se.grid_to_json(samples), args.emit_grid)
        print(f"wrote {args.emit_grid}")
    if args.emit_plot is not None:
        se.heatmap(samples, args.emit_plot)
        print(f"wrote {args.emit_plot}")
    return 0


def cmd_fock(args) -> int:
    cfg = _config(args)
    f = _load_element(args.element)
    op = fk.represent(f, fk.FockTruncation(args.dim), cfg.grid(f.n))
    evals = fk.fock_spectrum(f, fk.FockTruncation(args.dim), cfg.grid(f.n))
    print("leading eigenvalues:", " ".join(f"{v.real:+.8g}" for v in evals[:8]))
    if args.emit is not None:
        payload = {
            "schema": se.SCHEMA,
            "dim": args.dim,
            "matrix": se._carray2pairs(op.matrix),
        }
        se.write_json(payload, args.emit)
        print(f"wrote {args.emit}")
    return 0


def cmd_mehler(args) -> int:
    resid = fk.mehler_check(args.gamma, trunc=fk.FockTruncation(max(args.dim, 16)))
    print(f"residual {resid:.3e}")
    ok = resid <= 1e-4
    print("pass" if ok else "FAIL")
    return 0 if ok else 1


def cmd_emit(args) -> int:
    cfg = _config(args)
    if (args.gamma is None) == (args.element is None):
        print("emit needs exactly one of --gamma / --element", file=sys.stderr)
        return 2
    f = (
        ga.standard_gaussian(args.gamma)
        if args.gamma is not None
        else _load_element(args.element)
    )
    args.out_dir.mkdir(parents=True, exist_ok=True)
    se.write_json(se.gaussian_to_json(f), args.out_dir / "element.json")
    samples = ga.evaluate(f, cfg.grid(f.n))
    se.write_json(se.grid_to_json(samples), args.out_dir / "grid.json")
    if args.format == "csv" and f.n == 1:
        se.grid_slice_to_csv(samples, args.out_dir / "grid.csv")
    if args.plot and f.n == 1:
        se.heatmap(samples, args.out_dir / "heatmap.svg")
    print(f"wrote descriptors to {args.out_dir}")
    return 0


def cmd_williamson(args) -> int:
    K = se.quadratic_part_from_json(se.read_json(args.matrix))
    res = sy.williamson_normalize(K)
    print("invariants:", " ".join(f"{g:.12g}" for g in res.gammas))
    out = args.out_dir / "williamson.json"
    se.write_json(se.williamson_to_json(res), out)
    print(f"wrote {out}")
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "verify-units": cmd_verify_units,
    "spectrum": cmd_spectrum,
    "positivity": cmd_positivity,
    "check-integral-rep": cmd_check_integral_rep,
    "matrix-unit": cmd_matrix_unit,
    "fock": cmd_fock,
    "mehler": cmd_mehler,
    "emit": cmd_emit,
    "williamson": cmd_williamson,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
