"""Command-line interface: ``metacyclic <command> ...``.

Exit codes: 0 success, 1 invalid parameters, 2 internal consistency failure.
Relative output paths are resolved against ``$METACYCLIC_OUTPUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, enumeration, graph, spectral
from .errors import ConvergenceError, DomainError, ParameterError, StructureError
from .group import validate_params

OUTPUT_DIR_ENV = "METACYCLIC_OUTPUT_DIR"


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        lo, sep, hi = text.partition(":")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    target = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not target.is_absolute():
        target = Path(base) / target
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", newline="\n") as fh:
        yield fh


def _params(args):
    return validate_params(args.m, args.n, args.k)


def _add_triple(p: argparse.ArgumentParser):
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)


def cmd_build(args) -> int:
    block = graph.build_structured(_params(args))
    with _sink(args.output) as fh:
        if args.format == "mm":
            graph.write_matrix_market(block, fh)
        else:
            graph.write_edge_csv(block, fh)
    return 0


def cmd_spectrum(args) -> int:
    p = _params(args)
    report = spectral.ramanujan_check(p, fast_path=False, allow_torus=True)
    with _sink(args.output) as fh:
        if args.format == "json":
            rows = [{"block_index": i, "eigenvalue": float(v)}
                    for i, row in enumerate(report.block_eigenvalues) for v in row]
            fh.write(json.dumps(rows) + "\n")
        else:
            spectral.write_spectrum_csv(report, fh)
    return 0


def cmd_check(args) -> int:
    report = spectral.ramanujan_check(_params(args))
    with _sink(args.output) as fh:
        fh.write(spectral.report_json(report) + "\n")
    return 0


def cmd_sweep(args) -> int:
    (m_lo, m_hi), (n_lo, n_hi) = args.m_range, args.n_range
    search = enumeration.SearchRange(m_lo, m_hi, n_lo, n_hi, require_nontrivial_k=not args.include_trivial)
    records = enumeration.sweep(search, jobs=args.jobs)
    if args.ramanujan_only:
        records = [r for r in records if r.ramanujan]
    with _sink(args.output) as fh:
        if args.format == "json":
            fh.write(enumeration.records_json(records) + "\n")
        else:
            enumeration.write_records_csv(records, fh)
    return 0


def cmd_bound(args) -> int:
    p = _params(args)
    eps = args.epsilon if args.epsilon is not None else p.epsilon
    config = bounds.BoundConfig(a=args.a, series_t=args.t, epsilon=eps, truncation_k=args.K)
    block = spectral.fourier_block(args.i % p.n, p)
    moments = bounds.moment_sequence(block, config.truncation_k)
    terms = {}
    for k in range(2, config.truncation_k + 1):
        r1, r2, r3 = bounds.ck_terms(k, moments, p.m, config)
        terms[str(k)] = {"R1": r1, "R2": r2, "R3": r3}
    out = {
        "m": p.m, "n": p.n, "k": p.k, "i": block.index_i,
        "a": config.a, "t": config.series_t, "epsilon": eps, "K": config.truncation_k,
        "wm_bound": bounds.wm_lower_bound_exact(moments, p.m, config),
        "b_expansion": bounds.b_expansion(p.n, config),
        "largest_eigenvalue": float(spectral.hermitian_eigenvalues(block)[-1]),
        "R_terms": terms,
    }
    with _sink(args.output) as fh:
        fh.write(json.dumps(out) + "\n")
    return 0


def cmd_table(args) -> int:
    config = bounds.BoundConfig(a=args.a, series_t=args.t, epsilon=args.epsilon)
    rows = bounds.bound_table(config, args.kmin, args.kmax, s2_form=args.s2_form)
    with _sink(args.output) as fh:
        bounds.write_bound_table(rows, fh)
    return 0


def run_verification(p) -> list[tuple[str, bool, str]]:
    """Oracle checks for one triple as ``(name, passed, detail)``."""
    results = []
    brute = graph.build_bruteforce(p)
    structured = graph.build_structured(p)
    same = bool((graph.expand_dense(structured) == brute.dense).all())
    results.append(("structured-equals-bruteforce", same, ""))

    check = spectral.verify_blocks(p, brute.dense)
    ok = check.off_block_residual <= spectral.RESIDUAL_TOL and check.max_block_deviation <= spectral.RESIDUAL_TOL
    results.append(("fourier-blocks", ok,
                    f"residual={check.off_block_residual:.3e} deviation={check.max_block_deviation:.3e}"))

    dense_eigs = np.linalg.eigvalsh(brute.dense.astype(float))
    block_eigs = np.sort(spectral.block_spectra(p).ravel())
    gap = float(np.abs(dense_eigs - block_eigs).max())
    results.append(("spectrum", gap <= 1e-8, f"max_diff={gap:.3e}"))

    worst = 0.0
    blocks = spectral.fourier_blocks(p)
    for i in range(p.n):
        ms = bounds.moments_closed_form(i, p)
        seq = bounds.moment_sequence(blocks[i], 3)
        worst = max(worst, abs(seq[1] - p.m * ms.N1_over_m), abs(seq[2] - p.m * ms.N2_over_m),
                    abs(seq[3] - p.m * ms.N3_over_m))
    results.append(("moments", worst <= 1e-9 * p.m, f"max_diff={worst:.3e}"))
    return results


def cmd_verify(args) -> int:
    results = run_verification(_params(args))
    with _sink(args.output) as fh:
        for name, ok, detail in results:
            fh.write(f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip() + "\n")
    return 0 if all(ok for _, ok, _ in results) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metacyclic", description="Spectra of metacyclic Cayley graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="export the adjacency matrix")
    _add_triple(p)
    p.add_argument("--format", choices=["mm", "csv"], default="mm")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues of every Fourier block")
    _add_triple(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="Ramanujan verdict as JSON")
    _add_triple(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="classify every twist over a parameter range")
    p.add_argument("--m-range", type=_range, required=True, metavar="LO..HI")
    p.add_argument("--n-range", type=_range, required=True, metavar="LO..HI")
    p.add_argument("--jobs", type=int, default=enumeration.default_jobs())
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--ramanujan-only", action="store_true")
    p.add_argument("--include-trivial", action="store_true", help="also classify k = 1")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="moment lower bound for one block")
    _add_triple(p)
    p.add_argument("-i", type=int, default=1, help="block index")
    p.add_argument("--a", type=float, default=127.5)
    p.add_argument("--t", type=float, default=1000.0)
    p.add_argument("--K", type=int, default=bounds.DEFAULT_TRUNCATION)
    p.add_argument("--epsilon", type=int, choices=[2, 3])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", help="a priori estimates of the series terms")
    p.add_argument("--a", type=float, default=127.5)
    p.add_argument("--t", type=float, default=1000.0)
    p.add_argument("--epsilon", type=int, choices=[2, 3], default=2)
    p.add_argument("--kmin", type=int, default=4)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--s2-form", choices=["table", "corollary"], default="table")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="cross-check both constructions and the closed forms")
    _add_triple(p)
    p.set_defaults(func=cmd_verify)

    for action in sub.choices.values():
        action.add_argument("-o", "--output", help="output file (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (StructureError, ConvergenceError, DomainError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
