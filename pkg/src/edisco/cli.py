"""Command-line interface.

CSV is the interchange format between subcommands: one value per line for
vectors, triangular CSV for matrices.  Exit status is 0 on success, 1 on a
validation error and 2 on an I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import conformal, discovery, evalues, render, simulation
from .errors import EdiscoError

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(EdiscoError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- I/O helpers -----------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_float(cell: str, lineno: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise UsageError(f"line {lineno}: not a number: {cell!r}") from None


def read_column(path: str, column: int = 0) -> np.ndarray:
    """Read one CSV column of numbers; a non-numeric first line is taken as a header."""
    out = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.replace("\t", ",").split(",")
        if len(fields) <= column:
            raise UsageError(f"{path} line {lineno}: missing column {column + 1}")
        cell = fields[column].strip()
        if lineno == 1 and not out:
            try:
                float(cell)
            except ValueError:
                continue
        out.append(_parse_float(cell, lineno))
    if not out:
        raise UsageError(f"{path}: no values")
    return np.array(out)


def _format_column(values) -> str:
    return "".join(format(float(v), ".17g") + "\n" for v in values)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError("indices must be integers") from None


def _parse_crop(text: str | None):
    if text is None:
        return None
    parts = text.replace("x", ",").split(",")
    if len(parts) == 1:
        parts = parts * 2
    try:
        return int(parts[0]), int(parts[1])
    except (ValueError, IndexError):
        raise UsageError(f"bad crop {text!r}; expected ROWS,COLS") from None


# --- subcommands ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    params = {}
    if args.config:
        params.update(simulation.read_scenario_config(_read_text(args.config)))
    for key in ("K", "delta", "eta", "seed", "fraction_false"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    if "K" not in params:
        raise UsageError("--K is required (flag or config file)")
    scenario = simulation.GaussianScenario(**params)
    x, is_false = simulation.generate_observations(scenario)
    text = "".join(f"{format(float(v), '.17g')},{int(f)}\n" for v, f in zip(x, is_false))
    _write_text(args.output, text)
    return EXIT_OK


def cmd_evalues(args) -> int:
    x = read_column(args.input)
    kind = args.kind or ("gb" if args.eta is not None else "lr")
    if kind == "lr":
        out = simulation.likelihood_ratio_e(x, args.delta)
    elif kind == "gb":
        out = simulation.generalized_bayes_e(x, args.delta, 1.0 if args.eta is None else args.eta)
    else:
        out = simulation.gaussian_p(x)
    _write_text(args.output, _format_column(out))
    return EXIT_OK


def cmd_matrix(args) -> int:
    ev = discovery.SortedEValues(read_column(args.input))
    if args.merge == "generic":
        m = discovery.discovery_matrix_generic(args.generic_merge, ev)
    else:
        m = discovery.discovery_matrix(ev, args.merge)
    _write_text(args.output, render.export_csv(m))
    if args.order_out:
        # 1-based input line of each matrix row's hypothesis, most significant first
        order = ev.order[::-1] + 1
        _write_text(args.order_out, "".join(f"{i}\n" for i in order))
    return EXIT_OK


def cmd_row(args) -> int:
    ev = discovery.SortedEValues(read_column(args.input))
    _write_text(args.output, _format_column(discovery.am_discovery_row(ev, args.r)))
    return EXIT_OK


def cmd_vector(args) -> int:
    ev = discovery.SortedEValues(read_column(args.input))
    idx = _parse_int_list(_read_text(args.rejected))
    if any(i < 1 or i > ev.K for i in idx):
        raise UsageError(f"rejected indices must lie in 1..{ev.K}")
    positions = ev.positions_of(i - 1 for i in idx)
    _write_text(args.output, _format_column(discovery.discovery_vector(args.merge, ev, positions)))
    return EXIT_OK


def cmd_conformal(args) -> int:
    if (args.labels is None) == (args.labels_file is None):
        raise UsageError("give exactly one of --labels and --labels-file")
    labels = args.labels if args.labels is not None else conformal.read_group_labels(args.labels_file)
    data = conformal.load_expression_dataset(args.input, labels, threshold=args.threshold)
    cfg = conformal.PermutationConfig(B=args.B, seed=args.seed, d=args.d)
    table = conformal.gene_table(data, cfg)
    if args.output in (None, "-"):
        conformal.write_gene_table(sys.stdout, table)
    else:
        conformal.write_gene_table(args.output, table)
    if args.matrix_out or args.ppm_out:
        e = table["e_simplified" if args.use == "simplified" else "e_conformal"]
        ev = discovery.SortedEValues(e)
        crop = _parse_crop(args.crop)
        if args.matrix_out:
            m = discovery.am_discovery_matrix(ev)
            _write_text(args.matrix_out, render.export_csv(m))
        else:
            n = ev.K if crop is None else min(crop[0], ev.K)
            m = discovery.DiscoveryMatrix.from_rows(
                [row for _, row in discovery.iter_am_rows(ev, range(1, n + 1))]
            )
        if args.ppm_out:
            if m.K < ev.K:
                crop = (m.K, crop[1] if crop else m.K)
            Path(args.ppm_out).write_bytes(render.render_matrix(m, "jeffreys", crop))
    n_inf = int(np.isinf(table["t"]).sum())
    print(f"genes: {data.G} retained, {data.dropped} dropped, {n_inf} with infinite t", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    m = render.read_matrix_csv(_read_text(args.input))
    if args.transform == "e-to-p":
        m = m.map(evalues.e_to_p)
    elif args.transform == "vs":
        m = m.map(evalues.vs_bound)
    data = render.render_matrix(m, args.scale, _parse_crop(args.crop))
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.output).write_bytes(data)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    chosen = [args.kappa is not None, args.vs, args.e_to_p]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --kappa, --vs and --e-to-p")
    x = read_column(args.input)
    if args.kappa is not None:
        out = evalues.calibrate_p_to_e(x, args.kappa)
    elif args.vs:
        out = evalues.vs_bound(x)
    else:
        out = evalues.e_to_p(x)
    _write_text(args.output, _format_column(out))
    return EXIT_OK


def cmd_fdr(args) -> int:
    p = read_column(args.input)
    qs = args.q or [0.05]
    lines = []
    for q in qs:
        bh = simulation.bh_rejections(p, q)
        by = simulation.by_rejections(p, q)
        if len(qs) == 1:
            lines += [f"BH: {bh}", f"BY: {by}"]
        else:
            lines += [f"q={q:g} BH: {bh}", f"q={q:g} BY: {by}"]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="edisco", description="E-value bounds on the number of true discoveries.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="Gaussian observations and ground truth")
    s.add_argument("--K", type=int)
    s.add_argument("--delta", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--fraction-false", dest="fraction_false", type=float)
    s.add_argument("--config", help="key=value file (K, delta, eta, seed, fraction_false)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("evalues", help="observations -> base e-values or p-values")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--kind", choices=["lr", "gb", "p"])
    s.add_argument("--delta", type=float, default=-3.0)
    s.add_argument("--eta", type=float)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_evalues)

    s = sub.add_parser("matrix", help="base e-values -> discovery matrix CSV")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--merge", choices=["am", "bonferroni", "simes", "generic"], default="am")
    s.add_argument("--generic-merge", choices=["am", "bonferroni", "simes"], default="am",
                   help="merging function for --merge generic")
    s.add_argument("--order-out", help="write the input line number of each row's hypothesis")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("row", help="one row of the arithmetic-mean matrix in O(K)")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_row)

    s = sub.add_parser("vector", help="discovery vector for a chosen rejection set")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--rejected", required=True, help="file of 1-based input line numbers")
    s.add_argument("--merge", choices=["am", "bonferroni", "simes"], default="am")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_vector)

    s = sub.add_parser("conformal", help="expression file -> conformal e-values (and matrix)")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--labels", help="comma-separated group tags (1 or 2), one per sample")
    s.add_argument("--labels-file")
    s.add_argument("--B", type=int, default=10000)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--d", type=float, default=10.0)
    s.add_argument("--threshold", type=float, default=conformal.RAW_THRESHOLD)
    s.add_argument("--use", choices=["conformal", "simplified"], default="conformal",
                   help="e-values feeding --matrix-out/--ppm-out")
    s.add_argument("--matrix-out")
    s.add_argument("--ppm-out")
    s.add_argument("--crop")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_conformal)

    s = sub.add_parser("render", help="matrix CSV -> PPM image")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--scale", choices=["jeffreys", "fisher"], default="jeffreys")
    s.add_argument("--transform", choices=["none", "e-to-p", "vs"], default="none")
    s.add_argument("--crop", help="ROWS,COLS of the top-left corner")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("calibrate", help="p -> e (--kappa, --vs) or e -> p (--e-to-p)")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--kappa", type=float)
    s.add_argument("--vs", action="store_true")
    s.add_argument("--e-to-p", dest="e_to_p", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("fdr", help="Benjamini-Hochberg and Benjamini-Yekutieli rejection counts")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--q", type=float, action="append")
    s.set_defaults(func=cmd_fdr)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except OSError as exc:
        print(f"edisco: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EdiscoError, ValueError) as exc:
        print(f"edisco: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
