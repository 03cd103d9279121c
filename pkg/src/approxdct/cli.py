"""Command-line front end.

Every table-like output is CSV with a fixed header so runs can be diffed.
Diagnostics go to stderr.  Exit status is 0 only when no check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import fixedpoint, reference
from .codec import compress_image, corpus_average, load_corpus, load_pgm, save_pgm
from .errors import ApproxDctError, CatalogError, CorpusError, ParameterError, PGMError
from .metrics import evaluate, total_error_energy, total_error_energy_quad
from .search import PUBLISHED_WINNER_COUNT, run_search
from .transforms import (
    BAS2011_PARAMS,
    CATALOG_NAMES,
    EXACT_DCT_REFERENCE,
    all_specs,
    catalog,
    count_ops,
    exact_dct,
    flow_graph,
    flow_to_matrix,
    orthogonal_matrix,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CORPUS = 3
EXIT_IMAGE = 4
EXIT_OTHER = 5

PROPOSED_PARAMS = (0, 1, 1, 1, 0, 0, 0)
MODCB_PARAMS = (1, 1, 0, 1, 0, 0, 0)


def fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.6g}"
    return str(x)


def transform_names(include_exact: bool) -> list[str]:
    names = ["exact-dct"] if include_exact else []
    for name in CATALOG_NAMES:
        if name == "bas2011":
            names.extend(f"bas2011-a{a}" for a in BAS2011_PARAMS)
        else:
            names.append(name)
    return names


def resolve_transforms(selector: str | None, include_exact: bool = False) -> list:
    """Turn ``"proposed,bas2011"`` or ``"all"`` into spec objects."""
    if selector is None or selector == "all":
        out = [exact_dct()] if include_exact else []
        return out + all_specs()
    out = []
    for tok in (t.strip() for t in selector.split(",")):
        if not tok:
            continue
        if tok == "exact-dct" and include_exact:
            out.append(exact_dct())
        elif tok == "bas2011":
            out.extend(catalog("bas2011", a) for a in BAS2011_PARAMS)
        elif tok.startswith("bas2011-a") and tok[9:].isdigit():
            out.append(catalog("bas2011", int(tok[9:])))
        elif tok in CATALOG_NAMES:
            out.append(catalog(tok))
        else:
            raise CatalogError(f"unknown transform {tok!r}; valid: {', '.join(transform_names(include_exact))}")
    return out


def label(spec) -> str:
    return getattr(spec, "label", None) or spec.name


def parse_r(text: str) -> list[int]:
    """``10``, ``2-20``, ``2..20`` or ``2,5,10``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        for sep in ("..", "-", ":"):
            if sep in part:
                lo, hi = part.split(sep, 1)
                out.extend(range(int(lo), int(hi) + 1))
                break
        else:
            out.append(int(part))
    if not out or any(not 1 <= r <= 64 for r in out):
        raise argparse.ArgumentTypeError(f"retention {text!r} must be within 1..64")
    return out


def parse_wordlens(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad word length list {text!r}") from None
    bad = [L for L in out if L not in fixedpoint.WORD_LENGTHS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"word lengths must come from {fixedpoint.WORD_LENGTHS}")
    return out


class Output:
    """CSV sink for ``--out`` or stdout."""

    def __init__(self, path):
        self.path = path
        self.buf = io.StringIO()
        self.writer = csv.writer(self.buf, lineterminator="\n")

    def row(self, values):
        self.writer.writerow([fmt(v) for v in values])

    def close(self):
        text = self.buf.getvalue()
        if self.path:
            Path(self.path).write_text(text)
        else:
            sys.stdout.write(text)


def _corpus(args, required: bool):
    if not args.corpus:
        if required:
            raise CorpusError("this command needs --corpus <manifest>")
        return None
    return load_corpus(args.corpus)


# -- subcommands ---------------------------------------------------------


def cmd_list(args) -> int:
    out = Output(args.out)
    out.row(["transform", "mults", "adds", "shifts", "total"])
    for name, c in EXACT_DCT_REFERENCE.items():
        out.row([name, c.mults, c.adds, c.shifts, c.total])
    for spec in resolve_transforms(args.transform):
        c = count_ops(flow_graph(spec))
        out.row([spec.label, c.mults, c.adds, c.shifts, c.total])
    out.close()
    return EXIT_OK


def _verify_checks():
    exact = exact_dct()
    yield "exact DCT orthonormal", bool(np.abs(exact.C @ exact.C.T - np.eye(8)).max() < 1e-12)
    for spec in all_specs():
        flow = flow_graph(spec)
        yield f"{spec.label}: factorization equals T", bool(np.array_equal(flow_to_matrix(flow), spec.exact_T))
        c = orthogonal_matrix(spec)
        yield f"{spec.label}: D.T orthonormal", bool(np.abs(c @ c.T - np.eye(8)).max() < 1e-12)
        yield f"{spec.label}: op count", count_ops(flow) == reference.OP_COUNTS[spec.label]
    for spec in [exact] + all_specs():
        lab = label(spec)
        m = evaluate(spec)
        ref = reference.ACCURACY[lab]
        tol = reference.TOLERANCE
        ok = (
            abs(m.epsilon - ref[0]) <= tol["epsilon"]
            and abs(m.mse - ref[1]) <= tol["mse"]
            and abs(m.cg - ref[2]) <= tol["cg"]
            and abs(m.eta - ref[3]) <= tol["eta"]
        )
        yield f"{lab}: accuracy measures", ok
        yield f"{lab}: quadrature agrees with closed form", abs(
            total_error_energy_quad(spec) - total_error_energy(spec)
        ) < 1e-8


def cmd_verify(args) -> int:
    failed = 0
    for name, ok in _verify_checks():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        failed += not ok
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_metrics(args) -> int:
    specs = resolve_transforms(args.transform, include_exact=True)
    r_values = args.r or [10]
    if len(r_values) != 1:
        raise ParameterError("metrics takes a single retention value")
    r = r_values[0]
    corpus = None
    if args.corpus:
        corpus = load_corpus(args.corpus)
    else:
        print("warning: no --corpus given; PSNR/UQI columns omitted", file=sys.stderr)
    out = Output(args.out)
    header = ["transform", "epsilon", "mse", "cg", "eta"]
    if corpus:
        header += ["r", "avg_psnr", "avg_uqi"]
    out.row(header)
    for spec in specs:
        m = evaluate(spec)
        row = [label(spec), m.epsilon, m.mse, m.cg, m.eta]
        if corpus:
            avg = corpus_average(corpus, spec, r, args.jobs)
            row += [r, avg.avg_psnr, avg.avg_uqi]
        out.row(row)
    out.close()
    return EXIT_OK


def cmd_sweep(args) -> int:
    corpus = _corpus(args, required=True)
    specs = resolve_transforms(args.transform, include_exact=True)
    out = Output(args.out)
    out.row(["transform", "r", "avg_psnr", "avg_uqi", "n_images", "n_psnr_excluded"])
    for spec in specs:
        for r in args.r or list(range(2, 21)):
            avg = corpus_average(corpus, spec, r, args.jobs)
            out.row([label(spec), r, avg.avg_psnr, avg.avg_uqi, avg.n_images, avg.n_psnr_excluded])
    out.close()
    return EXIT_OK


def cmd_compress(args) -> int:
    if not args.input or not args.out:
        raise ParameterError("compress needs --input <pgm> and --out <pgm>")
    specs = resolve_transforms(args.transform or "proposed", include_exact=True)
    r_values = args.r or [10]
    if len(specs) != 1 or len(r_values) != 1:
        raise ParameterError("compress takes exactly one transform and one retention value")
    spec, r = specs[0], r_values[0]
    res = compress_image(load_pgm(args.input), spec, r)
    save_pgm(res.reconstructed, args.out)
    print(f"transform={label(spec)} r={r} psnr={fmt(res.psnr)} uqi={fmt(res.uqi)}")
    return EXIT_OK


def cmd_search(args) -> int:
    corpus = _corpus(args, required=False)
    r_values = args.r or [10]
    if len(r_values) != 1:
        raise ParameterError("search takes a single retention value")
    result = run_search(corpus, r=r_values[0], workers=args.jobs)
    scores = {w.candidate.params: w.score for w in result.ranked} if result.ranking == "psnr" else {}
    out = Output(args.out)
    out.row([f"a{i}" for i in range(7)] + ["cost_adds", "cost_shifts", "orthogonal", "psnr_r10"])
    for c in result.candidates:
        score = scores.get(c.params)
        out.row(list(c.params) + [c.cost.adds, c.cost.shifts, int(c.admissible), "" if score is None else score])
    out.close()

    err = sys.stderr
    print(
        f"minimal cost: {result.minimal_cost.adds} additions, {result.minimal_cost.shifts} shifts; "
        f"{len(result.winners)} winners (published count {PUBLISHED_WINNER_COUNT})",
        file=err,
    )
    what = "average PSNR" if result.ranking == "psnr" else "MSE vs exact DCT (fallback: no corpus)"
    print(f"winners ranked by {what}:", file=err)
    for i, w in enumerate(result.ranked, 1):
        tag = {PROPOSED_PARAMS: " proposed", MODCB_PARAMS: " modcb2011"}.get(w.candidate.params, "")
        print(f"  {i}. a={w.candidate.params} score={fmt(w.score)}{tag}", file=err)
    params = {w.params for w in result.winners}
    ok = PROPOSED_PARAMS in params and MODCB_PARAMS in params
    for w in result.winners:
        c = orthogonal_matrix(w.spec())
        ok &= bool(np.abs(c @ c.T - np.eye(8)).max() < 1e-12)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_fixedpoint(args) -> int:
    specs = resolve_transforms(args.transform)
    out = Output(args.out)
    out.row(["transform", "L", "n_vectors", "mismatches", "max_stage_width", "inexact_shift_events"])
    ok = True
    for L in args.wordlen or list(fixedpoint.WORD_LENGTHS):
        for spec in specs:
            rep = fixedpoint.verify(spec, L, count=args.count, seed=args.seed)
            out.row([rep.transform, rep.L, rep.n_vectors, rep.mismatches, rep.max_stage_width, rep.inexact_shift_events])
            ok &= rep.ok
    out.close()
    return EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS = {
    "list": (cmd_list, "operation counts of every transform"),
    "verify": (cmd_verify, "check factorizations, orthonormality and reference tables"),
    "metrics": (cmd_metrics, "accuracy and coding measures (plus PSNR/UQI with --corpus)"),
    "sweep": (cmd_sweep, "average PSNR/UQI over a corpus for a range of retention counts"),
    "compress": (cmd_compress, "compress one PGM image"),
    "search": (cmd_search, "exhaustive search over the DCT-structured matrix space"),
    "fixedpoint": (cmd_fixedpoint, "integer datapath verification against a dense oracle"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--transform", help="comma-separated names, 'bas2011' for all a, or 'all'")
    common.add_argument("--corpus", help="manifest file listing PGM images")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--r", type=parse_r, help="retention: N, A-B, A..B or a list")
    common.add_argument("--wordlen", type=parse_wordlens, help="comma-separated word lengths")
    common.add_argument("--count", type=int, default=fixedpoint.DEFAULT_COUNT, help="test vectors per run")
    common.add_argument("--input", help="input PGM for compress")
    common.add_argument("--jobs", type=int, default=None, help="worker threads for corpus runs")

    parser = argparse.ArgumentParser(prog="approxdct", description="Multiplierless 8-point DCT approximations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


ERROR_CODES = (
    (CatalogError, EXIT_USAGE),
    (ParameterError, EXIT_USAGE),
    (CorpusError, EXIT_CORPUS),
    (PGMError, EXIT_IMAGE),
    (ApproxDctError, EXIT_OTHER),
)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except (ApproxDctError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        for cls, code in ERROR_CODES:
            if isinstance(e, cls):
                return code
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
