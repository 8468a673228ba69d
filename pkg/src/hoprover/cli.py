"""Command-line driver: ``hoprover [options] problem.p``.

Prints one SZS status line, then (on success, unless ``--no-proof``) the
TSTP refutation.  Exit status 0 for a decided problem, 1 when the prover
gave up or ran out of time, 2 on errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .problem import SZSStatus
from .saturation import Config, prove
from .tptp import ParseError, parse_file, render_szs, render_tstp

EXIT_CODES = {
    SZSStatus.THEOREM: 0,
    SZSStatus.CONTRADICTORY_AXIOMS: 0,
    SZSStatus.COUNTER_SATISFIABLE: 0,
    SZSStatus.GAVE_UP: 1,
    SZSStatus.TIMEOUT: 1,
    SZSStatus.ERROR: 2,
}


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"expected a positive value, got {text}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hoprover",
        description="Higher-order paramodulation prover for TPTP THF problems, "
                    "with modal logic problems handled by embedding.")
    ap.add_argument("problem", help="path of a THF problem file")
    ap.add_argument("--time", type=_positive(float), default=60.0,
                    help="wall-clock limit in seconds (default 60)")
    ap.add_argument("--iters", type=_positive(int), default=50_000,
                    help="maximum number of given-clause iterations (default 50000)")
    ap.add_argument("--unidepth", type=_positive(int), default=8,
                    help="pre-unification depth budget (default 8)")
    ap.add_argument("--fs", action="store_true",
                    help="enable the function-synthesis rule")
    ap.add_argument("--no-proof", action="store_true",
                    help="print only the status line")
    ap.add_argument("--replay", action="store_true",
                    help="re-check the refutation step by step before printing it")
    ap.add_argument("-v", "--verbose", action="store_true", help=argparse.SUPPRESS)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    name = os.path.basename(args.problem)
    cfg = Config(time_limit=args.time, max_iterations=args.iters,
                 unification_depth=args.unidepth, fs=args.fs,
                 proof=not args.no_proof, replay=args.replay)
    try:
        problem = parse_file(args.problem)
    except (OSError, ParseError, ValueError) as e:
        print(render_szs(SZSStatus.ERROR, name), file=out)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES[SZSStatus.ERROR]
    result = prove(problem, cfg)
    status = result.status
    if args.replay and result.message and status.is_success:
        print(f"error: proof replay failed: {result.message}", file=sys.stderr)
        status = SZSStatus.ERROR
    print(render_szs(status, problem.name), file=out)
    if status == SZSStatus.ERROR and result.message:
        print(f"error: {result.message}", file=sys.stderr)
    if status.is_success and cfg.proof and result.derivation is not None:
        out.write(render_tstp(result.derivation))
    return EXIT_CODES[status]


def main() -> None:
    sys.exit(run())
