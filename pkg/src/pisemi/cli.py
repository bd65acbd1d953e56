"""Command line entry point: ``pisemi FILE [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closure import ClosureBudget
from .inputs import InputError, load_generator_file
from .pipeline import CHECKS, EXIT_INPUT, EXIT_VIOLATION, parse_checks, run_pipeline
from .report import FORMATS, emit


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors, not "inconclusive"
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="pisemi",
        description="Analyse the semigroup generated by a finite set of matrices.",
        epilog="checks: " + ", ".join(CHECKS)
        + ". Exit codes: 0 all pass, 1 a check failed, 2 inconclusive, "
          "3 input error, 4 theorem violation.",
    )
    p.add_argument("file", help="generator file (JSON)")
    p.add_argument("--tol", type=float, help="Frobenius tolerance (default 1e-9 or file value)")
    p.add_argument("--max-elements", type=int, help="closure element budget")
    p.add_argument("--max-words", type=int, help="closure word-length budget")
    p.add_argument("--checks", default="all",
                   help='comma-separated check names, "all" (default) or "" for none')
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised probes")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--bundle-dir", default=".",
                   help="where to write a reproduction bundle on a theorem violation")
    return p


def _budget(args, file_budget: ClosureBudget | None) -> ClosureBudget | None:
    if args.max_elements is None and args.max_words is None:
        return None
    base = file_budget or ClosureBudget()
    return ClosureBudget(
        max_elements=args.max_elements or base.max_elements,
        max_word_length=args.max_words or base.max_word_length,
    )


def write_bundle(directory, gf, report: dict) -> Path:
    path = Path(directory) / f"pisemi-violation-{gf.digest[:12]}.json"
    bundle = {"input": gf.source, "settings": report["settings"], "report": report}
    path.write_text(json.dumps(bundle, indent=2) + "\n")
    return path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        checks = parse_checks(args.checks)
        gf = load_generator_file(args.file)
        budget = _budget(args, gf.budget)
        report = run_pipeline(gf, checks, tol=args.tol, budget=budget, seed=args.seed)
    except (InputError, OSError, ValueError) as exc:
        print(f"pisemi: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out = emit(report, args.format)
    if args.output:
        Path(args.output).write_bytes(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    code = report["summary"]["exit_code"]
    if code == EXIT_VIOLATION:
        path = write_bundle(args.bundle_dir, gf, report)
        print(f"pisemi: theorem violation; reproduction bundle written to {path}",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
