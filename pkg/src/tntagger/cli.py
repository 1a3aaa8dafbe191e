"""Command-line front end.

Exit status: 0 on success, 1 for usage errors, 2 for data or model errors.
"""
from __future__ import annotations

import argparse
import math
import sys
import time

from . import evaluation, store
from .corpus import CorpusError, read_tagged, read_untagged
from .decoder import TaggerConfig, assemble, tag_sentences
from .ngrams import ModelError

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(kind):
    def parse(text):
        try:
            return [kind(x) for x in text.split(",") if x]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _add_model_flags(p):
    p.add_argument("--max-suffix", type=int, default=10, help="longest suffix used for unknown words")
    p.add_argument("--suffix-freq", type=int, default=10,
                   help="only words at most this frequent feed the suffix tries")
    cap = p.add_mutually_exclusive_group()
    cap.add_argument("--capitalization", dest="capitalization", action="store_true", default=True)
    cap.add_argument("--no-capitalization", dest="capitalization", action="store_false")
    p.add_argument("--tie-break", choices=("higher", "lower"), default="higher")
    p.add_argument("--theta-mode", choices=("printed", "sqrt"), default="printed")
    p.add_argument("--unknown-candidates", type=int, default=10,
                   help="keep this many best suffix tags per unknown word (0: all)")


def _add_beam(p):
    p.add_argument("--beam", type=float, default=None,
                   help="beam ratio (default 1000 or the model's setting; 0 disables)")


def _add_format(p):
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--tsv", dest="fmt", action="store_const", const="tsv")
    p.set_defaults(fmt="tsv")


def _config(args) -> TaggerConfig:
    beam = 1000.0 if getattr(args, "beam", None) is None else args.beam
    try:
        return TaggerConfig(beam_theta=beam, max_suffix=args.max_suffix,
                            suffix_freq_threshold=args.suffix_freq, tie_break=args.tie_break,
                            theta_mode=args.theta_mode, capitalization=args.capitalization,
                            unknown_candidates=args.unknown_candidates)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tntagger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train a model from a tagged corpus")
    p.add_argument("-c", "--corpus", required=True)
    p.add_argument("-o", "--output", required=True)
    _add_model_flags(p)
    _add_beam(p)

    p = sub.add_parser("tag", help="tag untagged text")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("input", nargs="?", help="input file (default: standard input)")
    p.add_argument("-o", "--output", help="output file (default: standard output)")
    p.add_argument("--reliability", action="store_true", help="add a reliability quotient column")
    p.add_argument("--jobs", type=int, default=1)
    _add_beam(p)

    p = sub.add_parser("eval", help="tag a gold corpus and report accuracy")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-g", "--gold", required=True)
    _add_beam(p)
    _add_format(p)

    p = sub.add_parser("xval", help="k-fold cross-validation with contiguous test sets")
    p.add_argument("-c", "--corpus", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    _add_beam(p)
    _add_format(p)

    p = sub.add_parser("learncurve", help="accuracy by training size")
    p.add_argument("-c", "--corpus", required=True)
    p.add_argument("--sizes", type=_csv(int), required=True, help="comma-separated token counts")
    p.add_argument("--test-tokens", type=int, required=True)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    _add_beam(p)
    _add_format(p)

    p = sub.add_parser("relcurve", help="accuracy of reliable vs unreliable assignments")
    p.add_argument("-c", "--corpus", required=True)
    p.add_argument("--thresholds", type=_csv(float),
                   default=[1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000])
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    _add_format(p)
    return parser


def _emit(text: str, path: str | None = None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_train(args):
    corpus = read_tagged(args.corpus)
    model = assemble(corpus, _config(args))
    n = store.save(model, args.output)
    w = model.weights
    print(f"trained on {corpus.token_count} tokens, {len(model.tagset)} tags; "
          f"lambdas {w.lambda1:.4f} {w.lambda2:.4f} {w.lambda3:.4f}; "
          f"theta {model.suffix_model.theta:.6g}; wrote {n} bytes", file=sys.stderr)


def _fmt_q(q: float) -> str:
    return "inf" if math.isinf(q) else f"{q:.4g}"


def _cmd_tag(args):
    t0 = time.perf_counter()
    model = store.load(args.model)
    if args.input:
        with open(args.input, encoding="utf-8") as f:
            text = f.read()
    else:
        text = sys.stdin.read()
    sentences = read_untagged(text)
    outputs = tag_sentences(model, sentences, args.beam, args.reliability, jobs=args.jobs)
    parts = []
    for out in outputs:
        if args.reliability:
            lines = [f"{w}\t{t}\t{_fmt_q(q)}\n" for w, t, q in zip(out.words, out.tags, out.quotients)]
        else:
            lines = [f"{w}\t{t}\n" for w, t in zip(out.words, out.tags)]
        parts.append("".join(lines))
    _emit("\n".join(parts), args.output)
    dt = time.perf_counter() - t0
    n = sum(len(s) for s in sentences)
    print(f"tagged {n} tokens in {dt:.3f} s ({n / dt if dt > 0 else 0:.0f} tokens/s)", file=sys.stderr)


def _cmd_eval(args):
    model = store.load(args.model)
    gold = read_tagged(args.gold)
    outputs = tag_sentences(model, gold.words(), args.beam)
    report = evaluation.score(gold, outputs, model.counts.lexical)
    _emit(evaluation.report_to_json(report) if args.fmt == "json" else evaluation.report_to_tsv(report))


def _cmd_xval(args):
    corpus = read_tagged(args.corpus)
    report = evaluation.cross_validate(corpus, args.k, _config(args), jobs=args.jobs)
    _emit(report.to_json() if args.fmt == "json" else report.to_tsv())


def _cmd_learncurve(args):
    corpus = read_tagged(args.corpus)
    curve = evaluation.learning_curve(corpus, args.sizes, args.test_tokens, args.repeats, args.seed,
                                      _config(args), jobs=args.jobs)
    _emit(curve.to_json() if args.fmt == "json" else curve.to_tsv())


def _cmd_relcurve(args):
    corpus = read_tagged(args.corpus)
    curve = evaluation.reliability_curve(corpus, args.thresholds, args.k, _config(args), jobs=args.jobs)
    _emit(curve.to_json() if args.fmt == "json" else curve.to_tsv())


COMMANDS = {
    "train": _cmd_train, "tag": _cmd_tag, "eval": _cmd_eval, "xval": _cmd_xval,
    "learncurve": _cmd_learncurve, "relcurve": _cmd_relcurve,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        if getattr(args, "beam", None) is not None and not (args.beam == 0 or args.beam > 1):
            raise UsageError("--beam must be 0 (off) or greater than 1")
        if hasattr(args, "max_suffix"):
            _config(args)  # reject bad settings before touching any file
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tntagger: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, ModelError, evaluation.EvaluationError, OSError, UnicodeDecodeError) as exc:
        print(f"tntagger: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
