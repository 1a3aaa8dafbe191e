#!/usr/bin/env python3
"""Compare the compiled and pure-Python decoding kernels, with and without the beam.

Trains one model per cross-validation fold of a tagged corpus (the bundled
sample by default) and times tagging every held-out sentence. Each
configuration is run ``--repeats`` times in alternation; the fastest run is
reported.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py -c my_corpus.tt --folds 5 --repeats 9
"""
import argparse
import time
from importlib import resources

from tntagger import _kernel_py, decoder
from tntagger.corpus import partition_contiguous, read_tagged
from tntagger.decoder import assemble, reliability, viterbi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-c", "--corpus", help="tagged corpus (default: bundled sample)")
    ap.add_argument("--folds", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--beam", type=float, default=1000.0)
    args = ap.parse_args()

    path = args.corpus or str(resources.files("tntagger") / "data" / "sample.tt")
    corpus = read_tagged(path)
    folds = []
    for f in range(args.folds):
        train, test = partition_contiguous(corpus, f, args.folds)
        folds.append((assemble(train), test.words()))
    tokens = sum(len(s) for _, sents in folds for s in sents)

    backends = [("python", _kernel_py)]
    if decoder.BACKEND == "cython":
        backends.insert(0, ("cython", decoder.kernel))
    else:
        print("compiled kernel not available; timing the pure-Python kernel only")

    def decode(backend, beam):
        for model, sents in folds:
            for s in sents:
                viterbi(model, s, beam, backend=backend)

    def decode_rel(backend, _):
        for model, sents in folds:
            for s in sents:
                reliability(model, s, viterbi(model, s, 0, backend=backend), backend=backend)

    jobs = []
    for name, backend in backends:
        jobs += [(f"{name:<7} exact", decode, backend, 0),
                 (f"{name:<7} beam {args.beam:g}", decode, backend, args.beam),
                 (f"{name:<7} exact + reliability", decode_rel, backend, 0)]
    for _, fn, backend, beam in jobs:  # warm the lexicon caches
        fn(backend, beam)
    best = {label: float("inf") for label, *_ in jobs}
    for _ in range(args.repeats):
        for label, fn, backend, beam in jobs:
            t0 = time.perf_counter()
            fn(backend, beam)
            best[label] = min(best[label], time.perf_counter() - t0)

    print(f"{tokens} tokens, {args.folds} folds, best of {args.repeats}")
    print(f"{'configuration':<32}{'seconds':>10}{'tokens/s':>12}")
    for label, secs in best.items():
        print(f"{label:<32}{secs:>10.4f}{tokens / secs:>12,.0f}")


if __name__ == "__main__":
    main()
