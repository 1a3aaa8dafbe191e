"""Pure-Python lattice kernels, used when the compiled extension is missing.

Both backends share one calling convention. A sentence of ``T`` tokens is
given as ``columns``, one tuple per token whose items 1 and 2 are the
candidate state ids and their log emission scores (the model's cached
lattice entries have exactly this layout).
``trans`` holds log P(v | w, u) for a ``K``-state space, flattened as
``(w * K + u) * K + v``. The lattice keeps one score per pair of adjacent
candidates; scores are compared with strict ``>``, so ties resolve to the
lowest candidate index.
"""
from __future__ import annotations

NEG_INF = float("-inf")


def prepare(trans):
    """Convert a dense ``(K, K, K)`` numpy table to the form the kernels take."""
    return trans.ravel().tolist()


def _flatten(columns):
    states, emis, offsets = [], [], [0]
    for col in columns:
        states.extend(col[1])
        emis.extend(col[2])
        offsets.append(len(states))
    return states, emis, offsets


def viterbi(trans, K, columns, bos, eos, log_beam, alive=None):
    """Best candidate index per position and its log score.

    ``log_beam`` is ``log(theta)``; pairs scoring below the position's best
    minus ``log_beam`` are dropped. Pass ``inf`` to disable pruning. If
    ``alive`` is a list, the surviving ``(prev, cur)`` candidate pairs of each
    position are appended to it.
    """
    states, emis, offsets = _flatten(columns)
    T = len(offsets) - 1
    pp_states = [bos]
    prev_states = [bos]
    delta = [0.0]
    backptrs = []
    for i in range(T):
        cur = states[offsets[i]:offsets[i + 1]]
        e = emis[offsets[i]:offsets[i + 1]]
        n_pp, n_prev, n_cur = len(pp_states), len(prev_states), len(cur)
        new = [NEG_INF] * (n_prev * n_cur)
        bp = [0] * (n_prev * n_cur)
        for a in range(n_prev):
            sa = prev_states[a]
            preds = [(c, (pp_states[c] * K + sa) * K, delta[c * n_prev + a])
                     for c in range(n_pp) if delta[c * n_prev + a] != NEG_INF]
            if not preds:
                continue
            row = a * n_cur
            for b in range(n_cur):
                sb = cur[b]
                best = NEG_INF
                arg = 0
                for c, base, d in preds:
                    v = d + trans[base + sb]
                    if v > best:
                        best = v
                        arg = c
                new[row + b] = best + e[b]
                bp[row + b] = arg
        if log_beam != float("inf"):
            top = max(new)
            if top != NEG_INF:
                floor = top - log_beam
                new = [v if v >= floor else NEG_INF for v in new]
        if alive is not None:
            alive.append({divmod(j, n_cur) for j, v in enumerate(new) if v != NEG_INF})
        backptrs.append(bp)
        pp_states, prev_states, delta = prev_states, cur, new

    n_prev, n_cur = len(pp_states), len(prev_states)
    best = NEG_INF
    best_a = best_b = 0
    for a in range(n_prev):
        base = pp_states[a] * K
        for b in range(n_cur):
            v = delta[a * n_cur + b] + trans[(base + prev_states[b]) * K + eos]
            if v > best:
                best = v
                best_a, best_b = a, b

    choice = [0] * T
    a, b = best_a, best_b
    choice[T - 1] = b
    if T >= 2:
        choice[T - 2] = a
    for i in range(T - 1, 1, -1):
        n_cur = offsets[i + 1] - offsets[i]
        c = backptrs[i][a * n_cur + b]
        choice[i - 2] = c
        a, b = c, a
    return choice, best


def max_marginals(trans, K, columns, bos, eos):
    """Best log score of a full path through each candidate.

    Returns a flat list over all candidates in column order and the overall
    best score. Computed without pruning from a forward and a backward max
    pass.
    """
    states, emis, offsets = _flatten(columns)
    T = len(offsets) - 1
    cands = [[bos], [bos]] + [list(states[offsets[i]:offsets[i + 1]]) for i in range(T)]
    ems = [list(emis[offsets[i]:offsets[i + 1]]) for i in range(T)]

    # fwd[i][a * n_i + b]: best prefix score with (a, b) at positions (i-1, i)
    fwd = []
    delta = [0.0]
    for i in range(T):
        pp, prev, cur = cands[i], cands[i + 1], cands[i + 2]
        e = ems[i]
        new = [NEG_INF] * (len(prev) * len(cur))
        for a, sa in enumerate(prev):
            for b, sb in enumerate(cur):
                best = NEG_INF
                for c, sc in enumerate(pp):
                    v = delta[c * len(prev) + a] + trans[(sc * K + sa) * K + sb]
                    if v > best:
                        best = v
                new[a * len(cur) + b] = best + e[b]
        fwd.append(new)
        delta = new

    # bwd[i][a * n_i + b]: best suffix score after (a, b), including <EOS>
    bwd = [None] * T
    prev, cur = cands[T], cands[T + 1]
    bwd[T - 1] = [trans[(sa * K + sb) * K + eos] for sa in prev for sb in cur]
    for i in range(T - 2, -1, -1):
        prev, cur, nxt = cands[i + 1], cands[i + 2], cands[i + 3]
        e = ems[i + 1]
        after = bwd[i + 1]
        out = [NEG_INF] * (len(prev) * len(cur))
        for a, sa in enumerate(prev):
            for b, sb in enumerate(cur):
                best = NEG_INF
                for c, sc in enumerate(nxt):
                    v = trans[(sa * K + sb) * K + sc] + e[c] + after[b * len(nxt) + c]
                    if v > best:
                        best = v
                out[a * len(cur) + b] = best
        bwd[i] = out

    scores = []
    for i in range(T):
        prev, cur = cands[i + 1], cands[i + 2]
        f, g = fwd[i], bwd[i]
        for b in range(len(cur)):
            best = NEG_INF
            for a in range(len(prev)):
                v = f[a * len(cur) + b] + g[a * len(cur) + b]
                if v > best:
                    best = v
            scores.append(best)
    overall = max(scores[offsets[T - 1]:offsets[T]])
    return scores, overall
