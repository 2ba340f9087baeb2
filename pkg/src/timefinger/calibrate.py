"""Measured caps for the acceptance checks, and the corpora they are measured on.

Run ``python3 -m timefinger.calibrate caps`` to refit ``caps.json`` and
``python3 -m timefinger.calibrate oracle-answers --out FILE`` to freeze the
naive oracle's answer digests for the large equivalence traces.  Every
calibration draws its seeds from CALIBRATION_SEEDS, which no acceptance
check uses.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .bounds import bound_report, interleaving_ratio
from .trace import WORKLOADS, TraceRunner, answer_stream, gen_ops, serialize_trace, stream_digest

CALIBRATION_SEEDS = range(900_000, 900_100)
FUZZ_LIVE = (8, 32, 100, 300)
FUZZ_SIZE = 1000
DELETE_COST_WORKLOADS = ("lifo", "fifo", "burst-fingers")
EQUIVALENCE_SIZE = 100_000
MARGIN = 1.1


# ------------------------------------------------------------------ corpora


def fuzz_ops(seed):
    """A short trace for invariant fuzzing; the workload cycles with the seed."""
    rng = random.Random(seed)
    return gen_ops(WORKLOADS[seed % len(WORKLOADS)], FUZZ_SIZE, seed, live=rng.choice(FUZZ_LIVE))


def _stream(rng, universe, m, offset=0):
    style = rng.choice(("uniform", "zipf", "recent", "cyclic"))
    if style == "uniform":
        out = [rng.randrange(universe) for _ in range(m)]
    elif style == "zipf":
        out = rng.choices(range(universe), weights=[1 / (i + 1) for i in range(universe)], k=m)
    elif style == "recent":
        out = []
        for _ in range(m):
            if out and rng.random() < 0.8:
                out.append(out[-rng.randint(1, min(8, len(out)))])
            else:
                out.append(rng.randrange(universe))
    else:
        out = [i % universe for i in range(m)]
    return [offset + v for v in out]


def _pattern(rng, my, mz):
    style = rng.choice(("shuffle", "runs", "blocks"))
    if style == "blocks":
        return [0] * my + [1] * mz
    if style == "shuffle":
        p = [0] * my + [1] * mz
        rng.shuffle(p)
        return p
    mean = rng.choice((2, 10, 100))
    p = []
    left = [my, mz]
    side = rng.randrange(2)
    while left[0] or left[1]:
        if not left[side]:
            side ^= 1
        run = min(left[side], 1 + int(rng.expovariate(1 / mean)))
        p.extend([side] * run)
        left[side] -= run
        side ^= 1
    return p


def interleaving_instance(seed, max_len=10_000):
    """(y, z, pattern) over disjoint element universes."""
    rng = random.Random(seed)
    total = rng.randint(2, max_len)
    my = rng.randint(1, total - 1)
    mz = total - my
    uy = rng.randint(1, 1000)
    y = _stream(rng, uy, my)
    z = _stream(rng, rng.randint(1, 1000), mz, offset=uy)
    return y, z, _pattern(rng, my, mz)


def access_instance(seed, max_len=10_000, max_universe=2000):
    """(sequence, finger, ranks) with elements 0..u-1 ranked by value."""
    rng = random.Random(seed)
    u = rng.randint(1, max_universe)
    m = rng.randint(1, max_len)
    finger = rng.randrange(u)
    if rng.random() < 0.25:
        spread = rng.choice((1, 4, 32))
        seq = [min(u - 1, max(0, round(rng.gauss(finger, spread)))) for _ in range(m)]
    else:
        seq = _stream(rng, u, m)
    return seq, finger, {v: v for v in range(u)}


# ------------------------------------------------------------------ fitting


def upper_envelope(features, y, bounds):
    """Coefficients c minimising sum(features @ c) subject to features @ c >= y."""
    features = np.asarray(features, float)
    res = linprog(c=features.sum(axis=0), A_ub=-features, b_ub=-np.asarray(y, float), bounds=bounds)
    if not res.success:
        raise RuntimeError(f"envelope fit failed: {res.message}")
    return [float(v) for v in res.x]


def fit_rank_envelope(points):
    """Smallest-sum line a*x + b (a >= 0) on or above every (x, rank) point."""
    xs = np.array([p[0] for p in points], float)
    ys = np.array([p[1] for p in points], float)
    a, b = upper_envelope(np.column_stack([xs, np.ones_like(xs)]), ys, [(0, None), (None, None)])
    return a, b


def rank_points(runner_records):
    return [(math.log2(r.wmin + 2), r.rank) for r in runner_records if r.rank is not None]


def measured_run(ops, **kw):
    runner = TraceRunner(oracle=True, **kw)
    records = list(runner.run(ops))
    return runner, records


def calibrate_rank(seeds):
    points = []
    for s in seeds:
        _, recs = measured_run(fuzz_ops(s))
        points.extend(rank_points(recs))
    a, b = fit_rank_envelope(points)
    # ranks are integers; one rank of headroom for unseen seeds
    return {"a": round(a, 6), "b": round(b + 1, 6), "points": len(points)}


def delete_cost_mean(workload, size, seed, live):
    runner = TraceRunner()
    for _ in runner.run(gen_ops(workload, size, seed, live=live)):
        pass
    return runner.summary()["delete_cost_mean"]


def calibrate_delete_cost(seeds, size=10_000, lives=(100, 1000)):
    out = {}
    for w in DELETE_COST_WORKLOADS:
        worst = max(delete_cost_mean(w, size, s, L) for s in seeds for L in lives)
        out[w] = round(worst * MARGIN, 3)
    return out


def cost_rows(runner):
    """(features, cost) per prefix: features are (sum of bounds, op count)."""
    bound = np.asarray(runner.cum_bound, float)
    ops = np.arange(1, len(bound) + 1, dtype=float)
    return np.column_stack([bound, ops]), np.asarray(runner.cum_cost, float)


def calibrate_cost(seeds, size=20_000):
    """Per workload: the (c1, c2) envelope of cost over every calibration prefix."""
    out = {}
    for w in WORKLOADS:
        feats, costs = [], []
        for s in seeds:
            runner = TraceRunner(measure=True)
            for _ in runner.run(gen_ops(w, size, s)):
                pass
            f, c = cost_rows(runner)
            feats.append(f)
            costs.append(c)
        c1, c2 = upper_envelope(np.vstack(feats), np.concatenate(costs), [(0, None), (0, None)])
        out[w] = {"c1": round(c1 * MARGIN, 3), "c2": round(c2 * MARGIN, 3)}
    return out


def equivalence_ratio(seq, finger, ranks):
    rep = bound_report(seq, finger, ranks)
    t = rep.totals()
    return t["working_set"] / (t["unified"] + rep.m)


def calibrate_bounds(seeds):
    inter = max(interleaving_ratio(*interleaving_instance(s))[2] for s in seeds)
    equiv = max(equivalence_ratio(*access_instance(s)) for s in seeds)
    return {"interleaving_ratio": round(inter * MARGIN, 4), "equivalence_c": round(equiv * MARGIN, 4)}


def calibrate():
    seeds = list(CALIBRATION_SEEDS)
    return {
        "calibration_seeds": [seeds[0], seeds[-1]],
        "rank_bound": calibrate_rank(seeds),
        "delete_cost_k1": calibrate_delete_cost(seeds[:5]),
        "cost_caps": calibrate_cost(seeds[:5]),
        "bounds": calibrate_bounds(seeds),
    }


def load_caps():
    return json.loads(resources.files("timefinger").joinpath("caps.json").read_text())


# ----------------------------------------------------------- oracle answers


def oracle_answers(seeds, size=EQUIVALENCE_SIZE, workload="random"):
    """Answer digests of the naive oracle on generated traces, keyed by seed."""
    out = {"workload": workload, "size": size, "traces": {}}
    for s in seeds:
        ops = gen_ops(workload, size, s)
        n, digest = stream_digest(answer_stream(ops, "naive"))
        out["traces"][str(s)] = {
            "trace_sha256": hashlib.sha256(serialize_trace(ops).encode()).hexdigest(),
            "answers": n,
            "answers_sha256": digest,
        }
    return out


def main(argv=None):
    p = argparse.ArgumentParser(prog="python3 -m timefinger.calibrate")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("caps", help="refit the measured caps")
    c.add_argument("--out", default=str(Path(__file__).with_name("caps.json")))
    o = sub.add_parser("oracle-answers", help="freeze oracle answer digests")
    o.add_argument("--out", required=True)
    o.add_argument("--first-seed", type=int, default=1000)
    o.add_argument("--count", type=int, default=100)
    args = p.parse_args(argv)
    if args.command == "caps":
        data = calibrate()
    else:
        data = oracle_answers(range(args.first_seed, args.first_seed + args.count))
    Path(args.out).write_text(json.dumps(data, indent=2) + "\n")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
