"""Command-line front end.

    sawsis estimate --model crossing --k 10 --n 10000 --seed 1
    sawsis moments --model nes --k 2 --lmax 2
    sawsis enumerate --model crossing --k 2

Output is JSON (one object per line for ``sample``, a single object
otherwise) or CSV with a header row. Exit status: 0 ok, 1 usage error,
2 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from math import comb
from typing import Sequence

from .asymptotics import growth_bounds, verify_expansions
from .estimator import MomentAccumulator, estimate
from .exact_enum import LimitExceeded, crossing_walks, enumerate_crossing, enumerate_directed, \
    enumerate_nes, nes_walks
from .genfunc import directed_gf, nes_moment_gf, series_coeff
from .lattice import SvgOptions, render_svg
from .samplers import sample

MODELS = ("crossing", "directed", "nes", "untrapped")
THREADS_ENV = "SAWSIS_THREADS"

EXIT_OK, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- random streams -----------------------------------------------------------------

def stream(seed: int, index: int) -> random.Random:
    """Independent generator for worker ``index``; str seeds are hashed with SHA-512."""
    return random.Random(f"sawsis:{seed}:{index}")


def _split(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + (i < r) for i in range(parts)]


def _params(cfg) -> dict:
    return {"k": cfg.k, "l": cfg.l, "n": cfg.length}


def _sample_chunk(model: str, params: dict, seed: int, index: int, count: int):
    rng = stream(seed, index)
    out = []
    for _ in range(count):
        s = sample(model, rng=rng, **params)
        out.append((str(s.walk), s.trace.per_step))
    return out


def _estimate_chunk(model: str, params: dict, seed: int, index: int, count: int) -> MomentAccumulator:
    rng = stream(seed, index)
    return MomentAccumulator.from_weights(sample(model, rng=rng, **params).weight
                                          for _ in range(count))


def _run_parallel(fn, cfg) -> list:
    """Run ``fn`` on one stream per worker; results come back in worker order."""
    params = _params(cfg)
    counts = _split(cfg.n, cfg.threads)
    if cfg.threads == 1:
        return [fn(cfg.model, params, cfg.seed, 0, counts[0])]
    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [pool.submit(fn, cfg.model, params, cfg.seed, i, c) for i, c in enumerate(counts)]
        return [f.result() for f in futures]


# -- output ---------------------------------------------------------------------------

def _emit_rows(rows: list[dict], fmt: str, out, header: dict | None = None) -> None:
    if fmt == "json":
        doc = dict(header or {})
        doc["rows"] = rows
        out.write(json.dumps(doc) + "\n")
        return
    _write_csv(rows, out)


def _write_csv(rows: list[dict], out) -> None:
    if not rows:
        return
    fields = list(rows[0])
    for r in rows[1:]:
        fields += [f for f in r if f not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out.write(buf.getvalue())


def _emit_one(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc) + "\n")
    else:
        _write_csv([doc], out)


def _sci(x, digits: int = 6) -> str:
    return f"{float(x):.{digits - 1}e}"


# -- commands -------------------------------------------------------------------------------

def cmd_sample(cfg, out) -> None:
    rows = []
    for chunk in _run_parallel(_sample_chunk, cfg):
        for steps, sizes in chunk:
            a = sum({2: 1, 4: 2}.get(s, 0) for s in sizes)
            b = sizes.count(3)
            rows.append({"model": cfg.model, "steps": steps, "weight": str(2 ** a * 3 ** b),
                         "a": a, "b": b})
    if cfg.format == "json":
        for r in rows:
            out.write(json.dumps(r) + "\n")
    else:
        _write_csv(rows, out)


def cmd_estimate(cfg, out) -> None:
    acc = MomentAccumulator()
    for part in _run_parallel(_estimate_chunk, cfg):
        acc = acc.merge(part)
    est = estimate(acc)
    doc = {"model": cfg.model, **{k: v for k, v in _params(cfg).items() if v is not None},
           "samples": est.n, "seed": cfg.seed, "threads": cfg.threads,
           "mean": _sci(est.mean),
           "log10_mean": math.log10(acc.sum_w) - math.log10(acc.n),
           "std_error": _sci(est.std_error),
           "relative_variance_estimate": est.relative_variance_estimate,
           "sum_weights": str(acc.sum_w)}
    _emit_one(doc, cfg.format, out)


def cmd_moments(cfg, out) -> None:
    rows = []
    if cfg.model == "nes":
        _require(cfg, "k", "lmax")
        gf = nes_moment_gf(cfg.k)
        for l in range(1, cfg.lmax + 1):
            rows.append({"l": l, "first_moment_sq": str((cfg.k + 1) ** (2 * l)),
                         "second_moment": str(series_coeff(gf, l))})
    elif cfg.model == "directed":
        # the index runs over the square size k
        _require(cfg, "lmax")
        coeffs = directed_gf().coefficients(cfg.lmax + 1)
        for k in range(1, cfg.lmax + 1):
            rows.append({"k": k, "first_moment_sq": str(comb(2 * k, k) ** 2),
                         "second_moment": str(coeffs[k])})
    else:
        raise UsageError(f"no exact moment series for model {cfg.model!r}")
    _emit_rows(rows, cfg.format, out, {"model": cfg.model, "k": cfg.k})


def cmd_enumerate(cfg, out) -> None:
    if cfg.model == "crossing":
        _require(cfg, "k")
        rep = enumerate_crossing(cfg.k, max_k=cfg.max_k)
    elif cfg.model == "directed":
        _require(cfg, "k")
        rep = enumerate_directed(cfg.k, max_k=max(cfg.max_k, 12))
    elif cfg.model == "nes":
        _require(cfg, "k", "l")
        rep = enumerate_nes(cfg.k, cfg.l, limit=cfg.limit)
    else:
        raise UsageError("untrapped walks cannot be enumerated")
    _emit_one(rep.as_dict(), cfg.format, out)


def cmd_asymptotics(cfg, out) -> None:
    _require(cfg, "k")
    last = cfg.kmax if cfg.kmax is not None else cfg.k
    rows = [verify_expansions(k).as_dict() for k in range(cfg.k, last + 1)]
    _emit_rows(rows, cfg.format, out)


def cmd_bounds(cfg, out) -> None:
    kmax = cfg.kmax if cfg.kmax is not None else 3
    if kmax > cfg.max_k:
        raise LimitExceeded(f"crossing enumeration limited to k <= {cfg.max_k}")
    reps = [enumerate_crossing(k, max_k=cfg.max_k) for k in range(1, kmax + 1)]
    doc = growth_bounds(reps).as_dict()
    if cfg.format == "json":
        out.write(json.dumps(doc) + "\n")
        return
    rows = [{"k": t["k"], "c": t["c"], "d": t["d"], "lambda_lb": lam, "beta_lb": beta}
            for t, lam, beta in zip(doc["table"], doc["lambda_prefix"], doc["beta_prefix"])]
    _write_csv(rows, out)


def cmd_render(cfg, out) -> None:
    if cfg.all:
        if cfg.model == "crossing":
            _require(cfg, "k")
            pairs = list(crossing_walks(cfg.k, max_k=cfg.max_k))
        elif cfg.model == "nes":
            _require(cfg, "k", "l")
            if (cfg.k + 1) ** cfg.l > cfg.limit:
                raise LimitExceeded(f"(k+1)^l exceeds the limit {cfg.limit}")
            pairs = list(nes_walks(cfg.k, cfg.l, cfg.limit))
        else:
            raise UsageError("--all is supported for crossing and nes")
        walks = [w for w, _ in pairs]
        sizes = [t.per_step for _, t in pairs]
    else:
        from .lattice import Walk
        walks, sizes = [], []
        for chunk in _run_parallel(_sample_chunk, cfg):
            for steps, per_step in chunk:
                walks.append(Walk.from_string(steps))
                sizes.append(per_step)
    svg = render_svg(walks, SvgOptions(columns=cfg.columns, per_step=sizes))
    if cfg.svg:
        with open(cfg.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
        _emit_one({"svg": cfg.svg, "walks": len(walks)}, cfg.format, out)
    else:
        out.write(svg)


COMMANDS = {
    "sample": cmd_sample, "estimate": cmd_estimate, "moments": cmd_moments,
    "enumerate": cmd_enumerate, "asymptotics": cmd_asymptotics, "bounds": cmd_bounds,
    "render": cmd_render,
}


# -- argument handling ---------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return _positive(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{THREADS_ENV}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sawsis", description="Sequential importance sampling of self-avoiding walks.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, model=True, sampling=False):
        sp = sub.add_parser(name, help=help_)
        if model:
            sp.add_argument("--model", choices=MODELS, required=True)
        sp.add_argument("--k", type=_positive, help="square size or strip height")
        sp.add_argument("--l", type=_positive, help="strip width (nes)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--max-k", type=_positive, default=5, dest="max_k",
                        help="largest k allowed for crossing enumeration (default 5)")
        sp.add_argument("--limit", type=_positive, default=10 ** 7,
                        help="largest (k+1)^l allowed for nes enumeration")
        if sampling:
            sp.add_argument("--n", type=_positive, default=1, help="number of samples")
            sp.add_argument("--length", type=_positive, help="walk length (untrapped)")
            sp.add_argument("--seed", type=_seed, default=0)
            sp.add_argument("--threads", type=_positive, default=None,
                            help=f"worker processes (default ${THREADS_ENV} or 1)")
        return sp

    add("sample", "emit sampled walks with their weights", sampling=True)
    add("estimate", "estimate the walk count from N samples", sampling=True)
    add("moments", "exact E(X)^2 and E(X^2) tables").add_argument("--lmax", type=_positive)
    add("enumerate", "exhaustive enumeration report")
    add("asymptotics", "dominant pole, residue and expansion residuals", model=False) \
        .add_argument("--kmax", type=_positive)
    add("bounds", "growth-constant lower bounds from crossing counts", model=False) \
        .add_argument("--kmax", type=_positive)
    r = add("render", "SVG of sampled or enumerated walks", sampling=True)
    r.add_argument("--svg", help="write the SVG here instead of stdout")
    r.add_argument("--all", action="store_true", help="draw every walk instead of sampling")
    r.add_argument("--columns", type=_positive, default=4)
    return p


def _require(cfg, *names) -> None:
    missing = [n for n in names if getattr(cfg, n, None) is None]
    if missing:
        raise UsageError(f"{cfg.command} --model {getattr(cfg, 'model', '?')} needs "
                         + ", ".join("--" + n for n in missing))


_NEEDS = {"crossing": ("k",), "directed": ("k",), "nes": ("k", "l"), "untrapped": ("length",)}


def parse_config(argv: Sequence[str] | None = None) -> argparse.Namespace:
    cfg = build_parser().parse_args(argv)
    if hasattr(cfg, "seed"):
        if cfg.threads is None:
            cfg.threads = _default_threads()
        if not (cfg.command == "render" and cfg.all):
            _require(cfg, *_NEEDS[cfg.model])
    for name in ("l", "length", "lmax", "kmax"):
        cfg.__dict__.setdefault(name, None)
    return cfg


def run(cfg, out=None) -> int:
    out = out or sys.stdout
    COMMANDS[cfg.command](cfg, out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"sawsis: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"sawsis: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
