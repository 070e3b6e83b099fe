"""Batch front end: reproducible sampling, enumeration, theory tables,
self-verification, and minimum-purity search.

Artifacts are deterministic byte-for-byte for a given config: RNG
substreams are addressed per fixed-size sample block (never per worker),
block results are merged in block order, and no timestamps are written.
Progress goes to stderr; stdout carries machine-readable output when
``--out -`` is selected.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from multiprocessing import get_context
from pathlib import Path

from . import __version__, analytics, purity, search, states, stats, verify
from .bitcomb import Bipartition
from .states import BLOCK, BUTSON, EnsembleSpec


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Validated description of one CLI run, echoed into every artifact."""

    command: str
    n: int | None = None
    ensemble: str | None = None
    stat: str | None = None
    samples: int | None = None
    seed: int = 0
    stream: int = 0
    workers: int = 1
    bins: int = 200
    lo: float | None = None
    hi: float | None = None
    out: str = "-"
    format: str = "jsonl"
    restarts: int | None = None
    max_passes: int | None = None
    n_range: str | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def parse_ensemble(label: str, n: int, seed: int, stream: int) -> EnsembleSpec:
    try:
        return verify.spec_for(label, n, seed, stream)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_stat(label: str, n: int) -> tuple[str, int | None]:
    """'piME', 'piA' (default split) or 'piA:<mask>' -> (kind, mask)."""
    if label == "piME":
        if n < 2:
            raise ConfigError("piME needs n >= 2")
        return "piME", None
    if label == "piA" or label.startswith("piA:"):
        if label == "piA":
            mask = (1 << (n // 2)) - 1  # qubits {1..floor(n/2)}
        else:
            try:
                mask = int(label.split(":", 1)[1], 0)
            except ValueError as exc:
                raise ConfigError(f"bad bipartition mask in {label!r}") from exc
        if not 0 < mask < (1 << n) - 1:
            raise ConfigError(f"mask 0b{mask:b} is not a proper bipartition of n={n}")
        return "piA", mask
    raise ConfigError(f"unknown statistic {label!r} (use piA[:mask] or piME)")


def _theory_for(spec: EnsembleSpec, stat_kind: str, mask: int | None):
    """Matching (mean, variance) TheoryValues for an ensemble/statistic."""
    n = spec.n
    if stat_kind == "piA":
        n_a = min(mask.bit_count(), n - mask.bit_count())
        if spec.kind == states.HAAR:
            return analytics.mu_a_haar(n, n_a), analytics.sigma2_a_haar(n, n_a)
        q = spec.q if spec.kind == BUTSON else analytics.Q_INF
        return analytics.mu_a_hadamard(n, n_a), analytics.sigma2_a_hadamard(n, n_a, q)
    if spec.kind == states.HAAR:
        return analytics.mu_me_haar(n), analytics.sigma2_me_haar(n)
    q = spec.q if spec.kind == BUTSON else analytics.Q_INF
    return analytics.mu_me_hadamard(n), analytics.sigma2_me_hadamard(n, q)


def _default_range(stat_kind: str, mask: int | None, n: int) -> tuple[float, float]:
    """Histogram range anchored at the theoretical minimum of the statistic."""
    if stat_kind == "piA":
        return 2.0 ** -min(mask.bit_count(), n - mask.bit_count()), 1.0
    return 2.0 ** -(n // 2), 1.0


# ---------------------------------------------------------------------------
# block pipeline


def _block_values(spec: EnsembleSpec, stat_kind: str, mask: int | None,
                  block: int, count: int) -> np.ndarray:
    amps = states.sample_block(spec, block, count)
    if stat_kind == "piA":
        return purity.purity_batch(amps, spec.n, Bipartition(mask, spec.n))
    return purity.purity_me_batch(amps, spec.n)


def _block_task(args):
    spec, stat_kind, mask, block, count, lo, hi, bins = args
    vals = _block_values(spec, stat_kind, mask, block, count)
    hist = stats.Histogram(lo, hi, bins)
    hist.add_values(vals)
    return stats.from_values(vals), hist


def _block_counts(samples: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, samples - b * BLOCK)) for b in range((samples + BLOCK - 1) // BLOCK)]


def run_blocks(spec: EnsembleSpec, stat_kind: str, mask: int | None, samples: int,
               lo: float, hi: float, bins: int, workers: int):
    """Sample in fixed blocks, merge in block order (worker-count invariant)."""
    tasks = [(spec, stat_kind, mask, b, c, lo, hi, bins) for b, c in _block_counts(samples)]
    if workers > 1 and len(tasks) > 1:
        with get_context("fork").Pool(workers) as pool:
            results = pool.map(_block_task, tasks)
    else:
        results = [_block_task(t) for t in tasks]
    summary = stats.CumulantSummary()
    hist = stats.Histogram(lo, hi, bins)
    for s, h in results:
        summary = stats.merge(summary, s)
        hist = stats.merge_histograms(hist, h)
    return summary, hist


# ---------------------------------------------------------------------------
# artifact writers


def _json_line(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, allow_nan=False)


def _summary_record(config: RunConfig, spec: EnsembleSpec, stat_label: str,
                    summary: stats.CumulantSummary, theory_mean, theory_var,
                    ddof: int = 1, extra: dict | None = None) -> dict:
    record = {
        "version": __version__,
        "config": config.to_dict(),
        "ensemble": spec.label(),
        "n": spec.n,
        "statistic": stat_label,
        "summary": summary.to_dict(),
        "variance": summary.variance(ddof),
        "theory": {
            "mean": theory_mean.value,
            "mean_exact": [theory_mean.exact_num, theory_mean.exact_den],
            "variance": theory_var.value,
            "variance_exact": [theory_var.exact_num, theory_var.exact_den],
        },
        "zscore": stats.zscore_report(summary, theory_mean.value, theory_var.value, ddof),
    }
    if extra:
        record.update(extra)
    return record


def _histogram_csv(config: RunConfig, spec: EnsembleSpec, stat_label: str,
                   hist: stats.Histogram) -> str:
    lines = [
        f"# entstats {__version__}",
        f"# config: {_json_line(config.to_dict())}",
        "lo,hi,bins,n,ensemble,statistic",
        f"{hist.lo!r},{hist.hi!r},{hist.bins},{spec.n},{spec.label()},{stat_label}",
        f"# underflow: {hist.underflow}  overflow: {hist.overflow}",
        "bin_left,count",
    ]
    edges = hist.edges()
    lines += [f"{edges[i]!r},{int(hist.counts[i])}" for i in range(hist.bins)]
    return "\n".join(lines) + "\n"


_SUMMARY_COLUMNS = ("ensemble", "statistic", "n", "count", "mean", "variance",
                    "min", "max", "theory_mean", "theory_variance", "z", "variance_ratio")


def _summary_csv(config: RunConfig, records: list[dict]) -> str:
    """Flat one-row-per-record table for spreadsheet use."""
    lines = [
        f"# entstats {__version__}",
        f"# config: {_json_line(config.to_dict())}",
        ",".join(_SUMMARY_COLUMNS),
    ]
    for rec in records:
        row = {
            "ensemble": rec["ensemble"],
            "statistic": rec["statistic"],
            "n": rec["n"],
            "count": rec["summary"]["count"],
            "mean": repr(rec["summary"]["mean"]),
            "variance": repr(rec["variance"]),
            "min": repr(rec["summary"]["min"]),
            "max": repr(rec["summary"]["max"]),
            "theory_mean": repr(rec["theory"]["mean"]),
            "theory_variance": repr(rec["theory"]["variance"]),
            "z": repr(rec["zscore"]["z"]),
            "variance_ratio": repr(rec["zscore"]["variance_ratio"]),
        }
        lines.append(",".join(str(row[c]) for c in _SUMMARY_COLUMNS))
    return "\n".join(lines) + "\n"


def _emit(config: RunConfig, records: list[dict], hist_csv: str | None,
          hist_name: str = "histogram.csv") -> None:
    as_csv = config.format == "csv"
    if config.out == "-":
        if as_csv:
            sys.stdout.write(_summary_csv(config, records))
        else:
            for rec in records:
                print(_json_line(rec))
        return
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        _json_line({"version": __version__, "config": config.to_dict()}) + "\n"
    )
    if as_csv:
        (out_dir / "summary.csv").write_text(_summary_csv(config, records))
    else:
        with open(out_dir / "summary.jsonl", "w") as fh:
            for rec in records:
                fh.write(_json_line(rec) + "\n")
    if hist_csv is not None:
        (out_dir / hist_name).write_text(hist_csv)


# ---------------------------------------------------------------------------
# commands


def cmd_sample(config: RunConfig) -> int:
    spec = parse_ensemble(config.ensemble, config.n, config.seed, config.stream)
    stat_kind, mask = parse_stat(config.stat, config.n)
    if config.samples is None or config.samples < 1:
        raise ConfigError("sample needs --samples >= 1")
    lo, hi = _default_range(stat_kind, mask, config.n)
    lo = config.lo if config.lo is not None else lo
    hi = config.hi if config.hi is not None else hi
    if not lo < hi:
        raise ConfigError(f"bad histogram range [{lo}, {hi})")
    t0 = time.perf_counter()
    summary, hist = run_blocks(spec, stat_kind, mask, config.samples, lo, hi,
                               config.bins, config.workers)
    _progress(f"sampled {summary.count} states in {time.perf_counter() - t0:.1f}s")
    mean_tv, var_tv = _theory_for(spec, stat_kind, mask)
    stat_label = config.stat if stat_kind == "piME" else f"piA:0b{mask:b}"
    record = _summary_record(config, spec, stat_label, summary, mean_tv, var_tv)
    csv_text = _histogram_csv(config, spec, stat_label, hist)
    _emit(config, [record], csv_text)
    return 0


def cmd_enumerate(config: RunConfig) -> int:
    spec = parse_ensemble(config.ensemble, config.n, config.seed, config.stream)
    if spec.kind != BUTSON:
        raise ConfigError("enumerate needs a butson:q ensemble")
    stat_kind, mask = parse_stat(config.stat, config.n)
    try:
        total = states.check_enumerable(config.n, spec.q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lo, hi = _default_range(stat_kind, mask, config.n)
    lo = config.lo if config.lo is not None else lo
    hi = config.hi if config.hi is not None else hi

    t0 = time.perf_counter()
    roots = states.roots_of_unity(spec.q)
    scale = 1.0 / math.sqrt(1 << config.n)
    summary = stats.CumulantSummary()
    hist = stats.Histogram(lo, hi, config.bins)
    for expts in states.enumerate_exponent_blocks(config.n, spec.q):
        amps = roots[expts] * scale
        if stat_kind == "piA":
            vals = purity.purity_batch(amps, config.n, Bipartition(mask, config.n))
        else:
            vals = purity.purity_me_batch(amps, config.n)
        summary = stats.merge(summary, stats.from_values(vals))
        hist.add_values(vals)
    _progress(f"enumerated {total} states in {time.perf_counter() - t0:.1f}s")

    mean_tv, var_tv = _theory_for(spec, stat_kind, mask)
    dmean = abs(summary.mean - mean_tv.value)
    dvar = abs(summary.variance(ddof=0) - var_tv.value)
    exact_ok = dmean < 1e-12 and dvar < 1e-12
    stat_label = config.stat if stat_kind == "piME" else f"piA:0b{mask:b}"
    record = _summary_record(
        config, spec, stat_label, summary, mean_tv, var_tv, ddof=0,
        extra={
            "population": True,
            "exact_match": {"ok": exact_ok, "dmean": dmean, "dvariance": dvar},
            "occupied_bins": hist.occupied(),
        },
    )
    csv_text = _histogram_csv(config, spec, stat_label, hist)
    _emit(config, [record], csv_text)
    if not exact_ok:
        _progress(f"FAIL enumeration vs closed form: dmean={dmean:.3e} dvar={dvar:.3e}")
        return 1
    return 0


def _parse_n_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if not 2 <= lo <= hi:
        raise ConfigError(f"bad n range {text!r}")
    return lo, hi


def theory_rows(n_lo: int, n_hi: int) -> list[analytics.TheoryValue]:
    rows = [
        analytics.TheoryValue("alpha", 0, analytics.ALPHA),
        analytics.TheoryValue("gamma", 0, analytics.GAMMA),
    ]
    for n in range(n_lo, n_hi + 1):
        half = n // 2
        rows += [
            analytics.mu_a_haar(n, half),
            analytics.sigma2_a_haar(n, half),
            analytics.mu_a_hadamard(n, half),
            analytics.sigma2_a_hadamard(n, half, 2),
            analytics.sigma2_a_hadamard(n, half, analytics.Q_INF),
            analytics.mu_me_haar(n),
            analytics.sigma2_me_haar(n),
            analytics.mu_me_hadamard(n),
            analytics.sigma2_me_hadamard(n, 2),
            analytics.sigma2_me_hadamard(n, analytics.Q_INF),
            analytics.f2_sum(n),
            analytics.f2star_sum(n),
            analytics.h2_sum(n),
            analytics.k_distance(n, 2),
            analytics.k_distance(n, analytics.Q_INF),
        ]
    return rows


def _theory_csv(rows: list[analytics.TheoryValue]) -> str:
    def fmt_q(q):
        if q is None:
            return ""
        return "inf" if q == analytics.Q_INF else str(q)

    lines = ["name,n,n_A,q,value,exact_num,exact_den"]
    for tv in rows:
        lines.append(
            f"{tv.name},{tv.n},{tv.n_a if tv.n_a is not None else ''},{fmt_q(tv.q)},"
            f"{tv.value!r},{tv.exact_num if tv.exact is not None else ''},"
            f"{tv.exact_den if tv.exact is not None else ''}"
        )
    return "\n".join(lines) + "\n"


def cmd_theory(config: RunConfig) -> int:
    n_lo, n_hi = _parse_n_range(config.n_range or str(config.n))
    csv_text = _theory_csv(theory_rows(n_lo, n_hi))
    if config.out == "-":
        sys.stdout.write(csv_text)
        return 0
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        _json_line({"version": __version__, "config": config.to_dict()}) + "\n"
    )
    (out_dir / "theory.csv").write_text(csv_text)
    return 0


def cmd_verify(config: RunConfig) -> int:
    t0 = time.perf_counter()
    failures = 0

    def report(res):
        nonlocal failures
        name, ok, detail = res
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}", flush=True)
        if not ok:
            failures += 1

    verify.run_checks(progress=report)
    _progress(f"verify finished in {time.perf_counter() - t0:.1f}s")
    return 1 if failures else 0


def cmd_search(config: RunConfig) -> int:
    spec = parse_ensemble(config.ensemble, config.n, config.seed, config.stream)
    if spec.kind != BUTSON:
        raise ConfigError("search needs a butson:q ensemble")
    restarts = config.restarts or 1
    max_passes = config.max_passes or 10_000
    t0 = time.perf_counter()
    if config.workers > 1 and restarts > 1:
        with get_context("fork").Pool(config.workers) as pool:
            results = pool.starmap(
                search.descend_restart,
                [(spec, r, max_passes) for r in range(restarts)],
            )
    else:
        results = [search.descend_restart(spec, r, max_passes) for r in range(restarts)]
    best = min(results, key=lambda r: (r.best_value, r.restart))
    _progress(
        f"{restarts} restarts in {time.perf_counter() - t0:.1f}s; "
        f"best {best.best_value!r} (gap {best.gap!r})"
    )
    lines = [json.loads(r.to_json()) for r in results]
    final = json.loads(best.to_json())
    final["best"] = True
    records = [{"version": __version__, "config": config.to_dict(), **line}
               for line in lines + [final]]
    if config.out == "-":
        for rec in records:
            print(_json_line(rec))
        return 0
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        _json_line({"version": __version__, "config": config.to_dict()}) + "\n"
    )
    with open(out_dir / "search.jsonl", "w") as fh:
        for rec in records:
            fh.write(_json_line(rec) + "\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _default_workers() -> int:
    env = os.environ.get("ENTSTATS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"ENTSTATS_THREADS must be an integer, got {env!r}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entstats",
        description="Purity statistics of random n-qubit states: sampling, "
                    "exact enumeration, closed-form tables, and minimum search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_n=True):
        if need_n:
            p.add_argument("--n", required=True, help="qubit count (theory: also 'lo..hi')")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--stream", type=int, default=0)
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default: ENTSTATS_THREADS or 1)")
        p.add_argument("--out", default="-", help="output directory, or - for stdout")
        p.add_argument("--format", choices=("csv", "jsonl"), default="jsonl")

    p = sub.add_parser("sample", help="Monte Carlo purity statistics")
    common(p)
    p.add_argument("--ensemble", required=True, help="haar | butson:q | hadamard")
    p.add_argument("--stat", default="piME", help="piA[:mask] | piME")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)

    p = sub.add_parser("enumerate", help="exhaustive small-ensemble statistics")
    common(p)
    p.add_argument("--ensemble", required=True, help="butson:q")
    p.add_argument("--stat", default="piME", help="piA[:mask] | piME")
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)

    p = sub.add_parser("theory", help="closed-form cumulant table (CSV)")
    common(p)

    p = sub.add_parser("verify", help="oracle-equivalence and identity checks")
    common(p, need_n=False)

    p = sub.add_parser("search", help="greedy minimum-purity search")
    common(p)
    p.add_argument("--ensemble", required=True, help="butson:q")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-passes", type=int, default=10_000)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    n = None
    n_range = None
    if getattr(args, "n", None) is not None:
        if args.command == "theory":
            n_range = args.n
        else:
            try:
                n = int(args.n)
            except ValueError:
                raise ConfigError(f"--n must be an integer, got {args.n!r}")
    workers = args.workers if args.workers is not None else _default_workers()
    if workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {workers}")
    return RunConfig(
        command=args.command,
        n=n,
        ensemble=getattr(args, "ensemble", None),
        stat=getattr(args, "stat", None),
        samples=getattr(args, "samples", None),
        seed=args.seed if hasattr(args, "seed") else 0,
        stream=args.stream if hasattr(args, "stream") else 0,
        workers=workers,
        bins=getattr(args, "bins", 200),
        lo=getattr(args, "lo", None),
        hi=getattr(args, "hi", None),
        out=args.out,
        format=args.format,
        restarts=getattr(args, "restarts", None),
        max_passes=getattr(args, "max_passes", None),
        n_range=n_range,
    )


_COMMANDS = {
    "sample": cmd_sample,
    "enumerate": cmd_enumerate,
    "theory": cmd_theory,
    "verify": cmd_verify,
    "search": cmd_search,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except ConfigError as exc:
        _progress(f"error: {exc}")
        return 2
    except OSError as exc:
        _progress(f"i/o error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
