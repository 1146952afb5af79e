"""Command-line experiment runner: ``fpplab run`` and ``fpplab plot``.

Each run writes a CSV of result rows and a JSON sidecar holding the full
configuration. ``fpplab run --config results.json`` re-runs a sidecar.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import functools
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from fpplab import __version__
from fpplab.claims import (
    DEFAULT_A,
    ClaimReport,
    CoupledPair,
    analytic_floor,
    crossing_scale_for,
    forced_hit_environment,
    inner_radius_for,
    make_coupled_pair,
    run_goal_chain,
    verify_claim1,
    verify_claim2,
)
from fpplab.distributions import DistributionError, WeightDistribution, parse_distribution
from fpplab.environment import TauField, build_tau_field, tau_norm_sq
from fpplab.estimators import (
    CertificateError,
    EstimateRecord,
    MonteCarloConfig,
    confinement_probability,
    estimate_three_point_gap,
    estimate_time_constant,
    good_ratio_estimate,
    midpoint_avoidance_probability,
    point_record,
    run_replicates,
    summarize,
)
from fpplab.lattice import BoxSpec
from fpplab.streams import derive_seed
from fpplab.transform import (
    GoodSet,
    WeightTransform,
    build_good_set,
    default_delta,
    measure_inequality_certificate,
)

log = logging.getLogger("fpplab")

EXPERIMENTS = (
    "three-point-gap",
    "time-constant",
    "midpoint",
    "confinement",
    "good-ratio",
    "claim1",
    "claim2",
    "goal-chain",
    "mw-certificate",
    "tau-norm",
)
TAU_EXPERIMENTS = {"claim1", "claim2", "goal-chain", "tau-norm"}
CSV_COLUMNS = ("experiment", "param_json_ref", "n", "statistic", "value", "stderr",
               "replicates", "seed", "wall_ms")
# keys that never change a statistic and so stay out of the parameter hash
RUNTIME_KEYS = ("out", "max_seconds", "workers")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_IO = 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dist: str = "uniform:1:1.5"
    n_values: tuple[int, ...] = (8, 16, 32, 64)
    m: int | None = None
    kappa: float = 0.1
    delta: float | None = None
    mask_factor: float = 2.0
    scale: int | None = None
    replicates: int = 1000
    master_seed: int = 0
    out: str = "results.csv"
    max_seconds: float | None = None
    workers: int = 1
    transform_c: float = 1.0
    a: float = DEFAULT_A
    outer_factor: float | None = None
    radius_mode: str = "desk"
    good_mass: float | None = None
    fixture: str | None = None

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["n_values"] = list(self.n_values)
        return d

    def param_hash(self) -> str:
        d = {k: v for k, v in self.to_dict().items() if k not in RUNTIME_KEYS}
        blob = json.dumps(d, sort_keys=True).encode()
        return "sha256:" + hashlib.sha256(blob).hexdigest()[:16]

    @property
    def distribution(self) -> WeightDistribution:
        return parse_distribution(self.dist)

    @property
    def sidecar(self) -> Path:
        return Path(self.out).with_suffix(".json")

    def monte_carlo(self, n_values: Sequence[int] | None = None) -> MonteCarloConfig:
        return MonteCarloConfig(
            replicates=self.replicates,
            master_seed=self.master_seed,
            n_values=tuple(self.n_values if n_values is None else n_values),
            dist=self.distribution,
            mask_factor=self.mask_factor,
            workers=self.workers,
        )


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    param_json_ref: str
    n: int
    statistic: str
    value: float
    stderr: float
    replicates: int
    seed: int
    wall_ms: int

    def as_csv(self) -> list[str]:
        return [self.experiment, self.param_json_ref, str(self.n), self.statistic,
                repr(float(self.value)), repr(float(self.stderr)), str(self.replicates),
                str(self.seed), str(self.wall_ms)]


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_ALIASES = {"n": "n_values", "reps": "replicates", "seed": "master_seed", "c": "mask_factor"}


def _int_list(text: Any) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x)


def _coerce(key: str, value: Any) -> Any:
    if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none", "null")):
        return None
    kind = str(_FIELDS[key].type)
    try:
        if key == "n_values":
            return _int_list(value)
        if kind.startswith("int"):
            return int(value)
        if kind.startswith("float"):
            return float(value)
        return str(value).strip()
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {value!r}") from exc


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Flat ``key = value`` text, or a JSON sidecar written by a previous run."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    if path.suffix == ".json":
        data = json.loads(text)
        return dict(data.get("config", data))
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config: line {lineno} is not 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key] = value
    return out


def _run_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpplab run", argument_default=argparse.SUPPRESS)
    p.add_argument("experiment")
    p.add_argument("--dist")
    p.add_argument("--n", dest="n_values")
    p.add_argument("--m", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--c", dest="mask_factor", type=float, help="mask factor C, K = Lambda(Cn)")
    p.add_argument("--scale", type=int)
    p.add_argument("--reps", dest="replicates", type=int)
    p.add_argument("--seed", dest="master_seed", type=int)
    p.add_argument("--out")
    p.add_argument("--config")
    p.add_argument("--max-seconds", dest="max_seconds", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--transform-c", dest="transform_c", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--outer-factor", dest="outer_factor", type=float)
    p.add_argument("--radius-mode", dest="radius_mode", choices=("desk", "asymptotic"))
    p.add_argument("--good-mass", dest="good_mass", type=float)
    p.add_argument("--fixture", choices=("forced-hit",))
    return p


def parse_config(argv: Sequence[str], file: str | Path | None = None) -> ExperimentConfig:
    """Build a validated config; file values are overridden by explicit flags."""
    try:
        flags = vars(_run_parser().parse_args(list(argv)))
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise ConfigError(f"invalid arguments: {' '.join(argv)}") from exc
    file = flags.pop("config", file)
    merged: dict[str, Any] = {}
    if file is not None:
        for key, value in read_config_file(file).items():
            key = _ALIASES.get(key, key)
            if key not in _FIELDS:
                raise ConfigError(f"config: unknown key {key!r}")
            merged[key] = value
    merged.update(flags)
    values = {k: _coerce(k, v) for k, v in merged.items()}
    cfg = ExperimentConfig(**values)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown {cfg.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    try:
        dist = cfg.distribution
    except DistributionError as exc:
        raise ConfigError(f"dist: {exc}") from exc
    if cfg.experiment in TAU_EXPERIMENTS and not 0.0 < cfg.kappa < 0.5:
        raise ConfigError(
            f"kappa: {cfg.kappa} is outside (0, 1/2); the log(n)^(1/2 - kappa) growth needs 1/2 - kappa > 0"
        )
    if not cfg.n_values:
        raise ConfigError("n_values: empty list")
    if any(n < 0 for n in cfg.n_values):
        raise ConfigError("n_values: sizes must be nonnegative")
    if cfg.replicates < 1:
        raise ConfigError("replicates: must be positive")
    if cfg.master_seed < 0:
        raise ConfigError("master_seed: must be nonnegative")
    if cfg.mask_factor < 1.0:
        raise ConfigError("mask_factor: C must be at least 1")
    if cfg.m is not None and cfg.m < 0:
        raise ConfigError("m: must be nonnegative")
    if cfg.delta is not None and cfg.delta <= 0:
        raise ConfigError("delta: must be positive")
    if cfg.workers < 1:
        raise ConfigError("workers: must be positive")
    if cfg.radius_mode not in ("desk", "asymptotic"):
        raise ConfigError("radius_mode: 'desk' or 'asymptotic'")
    if cfg.fixture not in (None, "forced-hit"):
        raise ConfigError(f"fixture: unknown {cfg.fixture!r}")
    if cfg.good_mass is not None and not 0 < cfg.good_mass <= 1:
        raise ConfigError("good_mass: must lie in (0, 1]")
    if cfg.transform_c <= 0:
        raise ConfigError("transform_c: must be positive")
    del dist


# ---------------------------------------------------------------------------
# experiment bodies; each yields (n, records) groups and collects failures


@dataclass
class _Run:
    cfg: ExperimentConfig
    deadline: float | None
    failures: list[str] = dataclasses.field(default_factory=list)
    extra: dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def transform(self) -> WeightTransform:
        return WeightTransform(self.cfg.distribution, self.cfg.transform_c)

    def good_set(self) -> GoodSet:
        if self.cfg.delta is None:
            delta, good = default_delta(self.transform)
        else:
            delta, good = self.cfg.delta, build_good_set(self.transform, self.cfg.delta)
        self.extra["delta"] = delta
        self.extra["good_intervals"] = [list(iv) for iv in good.intervals]
        return good

    def m_for(self, n: int) -> int:
        return inner_radius_for(n, self.cfg.radius_mode) if self.cfg.m is None else self.cfg.m

    def scale_for(self, m: int, n: int) -> int:
        return crossing_scale_for(m, n, self.cfg.radius_mode) if self.cfg.scale is None else self.cfg.scale


def _exp_three_point_gap(run: _Run, n: int) -> list[EstimateRecord]:
    try:
        return estimate_three_point_gap(run.cfg.monte_carlo([n]), run.deadline)
    except CertificateError as exc:
        run.failures.append(str(exc))
        return []


def _exp_time_constant(run: _Run, n: int) -> list[EstimateRecord]:
    records, _ = estimate_time_constant(run.cfg.monte_carlo([n]), run.deadline)
    return records


def _exp_midpoint(run: _Run, n: int) -> list[EstimateRecord]:
    m = inner_radius_for(n, run.cfg.radius_mode) if run.cfg.m is None else run.cfg.m
    return midpoint_avoidance_probability(run.cfg.monte_carlo([n]), m, run.deadline)


def _exp_confinement(run: _Run, n: int) -> list[EstimateRecord]:
    return confinement_probability(run.cfg.monte_carlo([n]), run.cfg.outer_factor, run.deadline)


def _exp_good_ratio(run: _Run, n: int) -> list[EstimateRecord]:
    dist = run.cfg.distribution
    good = GoodSet.upper_band(dist, run.cfg.good_mass) if run.cfg.good_mass else run.good_set()
    run.extra["good_mass"] = good.measure(dist)
    records = good_ratio_estimate(run.cfg.monte_carlo([n]), good, run.deadline)
    return [r for r in records if r.observable != "a_hat"]


def _claim1_sample(dist, transform, field, good, n, radius, scale, a, seed) -> ClaimReport:
    pair = make_coupled_pair(BoxSpec(radius), dist, seed, field, transform, good)
    return verify_claim1(pair, n, scale=scale, a=a)


def _claim2_sample(dist, transform, field, good, n, radius, fixture, seed) -> ClaimReport:
    region = BoxSpec(radius)
    if fixture == "forced-hit":
        pair = CoupledPair.from_base(forced_hit_environment(region, dist, seed), field, transform, good)
    else:
        pair = make_coupled_pair(region, dist, seed, field, transform, good)
    return verify_claim2(pair, n)


def _claim_setup(run: _Run, n: int) -> tuple[TauField, GoodSet, int, int]:
    m = run.m_for(n)
    if not 2 <= m < n:
        raise ConfigError(f"m: need 2 <= m < n, got m={m} at n={n}")
    return build_tau_field(m, run.cfg.kappa), run.good_set(), m, run.cfg.monte_carlo().mask_radius(n)


def _exp_claim1(run: _Run, n: int) -> list[EstimateRecord]:
    field, good, m, radius = _claim_setup(run, n)
    scale = run.scale_for(m, n)
    mc = run.cfg.monte_carlo([n])
    fn = functools.partial(_claim1_sample, mc.dist, run.transform, field, good, n, radius, scale, run.cfg.a)
    reports = run_replicates(fn, mc, n, run.deadline)
    for rep_index, rep in enumerate(reports):
        if not rep.passed:
            run.failures.append(f"n={n} replicate {rep_index}: claim 1 gap {rep.lhs!r} < bound {rep.rhs!r}")
    ms = mc.master_seed
    return [
        summarize("claim1_gap", n, [r.lhs for r in reports], ms),
        summarize("claim1_bound", n, [r.rhs for r in reports], ms),
        summarize("claim1_pass", n, [float(r.passed) for r in reports], ms),
        summarize("tau_positive_frequency", n, [float(r.details["tau_sum"] > 0) for r in reports], ms),
        summarize("crossings_ok_frequency", n, [float(r.details["crossings_ok"]) for r in reports], ms),
        point_record("analytic_floor", n, analytic_floor(run.cfg.a, run.cfg.kappa, m, scale), len(reports), ms),
    ]


def _exp_claim2(run: _Run, n: int) -> list[EstimateRecord]:
    field, good, m, radius = _claim_setup(run, n)
    mc = run.cfg.monte_carlo([n])
    fn = functools.partial(_claim2_sample, mc.dist, run.transform, field, good, n, radius, run.cfg.fixture)
    reports = run_replicates(fn, mc, n, run.deadline)
    for rep_index, rep in enumerate(reports):
        if not rep.passed:
            run.failures.append(f"n={n} replicate {rep_index}: claim 2 times differ by {rep.details['abs_diff']!r}")
    ms = mc.master_seed
    checked = [r.details["abs_diff"] for r in reports if r.applicable]
    return [
        summarize("claim2_applicable", n, [float(r.applicable) for r in reports], ms),
        summarize("claim2_pass", n, [float(r.passed) for r in reports], ms),
        point_record("claim2_max_abs_diff", n, max(checked, default=0.0), len(reports), ms),
    ]


def _exp_goal_chain(run: _Run, n: int) -> list[EstimateRecord]:
    cfg = run.cfg
    summary = run_goal_chain(
        cfg.monte_carlo([n]), cfg.m, cfg.kappa, cfg.delta, cfg.scale, cfg.a,
        cfg.outer_factor, cfg.transform_c, cfg.radius_mode, run.deadline,
    )
    run.failures.extend(summary.failures)
    run.extra["delta"] = summary.delta
    return summary.records


def _exp_mw_certificate(run: _Run, n: int) -> list[EstimateRecord]:
    """Randomised product sets and shift vectors of dimension 1..5."""
    cfg = run.cfg
    t = run.transform
    dist = t.dist
    slacks = []
    passed = []
    for r in range(cfg.replicates):
        if run.deadline is not None and time.monotonic() > run.deadline:
            break
        rng = np.random.default_rng(derive_seed(cfg.master_seed, n, r))
        dim = int(rng.integers(1, 6))
        tau = rng.uniform(0.0, 1.0, dim)
        sets = []
        for _ in range(dim):
            cuts = np.sort(rng.uniform(0.0, 1.0, 2 * int(rng.integers(1, 3))))
            sets.append([(float(dist.ppf(a)), float(dist.ppf(b))) for a, b in cuts.reshape(-1, 2)])
        rep = measure_inequality_certificate(t, tau, sets)
        slacks.append(rep.slack)
        passed.append(rep.passed)
        if not rep.passed:
            run.failures.append(f"replicate {r}: lhs {rep.lhs!r} < rhs {rep.rhs!r}")
    return [
        summarize("mw_pass", n, [float(p) for p in passed], cfg.master_seed),
        point_record("mw_min_slack", n, min(slacks, default=math.nan), len(slacks), cfg.master_seed),
    ]


def _exp_tau_norm(run: _Run, n: int) -> list[EstimateRecord]:
    value = tau_norm_sq(build_tau_field(n, run.cfg.kappa))
    return [point_record("tau_norm_sq", n, value, 1, run.cfg.master_seed)]


_BODIES = {
    "three-point-gap": _exp_three_point_gap,
    "time-constant": _exp_time_constant,
    "midpoint": _exp_midpoint,
    "confinement": _exp_confinement,
    "good-ratio": _exp_good_ratio,
    "claim1": _exp_claim1,
    "claim2": _exp_claim2,
    "goal-chain": _exp_goal_chain,
    "mw-certificate": _exp_mw_certificate,
    "tau-norm": _exp_tau_norm,
}


def _post_rows(cfg: ExperimentConfig, rows: list[ResultRow], ref: str) -> list[ResultRow]:
    """Whole-run statistics derived from the per-n rows."""
    out = []
    if cfg.experiment == "time-constant" and rows:
        best = min((r for r in rows if r.statistic == "time_constant"), key=lambda r: r.value)
        out.append(dataclasses.replace(best, statistic="mu_hat", stderr=math.nan, wall_ms=0))
    if cfg.experiment == "good-ratio" and rows:
        n_max = max(r.n for r in rows)
        last = [r for r in rows if r.statistic == "good_ratio_min" and r.n == n_max]
        if last:
            out.append(dataclasses.replace(last[0], statistic="a_hat", wall_ms=0))
    return out


def execute(cfg: ExperimentConfig) -> tuple[list[ResultRow], _Run, bool]:
    """Run every n of the experiment; returns rows, the run state and completeness."""
    deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds
    run = _Run(cfg, deadline)
    ref = cfg.param_hash()
    rows: list[ResultRow] = []
    complete = True
    body = _BODIES[cfg.experiment]
    n_values = (0,) if cfg.experiment == "mw-certificate" else cfg.n_values
    for n in n_values:
        if deadline is not None and time.monotonic() > deadline:
            complete = False
            break
        start = time.perf_counter()
        records = body(run, n)
        wall = int(round(1000 * (time.perf_counter() - start)))
        for rec in records:
            rows.append(ResultRow(cfg.experiment, ref, rec.n, rec.observable, rec.mean, rec.stderr,
                                  rec.replicates, cfg.master_seed, wall))
            if cfg.experiment != "tau-norm" and rec.replicates < cfg.replicates and rec.observable not in (
                "conditional_gap", "chain_margin_min"
            ):
                complete = False
        if run.failures:
            break
    rows.extend(_post_rows(cfg, rows, ref))
    return rows, run, complete


def write_rows(path: str | Path, rows: Iterable[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())


def read_rows(path: str | Path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        return [
            ResultRow(r["experiment"], r["param_json_ref"], int(r["n"]), r["statistic"],
                      float(r["value"]), float(r["stderr"]), int(r["replicates"]), int(r["seed"]),
                      int(r["wall_ms"]))
            for r in reader
        ]


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run, persist CSV plus sidecar, and map the outcome to an exit code."""
    out = Path(cfg.out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "a"):
            pass
        with open(cfg.sidecar, "a"):
            pass
    except OSError as exc:
        print(f"fpplab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        rows, run, complete = execute(cfg)
    except ConfigError as exc:
        print(f"fpplab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code = EXIT_CERTIFICATE if run.failures else EXIT_OK
    sidecar = {
        "fpplab_version": __version__,
        "param_json_ref": cfg.param_hash(),
        "config": cfg.to_dict(),
        "complete": complete,
        "exit_code": code,
        "failures": run.failures[:20],
        "derived": run.extra,
    }
    try:
        write_rows(out, rows)
        cfg.sidecar.write_text(json.dumps(sidecar, indent=2, sort_keys=True, default=float))
    except OSError as exc:
        print(f"fpplab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if not complete:
        print("fpplab: time budget exhausted, rows are partial (sidecar complete=false)", file=sys.stderr)
    if run.failures:
        print(f"fpplab: certificate violated: {run.failures[0]}", file=sys.stderr)
    return code


def emit_plot_data(rows: Sequence[ResultRow], x: str, y: str, kappa: float = 0.1) -> list[tuple[float, float]]:
    """Pairs (abscissa, value) for statistic ``y``, sorted by n.

    ``x`` is ``n``, ``logn`` or ``logn-pow`` (log(n)^(1/2 - kappa)).
    """
    if not rows:
        raise ValueError("no rows to plot")
    chosen = sorted((r for r in rows if r.statistic == y), key=lambda r: r.n)
    if not chosen:
        raise ValueError(f"statistic {y!r} not present in rows")
    if x == "n":
        fx = float
    elif x == "logn":
        fx = math.log
    elif x == "logn-pow":
        fx = lambda n: math.log(n) ** (0.5 - kappa)  # noqa: E731
    else:
        raise ValueError(f"unknown abscissa {x!r}")
    return [(fx(r.n), r.value) for r in chosen]


def _plot(args: argparse.Namespace) -> int:
    rows = read_rows(args.inp)
    kappa = args.kappa
    sidecar = Path(args.inp).with_suffix(".json")
    if kappa is None and sidecar.exists():
        kappa = json.loads(sidecar.read_text())["config"].get("kappa")
    kappa = 0.1 if kappa is None else kappa
    try:
        pairs = emit_plot_data(rows, args.x, args.y, kappa)
    except ValueError as exc:
        print(f"fpplab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    label = {"n": "n", "logn": "log(n)", "logn-pow": f"log(n)^{0.5 - kappa:g}"}[args.x]
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([label, args.y])
            for a, b in pairs:
                writer.writerow([repr(a), repr(b)])
    except OSError as exc:
        print(f"fpplab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if argv[:1] == ["run"]:
        try:
            cfg = parse_config(argv[1:])
        except ConfigError as exc:
            print(f"fpplab: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        return run_experiment(cfg)
    parser = argparse.ArgumentParser(prog="fpplab")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", help="run an experiment (see 'fpplab run -h')", add_help=False)
    plot = sub.add_parser("plot", help="emit two-column plot data from a results CSV")
    plot.add_argument("--in", dest="inp", required=True)
    plot.add_argument("--x", choices=("n", "logn", "logn-pow"), default="n")
    plot.add_argument("--y", required=True)
    plot.add_argument("--out", required=True)
    plot.add_argument("--kappa", type=float, default=None)
    args = parser.parse_args(argv)
    return _plot(args)


if __name__ == "__main__":
    sys.exit(main())
