"""Coupled environments and pathwise certificates for the lower-bound argument.

A base environment ``base`` is drawn from nu and lifted edge by edge,
``lifted = T_tau(base)``. Raising weights only inside Lambda(m) makes the
passage time to ``(n, 0)`` from the origin grow by at least
``delta * sum(tau_e over good edges of the exit prefix)`` while leaving
any geodesic that avoids Lambda(m) untouched.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from fpplab.distributions import WeightDistribution
from fpplab.environment import Environment, TauField, build_tau_field, sample_environment
from fpplab.estimators import (
    SUBADDITIVITY_TOL,
    CertificateError,
    EstimateRecord,
    MonteCarloConfig,
    point_record,
    run_replicates,
    summarize,
)
from fpplab.geodesic import (
    PathRecord,
    first_exit_prefix,
    geodesic_hits_box,
    geodesics_from,
    passage_time,
    path_inside_box,
)
from fpplab.lattice import BoxSpec, Vertex, box_radius
from fpplab.transform import GoodSet, WeightTransform, apply_transform, build_good_set, default_delta

ROUNDTRIP_TOL = 1e-10
SHIFT_TOL = 1e-12
CLAIM1_TOL = 1e-9
CLAIM2_TOL = 1e-10
# placeholder per-crossing density until a fitted value from good_ratio_estimate is supplied
DEFAULT_A = 0.25


def inner_radius_for(n: int, mode: str = "desk") -> int:
    """Radius of the perturbed box: ceil(n^(1/3)) at desk scale, n^(1/33) otherwise."""
    if mode == "desk":
        return max(2, math.ceil(n ** (1.0 / 3.0) - 1e-12))
    if mode == "asymptotic":
        return int(math.floor(n ** (1.0 / 33.0) + 1e-12))
    raise ValueError(f"unknown radius mode {mode!r}")


def crossing_scale_for(m: int, n: int, mode: str = "desk") -> int:
    if mode == "desk":
        return max(1, math.ceil(math.sqrt(m) - 1e-12))
    if mode == "asymptotic":
        return max(1, int(math.floor(n ** (1.0 / 66.0) + 1e-12)))
    raise ValueError(f"unknown radius mode {mode!r}")


@dataclass(frozen=True, eq=False)
class CoupledPair:
    base: Environment
    lifted: Environment
    field: TauField
    good: GoodSet
    transform: WeightTransform

    @property
    def delta(self) -> float:
        return 0.0 if self.good.delta is None else self.good.delta

    @property
    def region(self) -> BoxSpec:
        return self.base.region

    @classmethod
    def from_base(cls, base: Environment, field: TauField, transform: WeightTransform,
                  good: GoodSet) -> CoupledPair:
        lifted = apply_transform(base, field, transform, "forward")
        pair = cls(base, lifted, field, good, transform)
        pair.certify()
        return pair

    def certify(self) -> None:
        """Raise :class:`CertificateError` unless every coupling invariant holds."""
        back = apply_transform(self.lifted, self.field, self.transform, "inverse")
        taus = self.field.arrays(self.region)
        pairs = zip((self.base.horizontal, self.base.vertical),
                    (self.lifted.horizontal, self.lifted.vertical),
                    (back.horizontal, back.vertical), taus)
        for base, lifted, recovered, tau in pairs:
            if np.any(lifted < base):
                raise CertificateError("lifted weight below base weight")
            still = tau == 0
            if not np.array_equal(lifted[still], base[still]):
                raise CertificateError("weight changed on an edge with zero shift")
            err = np.abs(recovered - base) / np.maximum(1.0, np.abs(base))
            if err.size and err.max() > ROUNDTRIP_TOL:
                raise CertificateError(f"inverse transform error {err.max():.3e}")
            if self.delta > 0:
                good = self.good.contains(base) & ~still
                short = lifted[good] - base[good] - self.delta * tau[good]
                if short.size and short.min() < -SHIFT_TOL:
                    raise CertificateError(f"good edge shifted by less than delta*tau ({short.min():.3e})")


def make_coupled_pair(
    region: BoxSpec,
    dist: WeightDistribution,
    seed: int,
    field: TauField,
    transform: WeightTransform,
    good: GoodSet,
) -> CoupledPair:
    if not field.is_zero and not region.contains_box(field.box):
        raise ValueError("the shift field reaches outside the region")
    return CoupledPair.from_base(sample_environment(region, dist, seed), field, transform, good)


@dataclass(frozen=True)
class AnnulusSumReport:
    tau_sum: float
    crossing_good_counts: tuple[int, ...]
    crossings_ok: bool
    analytic_floor: float


def analytic_floor(a: float, kappa: float, m: int, scale: int) -> float:
    """a/(1/2-kappa) * (log(m)^(1/2-kappa) - log(scale)^(1/2-kappa))."""
    p = 0.5 - kappa
    return a / p * (math.log(m) ** p - math.log(max(scale, 1)) ** p)


def annulus_sum_lower_bound(
    path: PathRecord, pair: CoupledPair, scale: int, a: float = DEFAULT_A
) -> AnnulusSumReport:
    """Good-edge tau sum along ``path`` and its decomposition into annulus crossings.

    Crossing ``i`` runs from the first visit of annulus ``(i-1)*scale`` to the
    first visit of annulus ``i*scale`` (``i = 1 .. m // scale``); it is counted
    as satisfied when it holds at least ``a * scale`` edges whose base weight
    is in the good set.
    """
    field = pair.field
    m = field.inner_radius
    if not 1 <= scale <= m:
        raise ValueError(f"crossing scale must lie in [1, {m}]")
    k = path.annulus_indices(field.center)
    if k[0] != 0:
        raise ValueError("path must start at the field center")
    if k.max() <= m:
        raise ValueError(f"path does not exit Lambda({m})")
    base_w = pair.base.path_weights(path.coords)
    good = pair.good.contains(base_w)
    edge_k = np.maximum(k[:-1], k[1:])
    tau = np.asarray(field.value_at_annulus(edge_k), dtype=float)
    tau_sum = math.fsum(tau[good])

    counts = []
    start = 0
    for i in range(1, m // scale + 1):
        stop = int(np.argmax(k >= i * scale))
        counts.append(int(np.count_nonzero(good[start:stop])))
        start = stop
    ok = bool(counts) and all(c >= a * scale for c in counts)
    return AnnulusSumReport(tau_sum, tuple(counts), ok, analytic_floor(a, field.kappa, m, scale))


@dataclass(frozen=True)
class ClaimReport:
    claim: str
    n: int
    m: int
    kappa: float
    delta: float
    lhs: float
    rhs: float
    passed: bool
    applicable: bool = True
    details: dict = dc_field(default_factory=dict)


def _origin() -> Vertex:
    return Vertex(0, 0)


def _claim1_report(pair: CoupledPair, n: int, m: int, t_lifted: float, path_lifted: PathRecord,
                   t_base: float, scale: int, a: float) -> ClaimReport:
    prefix = first_exit_prefix(path_lifted, BoxSpec(m, pair.field.center))
    ann = annulus_sum_lower_bound(prefix, pair, scale, a)
    gap = t_lifted - t_base
    bound = pair.delta * ann.tau_sum
    passed = gap >= bound - CLAIM1_TOL and gap >= -CLAIM1_TOL
    details = {
        "tau_sum": ann.tau_sum,
        "crossing_good_counts": ann.crossing_good_counts,
        "crossings_ok": ann.crossings_ok,
        "analytic_floor": ann.analytic_floor,
        "prefix_edges": len(prefix),
        "scale": scale,
        "a": a,
    }
    return ClaimReport("claim1", n, m, pair.field.kappa, pair.delta, gap, bound, passed, True, details)


def verify_claim1(
    pair: CoupledPair,
    n: int,
    m: int | None = None,
    mask: BoxSpec | None = None,
    scale: int | None = None,
    a: float = DEFAULT_A,
) -> ClaimReport:
    """T_K(0,n)(lifted) - T_K(0,n)(base) >= delta * tau_sum over the exit prefix.

    ``lhs`` is the passage-time gap, ``rhs`` the certified shift.
    """
    m = pair.field.inner_radius if m is None else m
    scale = crossing_scale_for(m, n) if scale is None else scale
    mask = pair.region if mask is None else mask
    t_l, p_l = passage_time(pair.lifted, _origin(), Vertex(n, 0), mask)
    t_b, _ = passage_time(pair.base, _origin(), Vertex(n, 0), mask)
    return _claim1_report(pair, n, m, t_l, p_l, t_b, scale, a)


def _claim2_report(pair: CoupledPair, n: int, m: int, t_lifted: float, path_lifted: PathRecord,
                   t_base: float, path_base: PathRecord) -> ClaimReport:
    box = BoxSpec(m, pair.field.center)
    a1_lifted = not geodesic_hits_box(path_lifted, box)
    a1_base = not geodesic_hits_box(path_base, box)
    applicable = a1_lifted and a1_base
    diff = abs(t_lifted - t_base)
    passed = diff <= CLAIM2_TOL if applicable else True
    details = {"a1_lifted": a1_lifted, "a1_base": a1_base, "abs_diff": diff}
    return ClaimReport("claim2", n, m, pair.field.kappa, pair.delta, t_lifted, t_base, passed,
                       applicable, details)


def verify_claim2(pair: CoupledPair, n: int, m: int | None = None, mask: BoxSpec | None = None) -> ClaimReport:
    """T_K(-n,n) agrees in both environments when both K-geodesics avoid Lambda(m).

    If either geodesic meets Lambda(m) the replicate lies outside the avoidance
    event; it is reported with ``applicable=False`` and nothing is asserted.
    """
    m = pair.field.inner_radius if m is None else m
    mask = pair.region if mask is None else mask
    t_l, p_l = passage_time(pair.lifted, Vertex(-n, 0), Vertex(n, 0), mask)
    t_b, p_b = passage_time(pair.base, Vertex(-n, 0), Vertex(n, 0), mask)
    return _claim2_report(pair, n, m, t_l, p_l, t_b, p_b)


def forced_hit_environment(region: BoxSpec, dist: WeightDistribution, seed: int = 0,
                           low: float = 1e-3, high: float = 1 - 1e-3) -> Environment:
    """Adversarial fixture: cheap corridor along the first axis, expensive elsewhere.

    Every geodesic between axis points runs straight through the origin, so
    the avoidance event fails in both coupled environments.
    """
    s = region.side
    h = np.full((s - 1, s), float(dist.ppf(high)))
    v = np.full((s, s - 1), float(dist.ppf(high)))
    j_axis = -region.y0
    if 0 <= j_axis < s:
        h[:, j_axis] = float(dist.ppf(low))
    return Environment(region, h, v, seed, dist)


@dataclass(frozen=True)
class ChainOutcome:
    """Everything measured on one coupled replicate of the goal chain."""

    seed: int
    a1_base: bool
    a1_lifted: bool
    confined: bool
    tau_sum: float
    crossings_ok: bool
    gap_lifted: float
    claim1: ClaimReport
    claim2: ClaimReport

    @property
    def in_event(self) -> bool:
        return self.a1_base and self.a1_lifted and self.confined and self.tau_sum > 0

    @property
    def chain_margin(self) -> float:
        return self.gap_lifted - self.claim1.delta * self.tau_sum

    def failures(self) -> list[str]:
        out = []
        if self.gap_lifted < -SUBADDITIVITY_TOL:
            out.append(f"seed {self.seed}: subadditivity violated, G_n = {self.gap_lifted!r}")
        if not self.claim1.passed:
            out.append(f"seed {self.seed}: claim 1 gap {self.claim1.lhs!r} < {self.claim1.rhs!r}")
        if not self.claim2.passed:
            out.append(f"seed {self.seed}: claim 2 times differ by {self.claim2.details['abs_diff']!r}")
        if self.in_event and self.chain_margin < -CLAIM1_TOL:
            out.append(f"seed {self.seed}: chain G_n = {self.gap_lifted!r} below delta*tau_sum")
        return out


def _k_geodesics(env: Environment, source: Vertex, targets: Sequence[Vertex], k: BoxSpec):
    """Search the whole region; redo inside K for any geodesic that leaves K.

    Returns ``(k_results, all_inside)`` where ``all_inside`` reports whether
    the region geodesics stayed in K.
    """
    res = geodesics_from(env, source, targets)
    inside = [path_inside_box(p, k) for _, p in res]
    if all(inside):
        return res, True
    redo = geodesics_from(env, source, targets, k)
    return [r if ok else rr for r, rr, ok in zip(res, redo, inside)], False


def chain_replicate(
    dist: WeightDistribution,
    transform: WeightTransform,
    field: TauField,
    good: GoodSet,
    n: int,
    scale: int,
    a: float,
    mask_radius: int,
    outer_radius: int,
    seed: int,
) -> ChainOutcome:
    m = field.inner_radius
    k = BoxSpec(mask_radius)
    pair = make_coupled_pair(BoxSpec(outer_radius), dist, seed, field, transform, good)
    left, mid, right = Vertex(-n, 0), _origin(), Vertex(n, 0)
    ((t_l0, _), (t_ln, p_ln)), in_a = _k_geodesics(pair.lifted, left, [mid, right], k)
    ((t_0n, p_0n),), in_b = _k_geodesics(pair.lifted, mid, [right], k)
    ((tb_ln, pb_ln),), _ = _k_geodesics(pair.base, left, [right], k)
    ((tb_0n, _),), _ = _k_geodesics(pair.base, mid, [right], k)
    c1 = _claim1_report(pair, n, m, t_0n, p_0n, tb_0n, scale, a)
    c2 = _claim2_report(pair, n, m, t_ln, p_ln, tb_ln, pb_ln)
    return ChainOutcome(
        seed=seed,
        a1_base=c2.details["a1_base"],
        a1_lifted=c2.details["a1_lifted"],
        confined=in_a and in_b,
        tau_sum=c1.details["tau_sum"],
        crossings_ok=c1.details["crossings_ok"],
        gap_lifted=t_l0 + t_0n - t_ln,
        claim1=c1,
        claim2=c2,
    )


@dataclass
class GoalChainSummary:
    records: list[EstimateRecord]
    outcomes: dict[int, list[ChainOutcome]]
    failures: list[str]
    delta: float
    params: dict

    @property
    def passed(self) -> bool:
        return not self.failures


def run_goal_chain(
    cfg: MonteCarloConfig,
    m: int | None,
    kappa: float,
    delta: float | None = None,
    scale: int | None = None,
    a: float = DEFAULT_A,
    outer_factor: float | None = None,
    transform_c: float = 1.0,
    radius_mode: str = "desk",
    deadline: float | None = None,
) -> GoalChainSummary:
    """Per n: frequency of the joint event and the gap conditioned on it.

    The joint event is avoidance of Lambda(m) by gamma_K(-n,n) in both
    environments, confinement of the lifted geodesics to K = Lambda(Cn)
    (observed inside Lambda(C'n)) and a positive tau sum on the exit prefix.
    On it, G_n(lifted) >= delta * tau_sum is certified exactly.
    """
    transform = WeightTransform(cfg.dist, transform_c)
    if delta is None:
        delta, good = default_delta(transform)
    else:
        good = build_good_set(transform, delta)
    outer_factor = cfg.mask_factor + 1.0 if outer_factor is None else outer_factor
    if not outer_factor > cfg.mask_factor:
        raise ValueError("the detection box must be strictly larger than Lambda(Cn)")

    records: list[EstimateRecord] = []
    outcomes: dict[int, list[ChainOutcome]] = {}
    failures: list[str] = []
    for n in cfg.n_values:
        m_n = inner_radius_for(n, radius_mode) if m is None else m
        if not 2 <= m_n < n:
            raise ValueError(f"need 2 <= m < n, got m={m_n}, n={n}")
        field = build_tau_field(m_n, kappa)
        s_n = crossing_scale_for(m_n, n, radius_mode) if scale is None else scale
        inner = cfg.mask_radius(n)
        outer = max(box_radius(outer_factor * n), inner + 1)
        fn = functools.partial(chain_replicate, cfg.dist, transform, field, good, n, s_n, a, inner, outer)
        outs = run_replicates(fn, cfg, n, deadline)
        outcomes[n] = outs
        for o in outs:
            failures.extend(f"n={n} {msg}" for msg in o.failures())
        ms = cfg.master_seed

        def freq(name: str, values) -> None:
            records.append(summarize(name, n, [float(v) for v in values], ms))

        freq("event_frequency", [o.in_event for o in outs])
        freq("a1_frequency", [o.a1_base and o.a1_lifted for o in outs])
        freq("confinement_frequency", [o.confined for o in outs])
        freq("tau_positive_frequency", [o.tau_sum > 0 for o in outs])
        freq("crossings_ok_frequency", [o.crossings_ok for o in outs])
        records.append(summarize("gap", n, [o.gap_lifted for o in outs], ms))
        records.append(summarize("conditional_gap", n, [o.gap_lifted for o in outs if o.in_event], ms))
        records.append(summarize("tau_sum", n, [o.tau_sum for o in outs], ms))
        records.append(summarize("claim1_gap", n, [o.claim1.lhs for o in outs], ms))
        margins = [o.chain_margin for o in outs if o.in_event]
        records.append(point_record("chain_margin_min", n, min(margins, default=math.nan), len(outs), ms))
        records.append(point_record("analytic_floor", n, analytic_floor(a, kappa, m_n, s_n), len(outs), ms))
    params = {"delta": delta, "kappa": kappa, "a": a, "outer_factor": outer_factor,
              "transform_c": transform_c, "radius_mode": radius_mode}
    return GoalChainSummary(records, outcomes, failures, delta, params)
