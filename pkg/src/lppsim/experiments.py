"""The experiment catalog.

Each experiment supplies ``sample(cfg, n, index)``, which computes everything
for one sample from its own derived streams, and ``evaluate(cfg, results)``,
which turns the per-sample results (grouped by ``n``, in index order) into
gates and summaries.  Nothing in ``evaluate`` depends on the order in which
samples finished.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import stats
from .config import ExperimentConfig, event_params
from .equilibrium import (
    CoupledSample,
    ParticleConfig,
    comparison_audit,
    evolve,
    event_locations,
    exit_points,
    l_lambda,
    l_lambda_by_enumeration,
    lambda_pm,
)
from .lattice import LatticeField, lattice_last_passage, lattice_oracle, lattice_row_profile, sample_exp_field
from .lpp import last_passage, lis_oracle, passage_profile
from .rescale import (
    RescaledPath,
    airy_local,
    airy_path,
    delta_path,
    lattice_airy_rescale,
    lattice_airy_target,
    lattice_delta_rescale,
    lattice_delta_target,
)
from .rng import PointSet, Rect, SeedSpec, Substream, derive_stream, sample_axis, sample_ppp

__all__ = ["Gate", "SampleResult", "CATALOG", "Experiment"]


@dataclass
class Gate:
    name: str
    passed: bool
    statistic: float
    threshold: str
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def as_dict(self):
        stat = self.statistic
        if stat is not None and not math.isfinite(stat):
            stat = None
        return {"name": self.name, "passed": bool(self.passed), "statistic": stat,
                "threshold": self.threshold, "status": self.status}


@dataclass
class SampleResult:
    rows: list = field(default_factory=list)  # (u, value, kind)
    flagged: bool = False
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    name: str
    code: int
    group: str  # simulate / verify / oracle
    description: str
    sample: object
    evaluate: object


def _lane(code: int, n: int, k: int = 0) -> int:
    # one block of lanes per (experiment, n); k separates objects in a sample
    return (code * 1_000_000 + n) * 16 + k


def _summary_dict(values) -> dict:
    s = stats.summarize(values)
    return {"count": s.count, "mean": s.mean, "variance": s.variance,
            "std_error_of_mean": s.std_error_of_mean, "min": s.min, "max": s.max}


def _flag_gate(results_by_n) -> Gate:
    total = sum(len(r) for r in results_by_n.values())
    flagged = sum(x.flagged for r in results_by_n.values() for x in r)
    frac = flagged / total if total else 0.0
    return Gate("flagged_fraction", frac <= 1e-3, frac, "<= 0.001")


def _trend_gate(name, counts, direction_label):
    """``counts`` is a list of (k_bad, n_total) in the order the probability
    should not increase; each step may rise by at most 2 s.e."""
    worst = -math.inf
    ok = True
    for (k1, n1), (k2, n2) in zip(counts, counts[1:]):
        diff, se = stats.two_proportion(k2, n2, k1, n1)
        z = diff / se if se > 0 else (0.0 if diff <= 0 else math.inf)
        worst = max(worst, z)
        ok &= diff <= 2 * se
    return Gate(name, ok, worst, f"each step {direction_label}: rise <= 2 s.e.")


# ---------------------------------------------------------------- airy_path

def _airy_sample(cfg: ExperimentConfig, n: int, i: int, code: int) -> SampleResult:
    u = cfg.grid_points()
    x_max = max(float(n), n + 2 * float(u.max()) * n ** (2 / 3))
    bulk = sample_ppp(Rect(0.0, x_max, 0.0, float(n)), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n)))
    prof = passage_profile(bulk, 0.0, float(n), x_max)
    path = airy_path(prof, n, u)
    res = SampleResult()
    res.rows += [(float(a), float(v), "airy") for a, v in zip(u, path.values)]
    L = prof(float(n))
    res.rows.append((0.0, float(L), "passage"))
    res.data["L"] = L
    vals = path.values
    diff = np.abs(vals[None, :] - vals[:, None])
    gap = np.abs(u[None, :] - u[:, None])
    for d in cfg.modulus_delta:
        m = float(diff[gap <= d + 1e-12].max())
        res.rows.append((float(d), m, "modulus"))
        res.data[("modulus", d)] = m
    res.data["path"] = vals
    return res


def _airy_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    u = cfg.grid_points()
    deltas = sorted(cfg.modulus_delta)
    exceed_by_n = {}
    for n, results in results_by_n.items():
        paths = np.array([r.data["path"] for r in results])
        Ls = np.array([r.data["L"] for r in results], dtype=float)
        ratio = Ls.mean() / (2 * n)
        s = {"per_u": {f"{a:.17g}": _summary_dict(paths[:, k]) for k, a in enumerate(u)},
             "lln_ratio": ratio, "L_nn": _summary_dict(Ls)}
        gates.append(Gate(f"lln_n={n}", abs(ratio - 1) <= 0.02, abs(ratio - 1), "<= 0.02"))
        ex = {}
        for d in deltas:
            k = int(sum(r.data[("modulus", d)] > cfg.modulus_threshold for r in results))
            ex[d] = (k, len(results))
            s[f"modulus_exceed_delta={d:g}"] = {"k": k, "n": len(results), "p": k / len(results)}
        if len(deltas) > 1:
            p = [ex[d][0] / ex[d][1] for d in deltas]
            gates.append(Gate(f"modulus_monotone_in_delta_n={n}", all(a <= b for a, b in zip(p, p[1:])),
                              p[0], "P(delta) non-decreasing in delta"))
        exceed_by_n[n] = ex
        summ[f"n={n}"] = s
    ns = sorted(results_by_n)
    if len(ns) > 1:
        d0 = deltas[0]
        gates.append(_trend_gate(f"modulus_trend_in_n_delta={d0:g}", [exceed_by_n[n][d0] for n in ns],
                                 "increasing n"))
    return gates, summ


# ------------------------------------------------------------- local_fluct

def _gate_us(cfg):
    u = cfg.grid_points()
    if cfg.gate_u:
        return [float(u[np.argmin(np.abs(u - g))]) for g in cfg.gate_u]
    return [float(v) for v in u if v != 0]


def _u_break(cfg):
    u = cfg.grid_points()
    pos = u[u > 0]
    if cfg.u_break is not None:
        return float(u[np.argmin(np.abs(u - cfg.u_break))]), float(pos.max())
    return float(pos[np.argmin(np.abs(pos - pos.max() / 2))]), float(pos.max())


def _brownian_gates(cfg, results_by_n, kind, var_u):
    """Gates for a path that should look like standard Brownian motion.

    ``var_u(n, u)`` gives the variance the gate compares against (the snapped
    u for lattice paths).
    """
    gates, summ = [], {}
    u = cfg.grid_points()
    for n, results in results_by_n.items():
        paths = np.array([r.data["path"] for r in results])
        s = {"per_u": {f"{a:.17g}": _summary_dict(paths[:, k]) for k, a in enumerate(u)}}
        for g in _gate_us(cfg):
            k = int(np.argmin(np.abs(u - g)))
            col = paths[:, k]
            target = var_u(n, g)
            mean, var = float(col.mean()), float(col.var(ddof=1))
            gates.append(Gate(f"mean_n={n}_u={g:g}", abs(mean) <= 0.1, abs(mean), "<= 0.1"))
            tol = 0.25 * abs(target) + 0.05
            gates.append(Gate(f"variance_n={n}_u={g:g}", abs(var - abs(target)) <= tol,
                              abs(var - abs(target)), f"<= {tol:.6g}"))
            if target == 0:
                # a lattice u that snaps to the base column: the path is 0 there
                ok = bool(np.all(col == 0))
                gates.append(Gate(f"ks_normal_n={n}_u={g:g}", ok, math.nan, "degenerate: all zero"))
                continue
            ks = stats.ks_one_sample(col, lambda v, sd=math.sqrt(abs(target)): stats.normal_cdf(v, 0.0, sd))
            gates.append(Gate(f"ks_normal_n={n}_u={g:g}", ks.passed(), ks.p_value, ">= 0.001"))
            s[f"ks_u={g:g}"] = {"statistic": ks.statistic, "p_value": ks.p_value, "target_variance": target}
        ub, um = _u_break(cfg)
        grid = np.asarray(u, dtype=float)
        rp = [RescaledPath(kind, grid, p) for p in paths]
        try:
            ind = stats.increment_independence(rp, ub, um)
        except ValueError as exc:
            gates.append(Gate(f"increment_corr_n={n}", False, math.nan, "<= 0.1", status=f"error: {exc}"))
        else:
            gates.append(Gate(f"increment_corr_n={n}", abs(ind.statistic) <= 0.1, abs(ind.statistic), "<= 0.1"))
            s["increment_independence"] = {"corr": ind.statistic, "p_value": ind.p_value,
                                           "u_break": ub, "u_max": um}
        summ[f"n={n}"] = s
    return gates, summ


def _local_sample(cfg, n, i, code):
    u = cfg.grid_points()
    x_max = max(cfg.s * n, cfg.s * n + float(u.max()) * n ** cfg.gamma)
    bulk = sample_ppp(Rect(0.0, x_max, 0.0, float(n)), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n)))
    prof = passage_profile(bulk, 0.0, float(n), x_max)
    path = delta_path(prof, n, cfg.gamma, cfg.s, u)
    res = SampleResult(rows=[(float(a), float(v), "delta") for a, v in zip(u, path.values)])
    res.data["path"] = path.values
    return res


def _local_evaluate(cfg, results_by_n):
    return _brownian_gates(cfg, results_by_n, "delta", lambda n, g: g)


# --------------------------------------------------------------- airy_local

def _airy_local_grid(cfg):
    pts = {0.0}
    for e in cfg.epsilon:
        pts |= {e, -e}
    return np.array(sorted(pts))


def _airy_local_sample(cfg, n, i, code):
    grid = _airy_local_grid(cfg)
    x_max = n + 2 * float(grid.max()) * n ** (2 / 3)
    bulk = sample_ppp(Rect(0.0, x_max, 0.0, float(n)), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n)))
    prof = passage_profile(bulk, 0.0, float(n), x_max)
    path = airy_path(prof, n, grid)
    res = SampleResult()
    for e in cfg.epsilon:
        for v in (-1.0, 0.0, 1.0):
            a = airy_local(path, e, v)
            res.rows.append((v, a, f"airy_local:eps={e:g}"))
            res.data[(e, v)] = a
    return res


def _airy_local_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    for n, results in results_by_n.items():
        s = {}
        for e in cfg.epsilon:
            at1 = np.array([r.data[(e, 1.0)] for r in results])
            atm1 = np.array([r.data[(e, -1.0)] for r in results])
            at0 = np.array([r.data[(e, 0.0)] for r in results])
            var = float(at1.var(ddof=1))
            gates.append(Gate(f"variance_n={n}_eps={e:g}", 1.2 <= var <= 2.8, var, "in [1.2, 2.8]"))
            gates.append(Gate(f"zero_at_origin_n={n}_eps={e:g}", bool(np.all(at0 == 0.0)),
                              float(np.abs(at0).max()), "== 0 exactly"))
            s[f"eps={e:g}"] = {"u=1": _summary_dict(at1), "u=-1": _summary_dict(atm1)}
        summ[f"n={n}"] = s
    return gates, summ


# -------------------------------------------------------------- lattice_airy

def _lattice_airy_sample(cfg, n, i, code):
    u = cfg.grid_points()
    cols = [lattice_airy_target(n, float(a))[0] for a in u]
    lo, hi = min(cols + [n]), max(cols + [n])
    field_ = sample_exp_field(n + 1, hi + 1, SeedSpec(cfg.master_seed, i, Substream.LATTICE, _lane(code, n)))
    row = lattice_row_profile(field_, n, (lo, hi))
    vals = np.array([lattice_airy_rescale(row[c - lo], n, float(a)) for c, a in zip(cols, u)])
    res = SampleResult(rows=[(float(a), float(v), "lattice_airy") for a, v in zip(u, vals)])
    L = float(row[n - lo])
    res.rows.append((0.0, L, "passage"))
    res.data["L"] = L
    res.data["path"] = vals
    return res


def _lattice_airy_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    u = cfg.grid_points()
    for n, results in results_by_n.items():
        paths = np.array([r.data["path"] for r in results])
        Ls = np.array([r.data["L"] for r in results])
        ratio = float(Ls.mean() / (4 * n))
        gates.append(Gate(f"lln_n={n}", abs(ratio - 1) <= 0.02, abs(ratio - 1), "<= 0.02"))
        summ[f"n={n}"] = {
            "per_u": {f"{a:.17g}": _summary_dict(paths[:, k]) for k, a in enumerate(u)},
            "snapped_u": {f"{a:.17g}": lattice_airy_target(n, float(a))[1] for a in u},
            "lln_ratio": ratio, "L_nn": _summary_dict(Ls),
        }
    return gates, summ


# ------------------------------------------------------------- lattice_local

def _lattice_local_sample(cfg, n, i, code):
    u = cfg.grid_points()
    targets = [lattice_delta_target(n, cfg.gamma, cfg.s, float(a)) for a in u]
    base = targets[0][0]
    xs = [t[1] for t in targets]
    lo, hi = min(xs + [base]), max(xs + [base])
    field_ = sample_exp_field(n + 1, hi + 1, SeedSpec(cfg.master_seed, i, Substream.LATTICE, _lane(code, n)))
    row = lattice_row_profile(field_, n, (lo, hi))
    Lb = row[base - lo]
    vals = np.array([lattice_delta_rescale(row[x - lo], Lb, n, cfg.gamma, cfg.s, float(a))
                     for x, a in zip(xs, u)])
    res = SampleResult(rows=[(float(a), float(v), "lattice_delta") for a, v in zip(u, vals)])
    res.data["path"] = vals
    return res


def _lattice_local_evaluate(cfg, results_by_n):
    gates, summ = _brownian_gates(
        cfg, results_by_n, "lattice_delta",
        lambda n, g: lattice_delta_target(n, cfg.gamma, cfg.s, g)[2])
    for n in results_by_n:
        summ[f"n={n}"]["snapped_u"] = {
            f"{a:.17g}": lattice_delta_target(n, cfg.gamma, cfg.s, float(a))[2] for a in cfg.grid_points()}
    return gates, summ


# --------------------------------------------------------- verify_comparison

def _comparison_sample(cfg, n, i, code):
    u = cfg.grid_points()
    xs = n + 2 * u * n ** (2 / 3)
    t = float(n)
    cs = CoupledSample(cfg.master_seed, i, t, float(xs.max()), cfg.lam,
                       window_factor=cfg.window_factor, lane=_lane(code, n),
                       max_doublings=cfg.max_doublings)
    prof = cs.plain_profile()
    plain = [prof(float(x)) for x in xs]
    res = SampleResult()
    for lam in cfg.lam:
        exits, flagged = cs.exits(lam, xs)
        res.flagged |= flagged
        rep = comparison_audit(cs.bulk, cs.boundaries[lam], t, xs, exits=exits, plain=plain)
        res.rows += [(lam, float(rep.violations), "violations"),
                     (lam, float(rep.upper_checked), "upper_checked"),
                     (lam, float(rep.lower_checked), "lower_checked")]
        res.data[lam] = rep
    return res


def _comparison_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    total_v = 0
    for n, results in results_by_n.items():
        s = {}
        for lam in cfg.lam:
            rep = None
            for r in results:
                rep = r.data[lam] if rep is None else rep.merge(r.data[lam])
            total_v += rep.violations
            s[f"lam={lam:g}"] = {"checked_pairs": rep.checked_pairs, "violations": rep.violations,
                                 "upper_checked": rep.upper_checked, "lower_checked": rep.lower_checked}
        summ[f"n={n}"] = s
    gates.append(Gate("violations", total_v == 0, float(total_v), "== 0"))
    gates.append(_flag_gate(results_by_n))
    summ["violations"] = total_v
    return gates, summ


# -------------------------------------------------------- verify_equilibrium

def _equilibrium_window(cfg, lam, t):
    # the right edge is exact for the restricted dynamics; disturbances from
    # the left edge travel right at speed 1/lam^2
    left = 3 * t / lam**2 + 3 * t ** (2 / 3) / lam
    right = 3 * t / lam
    return -left, cfg.central_length / lam + right


def _equilibrium_sample(cfg, n, i, code):
    t = float(n)
    res = SampleResult()
    for k, lam in enumerate(cfg.lam):
        wl, wr = _equilibrium_window(cfg, lam, t)
        c = cfg.central_length / lam
        init = sample_axis((wl, wr), lam, SeedSpec(cfg.master_seed, i, Substream.BOUNDARY, _lane(code, n, k)))
        bulk = sample_ppp(Rect(wl, wr, 0.0, t), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n, k)))
        out = evolve(ParticleConfig(init.locations, (wl, wr), 0.0), bulk, t).positions
        # forward gaps from particles in the central window (0, c]
        start = (out > 0) & (out <= c)
        idx = np.flatnonzero(start)
        idx = idx[idx + 1 < out.size]
        gaps = out[idx + 1] - out[idx]
        res.rows += [(lam, float(g), "spacing") for g in gaps]
        res.data[lam] = gaps
    return res


def _equilibrium_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    for n, results in results_by_n.items():
        s = {}
        for lam in cfg.lam:
            pooled = np.concatenate([r.data[lam] for r in results])
            ks = stats.ks_one_sample(pooled, stats.exp_cdf(lam))
            gates.append(Gate(f"ks_exp_t={n}_lam={lam:g}", ks.passed(), ks.p_value, ">= 0.001"))
            s[f"lam={lam:g}"] = {"pooled": int(pooled.size), "ks_statistic": ks.statistic,
                                 "p_value": ks.p_value, "mean_spacing": float(pooled.mean()),
                                 "window": list(_equilibrium_window(cfg, lam, float(n)))}
        summ[f"t={n}"] = s
    return gates, summ


# ------------------------------------------------------------- verify_sinks

def _sinks_sample(cfg, n, i, code):
    t = float(n)
    res = SampleResult()
    for k, lam in enumerate(cfg.lam):
        cs = CoupledSample(cfg.master_seed, i, t, 0.0, [lam], window_factor=cfg.window_factor,
                           lane=_lane(code, n, k), max_doublings=cfg.max_doublings)
        (ep,), flagged = cs.exits(lam, [0.0])
        res.flagged |= flagged
        res.rows.append((lam, float(ep.max_value), "sink_count"))
        res.data[lam] = ep.max_value
    return res


def _sinks_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    for n, results in results_by_n.items():
        s = {}
        for lam in cfg.lam:
            v = np.array([r.data[lam] for r in results], dtype=float)
            sm = stats.summarize(v)
            z = (sm.mean - n / lam) / sm.std_error_of_mean if sm.std_error_of_mean > 0 else math.inf
            gates.append(Gate(f"sink_mean_t={n}_lam={lam:g}", abs(z) <= 3, abs(z), "|z| <= 3"))
            s[f"lam={lam:g}"] = {**_summary_dict(v), "expected_mean": n / lam}
        summ[f"t={n}"] = s
    gates.append(_flag_gate(results_by_n))
    return gates, summ


# --------------------------------------------------------- verify_exit_tail

def _exit_tail_sample(cfg, n, i, code):
    t = float(n)
    res = SampleResult()
    for k, lam in enumerate(cfg.lam):
        cs = CoupledSample(cfg.master_seed, i, t, float(n), [lam], window_factor=cfg.window_factor,
                           lane=_lane(code, n, k), max_doublings=cfg.max_doublings)
        (ep,), flagged = cs.exits(lam, [float(n)])
        res.flagged |= flagged
        z = ep.z_right / n ** (2 / 3)
        res.rows.append((lam, z, "exit_scaled"))
        res.data[lam] = z
    return res


def _exit_tail_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    rs = list(cfg.r)
    for n, results in results_by_n.items():
        s = {}
        for lam in cfg.lam:
            z = np.array([r.data[lam] for r in results])
            p = [float(np.mean(z > r)) for r in rs]
            mono = all(a >= b for a, b in zip(p, p[1:]))
            gates.append(Gate(f"tail_monotone_n={n}_lam={lam:g}", mono, p[-1] - p[0], "non-increasing in r"))
            ratio = p[-1] / p[0] if p[0] > 0 else math.inf
            gates.append(Gate(f"tail_ratio_n={n}_lam={lam:g}", ratio <= 0.5, ratio,
                              f"P({rs[-1]:g})/P({rs[0]:g}) <= 0.5"))
            try:
                slope, icpt = stats.tail_exponent_fit(rs, p)
            except ValueError:
                slope, icpt = math.nan, math.nan
            gates.append(Gate(f"tail_slope_n={n}_lam={lam:g}", slope <= -2, slope, "<= -2"))
            s[f"lam={lam:g}"] = {"r": rs, "p": p, "slope": slope, "intercept": icpt,
                                 "exit_scaled": _summary_dict(z)}
        summ[f"n={n}"] = s
    gates.append(_flag_gate(results_by_n))
    return gates, summ


# ---------------------------------------------------------- verify_symmetry

def _single_exit(cfg, i, lane, lam, x, t):
    cs = CoupledSample(cfg.master_seed, i, t, x, [lam], window_factor=cfg.window_factor,
                       lane=lane, max_doublings=cfg.max_doublings)
    (ep,), flagged = cs.exits(lam, [x])
    return ep, flagged


def _symmetry_sample(cfg, n, i, code):
    lam = cfg.lam[0]
    h = n ** (2 / 3)
    t = float(n)
    res = SampleResult()
    flags = []
    # translation: Z[x+h]_t - h has the law of Z[x]_t
    a, f1 = _single_exit(cfg, i, _lane(code, n, 0), lam, t, t)
    b, f2 = _single_exit(cfg, i, _lane(code, n, 1), lam, t + h, t)
    # scaling: Z_lam[x]_t has the law of Z_1[lam x]_{t/lam} / lam
    c, f3 = _single_exit(cfg, i, _lane(code, n, 2), 1.0, lam * t, t / lam)
    # diagonal: P(Z'_lam[x]_s < 0) = P(Z_{1/lam}[s]_x > 0), at s = lam^2 x
    s_ = lam * lam * t
    d, f4 = _single_exit(cfg, i, _lane(code, n, 3), lam, t, s_)
    e, f5 = _single_exit(cfg, i, _lane(code, n, 4), 1.0 / lam, s_, t)
    flags += [f1, f2, f3, f4, f5]
    res.flagged = any(flags)
    vals = {"translate_base": a.z_right, "translate_shift": b.z_right - h,
            "scale_unit": c.z_right / lam,
            "diag_left_neg": float(d.z_left < 0), "diag_right_pos": float(e.z_right > 0)}
    res.rows += [(lam, float(v), k) for k, v in vals.items()]
    res.data.update(vals)
    return res


def _symmetry_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    for n, results in results_by_n.items():
        col = {k: np.array([r.data[k] for r in results]) for k in results[0].data}
        t1 = stats.ks_two_sample(col["translate_base"], col["translate_shift"])
        t2 = stats.ks_two_sample(col["translate_base"], col["scale_unit"])
        gates.append(Gate(f"translation_ks_n={n}", t1.passed(), t1.p_value, ">= 0.001"))
        gates.append(Gate(f"scaling_ks_n={n}", t2.passed(), t2.p_value, ">= 0.001"))
        m = len(results)
        k1, k2 = int(col["diag_left_neg"].sum()), int(col["diag_right_pos"].sum())
        diff, se = stats.two_proportion(k1, m, k2, m)
        z = abs(diff) / se if se > 0 else (0.0 if diff == 0 else math.inf)
        gates.append(Gate(f"diagonal_n={n}", z <= 3, z, "|diff| <= 3 s.e."))
        summ[f"n={n}"] = {"translation": {"statistic": t1.statistic, "p_value": t1.p_value},
                          "scaling": {"statistic": t2.statistic, "p_value": t2.p_value},
                          "diagonal": {"p_left_neg": k1 / m, "p_right_pos": k2 / m, "diff": diff, "se": se}}
    gates.append(_flag_gate(results_by_n))
    return gates, summ


# ------------------------------------------------------------- verify_event

def _event_key(p):
    if p.kind == "sec3":
        return p.delta
    if p.kind == "sec4":
        return p.gamma_prime
    return p.epsilon


def _event_sample(cfg, n, i, code):
    res = SampleResult()
    for k, p in enumerate(q for q in event_params(cfg) if q.n == n):
        lp, lm = lambda_pm(p)
        x1, x2 = event_locations(p)
        cs = CoupledSample(cfg.master_seed, i, float(n), x2, [lp, lm], window_factor=cfg.window_factor,
                           lane=_lane(code, n, k), max_doublings=cfg.max_doublings)
        (ep,), f1 = cs.exits(lp, [x1])
        (em,), f2 = cs.exits(lm, [x2])
        res.flagged |= f1 or f2
        ok = ep.z_left >= 0 and em.z_right <= 0
        key = _event_key(p)
        res.rows.append((key, float(ok), "event"))
        res.data[key] = ok
    return res


def _event_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    table = {}
    for p in event_params(cfg):
        results = results_by_n[p.n]
        key = _event_key(p)
        bad = int(sum(not r.data[key] for r in results))
        m = len(results)
        table[(p.n, key)] = (bad, m)
        pc = bad / m
        summ[f"n={p.n}_param={key:g}"] = {
            "p_complement": pc, "se": math.sqrt(pc * (1 - pc) / m), "k": bad, "samples": m,
            "lambda_pm": list(lambda_pm(p)), "locations": list(event_locations(p))}
    ns = sorted({k[0] for k in table})
    keys = sorted({k[1] for k in table}, reverse=True)
    if cfg.event_kind == "sec4" and len(ns) > 1:
        for key in keys:
            gates.append(_trend_gate(f"event_trend_in_n_param={key:g}", [table[(n, key)] for n in ns],
                                     "increasing n"))
    if cfg.event_kind in ("sec3", "sec5") and len(keys) > 1:
        for n in ns:
            gates.append(_trend_gate(f"event_trend_in_param_n={n}", [table[(n, key)] for key in keys],
                                     "decreasing parameter"))
    gates.append(_flag_gate(results_by_n))
    return gates, summ


# ------------------------------------------------------------- oracle_suite

def _oracle_sample(cfg, n, i, code):
    """Four exact cross-checks on small random instances; ``n`` caps the
    number of bulk points in the LIS family."""
    rng = derive_stream(SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n)))
    unit = Rect(0.0, 1.0, 0.0, 1.0)
    res = SampleResult()
    # LIS: ten configurations per sample
    lis_ok = 0
    for _ in range(10):
        k = int(rng.integers(0, n + 1))
        x, t = 1.0 - rng.random(k), 1.0 - rng.random(k)
        if np.unique(x).size < k or np.unique(t).size < k:
            continue  # ties have probability zero; skip rather than perturb
        ps = PointSet(x, t, unit, 1.0)
        p = (float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.3)))
        q = (float(rng.uniform(0.7, 1)), float(rng.uniform(0.7, 1)))
        lis_ok += last_passage(ps, p, q) == lis_oracle(ps, p, q)
    res.rows.append((0.0, float(lis_ok), "lis_match"))
    res.data["lis"] = (lis_ok, 10)
    # lattice DP against path enumeration
    rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
    if rows == cols == 1:
        cols = 2
    f = LatticeField(rng.exponential(size=(rows, cols)))
    end = (cols - 1, rows - 1)
    ok = math.isclose(lattice_last_passage(f, (0, 0), end), lattice_oracle(f, (0, 0), end),
                      rel_tol=1e-12, abs_tol=1e-12)
    res.rows.append((0.0, float(ok), "lattice_match"))
    res.data["lattice"] = (int(ok), 1)
    # particle dynamics from a wall against the passage profile
    ps = sample_ppp(Rect(0.0, 10.0, 0.0, 10.0), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n, 1)))
    out = evolve(ParticleConfig(np.empty(0), (0.0, 10.0), 0.0), ps, 10.0)
    prof = passage_profile(ps, 0.0, 10.0, 10.0)
    probe = np.concatenate([ps.x, np.linspace(0.0, 10.0, 11)])
    ok = all(out.count(0.0, float(x)) == prof(float(x)) for x in probe)
    res.rows.append((0.0, float(ok), "evolve_match"))
    res.data["evolve"] = (int(ok), 1)
    # stationary value from profiles against per-z enumeration
    lam = float(rng.uniform(0.5, 2.0))
    bulk = sample_ppp(Rect(-3.0, 3.0, 0.0, 3.0), 1.0, SeedSpec(cfg.master_seed, i, Substream.BULK, _lane(code, n, 2)))
    b = sample_axis((-3.0, 3.0), lam, SeedSpec(cfg.master_seed, i, Substream.BOUNDARY, _lane(code, n, 2)))
    target = (float(rng.uniform(0, 3)), float(rng.uniform(0.1, 3)))
    ok = l_lambda(bulk, b, target) == l_lambda_by_enumeration(bulk, b, target)
    ok = ok and exit_points(bulk, b, target).max_value == l_lambda(bulk, b, target)
    res.rows.append((lam, float(ok), "l_lambda_match"))
    res.data["l_lambda"] = (int(ok), 1)
    return res


def _oracle_evaluate(cfg, results_by_n):
    gates, summ = [], {}
    for fam in ("lis", "lattice", "evolve", "l_lambda"):
        hit = sum(r.data[fam][0] for rs in results_by_n.values() for r in rs)
        tot = sum(r.data[fam][1] for rs in results_by_n.values() for r in rs)
        gates.append(Gate(f"{fam}_mismatches", hit == tot, float(tot - hit), "== 0"))
        summ[fam] = {"checked": tot, "matched": hit}
    return gates, summ


def _bind(fn, code):
    return lambda cfg, n, i: fn(cfg, n, i, code)


_SPECS = [
    ("airy_path", "simulate", _airy_sample, _airy_evaluate,
     "A_n(u): centred, scaled passage profile around [n]_n; law of large numbers and modulus of continuity"),
    ("local_fluct", "simulate", _local_sample, _local_evaluate,
     "Delta_n(u): increments of L[sn + u n^gamma]_n on scale n^(gamma/2), compared with Brownian motion"),
    ("airy_local", "simulate", _airy_local_sample, _airy_local_evaluate,
     "A^eps_n(u) = eps^(-1/2)(A_n(eps u) - A_n(0)); variance near 2 at u = 1"),
    ("lattice_airy", "simulate", _lattice_airy_sample, _lattice_airy_evaluate,
     "A^l_n(u) for exponential lattice weights; centring 4n"),
    ("lattice_local", "simulate", _lattice_local_sample, _lattice_local_evaluate,
     "Delta^l_n(u) for exponential lattice weights, mu = sigma = s^(-1/2)(1 + s^(1/2))"),
    ("verify_comparison", "verify", _comparison_sample, _comparison_evaluate,
     "local comparison between L and L_lambda given the sign of the exit points (pathwise)"),
    ("verify_equilibrium", "verify", _equilibrium_sample, _equilibrium_evaluate,
     "Poisson(lambda) particle configurations are invariant for the Hammersley dynamics (n = time horizon)"),
    ("verify_exit_tail", "verify", _exit_tail_sample, _exit_tail_evaluate,
     "tail of the exit point Z_1[n]_n on scale n^(2/3)"),
    ("verify_symmetry", "verify", _symmetry_sample, _symmetry_evaluate,
     "translation, scaling and diagonal-reflection identities for exit points"),
    ("verify_event", "verify", _event_sample, _event_evaluate,
     "probability of the comparison events E_n (sec3: delta, sec4: gamma', sec5: epsilon)"),
    ("verify_sinks", "verify", _sinks_sample, _sinks_evaluate,
     "L_lambda[0]_t is Poisson(t/lambda) (n = time horizon)"),
    ("oracle_suite", "oracle", _oracle_sample, _oracle_evaluate,
     "patience sorting, lattice DP, particle dynamics and L_lambda against brute force"),
]

CATALOG = {
    name: Experiment(name, code, group, desc, _bind(sample, code), evaluate)
    for code, (name, group, sample, evaluate, desc) in enumerate(_SPECS, 1)
}
