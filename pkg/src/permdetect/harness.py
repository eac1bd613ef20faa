"""Monte Carlo power estimation over replications, permutations and statistics.

Replication ``i`` of a scenario run with master seed ``s`` uses stream
``(s, (i,))``: its child ``0`` draws the noise, child ``1`` drives the permutation
test (see :mod:`permdetect.permutation`) and child ``(2, key)`` the tie-breaking
variate of each statistic. Effect levels reuse the same replication streams, so
rows at different effects share noise draws and permutations (common random
numbers). Results do not depend on the number of worker processes.
"""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import MissingCell, ScenarioFailure
from .model import derive_stream
from .permutation import RefoldPolicy, decide, permutation_test_many
from .simgen import ScenarioConfig, prepare
from .statistics import StatisticSpec, statistic

CSV_COLUMNS = ("scenario", "statistic", "effect", "replications", "rejections", "power", "mc_se", "seed")


@dataclass(frozen=True)
class PowerRow:
    scenario: str
    statistic: str
    effect: float
    replications: int
    rejections: int
    seed: int
    mean_runtime: float = field(default=0.0, compare=False)

    @property
    def power(self) -> float:
        return self.rejections / self.replications if self.replications else 0.0

    @property
    def mc_se(self) -> float:
        if not self.replications:
            return 0.0
        pw = self.power
        return math.sqrt(pw * (1.0 - pw) / self.replications)

    def csv_fields(self):
        return (self.scenario, self.statistic, repr(self.effect), self.replications,
                self.rejections, repr(self.power), repr(self.mc_se), self.seed)


@dataclass
class PowerReport:
    rows: list = field(default_factory=list)
    # (statistic, effect) -> per-replication arrays, kept for paired analyses
    decisions: dict = field(default_factory=dict, repr=False)
    p_values: dict = field(default_factory=dict, repr=False)

    def row(self, statistic: str, effect: float) -> PowerRow:
        for r in self.rows:
            if r.statistic == statistic and r.effect == float(effect):
                return r
        raise MissingCell(f"no row for statistic {statistic!r} at effect {effect}")

    def power(self, statistic: str, effect: float) -> float:
        return self.row(statistic, effect).power

    def extend(self, other: "PowerReport"):
        self.rows.extend(other.rows)
        self.decisions.update(other.decisions)
        self.p_values.update(other.p_values)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text


def build_statistics(cfg: ScenarioConfig, sigma) -> list[StatisticSpec]:
    return [statistic(nm, sigma=sigma, V=cfg.V, balanced=cfg.balanced, hdrda_mix=cfg.hdrda_mix)
            for nm in cfg.statistics]


def _run_replications(cfg: ScenarioConfig, seed: int, reps: Sequence[int]):
    """Decisions, p-values and runtimes for a block of replications, all effects."""
    prepared = [prepare(cfg, e) for e in cfg.effects]
    stats_by_effect = [build_statistics(cfg, pr.sigma) for pr in prepared]
    policy = RefoldPolicy.REFOLD if cfg.refold else RefoldPolicy.FIXED
    n_eff, n_stat = len(prepared), len(cfg.statistics)
    rejected = np.zeros((n_eff, n_stat, len(reps)), dtype=bool)
    pvals = np.zeros((n_eff, n_stat, len(reps)))
    runtime = np.zeros((n_eff, len(reps)))
    for j, rep in enumerate(reps):
        rs = derive_stream(seed, (rep,))
        for e, (pr, stats) in enumerate(zip(prepared, stats_by_effect)):
            t0 = time.perf_counter()
            try:
                ds = pr.draw(rs.child(0))
                reports = permutation_test_many(ds, stats, cfg.permutations, policy, rs.child(1))
            except Exception as exc:
                raise ScenarioFailure(cfg.name, rep, exc) from exc
            for k, st in enumerate(stats):
                u = rs.child(2, st.key).generator().random() if cfg.tie_break else 0.0
                dec = decide(reports[st.name], cfg.alpha, cfg.tie_break, u, cfg.pvalue_mode)
                rejected[e, k, j] = dec.rejected
                pvals[e, k, j] = dec.p_value
            runtime[e, j] = time.perf_counter() - t0
    return rejected, pvals, runtime


def _chunks(n, workers):
    size = max(1, math.ceil(n / (workers * 4)))
    return [list(range(i, min(n, i + size))) for i in range(0, n, size)]


def run_scenario(cfg: ScenarioConfig, master_seed: int = 0, workers: int = 1,
                 progress=None) -> PowerReport:
    """Estimate the rejection rate of every statistic at every effect level.

    ``workers > 1`` distributes blocks of replications over processes; blocks are
    reduced in replication order, so the report is identical for any worker count.
    ``progress``, if given, is called with the number of finished replications.
    """
    R = cfg.replications
    report = PowerReport()
    if R == 0:
        return report
    blocks = _chunks(R, max(1, workers))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(_run_replications, cfg, master_seed, b) for b in blocks]
            parts = []
            for f in futures:
                parts.append(f.result())
                if progress:
                    progress(sum(len(b) for b in blocks[:len(parts)]))
    else:
        parts = []
        for b in blocks:
            parts.append(_run_replications(cfg, master_seed, b))
            if progress:
                progress(b[-1] + 1)
    rejected = np.concatenate([p[0] for p in parts], axis=2)
    pvals = np.concatenate([p[1] for p in parts], axis=2)
    runtime = np.concatenate([p[2] for p in parts], axis=1)
    for e, eff in enumerate(cfg.effects):
        for k, name in enumerate(cfg.statistics):
            report.rows.append(PowerRow(cfg.name, name, eff, R, int(rejected[e, k].sum()),
                                        master_seed, float(runtime[e].mean())))
            report.decisions[(name, eff)] = rejected[e, k]
            report.p_values[(name, eff)] = pvals[e, k]
    return report


def compare_powers(report: PowerReport, stat_a: str, stat_b: str, effect: float):
    """Power difference ``a - b`` and its z-score.

    The standard error treats the two estimates as independent,
    ``sqrt(pa(1-pa)/Ra + pb(1-pb)/Rb)``. With shared replications the estimates are
    positively correlated, so this overstates the error of the difference.
    """
    a = report.row(stat_a, effect)
    b = report.row(stat_b, effect)
    diff = a.power - b.power
    se = math.sqrt(a.mc_se ** 2 + b.mc_se ** 2)
    if se == 0.0:
        z = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    else:
        z = diff / se
    return diff, z


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)
