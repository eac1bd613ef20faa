"""
Mixture alternatives
====================

Both classes are mixtures of N(0, I) and N(mu, I) with ``mu = 3/sqrt(p)`` in
every coordinate. Class 1 draws the shifted component with probability
``1/2 + pi`` and class 0 with ``1/2 - pi``: ``pi = 0`` is the null and
``pi = 1/2`` a pure shift. The class-conditional covariances differ for
intermediate ``pi``, which a linear classifier cannot exploit any better than a
mean comparison can.

Usage: ``python 05_mixtures.py [replications]``
"""
# %%
import sys

from permdetect import ScenarioConfig, run_scenario
from permdetect.simgen import MixtureSpec
from permdetect.statistics import TABLE_BASIC

REPS = int(sys.argv[1]) if len(sys.argv) > 1 else 100

cfg = ScenarioConfig(name="mixture", signal=MixtureSpec(magnitude=3.0),
                     effects=(0.0, 0.25, 0.5), replications=REPS, permutations=200)
report = run_scenario(cfg, master_seed=9)

print(f"{'statistic':18s}" + "".join(f"  pi={e:<4g}" for e in cfg.effects))
for name in TABLE_BASIC:
    print(f"{name:18s}" + "".join(f"  {report.power(name, e):7.3f}" for e in cfg.effects))
