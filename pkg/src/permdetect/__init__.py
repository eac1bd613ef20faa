"""Two-sample multivariate signal detection by permutation tests.

Location statistics (Hotelling-type quadratic forms) and classifier-accuracy
statistics share one permutation engine; :mod:`permdetect.harness` estimates
their power on simulated scenarios from :mod:`permdetect.simgen`.
"""

__version__ = "0.1.0"

from .accuracy import (
    AccuracyEstimate,
    BootstrapPlan,
    FoldAssignment,
    bloo_accuracy,
    make_bootstrap_plan,
    make_folds,
    resub_accuracy,
    vfold_accuracy,
)
from .classifiers import ClassifierSpec, LinearModel, fit, predict, predict_many
from .harness import PowerReport, compare_powers, run_scenario
from .location import LocationStatSpec, goeman_equivalence_check, location_statistic
from .model import LabeledDataset, RngStream, TestDecision, derive_stream, validate_dataset
from .permutation import (
    PermutationReport,
    RefoldPolicy,
    decide,
    permutation_test,
    permutation_test_many,
)
from .simgen import (
    CovarianceSpec,
    MixtureSpec,
    ScenarioConfig,
    SignalSpec,
    draw_dataset,
    make_covariance,
    make_signal,
    prepare,
)
from .statistics import StatisticSpec, catalog, statistic
from .stats_kernel import (
    group_summary,
    pooled_covariance,
    principal_axes,
    shrink_covariance,
    solve_spd,
)
