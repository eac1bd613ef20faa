"""Simulated two-class scenarios.

Observations follow a shift model ``x = mu * y + eta`` with Gaussian or
multivariate-t noise of scale matrix ``Sigma``, or a two-component Gaussian
mixture whose class-specific weights move apart as the effect ``pi`` grows from 0
(no difference) to 1/2 (pure shift). Classes are always balanced, ``n/2`` each.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import BadRho, ConfigError, SingularSigma
from .model import LabeledDataset, RngStream, as_stream
from .stats_kernel import principal_axes
from .statistics import TABLE_BASIC

COVARIANCE_KINDS = ("identity", "ar1", "brownian", "random_corr", "hetero_diag")


@dataclass(frozen=True)
class CovarianceSpec:
    kind: str = "identity"
    p: int = 23
    rho: float = 0.6
    seed: int = 0  # random_corr only

    def __post_init__(self):
        if self.kind not in COVARIANCE_KINDS:
            raise ConfigError(f"unknown covariance kind {self.kind!r}; choose from {COVARIANCE_KINDS}")
        if self.p < 1:
            raise ConfigError("p must be positive")


def make_covariance(spec: CovarianceSpec) -> np.ndarray:
    p = spec.p
    if spec.kind == "identity":
        return np.eye(p)
    if spec.kind == "ar1":
        if not -1.0 < spec.rho < 1.0:
            raise BadRho(f"rho must lie in (-1, 1), got {spec.rho}")
        k = np.arange(p)
        return spec.rho ** np.abs(k[:, None] - k[None, :]).astype(float)
    if spec.kind == "brownian":
        k = np.arange(1, p + 1, dtype=float)
        R = np.minimum(k[:, None], k[None, :])
        return _to_correlation(R)
    if spec.kind == "random_corr":
        A = RngStream(spec.seed, (0,)).generator().standard_normal((p, p))
        return _to_correlation(A.T @ A)
    return np.diag(np.arange(1, p + 1, dtype=float))


def _to_correlation(R):
    d = np.sqrt(np.diag(R))
    C = R / np.outer(d, d)
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 1.0)
    return C


@dataclass(frozen=True)
class SignalSpec:
    """Shift vector ``mu``.

    ``direction='constant'`` points along the all-ones vector; ``'pc'`` along an
    eigenvector of Sigma chosen by ``pc`` (``'highest'``, ``'lowest'`` or a 1-based
    rank, 1 = largest eigenvalue). The length is set so that
    ``|mu|^2 = c^2 p`` in the chosen norm (``mahalanobis`` uses ``Sigma^-1``).
    """

    direction: str = "constant"
    pc: Union[str, int] = "highest"
    c: float = 0.0
    norm_mode: str = "mahalanobis"

    def __post_init__(self):
        if self.direction not in ("constant", "pc"):
            raise ConfigError(f"unknown signal direction {self.direction!r}")
        if self.norm_mode not in ("mahalanobis", "euclidean"):
            raise ConfigError(f"unknown norm mode {self.norm_mode!r}")
        if self.c < 0:
            raise ConfigError("signal strength c must be non-negative")


@dataclass(frozen=True)
class MixtureSpec:
    """Mixture alternative: ``mu_1 = 0``, ``mu_2 = magnitude / sqrt(p)`` in every coordinate.

    Class 1 draws component 2 with probability ``1/2 + pi``, class 0 with ``1/2 - pi``.
    """

    pi: float = 0.0
    magnitude: float = 3.0

    def __post_init__(self):
        if not 0.0 <= self.pi <= 0.5:
            raise ConfigError("mixture weight pi must lie in [0, 1/2]")


def _pc_index(pc, p):
    if pc == "highest":
        return 0
    if pc == "lowest":
        return p - 1
    j = int(pc)
    if not 1 <= j <= p:
        raise ConfigError(f"pc index must be in 1..{p}, got {pc}")
    return j - 1


def make_signal(spec: SignalSpec, sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=np.float64)
    p = sigma.shape[0]
    if spec.c == 0:
        return np.zeros(p)
    target = spec.c * spec.c * p
    if spec.direction == "pc":
        axes = principal_axes(sigma)
        j = _pc_index(spec.pc, p)
        v, lam = axes.vectors[:, j], axes.values[j]
        if spec.norm_mode == "euclidean":
            return np.sqrt(target) * v
        if lam <= 1e-12 * axes.values[0]:
            raise SingularSigma("chosen principal axis has zero variance")
        return np.sqrt(target * lam) * v
    e = np.ones(p)
    if spec.norm_mode == "euclidean":
        return spec.c * e
    try:
        q = float(e @ np.linalg.solve(sigma, e))
    except np.linalg.LinAlgError:
        raise SingularSigma("Sigma is singular") from None
    if not q > 0:
        raise SingularSigma("Sigma is not positive definite")
    return np.sqrt(target / q) * e


Signal = Union[SignalSpec, MixtureSpec]


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario and the grid of effects to run it at.

    ``effects`` replaces ``signal.c`` (shift signals) or ``signal.pi`` (mixtures).
    """

    name: str = "basic"
    n: int = 40
    p: int = 23
    noise: str = "gaussian"
    df: float = 3.0
    covariance: CovarianceSpec = field(default_factory=CovarianceSpec)
    signal: Signal = field(default_factory=SignalSpec)
    effects: tuple = (0.0, 0.25, 0.5)
    replications: int = 1000
    permutations: int = 300
    statistics: tuple = TABLE_BASIC
    alpha: float = 0.05
    V: int = 4
    balanced: bool = True
    refold: bool = True
    pvalue_mode: str = "paper"
    tie_break: bool = False
    hdrda_mix: float = 0.5

    def __post_init__(self):
        if self.n % 2 or self.n < 4:
            raise ConfigError(f"n must be even and at least 4, got {self.n}")
        if self.covariance.p != self.p:
            object.__setattr__(self, "covariance", replace(self.covariance, p=self.p))
        if self.noise not in ("gaussian", "student_t"):
            raise ConfigError(f"unknown noise {self.noise!r}")
        if self.noise == "student_t" and not self.df > 0:
            raise ConfigError("df must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.replications < 0 or self.permutations < 1:
            raise ConfigError("replications must be >= 0 and permutations >= 1")
        if self.pvalue_mode not in ("paper", "add_one"):
            raise ConfigError("pvalue_mode must be 'paper' or 'add_one'")
        object.__setattr__(self, "effects", tuple(float(e) for e in self.effects))
        object.__setattr__(self, "statistics", tuple(self.statistics))
        for e in self.effects:
            self.signal_at(e)

    def signal_at(self, effect: float) -> Signal:
        if isinstance(self.signal, MixtureSpec):
            return replace(self.signal, pi=effect)
        return replace(self.signal, c=effect)


@dataclass(frozen=True, eq=False)
class PreparedScenario:
    """Sigma, its Cholesky factor and the mean shift for one effect level."""

    cfg: ScenarioConfig
    effect: float
    sigma: np.ndarray
    chol: np.ndarray
    mu: np.ndarray
    mixture: Optional[MixtureSpec] = None

    def draw(self, rng) -> LabeledDataset:
        gen = as_stream(rng).generator()
        cfg = self.cfg
        n0 = cfg.n // 2
        y = np.zeros(cfg.n, dtype=np.int8)
        y[n0:] = 1
        eta = gen.standard_normal((cfg.n, cfg.p)) @ self.chol.T
        if cfg.noise == "student_t":
            w = gen.chisquare(cfg.df, size=cfg.n)
            eta = eta / np.sqrt(w / cfg.df)[:, None]
        if self.mixture is None:
            X = eta + np.outer(y, self.mu)
        else:
            prob2 = np.where(y == 1, 0.5 + self.mixture.pi, 0.5 - self.mixture.pi)
            comp2 = gen.random(cfg.n) < prob2
            X = eta + np.outer(comp2, self.mu)
        X.flags.writeable = False
        y.flags.writeable = False
        return LabeledDataset(X, y)


def prepare(cfg: ScenarioConfig, effect: float) -> PreparedScenario:
    sigma = make_covariance(cfg.covariance)
    chol = np.linalg.cholesky(sigma)
    sig = cfg.signal_at(effect)
    if isinstance(sig, MixtureSpec):
        mu = np.full(cfg.p, sig.magnitude / np.sqrt(cfg.p))
        return PreparedScenario(cfg, effect, sigma, chol, mu, sig)
    return PreparedScenario(cfg, effect, sigma, chol, make_signal(sig, sigma))


def draw_dataset(cfg: ScenarioConfig, rng, effect: Optional[float] = None) -> LabeledDataset:
    """Draw one dataset; ``effect`` defaults to the signal's own ``c`` / ``pi``."""
    if effect is None:
        effect = cfg.signal.pi if isinstance(cfg.signal, MixtureSpec) else cfg.signal.c
    return prepare(cfg, effect).draw(rng)
