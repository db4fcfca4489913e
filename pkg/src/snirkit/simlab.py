"""
Synthetic data from the influence model and Monte Carlo study harnesses.

Given a graph, an influential set ``S1`` with coefficients ``rho`` and an
intercept ``mu`` on the influential rows, responses are generated in two
blocks.  The influential block solves ``(I - A[S1, S1] diag(rho)) Y[S1] =
mu + e[S1]`` and every other node then receives
``Y[S0] = A[S0, S1] diag(rho) Y[S1] + e[S0]``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .baselines import top_by_score
from .errors import InvalidConfigError, SnirError, UnstableTruthError
from .ext import ar_covariance, profile_covariates
from .netcore import DirectedGraph, GeneratorSpec, generate
from .snir import FitResult, ScreenConfig, cmle, fit, screen_candidates

__all__ = [
    "TruthSpec",
    "TruthPlan",
    "StudyMetrics",
    "StudyResult",
    "SettingResult",
    "SweepResult",
    "spectral_radius",
    "gen_snir_data",
    "pick_truth",
    "draw_coefficients",
    "draw_truth",
    "metrics",
    "run_study",
    "surrogate_responses",
    "setting_truth",
    "run_setting_study",
    "snr_sweep",
    "preset",
    "rep_rng",
]

MAX_RETRIES = 5


@dataclass
class TruthSpec:
    """Ground truth for one synthetic response vector.

    ``sigma`` is a scalar noise sd or a per-node vector.  When ``y_s1`` is
    given the influential responses are held at those values instead of being
    generated (the real-data style designs).
    """

    s1: np.ndarray
    rho: np.ndarray
    mu: float = 5.0
    sigma: float | np.ndarray = 1.0
    beta: np.ndarray | None = None
    y_s1: np.ndarray | None = None

    def __post_init__(self):
        self.s1 = np.asarray(self.s1, dtype=np.int64)
        self.rho = np.asarray(self.rho, dtype=float)
        if self.s1.shape != self.rho.shape:
            raise InvalidConfigError("s1 and rho must align")
        if np.unique(self.s1).size != self.s1.size:
            raise InvalidConfigError("duplicate influential nodes")

    def rho_full(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[self.s1] = self.rho
        return out


def spectral_radius(g: DirectedGraph, s1, rho) -> float:
    s1 = np.asarray(s1, dtype=np.int64)
    if s1.size == 0:
        return 0.0
    m = g.block(s1, s1).toarray() * np.asarray(rho)[None, :]
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def gen_snir_data(g: DirectedGraph, truth: TruthSpec, seed=None, z=None) -> np.ndarray:
    """Draw a response vector from the influence model.

    Parameters
    ----------
    z : ndarray, shape (N, p), optional
        Exogenous covariates entering as ``z @ truth.beta``.

    Raises
    ------
    UnstableTruthError
        If the influential block is not invertible through a convergent
        series (spectral radius of ``A[S1, S1] diag(rho)`` at least 1).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = g.n
    s1, rho = truth.s1, truth.rho
    sd = np.broadcast_to(np.asarray(truth.sigma, dtype=float), (n,))
    eps = rng.standard_normal(n) * sd
    shift = np.zeros(n)
    if z is not None:
        beta = truth.beta if truth.beta is not None else np.ones(z.shape[1])
        shift = np.asarray(z, dtype=float) @ np.asarray(beta, dtype=float)
    y = np.zeros(n)
    if s1.size:
        if truth.y_s1 is not None:
            y[s1] = truth.y_s1
        else:
            if spectral_radius(g, s1, rho) >= 1.0:
                raise UnstableTruthError("spectral radius of the influential block is >= 1")
            h = np.eye(s1.size) - g.block(s1, s1).toarray() * rho[None, :]
            y[s1] = np.linalg.solve(h, truth.mu + shift[s1] + eps[s1])
    mask = np.ones(n, dtype=bool)
    mask[s1] = False
    rest = np.flatnonzero(mask)
    y[rest] = eps[rest] + shift[rest]
    if s1.size:
        y[rest] += g.block(rest, s1) @ (rho * y[s1])
    return y


def pick_truth(g: DirectedGraph, mode: str, size: int, seed=None, y_real=None,
               screen: ScreenConfig | None = None) -> np.ndarray:
    """Choose the influential set (sorted node indices).

    ``mode`` is ``"random_m"`` (uniform from the candidate set),
    ``"top_response"`` (largest ``y_real``) or ``"top_indegree"``.
    """
    mode = mode.lower()
    if mode == "random_m":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        m = screen_candidates(g, screen)
        if size > m.size:
            raise InvalidConfigError(f"cannot draw {size} nodes from {m.size} candidates")
        return np.sort(rng.choice(m, size=size, replace=False))
    if mode == "top_response":
        if y_real is None:
            raise InvalidConfigError("top_response needs y_real")
        return np.sort(top_by_score(y_real, size))
    if mode == "top_indegree":
        return np.sort(top_by_score(g.in_degree, size))
    raise InvalidConfigError(f"unknown truth mode {mode!r}")


def draw_coefficients(size: int, rng, scheme: str = "uniform") -> np.ndarray:
    """Influence coefficients.

    ``"uniform"``: all from U(0.5, 1).  ``"mixed"``: two from U(0.25, 0.5) and
    the rest from U(-1, -0.5), placed in random order.
    """
    if scheme == "uniform":
        return rng.uniform(0.5, 1.0, size)
    if scheme == "mixed":
        k = min(2, size)
        rho = np.concatenate([rng.uniform(0.25, 0.5, k), rng.uniform(-1.0, -0.5, size - k)])
        return rng.permutation(rho)
    raise InvalidConfigError(f"unknown coefficient scheme {scheme!r}")


@dataclass
class TruthPlan:
    """How each replication draws its truth and noise."""

    size: int = 10
    mode: str = "random_m"
    coef: str = "uniform"
    mu: float = 5.0
    sigma: float = 1.0
    hetero: tuple[float, float] | None = None
    covariates: int = 0
    beta: tuple[float, ...] | None = None
    ar: float = 0.5
    screen: ScreenConfig = field(default_factory=ScreenConfig)
    K: int | None = None


def draw_truth(g: DirectedGraph, plan: TruthPlan, rng, y_real=None, tries: int = 100) -> TruthSpec:
    """Influential set and coefficients with a stable influential block."""
    s1 = None
    for _ in range(tries):
        if s1 is None or plan.mode == "random_m":
            s1 = pick_truth(g, plan.mode, plan.size, rng, y_real=y_real, screen=plan.screen)
        rho = draw_coefficients(plan.size, rng, plan.coef)
        if spectral_radius(g, s1, rho) < 1.0:
            sigma = plan.sigma if plan.hetero is None else rng.uniform(*plan.hetero, g.n)
            beta = None
            if plan.covariates:
                beta = np.asarray(plan.beta if plan.beta is not None else np.ones(plan.covariates))
            return TruthSpec(s1, rho, plan.mu, sigma, beta)
    raise UnstableTruthError("could not draw a stable truth")


@dataclass
class StudyMetrics:
    """Recovery metrics; averages when produced by a study."""

    tpr: float
    fpr: float
    cfp: float
    err: float

    @classmethod
    def mean(cls, items) -> "StudyMetrics":
        a = np.array([[m.tpr, m.fpr, m.cfp, m.err] for m in items])
        return cls(*map(float, a.mean(axis=0)))

    def as_tuple(self):
        return self.tpr, self.fpr, self.cfp, self.err


def metrics(s1_true, s_hat, rho_true, rho_hat, m_size: int) -> StudyMetrics:
    """TPR, FPR, exact-recovery flag and coefficient error for one fit.

    ``rho_true``/``rho_hat`` align with ``s1_true``/``s_hat``; the error is
    the Euclidean norm of the difference of their zero-padded embeddings.
    """
    s1 = np.asarray(s1_true, dtype=np.int64)
    sh = np.asarray(s_hat, dtype=np.int64)
    hit = np.intersect1d(s1, sh).size
    tpr = hit / s1.size if s1.size else 1.0
    neg = m_size - s1.size
    fpr = (sh.size - hit) / neg if neg > 0 else 0.0
    cfp = float(set(s1.tolist()) == set(sh.tolist()))
    idx = np.union1d(s1, sh)
    a = np.zeros(idx.size)
    b = np.zeros(idx.size)
    a[np.searchsorted(idx, s1)] = rho_true
    b[np.searchsorted(idx, sh)] = rho_hat
    return StudyMetrics(tpr, fpr, cfp, float(np.linalg.norm(a - b)))


@dataclass
class StudyResult:
    metrics: StudyMetrics
    per_rep: list[StudyMetrics]
    secs_per_fit: float
    failures: int
    generator: GeneratorSpec | None = None
    plan: TruthPlan | None = None

    def row(self, setting: str = "") -> dict:
        g = self.generator
        return {
            "setting": setting or (g.kind if g else ""),
            "N": g.n if g else "",
            "S1": self.plan.size if self.plan else "",
            "TPR": self.metrics.tpr,
            "FPR": self.metrics.fpr,
            "CFP": self.metrics.cfp,
            "Err": self.metrics.err,
            "secs_per_fit": self.secs_per_fit,
        }


def rep_rng(seed, rep: int, attempt: int = 0) -> np.random.Generator:
    """Independent stream for replication ``rep`` of master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed or 0), int(rep), int(attempt)]))


def _one_rep(generator: GeneratorSpec, plan: TruthPlan, rng):
    g = generate(generator, seed=int(rng.integers(2**63)))
    truth = draw_truth(g, plan, rng)
    z = None
    if plan.covariates:
        z = rng.multivariate_normal(np.zeros(plan.covariates),
                                    ar_covariance(plan.covariates, plan.ar), size=g.n)
    y = gen_snir_data(g, truth, rng, z=z)
    if z is not None:
        y = profile_covariates(y, z)
    t0 = time.perf_counter()
    res = fit(g, y, screen=plan.screen, K=plan.K)
    secs = time.perf_counter() - t0
    m_size = res.candidates.size
    return metrics(truth.s1, res.selected, truth.rho, res.rho, m_size), secs


def _rep_with_retries(args):
    generator, plan, seed, rep = args
    failures = 0
    for attempt in range(MAX_RETRIES + 1):
        try:
            m, secs = _one_rep(generator, plan, rep_rng(seed, rep, attempt))
            return m, secs, failures
        except SnirError as e:
            failures += 1
            if attempt == MAX_RETRIES:
                raise type(e)(f"replication {rep}: {e}") from e


def run_study(generator: GeneratorSpec, plan: TruthPlan, reps: int, seed=0,
              workers: int = 1) -> StudyResult:
    """Average recovery metrics over ``reps`` independent replications.

    Each replication draws a fresh graph, truth and noise from its own seed
    stream, so results do not depend on ``workers``.  A replication whose
    fit fails is re-drawn on a new stream up to five times; the number of
    re-draws is reported.
    """
    if reps < 1:
        raise InvalidConfigError("reps must be at least 1")
    jobs = [(generator, plan, seed, rep) for rep in range(reps)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_rep_with_retries, jobs))
    else:
        out = [_rep_with_retries(j) for j in jobs]
    per = [o[0] for o in out]
    return StudyResult(StudyMetrics.mean(per), per, float(np.mean([o[1] for o in out])),
                       int(sum(o[2] for o in out)), generator, plan)


def preset(kind: str, n: int, seed=None) -> GeneratorSpec:
    """Generator with the synthetic-study default parameters."""
    return GeneratorSpec(kind, n, {}, seed)


# ---------------------------------------------------------------------------
# Designs that hold real-style responses fixed on the influential set
# ---------------------------------------------------------------------------

def surrogate_responses(g: DirectedGraph, seed=None, screen: ScreenConfig | None = None,
                        hub=(6.0, 1.5), rest=(2.0, 1.0)) -> np.ndarray:
    """Stand-in for observed log-counts: ``log1p`` of lognormal counts.

    Candidate (high in-degree) nodes get log-scale mean/sd ``hub``, all other
    nodes ``rest``; counts are floored to integers as real tallies would be.
    """
    rng = np.random.default_rng(seed)
    m = screen_candidates(g, screen)
    loc = np.full(g.n, rest[0])
    scale = np.full(g.n, rest[1])
    loc[m], scale[m] = hub
    counts = np.floor(np.exp(rng.normal(loc, scale)))
    return np.log1p(counts)


SETTING_MODES = {1: ("top_response", "mixed"), 2: ("top_indegree", "uniform"),
                 3: ("random_m", "uniform")}


def setting_truth(g: DirectedGraph, y_real, setting: int, size: int, rng,
                  screen: ScreenConfig | None = None) -> TruthSpec:
    mode, coef = SETTING_MODES[setting]
    plan = TruthPlan(size=size, mode=mode, coef=coef, screen=screen or ScreenConfig())
    t = draw_truth(g, plan, rng, y_real=y_real)
    t.y_s1 = np.asarray(y_real)[t.s1]
    return t


@dataclass
class SettingResult:
    setting: int
    methods: dict[str, StudyMetrics]
    per_rep: dict[str, list[StudyMetrics]]


def run_setting_study(g: DirectedGraph, y_real, setting: int, reps: int = 100, seed=0,
                      size: int = 8, sigma: float = 1.0, screen: ScreenConfig | None = None,
                      methods=("snir", "response", "indegree")) -> SettingResult:
    """Recovery by each method when influential responses are held at ``y_real``.

    Setting 1 takes the largest responses as influential (mixed-sign
    coefficients), setting 2 the largest in-degrees, setting 3 a random
    candidate subset.  Non-influential responses are regenerated each
    replication; rule-based methods name exactly ``size`` nodes.
    """
    if setting not in SETTING_MODES:
        raise InvalidConfigError("setting must be 1, 2 or 3")
    screen = screen or ScreenConfig()
    m_size = screen_candidates(g, screen).size
    per = {k: [] for k in methods}
    for rep in range(reps):
        rng = rep_rng(seed, rep)
        truth = setting_truth(g, y_real, setting, size, rng, screen)
        truth.sigma = sigma
        y = gen_snir_data(g, truth, rng)
        for kind in methods:
            if kind == "snir":
                res = fit(g, y, screen=screen)
                sel, rho = res.selected, res.rho
            else:
                score = y if kind == "response" else g.in_degree
                sel = top_by_score(score, size)
                try:
                    rho = cmle(g, y, sel).rho
                except SnirError:
                    rho = np.zeros(sel.size)
            per[kind].append(metrics(truth.s1, sel, truth.rho, rho, m_size))
    return SettingResult(setting, {k: StudyMetrics.mean(v) for k, v in per.items()}, per)


@dataclass
class SweepResult:
    coef: np.ndarray
    detection: np.ndarray
    spearman: float

    def rows(self):
        return [{"coef": float(c), "detection": float(d)} for c, d in zip(self.coef, self.detection)]


def snr_sweep(g: DirectedGraph, y, base_fit: FitResult, coef_grid=None, reps: int = 100,
              seed=0, sigma: float = 1.0, screen: ScreenConfig | None = None) -> SweepResult:
    """Detection rate of one added influential node as its coefficient grows.

    The base fit's nodes and estimates stay fixed.  Each replication adds one
    random candidate outside the base set with coefficient ``c``, keeps the
    observed responses of the influential nodes, regenerates everyone else
    with noise sd ``sigma``, refits and records whether the new node is found.
    """
    y = np.asarray(y, dtype=float)
    grid = np.asarray(coef_grid if coef_grid is not None else 0.025 * np.arange(1, 13), dtype=float)
    screen = screen or ScreenConfig()
    cand = screen_candidates(g, screen)
    pool = np.setdiff1d(cand, base_fit.selected)
    if pool.size == 0:
        raise InvalidConfigError("no candidate left to add")
    det = np.zeros(grid.size)
    for gi, c in enumerate(grid):
        hits = 0
        for rep in range(reps):
            rng = rep_rng(seed, rep, gi)
            new = int(rng.choice(pool))
            s = np.append(base_fit.selected, new)
            rho = np.append(base_fit.rho, c)
            truth = TruthSpec(s, rho, sigma=sigma, y_s1=y[s])
            yy = gen_snir_data(g, truth, rng)
            try:
                res = fit(g, yy, screen=screen)
            except SnirError:
                continue
            hits += int(new in set(res.selected.tolist()))
        det[gi] = hits / reps
    rho_s = stats.spearmanr(grid, det).statistic if np.ptp(det) > 0 else float("nan")
    return SweepResult(grid, det, float(rho_s))
