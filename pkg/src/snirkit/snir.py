"""
Sparse network influence regression.

The response of each node is modelled as its own noise plus a weighted sum of
the responses of the nodes it follows, with a node-specific (and mostly zero)
influence coefficient ``rho_j`` attached to each followee ``j``.  Influential
nodes are found in three stages:

1. screening keeps the ``floor(N**gamma)`` nodes with the most followers as
   candidates ``M``;
2. greedy forward addition on the working regression of the non-candidate
   responses ``Y[M^c]`` on the columns ``x_j = A[M^c, j] * Y_j``, with the
   path length chosen by an extended BIC;
3. conditional least squares on the chosen set, with asymptotic normal
   standard errors.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy import stats

from .errors import (
    ConstantResponseError,
    DegenerateFitError,
    DegenerateResponseError,
    InsufficientRowsError,
    InvalidConfigError,
    SingularDesignError,
    SingularityError,
    SnirError,
)
from .netcore import DirectedGraph

__all__ = [
    "ScreenConfig",
    "DesignContext",
    "SelectionPath",
    "CmleResult",
    "FitResult",
    "EigenSummary",
    "screen_size",
    "screen_candidates",
    "default_K",
    "rss",
    "forward_addition",
    "ebic",
    "select_model",
    "cmle",
    "fit",
    "r_squared",
    "full_objective",
    "condition_check",
]

# numerical thresholds
SKIP_TOL = 1e-10      # residual column norm / original norm below this: skip
RECHECK_TOL = 1e-8    # squared-norm ratio below this: re-orthogonalise explicitly
TIE_TOL = 1e-12       # relative tolerance for declaring two gains equal
PERFECT_FIT = 1e-13   # RSS / RSS(empty) below this ends the path
RCOND_MIN = 1e-12     # reciprocal condition number floor for a Gram matrix


@dataclass(frozen=True)
class ScreenConfig:
    """How many top in-degree nodes to keep as candidates.

    Either ``gamma`` (keep ``floor(N**gamma)``) or an explicit size ``m``.
    Ties in in-degree go to the smaller node index.
    """

    gamma: float = 2.0 / 3.0
    m: int | None = None
    tie_break: str = "index"

    def __post_init__(self):
        if self.m is None and not 0.0 < self.gamma <= 1.0:
            raise InvalidConfigError("gamma must lie in (0, 1]")
        if self.m is not None and int(self.m) < 1:
            raise InvalidConfigError("m must be at least 1")
        if self.tie_break != "index":
            raise InvalidConfigError(f"unknown tie_break {self.tie_break!r}")


def _floor_power(n: int, p: float) -> int:
    # guard against n**p landing a hair under an integer (1000**(2/3))
    v = float(n) ** p
    k = int(math.floor(v))
    if k + 1 - v < 1e-9 * max(v, 1.0):
        k += 1
    return k


def screen_size(n: int, cfg: ScreenConfig | None = None) -> int:
    cfg = cfg or ScreenConfig()
    size = int(cfg.m) if cfg.m is not None else _floor_power(n, cfg.gamma)
    if size < 1:
        raise InvalidConfigError(f"candidate set would be empty for N={n}")
    if size >= n:
        raise InvalidConfigError(
            f"candidate set size {size} must be below N={n} so some rows remain"
        )
    return size


def screen_candidates(g: DirectedGraph, cfg: ScreenConfig | None = None) -> np.ndarray:
    """Indices of the top in-degree nodes, sorted ascending.

    Examples
    --------
    >>> g = DirectedGraph.from_edges(4, [(1, 0), (0, 2), (1, 3)])
    >>> screen_candidates(g, ScreenConfig(m=2))
    array([0, 2])
    """
    size = screen_size(g.n, cfg)
    deg = g.in_degree
    order = np.lexsort((np.arange(g.n), -deg))
    return np.sort(order[:size])


def default_K(n: int, m_size: int, mc_size: int, K: int | None = None) -> int:
    """Path length: at least ``floor(n**(5/9))``, capped by the design size."""
    k = _floor_power(n, 5.0 / 9.0)
    if K is not None:
        if int(K) < 1:
            raise InvalidConfigError("K must be at least 1")
        k = max(k, int(K))
    return max(1, min(k, m_size, mc_size - 1))


def _influence_columns(g: DirectedGraph, y: np.ndarray, rows, cols) -> sp.csc_matrix:
    """``A[rows, cols] @ diag(y[cols])`` as a CSC matrix."""
    block = g.block(rows, cols)
    return (block @ sp.diags(y[cols])).tocsc()


@dataclass
class DesignContext:
    """Working regression of ``Y[rows]`` on the influence columns of ``candidates``.

    The default rows are every node outside the candidate set.  Column ``k``
    of ``X`` belongs to ``candidates[k]``; candidates are kept ascending so
    column order doubles as the tie-break order.
    """

    candidates: np.ndarray
    rows: np.ndarray
    y_rows: np.ndarray
    X: sp.csc_matrix
    n_nodes: int
    model_size: int = 0

    def __post_init__(self):
        if not self.model_size:
            self.model_size = int(self.candidates.size)

    @classmethod
    def build(cls, g: DirectedGraph, y, candidates, rows=None, model_size=None):
        y = np.asarray(y, dtype=np.float64)
        cand = np.unique(np.asarray(candidates, dtype=np.int64))
        if rows is None:
            mask = np.ones(g.n, dtype=bool)
            mask[cand] = False
            rows = np.flatnonzero(mask)
        else:
            rows = np.unique(np.asarray(rows, dtype=np.int64))
            if np.intersect1d(rows, cand).size:
                raise InvalidConfigError("working rows and candidates must be disjoint")
        X = _influence_columns(g, y, rows, cand)
        return cls(cand, rows, y[rows], X, g.n, model_size or int(cand.size))

    @property
    def m_size(self) -> int:
        return self.model_size

    @property
    def mc_size(self) -> int:
        return int(self.rows.size)

    def positions(self, s) -> np.ndarray:
        """Column positions of the node ids in ``s`` (order preserved)."""
        s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
        pos = np.searchsorted(self.candidates, s)
        ok = (pos < self.candidates.size)
        ok[ok] = self.candidates[pos[ok]] == s[ok]
        if not np.all(ok):
            raise InvalidConfigError(f"nodes {s[~ok].tolist()} are not candidates")
        return pos

    def columns(self, s) -> np.ndarray:
        pos = self.positions(s)
        return self.X[:, pos].toarray()


def rss(ctx: DesignContext, s) -> float:
    """Residual sum of squares of ``Y[rows]`` after projecting on the columns of ``s``.

    Raises
    ------
    SingularDesignError
        If a column of ``s`` lies (numerically) in the span of the earlier
        ones; ``index`` names the offending node.
    """
    s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    y = ctx.y_rows
    if s.size == 0:
        return float(y @ y)
    xs = ctx.columns(s)
    norms = np.linalg.norm(xs, axis=0)
    q, r = np.linalg.qr(xs)
    diag = np.abs(np.diag(r))
    bad = np.flatnonzero((norms == 0) | (diag < SKIP_TOL * np.maximum(norms, 1e-300)))
    if bad.size:
        raise SingularDesignError(
            f"column of node {int(s[bad[0]])} is linearly dependent", index=int(s[bad[0]])
        )
    res = y - q @ (q.T @ y)
    return float(res @ res)


def ebic(rss_value: float, s_size: int, m_size: int, mc_size: int) -> float:
    """Extended BIC: ``log(rss) + s * (log(mc) + 2 log(m)) / mc``.

    Examples
    --------
    >>> round(ebic(50.0, 2, 10, 100), 5)
    4.09623
    """
    if not rss_value > 0:
        raise DegenerateFitError("RSS is zero: perfect fit, EBIC undefined")
    return math.log(rss_value) + s_size * (math.log(mc_size) + 2.0 * math.log(m_size)) / mc_size


@dataclass
class SelectionPath:
    """Greedy path: picks, RSS and EBIC after each step (1-based ``k_star``)."""

    picks: np.ndarray
    rss: np.ndarray
    ebic: np.ndarray
    rss0: float
    k_star: int = 0
    notes: list[str] = field(default_factory=list)

    def __len__(self):
        return int(self.picks.size)

    @property
    def selected(self) -> np.ndarray:
        return self.picks[: self.k_star]


def select_model(path) -> int:
    """Earliest step attaining the minimum EBIC (1-based).

    Accepts a :class:`SelectionPath` or a bare EBIC trace.

    >>> select_model([3.0, 2.5, 2.7])
    2
    """
    trace = np.asarray(path.ebic if isinstance(path, SelectionPath) else path, dtype=float)
    if trace.size == 0:
        raise InvalidConfigError("empty selection path")
    return int(np.argmin(trace)) + 1


def _pick(gain: np.ndarray, valid: np.ndarray) -> int:
    """Largest gain among valid columns; near-ties go to the lowest position."""
    if not valid.any():
        return -1
    g = np.where(valid, gain, -np.inf)
    best = g.max()
    thresh = best - TIE_TOL * max(abs(best), 1e-300)
    return int(np.flatnonzero(g >= thresh)[0])


def forward_addition(ctx: DesignContext, K: int) -> SelectionPath:
    """Greedy forward selection minimising RSS one column at a time.

    An orthonormal basis of the chosen columns is maintained with classical
    Gram-Schmidt plus one re-orthogonalisation pass.  For every candidate the
    projections ``Q^T x_j`` are updated with one sparse product per step, so
    the RSS drop from adding ``j`` is ``(x_j^T r)^2 / (|x_j|^2 - |Q^T x_j|^2)``
    without refitting.  Candidates whose residual column is numerically zero
    are skipped for that step.
    """
    X = ctx.X
    n_rows, n_cols = X.shape
    if K < 1:
        raise InvalidConfigError("K must be at least 1")
    if K > n_cols or K >= n_rows:
        raise InvalidConfigError(f"K={K} exceeds design size ({n_rows} rows, {n_cols} columns)")

    y = ctx.y_rows
    rss0 = float(y @ y)
    XT = X.T.tocsr()
    norm2 = np.asarray(X.multiply(X).sum(axis=0)).ravel()
    Q = np.zeros((n_rows, K))
    proj2 = np.zeros(n_cols)          # |Q^T x_j|^2
    chosen = np.zeros(n_cols, dtype=bool)
    r = y.copy()
    picks, rss_path, ebic_path, notes = [], [], [], []
    prev = rss0

    for k in range(K):
        if prev <= PERFECT_FIT * rss0:
            break
        Qk = Q[:, :k]
        xr = XT @ r
        denom = norm2 - proj2
        valid = (~chosen) & (norm2 > 0)
        gain = np.zeros(n_cols)
        fine = valid & (denom > RECHECK_TOL * norm2)
        gain[fine] = xr[fine] ** 2 / denom[fine]
        for j in np.flatnonzero(valid & ~fine):
            v = X[:, [j]].toarray().ravel()
            v -= Qk @ (Qk.T @ v)
            v -= Qk @ (Qk.T @ v)
            nv = float(np.sqrt(v @ v))
            if nv < SKIP_TOL * math.sqrt(norm2[j]):
                valid[j] = False
                continue
            gain[j] = (v @ r) ** 2 / (nv * nv)
        j = _pick(gain, valid)
        if j < 0:
            notes.append(f"path truncated at step {k + 1}: every remaining candidate is collinear")
            warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
            break

        v = X[:, [j]].toarray().ravel()
        v -= Qk @ (Qk.T @ v)
        v -= Qk @ (Qk.T @ v)
        q = v / np.linalg.norm(v)
        Q[:, k] = q
        r = r - q * (q @ r)
        r -= Qk @ (Qk.T @ r)
        c = XT @ q
        proj2 += c * c
        chosen[j] = True

        cur = min(float(r @ r), prev)
        s = k + 1
        picks.append(int(ctx.candidates[j]))
        rss_path.append(cur)
        if cur <= PERFECT_FIT * rss0:
            ebic_path.append(-math.inf)
        else:
            ebic_path.append(ebic(cur, s, ctx.m_size, ctx.mc_size))
        prev = cur

    path = SelectionPath(
        np.array(picks, dtype=np.int64),
        np.array(rss_path),
        np.array(ebic_path),
        rss0,
        notes=notes,
    )
    if len(path):
        path.k_star = select_model(path)
    return path


@dataclass
class CmleResult:
    """Conditional least-squares estimates for a fixed influential set."""

    nodes: np.ndarray
    rho: np.ndarray
    se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    sigma2: float
    rss: float
    n_rows: int
    cov: np.ndarray


def _wald(rho, se):
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, rho / np.where(se > 0, se, 1.0), np.where(rho == 0, 0.0, np.sign(rho) * np.inf))
    p = 2.0 * stats.norm.sf(np.abs(t))
    return t, np.clip(p, 0.0, 1.0)


def cmle(g: DirectedGraph, y, s, rows=None) -> CmleResult:
    """Conditional estimator of the influence coefficients of ``s``.

    Regresses ``Y[rows]`` on ``A[rows, s] @ diag(Y[s])`` without intercept,
    where ``rows`` defaults to every node outside ``s``.  Standard errors use
    the residual mean square with ``len(rows) - len(s)`` degrees of freedom
    and p-values are two-sided normal.
    """
    y = np.asarray(y, dtype=np.float64)
    s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    if s.size == 0:
        raise InvalidConfigError("cmle needs a nonempty node set")
    if np.unique(s).size != s.size:
        raise InvalidConfigError("duplicate nodes in s")
    if rows is None:
        mask = np.ones(g.n, dtype=bool)
        mask[s] = False
        rows = np.flatnonzero(mask)
    else:
        rows = np.asarray(rows, dtype=np.int64)
    n_rows = rows.size
    if n_rows <= s.size:
        raise InsufficientRowsError(f"{n_rows} rows cannot identify {s.size} coefficients")

    X = _influence_columns(g, y, rows, s).toarray()
    yr = y[rows]
    gram = X.T @ X
    diag = np.diag(gram)
    if np.any(diag == 0):
        j = int(s[np.flatnonzero(diag == 0)[0]])
        raise SingularDesignError(f"node {j} has an all-zero design column", index=j)
    # condition of the scaled Gram (column scaling does not change rank)
    d = 1.0 / np.sqrt(diag)
    scaled = gram * d[:, None] * d[None, :]
    ev = np.linalg.eigvalsh(scaled)
    if ev[0] <= RCOND_MIN * ev[-1]:
        raise SingularDesignError("selected design is numerically rank deficient")
    inv = np.linalg.inv(scaled) * d[:, None] * d[None, :]
    rho = inv @ (X.T @ yr)
    res = yr - X @ rho
    rss_val = float(res @ res)
    sigma2 = rss_val / (n_rows - s.size)
    cov = sigma2 * inv
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    t, p = _wald(rho, se)
    return CmleResult(s, rho, se, t, p, sigma2, rss_val, int(n_rows), cov)


def r_squared(ctx: DesignContext, s) -> tuple[float, float]:
    """Centred R^2 and adjusted R^2 of the working regression on ``s``."""
    y = ctx.y_rows
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss <= 0:
        raise ConstantResponseError("working response is constant; R^2 undefined")
    k = len(s)
    r2 = 1.0 - rss(ctx, s) / tss
    n = ctx.mc_size
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - k - 1) if n - k - 1 > 0 else math.nan
    return r2, adj


@dataclass
class FitResult:
    """Outcome of :func:`fit`.

    ``selected`` holds node indices in the order they entered the path;
    ``rho``, ``se``, ``t`` and ``p`` are aligned with it.
    """

    selected: np.ndarray
    rho: np.ndarray
    se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    sigma2: float
    r2: float
    adj_r2: float
    path: SelectionPath
    candidates: np.ndarray
    labels: list[str] | None = None
    config: dict = field(default_factory=dict)

    def label(self, i) -> str:
        return self.labels[i] if self.labels is not None else str(int(i))

    def rho_full(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[self.selected] = self.rho
        return out

    def to_dict(self) -> dict:
        def num(x):
            x = float(x)
            return x if math.isfinite(x) else None

        return {
            "path": [
                {"step": k + 1, "pick": self.label(j), "rss": num(self.path.rss[k]),
                 "ebic": num(self.path.ebic[k])}
                for k, j in enumerate(self.path.picks)
            ],
            "k_star": int(self.path.k_star),
            "selected": [self.label(j) for j in self.selected],
            "coef": [
                {"node": self.label(j), "rho": num(r), "se": num(e), "t": num(t), "p": num(p)}
                for j, r, e, t, p in zip(self.selected, self.rho, self.se, self.t, self.p)
            ],
            "r2": num(self.r2),
            "adj_r2": num(self.adj_r2),
            "sigma2": num(self.sigma2),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def coef_table(self) -> str:
        width = max([4] + [len(self.label(j)) for j in self.selected])
        lines = [f"{'node':<{width}}  {'rho':>9}  {'se':>9}  {'t':>9}  {'p':>9}"]
        for j, r, e, t, p in zip(self.selected, self.rho, self.se, self.t, self.p):
            lines.append(f"{self.label(j):<{width}}  {r:9.4f}  {e:9.4f}  {t:9.3f}  {p:9.2e}")
        lines.append(f"R2 = {self.r2:.4f}  adj R2 = {self.adj_r2:.4f}  sigma2 = {self.sigma2:.4g}")
        return "\n".join(lines)


def _staged(stage, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except SnirError as e:
        if e.args and isinstance(e.args[0], str) and not e.args[0].startswith(stage):
            e.args = (f"{stage}: {e.args[0]}",) + e.args[1:]
        raise


def _check_response(g: DirectedGraph, y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.size != g.n:
        raise InvalidConfigError(f"response has length {y.size}, graph has {g.n} nodes")
    if not np.all(np.isfinite(y)):
        raise InvalidConfigError("response contains non-finite values")
    if g.n < 3:
        raise InvalidConfigError("need at least 3 nodes")
    if not np.any(y):
        raise DegenerateResponseError("response is identically zero")
    return y


def fit_context(g: DirectedGraph, y: np.ndarray, ctx: DesignContext, K: int | None = None,
                cmle_rows=None, config=None) -> FitResult:
    """Run selection and estimation on a prepared design (rows/candidates free)."""
    if float(ctx.y_rows @ ctx.y_rows) == 0.0:
        raise DegenerateResponseError("working response is identically zero")
    k = default_K(g.n, ctx.candidates.size, ctx.mc_size, K)
    path = _staged("forward_addition", forward_addition, ctx, k)
    sel = path.selected
    if sel.size == 0:
        empty = np.empty(0)
        return FitResult(sel, empty, empty, empty, empty, math.nan, math.nan, math.nan,
                         path, ctx.candidates, g.labels, dict(config or {}, K=k))
    rows = cmle_rows
    if rows is not None:
        rows = np.setdiff1d(rows, sel)
    est = _staged("cmle", cmle, g, y, sel, rows=rows)
    try:
        r2, adj = r_squared(ctx, sel)
    except ConstantResponseError:
        r2 = adj = math.nan
    cfg = dict(config or {})
    cfg["K"] = k
    return FitResult(sel, est.rho, est.se, est.t, est.p, est.sigma2, r2, adj, path,
                     ctx.candidates, g.labels, cfg)


def fit(g: DirectedGraph, y, screen: ScreenConfig | None = None, K: int | None = None) -> FitResult:
    """Screen, select by forward addition and EBIC, then estimate.

    Parameters
    ----------
    g : DirectedGraph
    y : array_like, shape (N,)
    screen : ScreenConfig, optional
        Candidate screening rule, default ``gamma = 2/3``.
    K : int, optional
        Minimum path length; the default ``floor(N**(5/9))`` is used when
        larger.  Always capped by the number of candidates and rows.
    """
    y = _check_response(g, y)
    screen = screen or ScreenConfig()
    cand = _staged("screen", screen_candidates, g, screen)
    ctx = DesignContext.build(g, y, cand)
    config = {"gamma": screen.gamma if screen.m is None else None, "m": int(cand.size), "n": g.n}
    return fit_context(g, y, ctx, K=K, config=config)


def full_objective(g: DirectedGraph, y, s, mu, rho_s, sigma2: float) -> tuple[float, float]:
    """Conditional objective ``Q`` and full objective ``Q_tilde``.

    ``Q`` is the squared residual of the non-influential rows given the
    influential responses.  ``Q_tilde`` adds the marginal part for the
    influential rows, ``|H Y_s - mu|^2 + 2 sigma2 log|det H|`` with
    ``H = I - A[s, s] diag(rho_s)``.
    """
    y = np.asarray(y, dtype=np.float64)
    s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    rho_s = np.asarray(rho_s, dtype=np.float64)
    mask = np.ones(g.n, dtype=bool)
    mask[s] = False
    sc = np.flatnonzero(mask)
    ys = y[s]
    infl = g.block(sc, s) @ (rho_s * ys)
    q = float(np.sum((y[sc] - infl) ** 2))
    H = np.eye(s.size) - g.block(s, s).toarray() * rho_s[None, :]
    sign, logdet = np.linalg.slogdet(H)
    if sign == 0 or not np.isfinite(logdet) or np.linalg.cond(H) > 1.0 / RCOND_MIN:
        raise SingularityError("I - A[s, s] diag(rho) is singular")
    mu_v = np.broadcast_to(np.asarray(mu, dtype=np.float64), ys.shape)
    marg = float(np.sum((H @ ys - mu_v) ** 2))
    return q, q + marg + 2.0 * sigma2 * logdet


@dataclass
class EigenSummary:
    """Ranges of extreme eigenvalues over random subsamples."""

    design_min: tuple[float, float]
    design_max: tuple[float, float]
    scaled_min: tuple[float, float]
    scaled_max: tuple[float, float]
    min_followers_frac: tuple[float, float]
    samples: np.ndarray  # (reps, 4): design min/max, scaled min/max


def condition_check(g: DirectedGraph, set_size: int, subsample_n: int, reps: int = 100,
                    seed=None, gamma: float = 2.0 / 3.0) -> EigenSummary:
    """Empirical eigenvalue diagnostics on uniformly subsampled subgraphs.

    In each replicate ``subsample_n`` nodes are drawn, the top ``set_size``
    in-degree nodes of the subgraph play the influential set ``S`` and the
    eigenvalues of ``A[S^c, S]^T A[S^c, S] / n`` and of
    ``B^-1 A[M^c, S]^T A[M^c, S]`` (``B`` = diag of follower counts) are
    recorded.
    """
    if subsample_n > g.n:
        raise InvalidConfigError("subsample larger than the graph")
    rng = np.random.default_rng(seed)
    out = np.zeros((reps, 4))
    frac = np.zeros(reps)
    for r in range(reps):
        nodes = np.sort(rng.choice(g.n, size=subsample_n, replace=False))
        sub = g.subgraph(nodes)
        n = sub.n
        order = np.lexsort((np.arange(n), -sub.in_degree))
        S = np.sort(order[:set_size])
        mask = np.ones(n, dtype=bool)
        mask[S] = False
        a = sub.block(np.flatnonzero(mask), S).toarray()
        ev = np.linalg.eigvalsh(a.T @ a / n)
        m_size = min(max(_floor_power(n, gamma), set_size), n - 1)
        M = order[:m_size]
        mmask = np.ones(n, dtype=bool)
        mmask[M] = False
        am = sub.block(np.flatnonzero(mmask), S).toarray()
        deg = sub.in_degree[S].astype(float)
        binv = np.where(deg > 0, 1.0 / np.sqrt(np.maximum(deg, 1)), 0.0)
        ev2 = np.linalg.eigvalsh((am.T @ am) * binv[:, None] * binv[None, :])
        out[r] = ev[0], ev[-1], ev2[0], ev2[-1]
        frac[r] = sub.in_degree[M].min() / n if M.size else 0.0
    rng_of = lambda v: (float(v.min()), float(v.max()))
    return EigenSummary(rng_of(out[:, 0]), rng_of(out[:, 1]), rng_of(out[:, 2]),
                        rng_of(out[:, 3]), rng_of(frac), out)
