"""
Competing ways of naming influential nodes, and the scalar spatial
autoregressive (SAR) fit used as a goodness-of-fit benchmark.

Besides the regression-based selection, nodes can be ranked by in-degree,
by their own response, or by betweenness/harmonic centrality.  The impact of
removing a chosen set is summarised by the share of the total response it
accounts for (``delta_R``) and the share of follow edges it receives
(``delta_F``).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import splu

from .errors import (
    DegenerateResponseError,
    InvalidConfigError,
    NoNetworkError,
    SingularDesignError,
)
from .netcore import DirectedGraph, betweenness, follower_loss, harmonic
from .snir import FitResult, ScreenConfig, cmle, fit

__all__ = [
    "RULES",
    "SelectionRule",
    "SarFit",
    "MethodImpact",
    "ImpactReport",
    "rule_scores",
    "select_by_rule",
    "sar_fit",
    "sar_loglik",
    "response_loss",
    "compare_methods",
]

RULES = ("snir", "indegree", "response", "betweenness", "harmonic")


@dataclass(frozen=True)
class SelectionRule:
    """A ranking rule and how many nodes it names.

    For ``"snir"`` the size is decided by the fit itself and ``size`` is only
    a placeholder.
    """

    kind: str
    size: int = 1

    def __post_init__(self):
        kind = self.kind.lower().replace("-", "").replace("_", "")
        if kind not in RULES:
            raise InvalidConfigError(f"unknown rule {self.kind!r}; choose from {RULES}")
        object.__setattr__(self, "kind", kind)
        if int(self.size) < 1:
            raise InvalidConfigError("rule size must be at least 1")


def rule_scores(g: DirectedGraph, y, kind: str) -> np.ndarray:
    """Score vector used by a topology- or response-based rule."""
    if kind == "indegree":
        return g.in_degree.astype(float)
    if kind == "response":
        return np.asarray(y, dtype=float)
    if kind == "betweenness":
        return betweenness(g)
    if kind == "harmonic":
        return harmonic(g)
    raise InvalidConfigError(f"rule {kind!r} has no score")


def top_by_score(score, size: int) -> np.ndarray:
    """Indices of the ``size`` largest scores, ties to the smaller index."""
    score = np.asarray(score, dtype=float)
    if size > score.size:
        raise InvalidConfigError(f"cannot select {size} of {score.size} nodes")
    order = np.lexsort((np.arange(score.size), -score))
    return order[:size]


def select_by_rule(g: DirectedGraph, y, rule: SelectionRule, scores=None, **fit_kw) -> np.ndarray:
    """Nodes named by ``rule``, best first.

    Parameters
    ----------
    scores : array_like, optional
        Precomputed score vector for the rule (saves recomputing centralities).
    **fit_kw
        Passed to :func:`snirkit.snir.fit` for the ``"snir"`` rule.
    """
    if not isinstance(rule, SelectionRule):
        rule = SelectionRule(*rule) if isinstance(rule, tuple) else SelectionRule(rule)
    if rule.kind == "snir":
        return fit(g, y, **fit_kw).selected
    if scores is None:
        scores = rule_scores(g, y, rule.kind)
    return top_by_score(scores, rule.size)


# ---------------------------------------------------------------------------
# SAR baseline
# ---------------------------------------------------------------------------

@dataclass
class SarFit:
    """Scalar autoregression ``Y = rho W Y + e`` with row-normalised ``W``."""

    rho: float
    sigma2: float
    loglik: float
    r2: float
    adj_r2: float
    boundary: bool = False


def row_normalize(g: DirectedGraph) -> sp.csr_matrix:
    """``W = D^-1 A``; rows of nodes that follow nobody stay zero."""
    out = g.out_degree.astype(float)
    inv = np.divide(1.0, out, out=np.zeros_like(out), where=out > 0)
    return sp.diags(inv) @ g.adjacency


def _cyclic_part(W) -> sp.csc_matrix:
    """Restriction of ``W`` to nodes lying on a directed cycle.

    Ordering nodes by strongly connected component makes ``I - rho W`` block
    triangular; singleton components have a unit diagonal block, so only the
    nontrivial components contribute to the determinant.
    """
    _, lab = connected_components(W, directed=True, connection="strong")
    keep = np.flatnonzero(np.bincount(lab)[lab] > 1)
    return W[keep][:, keep].T.tocsc()


def _logdet(Wc, rho):
    """``log|det(I - rho W)|`` from a sparse LU of the cyclic block.

    ``Wc`` is the transposed cyclic block from :func:`_cyclic_part`.  For
    ``|rho| < 1`` and row-stochastic ``W`` that matrix is column diagonally
    dominant, so the factorisation needs no pivoting.
    """
    n = Wc.shape[0]
    if n == 0:
        return 0.0
    m = (sp.identity(n, format="csc") - rho * Wc).tocsc()
    try:
        lu = splu(m, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                  options={"SymmetricMode": True})
    except RuntimeError:
        return -math.inf
    d = np.abs(lu.U.diagonal())
    if np.any(d == 0):
        return -math.inf
    return float(np.sum(np.log(d)))


def sar_loglik(W, y, rho: float, cyclic=None) -> float:
    """Concentrated Gaussian log-likelihood (constants dropped).

    ``-(n/2) log(|(I - rho W) y|^2 / n) + log|det(I - rho W)|``
    """
    n = y.size
    e = y - rho * (W @ y)
    s2 = float(e @ e) / n
    if s2 <= 0:
        return math.inf
    if cyclic is None:
        cyclic = _cyclic_part(W)
    return -0.5 * n * math.log(s2) + _logdet(cyclic, rho)


def _golden(f, a, b, tol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def sar_fit(g: DirectedGraph, y, lo: float = -0.999, hi: float = 0.999, tol: float = 1e-6) -> SarFit:
    """Maximum likelihood for the scalar SAR model.

    A 41-point grid locates the best bracket, then golden-section search
    refines ``rho`` to ``tol``.  The log-determinant comes from a sparse LU
    factorisation at each evaluation.
    """
    if g.n_edges == 0:
        raise NoNetworkError("SAR needs at least one edge")
    y = np.asarray(y, dtype=float)
    W = row_normalize(g).tocsr()
    cyclic = _cyclic_part(W)
    n = y.size

    def f(r):
        v = sar_loglik(W, y, r, cyclic)
        return v if math.isfinite(v) else -math.inf

    grid = np.linspace(lo, hi, 41)
    vals = np.array([f(r) for r in grid])
    if not np.all(np.isfinite(vals)):
        warnings.warn("non-finite log-determinant on part of the grid; shrinking search",
                      RuntimeWarning, stacklevel=2)
        ok = np.flatnonzero(np.isfinite(vals))
        if ok.size == 0:
            raise SingularDesignError("log-likelihood is non-finite everywhere")
        grid, vals = grid[ok], vals[ok]
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    rho = _golden(f, a, b, tol)
    if f(rho) < vals[i]:
        rho = float(grid[i])
    e = y - rho * (W @ y)
    rss_val = float(e @ e)
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss <= 0:
        raise DegenerateResponseError("constant response")
    r2 = 1.0 - rss_val / tss
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - 2) if n > 2 else math.nan
    edge = 1e-3
    return SarFit(float(rho), rss_val / n, f(rho), r2, adj,
                  boundary=bool(rho < lo + edge or rho > hi - edge))


# ---------------------------------------------------------------------------
# Impact of removing a set
# ---------------------------------------------------------------------------

def response_loss(g: DirectedGraph, y, s, rho) -> float:
    """Share of the total response attributable to the set ``s``.

    The numerator is the own response of the nodes in ``s`` plus the fitted
    influence they exert on everyone else, ``A[s^c, s] diag(rho) Y[s]``.
    Values outside ``[0, 1]`` are clipped with a warning.
    """
    y = np.asarray(y, dtype=float)
    s = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    rho = np.asarray(rho, dtype=float)
    total = float(y.sum())
    if total == 0:
        raise DegenerateResponseError("total response is zero; delta_R undefined")
    mask = np.ones(g.n, dtype=bool)
    mask[s] = False
    rest = np.flatnonzero(mask)
    infl = float((g.block(rest, s) @ (rho * y[s])).sum()) if s.size else 0.0
    val = (float(y[s].sum()) + infl) / total
    if not 0.0 <= val <= 1.0:
        warnings.warn(f"delta_R={val:.4f} outside [0, 1]; clipped", RuntimeWarning, stacklevel=2)
        val = min(max(val, 0.0), 1.0)
    return val


def _coef_for_set(g, y, s):
    """CMLE coefficients, or least squares by pseudo-inverse when singular."""
    try:
        return cmle(g, y, s).rho, ""
    except SingularDesignError:
        mask = np.ones(g.n, dtype=bool)
        mask[s] = False
        rows = np.flatnonzero(mask)
        X = (g.block(rows, s) @ sp.diags(y[s])).toarray()
        rho = np.linalg.pinv(X) @ y[rows]
        return rho, "singular design: minimum-norm least squares"


@dataclass
class MethodImpact:
    selected: np.ndarray
    delta_R: float
    delta_F: float
    note: str = ""


@dataclass
class ImpactReport:
    """Per-method removal impact at matched set sizes."""

    rows: dict[str, MethodImpact]
    labels: list[str] | None = None
    fit: FitResult | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        lab = (lambda i: self.labels[i]) if self.labels is not None else (lambda i: str(int(i)))
        out = {}
        for name, r in self.rows.items():
            out[name] = {"selected": [lab(i) for i in r.selected],
                         "delta_R": r.delta_R, "delta_F": r.delta_F}
            if r.note:
                out[name]["note"] = r.note
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def ranking(self) -> list[str]:
        return sorted(self.rows, key=lambda k: -self.rows[k].delta_R)


def compare_methods(g: DirectedGraph, y, size_per_method: int | None = None,
                    screen: ScreenConfig | None = None, K: int | None = None,
                    fit_result: FitResult | None = None, scores: dict | None = None,
                    methods=RULES) -> ImpactReport:
    """Run every selection rule at a common set size and tabulate removal impact.

    The size defaults to the number of nodes chosen by the regression fit.
    """
    y = np.asarray(y, dtype=float)
    res = fit_result if fit_result is not None else fit(g, y, screen=screen, K=K)
    size = int(size_per_method) if size_per_method is not None else int(res.selected.size)
    if size < 1:
        raise InvalidConfigError("method comparison needs a nonempty selection")
    scores = dict(scores or {})
    rows = {}
    for kind in methods:
        if kind == "snir":
            sel = res.selected[:size]
            if sel.size == size and size == res.selected.size:
                rho, note = res.rho, ""
            else:
                rho, note = _coef_for_set(g, y, sel)
        else:
            if kind not in scores:
                scores[kind] = rule_scores(g, y, kind)
            sel = top_by_score(scores[kind], size)
            rho, note = _coef_for_set(g, y, sel)
        d_r = response_loss(g, y, sel, rho)
        rows[kind] = MethodImpact(np.asarray(sel), d_r, follower_loss(g, sel), note)
    return ImpactReport(rows, g.labels, res)
