"""
Extensions: covariate profiling, a two-period selection model, and
aggregation of selected sets across candidate-set choices.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, SingularDesignError
from .netcore import DirectedGraph
from .snir import DesignContext, FitResult, SelectionPath, _check_response, fit_context

__all__ = [
    "PeriodSplit",
    "ar_covariance",
    "profile_covariates",
    "dynamic_fit",
    "aggregate_sets",
]


def ar_covariance(p: int, phi: float = 0.5) -> np.ndarray:
    """Covariance with entries ``phi**|i - j|``."""
    idx = np.arange(p)
    return phi ** np.abs(idx[:, None] - idx[None, :])


def profile_covariates(y, z) -> np.ndarray:
    """Remove the least-squares fit of ``y`` on the columns of ``z``.

    Examples
    --------
    >>> profile_covariates([1.0, 2.0, 3.0], np.ones((3, 1)))
    array([-1.,  0.,  1.])
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    n, p = z.shape
    if n != y.size:
        raise InvalidConfigError("covariate rows must match the response length")
    if p >= n:
        raise InvalidConfigError("need more observations than covariates")
    q, r = np.linalg.qr(z)
    d = np.abs(np.diag(r))
    if d.min() <= 1e-10 * max(d.max(), 1e-300):
        raise SingularDesignError("covariate matrix is rank deficient")
    out = y - q @ (q.T @ y)
    return out - q @ (q.T @ out)


@dataclass(frozen=True)
class PeriodSplit:
    """Assignment of nodes to two posting periods.

    ``m1`` and ``m2`` are the candidates posting in each period; the working
    rows of period ``k`` are ``jk`` minus ``mk``.
    """

    j1: np.ndarray
    j2: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    def __post_init__(self):
        for name in ("j1", "j2", "m1", "m2"):
            object.__setattr__(self, name, np.unique(np.asarray(getattr(self, name), dtype=np.int64)))
        if np.intersect1d(self.j1, self.j2).size:
            raise InvalidConfigError("periods must be disjoint")
        if np.setdiff1d(self.m1, self.j1).size or np.setdiff1d(self.m2, self.j2).size:
            raise InvalidConfigError("period candidates must belong to their period")

    @property
    def rows1(self) -> np.ndarray:
        return np.setdiff1d(self.j1, self.m1)

    @property
    def rows2(self) -> np.ndarray:
        return np.setdiff1d(self.j2, self.m2)

    @classmethod
    def from_periods(cls, period, candidates) -> "PeriodSplit":
        """Split from a per-node period label (1 or 2) and the candidate set."""
        period = np.asarray(period)
        if not np.all(np.isin(period, (1, 2))):
            raise InvalidConfigError("period labels must be 1 or 2")
        j1 = np.flatnonzero(period == 1)
        j2 = np.flatnonzero(period == 2)
        cand = np.asarray(candidates, dtype=np.int64)
        return cls(j1, j2, np.intersect1d(cand, j1), np.intersect1d(cand, j2))


def _empty_fit(g, cand, note) -> FitResult:
    warnings.warn(note, RuntimeWarning, stacklevel=3)
    e = np.empty(0)
    path = SelectionPath(np.empty(0, dtype=np.int64), e, e, float("nan"), 0, [note])
    return FitResult(np.empty(0, dtype=np.int64), e, e, e, e, float("nan"), float("nan"),
                     float("nan"), path, np.asarray(cand, dtype=np.int64), g.labels, {})


def _period_fit(g, y, period, rows, cand, K):
    if cand.size == 0 or rows.size < 2:
        return _empty_fit(g, cand, "period has no candidates or rows; empty fit")
    ctx = DesignContext.build(g, y, cand, rows=rows)
    return fit_context(g, y, ctx, K=K, cmle_rows=period, config={"rows": int(rows.size)})


def dynamic_fit(g: DirectedGraph, y, split: PeriodSplit, K: int | None = None):
    """Separate selections for two posting periods.

    Period 1 regresses its non-candidate rows on the period-1 candidates.
    Period 2 regresses its non-candidate rows on the union of both periods'
    candidates, so earlier posters may still drive later responses; the EBIC
    penalty uses the size of that union.  Each period is finished with the
    conditional estimator on the period's nodes outside its selected set.
    """
    y = _check_response(g, y)
    first = _period_fit(g, y, split.j1, split.rows1, split.m1, K)
    second = _period_fit(g, y, split.j2, split.rows2, np.union1d(split.m1, split.m2), K)
    return first, second


def aggregate_sets(sets, rule: str = "majority") -> set:
    """Combine selected sets: nodes in more than half of them, or all of them.

    >>> sorted(aggregate_sets([{"A", "B"}, {"A"}, {"A", "C"}], "majority"))
    ['A']
    """
    sets = [set(s) for s in sets]
    if not sets:
        raise InvalidConfigError("need at least one set")
    rule = rule.lower()
    if rule == "union":
        return set().union(*sets)
    if rule == "majority":
        counts: dict = {}
        for s in sets:
            for x in s:
                counts[x] = counts.get(x, 0) + 1
        return {x for x, c in counts.items() if 2 * c > len(sets)}
    raise InvalidConfigError(f"unknown aggregation rule {rule!r}")
