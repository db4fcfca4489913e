"""
Directed follower graphs: storage, random generators, centralities.

Edges are ordered pairs ``(i, j)`` meaning *node i follows node j*, so the
adjacency matrix ``A`` has ``A[i, j] = 1``.  The followers of ``j`` are the
nonzero rows of column ``j`` and ``in_degree(j)`` counts them.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError, EmptyGraphError, InvalidConfigError

__all__ = [
    "DirectedGraph",
    "GeneratorSpec",
    "gen_er",
    "gen_sbm",
    "gen_powerlaw",
    "generate",
    "in_degree",
    "out_degree",
    "betweenness",
    "harmonic",
    "follower_loss",
    "read_edgelist",
    "write_edgelist",
]


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class DirectedGraph:
    """Immutable binary directed graph without self-loops.

    Parameters
    ----------
    n : int
        Number of nodes.
    src, dst : array_like of int
        Edge endpoints; ``src[k]`` follows ``dst[k]``.  Duplicates are
        collapsed.  Self-loops are rejected.
    labels : sequence of str, optional
        External node ids, index-aligned.  Defaults to ``"0" .. "n-1"``.
    """

    def __init__(self, n: int, src=(), dst=(), labels: Sequence[str] | None = None):
        n = int(n)
        if n < 0:
            raise InvalidConfigError("node count must be nonnegative")
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise InvalidConfigError("src and dst must have the same length")
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise InvalidConfigError("edge endpoint out of range")
        if np.any(src == dst):
            raise InvalidConfigError("self-loops are not allowed")
        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != n:
                raise InvalidConfigError("labels must have one entry per node")
            if len(set(labels)) != n:
                raise InvalidConfigError("labels must be unique")
        self._n = n
        self._labels = labels

        data = np.ones(src.size, dtype=np.float64)
        csr = sp.csr_matrix((data, (src, dst)), shape=(n, n))
        csr.sum_duplicates()
        csr.data[:] = 1.0
        csr.sort_indices()
        self._csr = csr
        self._csc = csr.tocsc()
        self._csc.sort_indices()
        for m in (self._csr, self._csc):
            m.data.setflags(write=False)
            m.indices.setflags(write=False)
            m.indptr.setflags(write=False)
        self._in = _frozen(np.diff(self._csc.indptr).astype(np.int64))
        self._out = _frozen(np.diff(self._csr.indptr).astype(np.int64))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "DirectedGraph":
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(n, pairs[:, 0], pairs[:, 1], labels=labels)

    @classmethod
    def from_dense(cls, a, labels=None) -> "DirectedGraph":
        a = np.asarray(a)
        src, dst = np.nonzero(a)
        return cls(a.shape[0], src, dst, labels=labels)

    # -- basic accessors -------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def n_edges(self) -> int:
        return int(self._csr.nnz)

    @property
    def adjacency(self) -> sp.csr_matrix:
        """Row-major adjacency (row ``i`` lists the nodes ``i`` follows)."""
        return self._csr

    @property
    def adjacency_csc(self) -> sp.csc_matrix:
        """Column-major adjacency (column ``j`` lists the followers of ``j``)."""
        return self._csc

    @property
    def in_degree(self) -> np.ndarray:
        return self._in

    @property
    def out_degree(self) -> np.ndarray:
        return self._out

    @property
    def labels(self) -> list[str]:
        if self._labels is None:
            return [str(i) for i in range(self._n)]
        return list(self._labels)

    def label(self, i: int) -> str:
        return self._labels[i] if self._labels is not None else str(i)

    def index_of(self, label: str) -> int:
        if self._labels is None:
            return int(label)
        return self._labels.index(label)

    def out_neighbors(self, i: int) -> np.ndarray:
        return self._csr.indices[self._csr.indptr[i]:self._csr.indptr[i + 1]]

    def in_neighbors(self, j: int) -> np.ndarray:
        """Followers of ``j``."""
        return self._csc.indices[self._csc.indptr[j]:self._csc.indptr[j + 1]]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        coo = self._csr.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(np.any(self.out_neighbors(i) == j))

    def block(self, rows, cols) -> sp.csc_matrix:
        """Sub-adjacency ``A[rows, cols]`` in column-major form."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        return self._csc[:, cols][rows, :].tocsc()

    def subgraph(self, nodes) -> "DirectedGraph":
        nodes = np.asarray(nodes, dtype=np.int64)
        sub = self._csr[nodes, :][:, nodes].tocoo()
        labels = None if self._labels is None else [self._labels[i] for i in nodes]
        return DirectedGraph(len(nodes), sub.row, sub.col, labels=labels)

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray()

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and (self._csr != other._csr).nnz == 0
        )

    def __hash__(self):
        return hash((self._n, self.n_edges))

    def __repr__(self):
        return f"DirectedGraph(n={self._n}, edges={self.n_edges})"


def in_degree(g: DirectedGraph) -> np.ndarray:
    """Number of followers of each node."""
    return g.in_degree


def out_degree(g: DirectedGraph) -> np.ndarray:
    """Number of nodes each node follows."""
    return g.out_degree


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one of the three synthetic network families.

    ``params`` holds the kind-specific settings: ``p`` for ``"er"``;
    ``k_blocks``, ``p_in``, ``p_out`` for ``"sbm"``; ``alpha`` for
    ``"powerlaw"``.  Missing entries fall back to the generator defaults.
    """

    kind: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in ("er", "sbm", "powerlaw"):
            raise InvalidConfigError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        for key in ("p", "p_in", "p_out"):
            if key in self.params and not 0.0 <= self.params[key] <= 1.0:
                raise InvalidConfigError(f"{key} must lie in [0, 1]")
        if "alpha" in self.params and not self.params["alpha"] > 1.0:
            raise InvalidConfigError("alpha must exceed 1")
        if "k_blocks" in self.params and int(self.params["k_blocks"]) < 1:
            raise InvalidConfigError("k_blocks must be at least 1")

    def build(self, seed=None) -> DirectedGraph:
        return generate(self, seed=seed)


def generate(spec: GeneratorSpec, seed=None) -> DirectedGraph:
    seed = spec.seed if seed is None else seed
    if spec.kind == "er":
        return gen_er(spec.n, seed=seed, **spec.params)
    if spec.kind == "sbm":
        return gen_sbm(spec.n, seed=seed, **spec.params)
    return gen_powerlaw(spec.n, seed=seed, **spec.params)


def _check_prob(p, name):
    if not 0.0 <= p <= 1.0:
        raise InvalidConfigError(f"{name}={p} is not a probability")


def _sample_pairs(rng, n_pairs, p):
    """Indices of a Bernoulli(p) subset of ``range(n_pairs)``."""
    if n_pairs <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_pairs, dtype=np.int64)
    count = rng.binomial(n_pairs, p)
    return np.sort(rng.choice(n_pairs, size=count, replace=False)).astype(np.int64)


def gen_er(n: int, p: float | None = None, seed=None) -> DirectedGraph:
    """Erdos-Renyi digraph: every ordered pair ``i != j`` independently w.p. ``p``.

    The default ``p = 0.5 * n**-0.8`` is the synthetic-study setting.
    """
    if p is None:
        p = 0.5 * n ** -0.8
    _check_prob(p, "p")
    rng = np.random.default_rng(seed)
    if n < 2:
        return DirectedGraph(n)
    lin = _sample_pairs(rng, n * (n - 1), p)
    src = lin // (n - 1)
    dst = lin % (n - 1)
    dst = dst + (dst >= src)
    return DirectedGraph(n, src, dst)


def gen_sbm(n: int, k_blocks: int = 5, p_in: float | None = None, p_out: float | None = None,
            seed=None, return_blocks: bool = False):
    """Stochastic block model with uniform random block labels.

    Defaults: five blocks, ``p_in = n**-0.8`` and ``p_out = 0.5 * n**-0.8``.
    With ``return_blocks=True`` the block label vector is returned too.
    """
    if k_blocks < 1:
        raise InvalidConfigError("k_blocks must be at least 1")
    if p_in is None:
        p_in = n ** -0.8
    if p_out is None:
        p_out = 0.5 * n ** -0.8
    _check_prob(p_in, "p_in")
    _check_prob(p_out, "p_out")
    rng = np.random.default_rng(seed)
    blocks = rng.integers(0, k_blocks, size=n)
    members = [np.flatnonzero(blocks == b) for b in range(k_blocks)]
    srcs, dsts = [], []
    for a in range(k_blocks):
        ra = members[a]
        for b in range(k_blocks):
            rb = members[b]
            if a == b:
                m = ra.size
                if m < 2:
                    continue
                lin = _sample_pairs(rng, m * (m - 1), p_in)
                i = lin // (m - 1)
                j = lin % (m - 1)
                j = j + (j >= i)
                srcs.append(ra[i])
                dsts.append(ra[j])
            else:
                lin = _sample_pairs(rng, ra.size * rb.size, p_out)
                srcs.append(ra[lin // max(rb.size, 1)])
                dsts.append(rb[lin % max(rb.size, 1)])
    src = np.concatenate(srcs) if srcs else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dsts) if dsts else np.empty(0, dtype=np.int64)
    g = DirectedGraph(n, src, dst)
    return (g, blocks) if return_blocks else g


def powerlaw_pmf(n: int, alpha: float) -> np.ndarray:
    """Truncated pmf ``c * k**-alpha`` on ``k = 1..n-1``."""
    k = np.arange(1, n, dtype=np.float64)
    w = k ** -float(alpha)
    return w / w.sum()


def gen_powerlaw(n: int, alpha: float = 2.5, seed=None) -> DirectedGraph:
    """Digraph whose in-degrees are i.i.d. truncated discrete power law.

    Node ``i`` draws its follower count ``k_i`` from ``P(k) ~ k**-alpha`` on
    ``1..n-1`` and then ``k_i`` distinct followers uniformly from the other
    nodes (sparse partial Fisher-Yates, O(k_i) per node).
    """
    if not alpha > 1.0:
        raise InvalidConfigError("alpha must exceed 1")
    rng = np.random.default_rng(seed)
    if n < 2:
        return DirectedGraph(n)
    pmf = powerlaw_pmf(n, alpha)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    deg = np.searchsorted(cdf, rng.random(n), side="right") + 1
    deg = np.minimum(deg, n - 1)
    total = int(deg.sum())
    u = rng.random(total)
    m = n - 1
    src = np.empty(total, dtype=np.int64)
    dst = np.repeat(np.arange(n, dtype=np.int64), deg)
    pos = 0
    for i in range(n):
        k = int(deg[i])
        swapped = {}
        for t in range(k):
            r = t + int(u[pos + t] * (m - t))
            pick = swapped.get(r, r)
            swapped[r] = swapped.get(t, t)
            src[pos + t] = pick
        pos += k
    src = src + (src >= dst)
    return DirectedGraph(n, src, dst)


# ---------------------------------------------------------------------------
# Path-based centralities
# ---------------------------------------------------------------------------

def _batch_size(n):
    return max(1, min(n, 2_000_000 // max(n, 1)))


def _bfs(g: DirectedGraph, sources: np.ndarray, count_paths: bool):
    """Level-synchronous BFS from a batch of sources along edge direction.

    Arrays are laid out nodes x sources.  Returns the flat indices of the
    entries reached at each level (level 0 holds the sources) and, if
    requested, the number of shortest paths ``sigma``.
    """
    n = g.n
    at = g.adjacency_csc.T.tocsr()  # at[w, v] = A[v, w]
    b = sources.size
    seen = np.zeros((n, b), dtype=bool)
    start = sources * b + np.arange(b)
    seen.flat[start] = True
    sigma = np.zeros((n, b)) if count_paths else None
    frontier = np.zeros((n, b))
    frontier.flat[start] = 1.0
    if count_paths:
        sigma.flat[start] = 1.0
    levels = [start]
    while True:
        reach = at @ frontier
        idx = np.flatnonzero((reach > 0) & ~seen)
        if idx.size == 0:
            break
        seen.flat[idx] = True
        frontier.flat[levels[-1]] = 0.0
        if count_paths:
            vals = reach.flat[idx]
            sigma.flat[idx] = vals
            frontier.flat[idx] = vals
        else:
            frontier.flat[idx] = 1.0
        levels.append(idx)
    return levels, sigma


def betweenness(g: DirectedGraph) -> np.ndarray:
    """Directed, unweighted, unnormalised betweenness (Brandes accumulation).

    For each ordered pair ``s != t`` with at least one shortest ``s -> t``
    path, every interior node ``v`` receives the fraction of those paths
    passing through it.
    """
    n = g.n
    bc = np.zeros(n)
    if n == 0 or g.n_edges == 0:
        return bc
    a = g.adjacency
    bs = _batch_size(n)
    for first in range(0, n, bs):
        sources = np.arange(first, min(n, first + bs))
        levels, sigma = _bfs(g, sources, count_paths=True)
        delta = np.zeros_like(sigma)
        coeff = np.zeros_like(sigma)
        for lev in range(len(levels) - 2, 0, -1):
            nxt = levels[lev + 1]
            coeff.flat[nxt] = (1.0 + delta.flat[nxt]) / sigma.flat[nxt]
            acc = a @ coeff
            coeff.flat[nxt] = 0.0
            cur = levels[lev]
            delta.flat[cur] = sigma.flat[cur] * acc.flat[cur]
        bc += delta.sum(axis=1)
    return bc


def harmonic(g: DirectedGraph) -> np.ndarray:
    """Harmonic centrality ``H(i) = sum_{j != i} 1 / d(j -> i)``.

    Distances follow edge direction (follower towards followee); unreachable
    pairs contribute zero.
    """
    n = g.n
    h = np.zeros(n)
    if n == 0 or g.n_edges == 0:
        return h
    bs = _batch_size(n)
    for first in range(0, n, bs):
        sources = np.arange(first, min(n, first + bs))
        b = sources.size
        levels, _ = _bfs(g, sources, count_paths=False)
        for lev in range(1, len(levels)):
            h += np.bincount(levels[lev] // b, minlength=n) / lev
    return h


def follower_loss(g: DirectedGraph, s) -> float:
    """Share of all follow edges that point at a node in ``s``."""
    s = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))
    if s.size == 0:
        return 0.0
    if g.n_edges == 0:
        raise EmptyGraphError("graph has no edges; follower loss undefined")
    return float(g.in_degree[s].sum() / g.n_edges)


# ---------------------------------------------------------------------------
# Edge-list files
# ---------------------------------------------------------------------------

_SPLIT = re.compile(r"[,\s]+")
_NODE_TAG = "#@node"
_HEADER_WORDS = {
    "src", "dst", "source", "target", "from", "to", "follower", "followee",
    "node", "node_id", "u", "v", "i", "j", "head", "tail",
}


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def read_edgelist(path) -> DirectedGraph:
    """Parse a ``SRC DST`` edge list into a labelled graph.

    Tokens are separated by whitespace or commas; ``#`` lines and blank lines
    are skipped.  Labels are assigned dense indices in first-appearance order.
    Self-loops are dropped and duplicate edges collapsed, each with a warning.
    A first line that looks like a column header is skipped with a warning.
    Comment lines of the form ``#@node LABEL`` (written by
    :func:`write_edgelist`) declare nodes up front, which preserves isolated
    nodes and index order on a round trip.
    """
    records = []
    declared: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith(_NODE_TAG):
                declared.append(line[len(_NODE_TAG):].strip())
                continue
            if not line or line.startswith("#"):
                continue
            toks = [t for t in _SPLIT.split(line) if t]
            if len(toks) != 2:
                raise DataError(f"expected 2 fields, got {len(toks)}", lineno=lineno)
            records.append((lineno, toks[0], toks[1]))
    if not records and not declared:
        raise DataError(f"{path}: no edges found")
    if not records:
        return DirectedGraph(len(declared), labels=declared)

    first = records[0]
    named = {first[1].lower(), first[2].lower()} <= _HEADER_WORDS
    numeric_rest = len(records) > 1 and all(
        _is_number(a) and _is_number(b) for _, a, b in records[1:]
    )
    if named or (numeric_rest and not (_is_number(first[1]) and _is_number(first[2]))):
        warnings.warn(f"{path}: treating line {first[0]} as a header", stacklevel=2)
        records = records[1:]
        if not records and not declared:
            raise DataError(f"{path}: no edges found")

    index: dict[str, int] = {lab: i for i, lab in enumerate(dict.fromkeys(declared))}
    src, dst = [], []
    loops = 0
    for _, a, b in records:
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        if ia == ib:
            loops += 1
            continue
        src.append(ia)
        dst.append(ib)
    if loops:
        warnings.warn(f"{path}: dropped {loops} self-loop(s)", stacklevel=2)
    n_pairs = len(src)
    g = DirectedGraph(len(index), src, dst, labels=list(index))
    if g.n_edges < n_pairs:
        warnings.warn(f"{path}: collapsed {n_pairs - g.n_edges} duplicate edge(s)", stacklevel=2)
    return g


def write_edgelist(g: DirectedGraph, path) -> None:
    """Write ``g`` as one ``SRC DST`` line per edge, in index order.

    Every node is first declared on a ``#@node LABEL`` comment line so that
    isolated nodes and the index order survive a round trip; other readers
    see only comments.
    """
    src, dst = g.edges()
    order = np.lexsort((dst, src))
    labels = g.labels
    with open(path, "w", encoding="utf-8") as fh:
        for lab in labels:
            fh.write(f"{_NODE_TAG} {lab}\n")
        for k in order:
            fh.write(f"{labels[src[k]]} {labels[dst[k]]}\n")
