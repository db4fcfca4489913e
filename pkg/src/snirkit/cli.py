"""
Command-line entry point.

Subcommands: ``fit``, ``simulate``, ``generate``, ``centrality``,
``compare``, ``sweep`` and ``dynamic``.  Exit status is 0 on success, 1 on a
usage error and 2 on a data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import compare_methods
from .errors import DataError, SnirError
from .ext import PeriodSplit, dynamic_fit, profile_covariates
from .netcore import (
    DirectedGraph,
    GeneratorSpec,
    betweenness,
    generate,
    harmonic,
    read_edgelist,
    write_edgelist,
)
from .simlab import TruthPlan, run_study, snr_sweep
from .snir import ScreenConfig, fit, screen_candidates

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("snirkit")

COMMANDS = ("fit", "simulate", "generate", "centrality", "compare", "sweep", "dynamic")
STUDY_COLUMNS = ("setting", "N", "S1", "TPR", "FPR", "CFP", "Err", "secs_per_fit")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Fully resolved options for one invocation (echoed into reports)."""

    command: str
    edges: str | None = None
    responses: str | None = None
    response_col: str | None = None
    log: bool = False
    missing: str = "error"
    covariates: str | None = None
    periods: str | None = None
    gamma: float | None = 2.0 / 3.0
    m: int | None = None
    K: int | None = None
    seed: int = 0
    reps: int = 100
    preset: str | None = None
    n: int | None = None
    s1: int = 10
    sigma: float = 1.0
    config: str | None = None
    out: str | None = None
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self):
        need = {
            "fit": ("edges", "responses"),
            "compare": ("edges", "responses"),
            "sweep": ("edges", "responses"),
            "dynamic": ("edges", "responses", "periods"),
            "centrality": ("edges",),
        }
        for name in need.get(self.command, ()):
            if getattr(self, name) is None:
                raise UsageError(f"{self.command} requires --{name.replace('_', '-')}")
        if self.command in ("generate", "simulate") and self.config is None:
            if self.preset is None or self.n is None:
                raise UsageError(f"{self.command} requires --preset and --n")
        if self.m is None and self.gamma is not None and not 0 < self.gamma <= 1:
            raise UsageError("--gamma must lie in (0, 1]")
        if self.m is not None and self.m < 1:
            raise UsageError("--m must be at least 1")
        if self.reps < 1:
            raise UsageError("--reps must be at least 1")
        if self.missing not in ("error", "zero"):
            raise UsageError("--missing must be 'error' or 'zero'")

    def screen(self) -> ScreenConfig:
        return ScreenConfig(m=self.m) if self.m is not None else ScreenConfig(gamma=self.gamma)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# file loading
# ---------------------------------------------------------------------------

def load_network(path) -> DirectedGraph:
    """Read an edge list; see :func:`snirkit.netcore.read_edgelist`."""
    p = Path(path)
    if not p.is_file():
        raise DataError(f"{path}: no such file")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = read_edgelist(p)
    for w in caught:
        log.warning("%s", w.message)
        warnings.warn(w.message, UserWarning, stacklevel=2)
    return g


def _is_float(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def _read_table(path):
    """Rows of a CSV whose first column is a node id; header detected."""
    p = Path(path)
    if not p.is_file():
        raise DataError(f"{path}: no such file")
    with open(p, newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1)
                if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = None
    first = rows[0][1]
    if len(first) > 1 and not all(_is_float(c) for c in first[1:]):
        header = [c.strip() for c in first]
        rows = rows[1:]
    return header, rows


def _align(g: DirectedGraph, path, rows, width, missing):
    index = {lab: i for i, lab in enumerate(g.labels)}
    out = np.full((g.n, width), np.nan)
    unknown = 0
    for lineno, r in rows:
        if len(r) < width + 1:
            raise DataError(f"{path}: expected {width + 1} fields", lineno=lineno)
        node = r[0].strip()
        if node not in index:
            unknown += 1
            continue
        try:
            out[index[node]] = [float(c) for c in r[1:width + 1]]
        except ValueError:
            raise DataError(f"{path}: non-numeric value", lineno=lineno) from None
    if unknown:
        log.warning("%s: %d rows name nodes absent from the network", path, unknown)
    gaps = np.isnan(out).any(axis=1)
    n_missing = int(gaps.sum())
    if n_missing:
        if missing != "zero":
            first = g.labels[int(np.flatnonzero(gaps)[0])]
            raise DataError(f"{path}: {n_missing} nodes have no value (first: {first!r}); "
                            "use --missing zero to fill")
        out[gaps] = 0.0
        log.warning("%s: filled %d missing nodes with 0", path, n_missing)
    return out, n_missing


def load_responses(path, g: DirectedGraph, column: str | None = None, log1p: bool = False,
                   missing: str = "error") -> tuple[np.ndarray, int]:
    """Response vector aligned to the graph's nodes.

    Returns the vector and the number of nodes filled under ``missing="zero"``.
    """
    header, rows = _read_table(path)
    col = 1
    if column is not None:
        if header is None:
            if column.isdigit():
                col = int(column)
            else:
                raise DataError(f"{path}: no header row to look up column {column!r}")
        elif column in header:
            col = header.index(column)
        else:
            raise DataError(f"{path}: column {column!r} not in header {header}")
    if col < 1:
        raise DataError("response column cannot be the node id column")
    sel = [(i, [r[0], r[col]] if len(r) > col else r[:1]) for i, r in rows]
    y, filled = _align(g, path, sel, 1, missing)
    y = y[:, 0]
    if log1p:
        if np.any(y <= -1):
            raise DataError(f"{path}: log1p needs values above -1")
        y = np.log1p(y)
    return y, filled


def load_matrix(path, g: DirectedGraph) -> np.ndarray:
    header, rows = _read_table(path)
    width = len(rows[0][1]) - 1
    if width < 1:
        raise DataError(f"{path}: needs at least one value column")
    return _align(g, path, rows, width, "error")[0]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _write(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _load_xy(cfg: RunConfig):
    g = load_network(cfg.edges)
    y, filled = load_responses(cfg.responses, g, cfg.response_col, cfg.log, cfg.missing)
    cfg.extra["filled_missing"] = filled
    if cfg.covariates:
        y = profile_covariates(y, load_matrix(cfg.covariates, g))
    return g, y


def cmd_fit(cfg: RunConfig) -> int:
    g, y = _load_xy(cfg)
    res = fit(g, y, screen=cfg.screen(), K=cfg.K)
    report = res.to_dict()
    report["config"] = cfg.to_dict()
    print(res.coef_table(), file=sys.stderr if not cfg.out else sys.stdout)
    _write(cfg, _json(report))
    return 0


def _plan_from(cfg: RunConfig, doc: dict) -> tuple[GeneratorSpec, TruthPlan, int, int]:
    gen = doc.get("generator", {})
    kind = gen.get("kind", cfg.preset)
    n = int(gen.get("n", cfg.n))
    spec = GeneratorSpec(kind, n, dict(gen.get("params", {})))
    truth = dict(doc.get("truth", {}))
    truth.setdefault("size", cfg.s1)
    truth.setdefault("sigma", cfg.sigma)
    if "hetero" in truth and truth["hetero"] is not None:
        truth["hetero"] = tuple(truth["hetero"])
    if "beta" in truth and truth["beta"] is not None:
        truth["beta"] = tuple(truth["beta"])
    fit_kw = doc.get("fit", {})
    gamma = fit_kw.get("gamma", cfg.gamma)
    m = fit_kw.get("m", cfg.m)
    screen = ScreenConfig(m=m) if m is not None else ScreenConfig(gamma=gamma)
    plan = TruthPlan(screen=screen, K=fit_kw.get("K", cfg.K), **truth)
    return spec, plan, int(doc.get("reps", cfg.reps)), int(doc.get("seed", cfg.seed))


def load_study_config(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"{path}: no such file")
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(p.read_text(encoding="utf-8"))
        return json.loads(p.read_text(encoding="utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as e:
        raise DataError(f"{path}: {e}") from None


def cmd_simulate(cfg: RunConfig) -> int:
    doc = load_study_config(cfg.config) if cfg.config else {}
    try:
        spec, plan, reps, seed = _plan_from(cfg, doc)
    except TypeError as e:
        raise UsageError(f"bad study config: {e}") from None
    res = run_study(spec, plan, reps, seed, workers=cfg.threads)
    row = res.row(doc.get("setting", spec.kind))
    lines = [",".join(STUDY_COLUMNS)]
    lines.append(",".join(
        f"{row[c]:.6g}" if isinstance(row[c], float) else str(row[c]) for c in STUDY_COLUMNS
    ))
    _write(cfg, "\n".join(lines) + "\n")
    log.info("failed replications re-drawn: %d", res.failures)
    return 0


def cmd_generate(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise UsageError("generate requires --out")
    g = generate(GeneratorSpec(cfg.preset, cfg.n), seed=cfg.seed)
    write_edgelist(g, cfg.out)
    return 0


def cmd_centrality(cfg: RunConfig) -> int:
    g = load_network(cfg.edges)
    bt, hm = betweenness(g), harmonic(g)
    lines = ["node,in_degree,out_degree,betweenness,harmonic"]
    for i, lab in enumerate(g.labels):
        lines.append(f"{lab},{g.in_degree[i]},{g.out_degree[i]},{bt[i]:.10g},{hm[i]:.10g}")
    _write(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    g, y = _load_xy(cfg)
    rep = compare_methods(g, y, screen=cfg.screen(), K=cfg.K)
    payload = rep.to_dict()
    payload["config"] = cfg.to_dict()
    _write(cfg, _json(payload))
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    g, y = _load_xy(cfg)
    base = fit(g, y, screen=cfg.screen(), K=cfg.K)
    res = snr_sweep(g, y, base, reps=cfg.reps, seed=cfg.seed, sigma=cfg.sigma, screen=cfg.screen())
    lines = ["coef,detection"] + [f"{c:.6g},{d:.6g}" for c, d in zip(res.coef, res.detection)]
    _write(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_dynamic(cfg: RunConfig) -> int:
    g, y = _load_xy(cfg)
    per = load_matrix(cfg.periods, g)[:, 0]
    split = PeriodSplit.from_periods(per.astype(int), screen_candidates(g, cfg.screen()))
    first, second = dynamic_fit(g, y, split, K=cfg.K)
    payload = {"period1": first.to_dict(), "period2": second.to_dict(), "config": cfg.to_dict()}
    _write(cfg, _json(payload))
    return 0


HANDLERS = {
    "fit": cmd_fit, "simulate": cmd_simulate, "generate": cmd_generate,
    "centrality": cmd_centrality, "compare": cmd_compare, "sweep": cmd_sweep,
    "dynamic": cmd_dynamic,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--edges", help="edge list: one 'SRC DST' per line")
    common.add_argument("--responses", help="CSV: node_id followed by response columns")
    common.add_argument("--response-col", dest="response_col", help="response column name")
    common.add_argument("--log", action="store_true", help="apply log1p to responses")
    common.add_argument("--missing", default="error", choices=("error", "zero"),
                        help="policy for nodes without a response")
    common.add_argument("--covariates", help="CSV: node_id then p covariate columns")
    common.add_argument("--periods", help="CSV: node_id, period (1 or 2)")
    scr = common.add_mutually_exclusive_group()
    scr.add_argument("--gamma", type=float, default=2.0 / 3.0,
                     help="keep floor(N**gamma) top in-degree candidates "
                          "(default 2/3; theory suggests at least 5/9)")
    scr.add_argument("--m", type=int, help="explicit candidate count")
    common.add_argument("--K", type=int, help="minimum path length (default floor(N**(5/9)))")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--reps", type=int, default=100)
    common.add_argument("--preset", choices=("er", "sbm", "powerlaw"))
    common.add_argument("--n", type=int, help="node count for generated networks")
    common.add_argument("--s1", type=int, default=10, help="number of influential nodes")
    common.add_argument("--sigma", type=float, default=1.0, help="noise sd")
    common.add_argument("--config", help="study config (JSON or TOML)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="snirkit", description="Find response-specific influential nodes.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    helps = {
        "fit": "screen, select and estimate influential nodes",
        "simulate": "Monte Carlo recovery study on a synthetic network",
        "generate": "write a synthetic network as an edge list",
        "centrality": "in/out degree, betweenness and harmonic centrality",
        "compare": "removal impact of each selection rule",
        "sweep": "detection rate of an added node versus its coefficient",
        "dynamic": "two-period selection",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _threads() -> int:
    raw = os.environ.get("SNIRKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"SNIRKIT_THREADS={raw!r} is not an integer") from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("a command is required")
        opts = vars(ns)
        verbose = opts.pop("verbose")
        logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        cfg = RunConfig(threads=_threads(), **opts)
        if cfg.m is not None:
            cfg.gamma = None
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except UsageError as e:
        print(f"snirkit: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return 0 if not e.code else 1
    except (DataError, SnirError, OSError) as e:
        print(f"snirkit: data error: {e}", file=sys.stderr)
        return 2
