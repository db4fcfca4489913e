"""Supervised detection of influential nodes in directed follower networks."""

from .errors import *  # noqa: F401,F403
from .netcore import (
    DirectedGraph,
    GeneratorSpec,
    betweenness,
    follower_loss,
    gen_er,
    gen_powerlaw,
    gen_sbm,
    generate,
    harmonic,
    in_degree,
    out_degree,
    read_edgelist,
    write_edgelist,
)
from .snir import (
    DesignContext,
    FitResult,
    ScreenConfig,
    SelectionPath,
    cmle,
    ebic,
    fit,
    forward_addition,
    full_objective,
    r_squared,
    rss,
    screen_candidates,
    select_model,
)

__version__ = "0.1.0"

from . import baselines, ext, simlab  # noqa: E402
