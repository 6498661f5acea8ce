"""Distributed 2-D skyline computation in the coordinator model."""

from .core import (
    DuplicatePointError,
    Point,
    Skyline,
    covers,
    dominates,
    skyline,
    skyline_bruteforce,
)
from .coordsim import CostReport, Message, Transcript, run_protocol, word_cost
from .horizontal import (
    HorizontalInstance,
    ParameterError,
    make_horizontal,
    run_naive,
    run_optimal,
    run_sorted,
    run_tradeoff,
)
from .vertical import VerticalInstance, join_instance, run_prune, run_vertical_naive, vertical_split
from .baselines import GridSpec, run_agids, run_fds
from .datagen import (
    GenSpec,
    gen_one_round_hard,
    gen_staircase,
    gen_synthetic,
    gen_vertical_disj,
    ingest_csv,
    partition,
)

__version__ = "0.1.0"
