"""Coined quantum walks on arbitrary graphs, evolved without moving the walker.

The walker state is an N x N amplitude array over |node, coin>. The
translation step is a transposition of that array, so alternating the
orientation of the per-node coin applications (rows on odd steps,
columns on even steps) reproduces the walk with no translation at all.
Coins factor into N-1 uniform-interval pairwise-rotation stages, which
an optical-lattice simulation executes as flip / transport / rotate /
transport / flip pulse sequences.
"""

from .coins import CoinSet, CoinSpec, build_coin_set, masked_coin, named_coin, parse_coin_spec
from .costs import CostReport, cost_report, report_table, report_to_json
from .csd import (
    CsdFactor,
    CsdProgram,
    PulseSchedule,
    Rotation,
    Stage,
    compile_coin_set,
    compiled_coin_apply,
    csd_decompose,
    emit_schedule,
    execute_schedule,
    materialize,
    program_to_json,
    reconstruct,
    ruler_sequence,
    schedule_from_json,
    schedule_to_json,
)
from .engine import (
    EquivalenceReport,
    WalkResult,
    WalkRun,
    apply_coins_horizontal,
    apply_coins_vertical,
    run,
    step_explicit,
    verify_equivalence,
)
from .errors import (
    BadBlockSize,
    ContractViolation,
    DimensionMismatch,
    DimensionUnsupported,
    EmptyGraph,
    EquivalenceViolation,
    IndexCollision,
    IndexOutOfRange,
    InitialAmplitudeOnIsolatedState,
    InputError,
    NodeOutOfRange,
    NormViolation,
    NotPowerOfTwo,
    NotUnitary,
    ParseError,
    RemovalNotPresent,
    SiteOutOfRange,
    TransportOutOfRange,
    ValidationError,
    WalklessError,
)
from .graphs import (
    CoinDirections,
    Graph,
    coin_directions,
    complete_graph,
    parse_graph,
    random_graph,
    remove_edges,
    serialize_graph,
)
from .lattice import (
    LatticeConfig,
    LatticeState,
    PairProtocolTrace,
    ReadOut,
    execute_stage_on_lattice,
    lattice_to_csv,
    load_state,
    pair_interact,
    pair_interact_traced,
    read_out,
    stirap_rotate,
    transport,
)
from .states import (
    NodeDistribution,
    StateSpace,
    localized_state,
    node_distribution,
    state_from_csv,
    state_from_json,
    state_to_csv,
    state_to_json,
    transpose,
    uniform_state,
)

__version__ = "0.1.0"
