"""Chess board-state sanity checking and prediction-coherence metrics."""

from .board import (
    BoardState,
    PieceCount,
    Square,
    PIECE_CLASSES,
    STARTING_FEN,
    board_from_codes,
    board_to_codes,
    locate,
    parse_fen,
    piece_count,
    to_fen,
)
from .rules import (
    ALL_RULES,
    RULESET_VERSION,
    RuleCategory,
    RuleId,
    ViolationReport,
    category_of,
    check,
    check_rule,
    rule_from_id,
)
from .metrics import (
    EvalReport,
    EvalSet,
    adjusted_likelihood,
    category_prevalence,
    contradiction_pct,
    evaluate,
    exact_match,
    f1,
    mean_violations,
    pair_f1,
    per_rule_frequency,
    sane_f1,
)
from .replay import (
    GameRecord,
    GameState,
    START_STATE,
    apply_san,
    legal_moves,
    move_to_san,
    parse_pgn,
    replay,
)
from .baseline import (
    BaselineEstimate,
    analytic_frequency,
    estimate_random_frequencies,
    sample_uniform_board,
)

__version__ = "0.1.0"
