"""Array-form wrapper around chessaudit for ML workflows.

Boards are sequences of 64 integer class codes in rank-8-to-rank-1,
file-A-to-H order. The code table is fixed:

    0 = empty, 1..6 = black p n b r q k, 7..12 = white P N B R Q K

No file I/O here; everything operates on in-memory arrays and returns
plain dicts matching the core CLI's report schema.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from chessaudit import (
    BoardState,
    EvalSet,
    board_from_codes,
    check,
    evaluate,
)
from chessaudit.metrics import EmptySet

__all__ = [
    "CLASS_CODES",
    "BadCode",
    "BadLength",
    "EmptySet",
    "LengthMismatch",
    "bound_check",
    "bound_eval",
]

# piece class -> code, frozen; index order matches chessaudit.PIECE_CLASSES
CLASS_CODES = {
    "x": 0,
    "p": 1, "n": 2, "b": 3, "r": 4, "q": 5, "k": 6,
    "P": 7, "N": 8, "B": 9, "R": 10, "Q": 11, "K": 12,
}


class BadLength(ValueError):
    pass


class BadCode(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def _to_board(codes: Sequence[int]) -> BoardState:
    codes = [int(c) for c in codes]
    if len(codes) != 64:
        raise BadLength(f"expected 64 class codes, got {len(codes)}")
    for c in codes:
        if not 0 <= c <= 12:
            raise BadCode(f"class code out of range: {c}")
    return board_from_codes(codes)


def bound_check(board: Sequence[int]) -> tuple[bool, list[str]]:
    """Sanity-check one array-form board.

    Returns (sane, violated rule-id strings), identical to the core
    checker on the equivalent FEN.
    """
    report = check(_to_board(board))
    return report.sane, [rule.id for rule in report.violations]


def bound_eval(
    truth: Iterable[Sequence[int]], pred: Iterable[Sequence[int]]
) -> dict:
    """Evaluate aligned array-form board lists.

    Returns the same JSON-shaped report as the core `eval` command.
    """
    truth_boards = [_to_board(b) for b in truth]
    pred_boards = [_to_board(b) for b in pred]
    if len(truth_boards) != len(pred_boards):
        raise LengthMismatch(
            f"{len(truth_boards)} truth boards vs {len(pred_boards)} predictions"
        )
    if not truth_boards:
        raise EmptySet("no boards to evaluate")
    eval_set = EvalSet(tuple(zip(truth_boards, pred_boards)))
    return evaluate(eval_set).to_json()
