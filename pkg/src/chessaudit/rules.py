"""The 15 instantiated sanity rules and violation reporting.

Families i and iii-viii are instantiated once per color; family ii (king
adjacency) is color-free. A board satisfying all 15 rules is called sane.
Each predicate reads the board in a single pass, so checking n boards is
O(n) with a fixed per-board constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .board import BoardState

RULESET_VERSION = "eq2-15rules-v1"

COUNTING_FAMILIES = ("i", "iii", "iv", "vi", "vii")
LOCALIZING_FAMILIES = ("ii", "v", "viii")
FAMILIES = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


class RuleCategory(Enum):
    COUNTING = "counting"
    LOCALIZING = "localizing"


@dataclass(frozen=True, order=True)
class RuleId:
    """A rule family plus the color it is instantiated for (None for ii)."""

    family: str
    color: str | None  # 'b', 'w', or None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown rule family {self.family!r}")
        if self.family == "ii":
            if self.color is not None:
                raise ValueError("rule ii is not color-instantiated")
        elif self.color not in ("b", "w"):
            raise ValueError(f"rule {self.family} needs color 'b' or 'w'")

    @property
    def id(self) -> str:
        return self.family if self.color is None else f"{self.family}.{self.color}"

    def __repr__(self) -> str:
        return f"RuleId({self.id})"


ALL_RULES: tuple[RuleId, ...] = tuple(
    RuleId(family, color)
    for family in FAMILIES
    for color in ((None,) if family == "ii" else ("b", "w"))
)

_RULES_BY_ID = {rule.id: rule for rule in ALL_RULES}


def rule_from_id(rule_id: str) -> RuleId:
    try:
        return _RULES_BY_ID[rule_id]
    except KeyError:
        raise ValueError(f"unknown rule id {rule_id!r}") from None


def category_of(rule: RuleId) -> RuleCategory:
    if rule.family in COUNTING_FAMILIES:
        return RuleCategory.COUNTING
    return RuleCategory.LOCALIZING


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[RuleId, ...]
    sane: bool
    violation_count: int


class _Summary:
    """Single-pass per-board tallies shared by all 15 predicates."""

    __slots__ = ("counts", "kings", "edge_pawn", "dark_bishops")

    def __init__(self, board: BoardState):
        counts = {p: 0 for p in "pnbrqkPNBRQK"}
        kings = {"b": [], "w": []}
        edge_pawn = {"b": False, "w": False}
        dark_bishops = {"b": 0, "w": 0}
        for i, cell in enumerate(board.cells):
            if cell == "x":
                continue
            counts[cell] += 1
            if cell == "k" or cell == "K":
                kings["b" if cell == "k" else "w"].append(i)
            elif cell == "p" or cell == "P":
                if i < 8 or i >= 56:
                    edge_pawn["b" if cell == "p" else "w"] = True
            elif cell == "b" or cell == "B":
                # cell i has file i%8, rank 7 - i//8; dark iff file+rank even.
                if (i % 8 + 7 - i // 8) % 2 == 0:
                    dark_bishops["b" if cell == "b" else "w"] += 1
        self.counts = counts
        self.kings = kings
        self.edge_pawn = edge_pawn
        self.dark_bishops = dark_bishops

    def count(self, piece: str, color: str) -> int:
        return self.counts[piece.lower() if color == "b" else piece.upper()]


def _kings_adjacent(summary: _Summary) -> bool:
    # Existential over all (k, K) pairs; vacuously fine if a color has none.
    for bi in summary.kings["b"]:
        bf, br = bi % 8, bi // 8
        for wi in summary.kings["w"]:
            if max(abs(bf - wi % 8), abs(br - wi // 8)) <= 1:
                return True
    return False


def _holds(summary: _Summary, rule: RuleId) -> bool:
    family, color = rule.family, rule.color
    if family == "ii":
        return not _kings_adjacent(summary)
    c = lambda piece: summary.count(piece, color)
    if family == "i":
        return c("k") == 1
    if family == "iii":
        return c("p") + c("q") + c("n") + c("b") + c("r") <= 15
    if family == "iv":
        return c("p") <= 8
    if family == "v":
        return not summary.edge_pawn[color]
    if family == "vi":
        if c("p") != 8:
            return True
        return c("q") <= 1 and c("b") <= 2 and c("n") <= 2 and c("r") <= 2
    if family == "vii":
        if c("p") >= 8:
            return True
        excess = (
            max(0, c("q") - 1)
            + max(0, c("b") - 2)
            + max(0, c("n") - 2)
            + max(0, c("r") - 2)
        )
        return excess <= 8 - c("p")
    if family == "viii":
        if c("p") != 8 or c("b") != 2:
            return True
        return summary.dark_bishops[color] == 1
    raise AssertionError(family)


def check_rule(board: BoardState, rule: RuleId) -> bool:
    """True iff the board satisfies the given rule."""
    return _holds(_Summary(board), rule)


def check(board: BoardState) -> ViolationReport:
    """Evaluate all 15 rules; the board is sane iff none is violated."""
    summary = _Summary(board)
    violations = tuple(r for r in ALL_RULES if not _holds(summary, r))
    return ViolationReport(
        violations=violations,
        sane=not violations,
        violation_count=len(violations),
    )
