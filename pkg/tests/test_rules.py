import pytest
from hypothesis import given
from hypothesis import strategies as st

from chessaudit.board import BoardState, PIECE_CLASSES, parse_fen
from chessaudit.rules import (
    ALL_RULES,
    RuleCategory,
    RuleId,
    category_of,
    check,
    check_rule,
    rule_from_id,
)

from conftest import place

FIG_LEFT = "r1bqk2r/ppppbN1p/2n2np1/4p3/2B1P3/3P4/PPP2PPP/RNBQK2R"
FIG_RIGHT = "8/8/2k3P1/8/5K2/6R1/5r2/8"

boards = st.lists(
    st.sampled_from(PIECE_CLASSES), min_size=64, max_size=64
).map(lambda cells: BoardState(tuple(cells)))


class TestRuleId:
    def test_fifteen_rules(self):
        assert len(ALL_RULES) == 15
        assert len(set(ALL_RULES)) == 15

    def test_serialization(self):
        assert RuleId("i", "b").id == "i.b"
        assert RuleId("ii", None).id == "ii"
        assert rule_from_id("viii.w") == RuleId("viii", "w")

    def test_ii_is_not_colored(self):
        with pytest.raises(ValueError):
            RuleId("ii", "b")
        with pytest.raises(ValueError):
            RuleId("i", None)


class TestCategories:
    def test_partition(self):
        counting = {r for r in ALL_RULES if category_of(r) is RuleCategory.COUNTING}
        localizing = {r for r in ALL_RULES if category_of(r) is RuleCategory.LOCALIZING}
        assert {r.family for r in counting} == {"i", "iii", "iv", "vi", "vii"}
        assert {r.family for r in localizing} == {"ii", "v", "viii"}
        assert counting | localizing == set(ALL_RULES)

    def test_spec_examples(self):
        assert category_of(rule_from_id("i.b")) is RuleCategory.COUNTING
        assert category_of(rule_from_id("viii.w")) is RuleCategory.LOCALIZING
        assert category_of(rule_from_id("ii")) is RuleCategory.LOCALIZING


class TestCheckRule:
    def test_starting_state_satisfies_all(self):
        board = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR")
        assert all(check_rule(board, r) for r in ALL_RULES)

    def test_adjacent_kings(self):
        board = parse_fen("8/8/8/3kK3/8/8/8/8")
        assert not check_rule(board, rule_from_id("ii"))

    def test_black_pawn_on_first_rank(self):
        board = parse_fen("8/8/8/8/8/8/8/p7")
        assert not check_rule(board, rule_from_id("v.b"))
        assert check_rule(board, rule_from_id("v.w"))

    def test_fig1_left_all_rules_pass(self):
        board = parse_fen(FIG_LEFT)
        for rule in ALL_RULES:
            assert check_rule(board, rule), rule.id

    def test_missing_king_vacuous_adjacency(self):
        # No black king: rule ii holds vacuously, rule i.b reports it.
        board = place({"e1": "K"})
        assert check_rule(board, rule_from_id("ii"))
        assert not check_rule(board, rule_from_id("i.b"))

    def test_adjacency_existential_with_extra_kings(self):
        board = place({"a1": "k", "h8": "k", "h7": "K"})
        assert not check_rule(board, rule_from_id("ii"))


class TestCheck:
    def test_starting_state_sane(self):
        report = check(parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR"))
        assert report.sane
        assert report.violation_count == 0

    def test_two_white_kings_no_black(self):
        report = check(place({"a1": "K", "h8": "K"}))
        ids = {r.id for r in report.violations}
        assert {"i.b", "i.w"} <= ids

    def test_fig1_right_sane(self):
        assert check(parse_fen(FIG_RIGHT)).sane

    @given(boards)
    def test_agrees_with_check_rule(self, board):
        report = check(board)
        for rule in ALL_RULES:
            assert (rule in report.violations) == (not check_rule(board, rule))

    @given(boards)
    def test_report_consistency(self, board):
        report = check(board)
        assert report.sane == (not report.violations)
        assert report.violation_count == len(report.violations)
        assert len(set(report.violations)) == len(report.violations)


def _mirror(board: BoardState) -> BoardState:
    """Swap colors and flip ranks."""
    cells = list(board.cells)
    flipped = []
    for row in range(7, -1, -1):
        flipped.extend(cells[row * 8 : row * 8 + 8])
    return BoardState(tuple(c.swapcase() if c != "x" else c for c in flipped))


def _mirror_rule(rule: RuleId) -> RuleId:
    if rule.color is None:
        return rule
    return RuleId(rule.family, "w" if rule.color == "b" else "b")


class TestColorSymmetry:
    @given(boards)
    def test_mirror_maps_violations(self, board):
        direct = {r.id for r in check(board).violations}
        mirrored = {_mirror_rule(r).id for r in check(_mirror(board)).violations}
        assert direct == mirrored


# Boards constructed to trip one rule with a minimal violation set. Rule
# iii cannot be tripped alone: any board with >15 same-color non-king
# pieces necessarily breaks iv, vi, or vii as well (here: iv).
SINGLE_VIOLATION_FIXTURES = {
    "i.b": (place({"e1": "K"}), {"i.b"}),
    "i.w": (place({"a8": "k", "e1": "K", "h4": "K"}), {"i.w"}),
    "ii": (place({"d5": "k", "e5": "K"}), {"ii"}),
    "iii.b": (
        place(
            {
                "e1": "K", "e8": "k",
                # 9 pawns + q + 2b + 2n + 2r = 16 non-king black pieces
                "a7": "p", "b7": "p", "c7": "p", "d7": "p", "e7": "p",
                "f7": "p", "g7": "p", "h7": "p", "a6": "p",
                "d8": "q", "c8": "b", "f8": "b", "b8": "n", "g8": "n",
                "a8": "r", "h8": "r",
            }
        ),
        {"iii.b", "iv.b"},
    ),
    "iii.w": (
        place(
            {
                "e1": "K", "e8": "k",
                "a2": "P", "b2": "P", "c2": "P", "d2": "P", "e2": "P",
                "f2": "P", "g2": "P", "h2": "P", "a3": "P",
                "d1": "Q", "c1": "B", "f1": "B", "b1": "N", "g1": "N",
                "a1": "R", "h1": "R",
            }
        ),
        {"iii.w", "iv.w"},
    ),
    "iv.b": (
        place(
            {
                "e1": "K", "e8": "k",
                "a7": "p", "b7": "p", "c7": "p", "d7": "p", "e7": "p",
                "f7": "p", "g7": "p", "h7": "p", "a6": "p",
            }
        ),
        {"iv.b"},
    ),
    "iv.w": (
        place(
            {
                "e1": "K", "e8": "k",
                "a2": "P", "b2": "P", "c2": "P", "d2": "P", "e2": "P",
                "f2": "P", "g2": "P", "h2": "P", "a3": "P",
            }
        ),
        {"iv.w"},
    ),
    "v.b": (place({"e1": "K", "e8": "k", "a1": "p"}), {"v.b"}),
    "v.w": (place({"e1": "K", "e8": "k", "a8": "P"}), {"v.w"}),
    "vi.b": (
        place(
            {
                "e1": "K", "e8": "k",
                "a7": "p", "b7": "p", "c7": "p", "d7": "p", "e7": "p",
                "f7": "p", "g7": "p", "h7": "p",
                "d8": "q", "c5": "q",
            }
        ),
        {"vi.b"},
    ),
    "vi.w": (
        place(
            {
                "e1": "K", "e8": "k",
                "a2": "P", "b2": "P", "c2": "P", "d2": "P", "e2": "P",
                "f2": "P", "g2": "P", "h2": "P",
                "d1": "Q", "c4": "Q",
            }
        ),
        {"vi.w"},
    ),
    "vii.b": (
        place(
            {
                "e1": "K", "e8": "k",
                "a7": "p", "b7": "p", "c7": "p", "d7": "p", "e7": "p",
                "f7": "p", "g7": "p",
                # 7 pawns, 3 queens: excess 2 > 8 - 7
                "d8": "q", "c5": "q", "f5": "q",
            }
        ),
        {"vii.b"},
    ),
    "vii.w": (
        place(
            {
                "e1": "K", "e8": "k",
                "a2": "P", "b2": "P", "c2": "P", "d2": "P", "e2": "P",
                "f2": "P", "g2": "P",
                "d1": "Q", "c4": "Q", "f4": "Q",
            }
        ),
        {"vii.w"},
    ),
    "viii.b": (
        place(
            {
                "e1": "K", "e8": "k",
                "a7": "p", "b7": "p", "c7": "p", "d7": "p", "e7": "p",
                "f7": "p", "g7": "p", "h7": "p",
                # a8 and c8 are both light squares
                "a8": "b", "c8": "b",
            }
        ),
        {"viii.b"},
    ),
    "viii.w": (
        place(
            {
                "e1": "K", "e8": "k",
                "a2": "P", "b2": "P", "c2": "P", "d2": "P", "e2": "P",
                "f2": "P", "g2": "P", "h2": "P",
                # c1 and e3 are both dark squares
                "c1": "B", "e3": "B",
            }
        ),
        {"viii.w"},
    ),
}


class TestSingleViolationFixtures:
    @pytest.mark.parametrize("rule_id", sorted(SINGLE_VIOLATION_FIXTURES))
    def test_fixture_trips_expected_rules(self, rule_id):
        board, expected = SINGLE_VIOLATION_FIXTURES[rule_id]
        violated = {r.id for r in check(board).violations}
        assert violated == expected
        assert rule_id in violated
