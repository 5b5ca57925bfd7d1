"""PGN parsing and legal-move replay: game records to board-state streams.

Move application is fully legal (path obstruction, pins, castling-through-
check, en passant), since SAN disambiguation is defined over legal moves
only. Mainline moves only; variations, comments, and NAGs are skipped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .board import BoardState, Square, parse_fen, STARTING_FEN


class PgnError(ValueError):
    pass


class MalformedHeader(PgnError):
    pass


class UnterminatedComment(PgnError):
    pass


class EmptyInput(PgnError):
    pass


class SanError(ValueError):
    pass


class MalformedSan(SanError):
    pass


class IllegalMove(SanError):
    pass


class AmbiguousMove(SanError):
    pass


class ReplayError(ValueError):
    def __init__(self, ply: int, san: str, cause: Exception):
        super().__init__(f"ply {ply} ({san!r}): {cause}")
        self.ply = ply
        self.san = san


@dataclass(frozen=True)
class GameState:
    """A board plus the context needed to apply the next move."""

    board: BoardState
    side_to_move: str  # 'w' or 'b'
    castling_rights: frozenset[str]  # subset of {'K','Q','k','q'}
    en_passant_target: Square | None
    ply_index: int = 0


@dataclass(frozen=True)
class GameRecord:
    tags: dict[str, str]
    san_moves: tuple[str, ...]
    result: str


START_STATE = GameState(
    board=parse_fen(STARTING_FEN),
    side_to_move="w",
    castling_rights=frozenset("KQkq"),
    en_passant_target=None,
)

# Cells use FEN order: index = (7 - rank) * 8 + file.
_KNIGHT_STEPS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
_KING_STEPS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
_ROOK_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_BISHOP_DIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _idx(file: int, rank: int) -> int:
    return (7 - rank) * 8 + file


def _file_rank(idx: int) -> tuple[int, int]:
    return idx % 8, 7 - idx // 8


def _is_white(piece: str) -> bool:
    return piece.isupper()


def _own(piece: str, side: str) -> bool:
    return piece != "x" and (_is_white(piece) == (side == "w"))


@dataclass(frozen=True)
class Move:
    from_idx: int
    to_idx: int
    piece: str  # moving piece, as stored (case carries color)
    promotion: str | None = None  # 'q','r','b','n' type letter, uncased
    is_en_passant: bool = False
    castle: str | None = None  # 'K' or 'Q' side


def _attacked(cells: tuple[str, ...], target: int, by_side: str) -> bool:
    """Is `target` attacked by any piece of `by_side`?"""
    tf, tr = _file_rank(target)
    enemy = str.isupper if by_side == "w" else str.islower

    for df, dr in _KNIGHT_STEPS:
        f, r = tf + df, tr + dr
        if 0 <= f <= 7 and 0 <= r <= 7:
            p = cells[_idx(f, r)]
            if p != "x" and enemy(p) and p.lower() == "n":
                return True
    for df, dr in _KING_STEPS:
        f, r = tf + df, tr + dr
        if 0 <= f <= 7 and 0 <= r <= 7:
            p = cells[_idx(f, r)]
            if p != "x" and enemy(p) and p.lower() == "k":
                return True
    # Pawn attacks point toward the target from the attacker's side.
    pawn_dr = -1 if by_side == "w" else 1
    for df in (-1, 1):
        f, r = tf + df, tr + pawn_dr
        if 0 <= f <= 7 and 0 <= r <= 7:
            p = cells[_idx(f, r)]
            if p != "x" and enemy(p) and p.lower() == "p":
                return True
    for dirs, kinds in ((_ROOK_DIRS, "rq"), (_BISHOP_DIRS, "bq")):
        for df, dr in dirs:
            f, r = tf + df, tr + dr
            while 0 <= f <= 7 and 0 <= r <= 7:
                p = cells[_idx(f, r)]
                if p != "x":
                    if enemy(p) and p.lower() in kinds:
                        return True
                    break
                f += df
                r += dr
    return False


def _king_idx(cells: tuple[str, ...], side: str) -> int | None:
    king = "K" if side == "w" else "k"
    for i, p in enumerate(cells):
        if p == king:
            return i
    return None


def in_check(state: GameState, side: str) -> bool:
    king = _king_idx(state.board.cells, side)
    if king is None:
        return False
    return _attacked(state.board.cells, king, "b" if side == "w" else "w")


def _pseudo_moves(state: GameState) -> list[Move]:
    cells = state.board.cells
    side = state.side_to_move
    moves: list[Move] = []
    ep = state.en_passant_target
    ep_idx = _idx(ep.file, ep.rank) if ep is not None else -1

    for i, piece in enumerate(cells):
        if not _own(piece, side):
            continue
        f, r = _file_rank(i)
        kind = piece.lower()

        if kind == "p":
            forward = 1 if side == "w" else -1
            start_rank = 1 if side == "w" else 6
            promo_rank = 7 if side == "w" else 0
            one = r + forward
            if 0 <= one <= 7 and cells[_idx(f, one)] == "x":
                if one == promo_rank:
                    for promo in "qrbn":
                        moves.append(Move(i, _idx(f, one), piece, promotion=promo))
                else:
                    moves.append(Move(i, _idx(f, one), piece))
                if r == start_rank and cells[_idx(f, r + 2 * forward)] == "x":
                    moves.append(Move(i, _idx(f, r + 2 * forward), piece))
            for df in (-1, 1):
                cf = f + df
                if not (0 <= cf <= 7 and 0 <= one <= 7):
                    continue
                ti = _idx(cf, one)
                target = cells[ti]
                if target != "x" and not _own(target, side):
                    if one == promo_rank:
                        for promo in "qrbn":
                            moves.append(Move(i, ti, piece, promotion=promo))
                    else:
                        moves.append(Move(i, ti, piece))
                elif ti == ep_idx:
                    moves.append(Move(i, ti, piece, is_en_passant=True))
        elif kind == "n" or kind == "k":
            steps = _KNIGHT_STEPS if kind == "n" else _KING_STEPS
            for df, dr in steps:
                cf, cr = f + df, r + dr
                if 0 <= cf <= 7 and 0 <= cr <= 7:
                    ti = _idx(cf, cr)
                    if not _own(cells[ti], side):
                        moves.append(Move(i, ti, piece))
        else:
            dirs = _ROOK_DIRS if kind == "r" else _BISHOP_DIRS if kind == "b" else _ROOK_DIRS + _BISHOP_DIRS
            for df, dr in dirs:
                cf, cr = f + df, r + dr
                while 0 <= cf <= 7 and 0 <= cr <= 7:
                    ti = _idx(cf, cr)
                    target = cells[ti]
                    if target == "x":
                        moves.append(Move(i, ti, piece))
                    else:
                        if not _own(target, side):
                            moves.append(Move(i, ti, piece))
                        break
                    cf += df
                    cr += dr

    moves.extend(_castle_moves(state))
    return moves


def _castle_moves(state: GameState) -> list[Move]:
    cells = state.board.cells
    side = state.side_to_move
    opp = "b" if side == "w" else "w"
    home = 0 if side == "w" else 7  # rank index
    king_sq = _idx(4, home)
    king = "K" if side == "w" else "k"
    if cells[king_sq] != king:
        return []
    moves = []
    rights = state.castling_rights
    specs = (
        ("K" if side == "w" else "k", (5, 6), (5, 6), 6, "K"),
        ("Q" if side == "w" else "q", (1, 2, 3), (2, 3), 2, "Q"),
    )
    for right, empties, safe, king_to, tag in specs:
        if right not in rights:
            continue
        rook_file = 7 if tag == "K" else 0
        if cells[_idx(rook_file, home)] != ("R" if side == "w" else "r"):
            continue
        if any(cells[_idx(f, home)] != "x" for f in empties):
            continue
        if _attacked(cells, king_sq, opp):
            continue
        if any(_attacked(cells, _idx(f, home), opp) for f in safe):
            continue
        moves.append(Move(king_sq, _idx(king_to, home), king, castle=tag))
    return moves


def _apply_move(state: GameState, move: Move) -> GameState:
    cells = list(state.board.cells)
    side = state.side_to_move
    home = 0 if side == "w" else 7

    cells[move.from_idx] = "x"
    placed = move.piece
    if move.promotion:
        placed = move.promotion.upper() if side == "w" else move.promotion
    cells[move.to_idx] = placed

    if move.is_en_passant:
        f, r = _file_rank(move.to_idx)
        cells[_idx(f, r - (1 if side == "w" else -1))] = "x"
    if move.castle:
        rook_from = _idx(7 if move.castle == "K" else 0, home)
        rook_to = _idx(5 if move.castle == "K" else 3, home)
        cells[rook_from] = "x"
        cells[rook_to] = "R" if side == "w" else "r"

    rights = set(state.castling_rights)
    for sq, lost in (
        (_idx(4, 0), "KQ"), (_idx(0, 0), "Q"), (_idx(7, 0), "K"),
        (_idx(4, 7), "kq"), (_idx(0, 7), "q"), (_idx(7, 7), "k"),
    ):
        if sq in (move.from_idx, move.to_idx):
            rights.difference_update(lost)

    ep_target = None
    if move.piece.lower() == "p" and abs(move.from_idx - move.to_idx) == 16:
        f, r = _file_rank(move.from_idx)
        ep_target = Square(f, r + (1 if side == "w" else -1))

    return GameState(
        board=BoardState(tuple(cells)),
        side_to_move="b" if side == "w" else "w",
        castling_rights=frozenset(rights),
        en_passant_target=ep_target,
        ply_index=state.ply_index + 1,
    )


def legal_moves(state: GameState) -> list[Move]:
    side = state.side_to_move
    out = []
    for move in _pseudo_moves(state):
        if not in_check(_apply_move(state, move), side):
            out.append(move)
    return out


_SAN_PIECE_RE = re.compile(r"^([NBRQK])([a-h]?)([1-8]?)(x?)([a-h][1-8])$")
_SAN_PAWN_RE = re.compile(r"^([a-h]?)(x?)([a-h][1-8])(?:=?([NBRQ]))?$")
_SUFFIX_RE = re.compile(r"[+#!?]+$")


def _square_idx(name: str) -> int:
    return _idx(ord(name[0]) - ord("a"), int(name[1]) - 1)


def apply_san(state: GameState, san: str) -> GameState:
    """Apply one SAN token; raises if malformed, illegal, or ambiguous."""
    token = _SUFFIX_RE.sub("", san.strip())
    if not token:
        raise MalformedSan(f"empty SAN token {san!r}")

    if token in ("O-O", "0-0", "O-O-O", "0-0-0"):
        tag = "K" if token in ("O-O", "0-0") else "Q"
        for move in legal_moves(state):
            if move.castle == tag:
                return _apply_move(state, move)
        raise IllegalMove(f"{san!r}: castling not legal here")

    m = _SAN_PIECE_RE.match(token)
    if m:
        kind, from_file, from_rank, _, dest = m.groups()
        promo = None
        kind = kind.lower()
    else:
        m = _SAN_PAWN_RE.match(token)
        if not m:
            raise MalformedSan(f"cannot parse SAN token {san!r}")
        from_file, capture, dest, promo_ch = m.groups()
        # A bare-file pawn move ("e") or missing destination is malformed,
        # but the regex already guarantees a full destination square.
        from_rank = ""
        kind = "p"
        promo = promo_ch.lower() if promo_ch else None
        if capture and not from_file:
            raise MalformedSan(f"pawn capture without source file: {san!r}")

    dest_idx = _square_idx(dest)
    candidates = []
    for move in _pseudo_moves(state):
        if move.castle or move.piece.lower() != kind or move.to_idx != dest_idx:
            continue
        if kind == "p" and (move.promotion or None) != promo:
            continue
        f, r = _file_rank(move.from_idx)
        if from_file and f != ord(from_file) - ord("a"):
            continue
        if from_rank and r != int(from_rank) - 1:
            continue
        candidates.append(move)
    # Disambiguation is over legal moves, so drop illegal candidates
    # before deciding ambiguity.
    side = state.side_to_move
    matches = [m for m in candidates if not in_check(_apply_move(state, m), side)]

    if not matches:
        raise IllegalMove(f"no legal move matches {san!r}")
    if len(matches) > 1:
        raise AmbiguousMove(f"{san!r} matches {len(matches)} legal moves")
    return _apply_move(state, matches[0])


def move_to_san(state: GameState, move: Move, moves: list[Move] | None = None) -> str:
    """SAN for a legal move in `state`, with minimal disambiguation.

    `moves` may carry a precomputed legal_moves(state) result.
    """
    if move.castle:
        return "O-O" if move.castle == "K" else "O-O-O"
    cells = state.board.cells
    f, r = _file_rank(move.from_idx)
    dest = f"{chr(ord('a') + move.to_idx % 8)}{8 - move.to_idx // 8}"
    capture = cells[move.to_idx] != "x" or move.is_en_passant
    kind = move.piece.lower()
    if kind == "p":
        san = (f"{chr(ord('a') + f)}x" if capture else "") + dest
        if move.promotion:
            san += "=" + move.promotion.upper()
        return san
    if moves is None:
        moves = legal_moves(state)
    rivals = [
        m for m in moves
        if m.piece.lower() == kind and m.to_idx == move.to_idx
        and m.from_idx != move.from_idx
    ]
    disambig = ""
    if rivals:
        if all(_file_rank(m.from_idx)[0] != f for m in rivals):
            disambig = chr(ord("a") + f)
        elif all(_file_rank(m.from_idx)[1] != r for m in rivals):
            disambig = str(r + 1)
        else:
            disambig = f"{chr(ord('a') + f)}{r + 1}"
    return kind.upper() + disambig + ("x" if capture else "") + dest


_TAG_RE = re.compile(r'^\[\s*(\w+)\s+"((?:[^"\\]|\\.)*)"\s*\]\s*$')
_RESULTS = ("1-0", "0-1", "1/2-1/2", "*")
_MOVE_NUMBER_RE = re.compile(r"^\d+\.*$")


def _strip_comments(text: str) -> str:
    out = []
    depth = 0
    in_brace = False
    i = 0
    while i < len(text):
        ch = text[i]
        if in_brace:
            if ch == "}":
                in_brace = False
            i += 1
            continue
        if ch == "{":
            in_brace = True
            i += 1
            continue
        if ch == ";" and depth == 0:
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            depth += 1
            i += 1
            continue
        if ch == ")":
            depth = max(0, depth - 1)
            i += 1
            continue
        if depth == 0:
            out.append(ch)
        i += 1
    if in_brace:
        raise UnterminatedComment("unterminated { comment")
    return "".join(out)


def parse_pgn(text: str) -> list[GameRecord]:
    """Parse PGN export text into game records (mainline moves only)."""
    if not text.strip():
        raise EmptyInput("no PGN content")

    games: list[GameRecord] = []
    tags: dict[str, str] = {}
    movetext_parts: list[str] = []

    def flush():
        # A movetext chunk may hold several headerless games split by
        # result tokens; each result closes one game.
        nonlocal tags, movetext_parts
        if not tags and not movetext_parts:
            return
        moves: list[str] = []
        game_tags = tags
        for tok in _strip_comments(" ".join(movetext_parts)).split():
            if tok in _RESULTS:
                games.append(
                    GameRecord(tags=game_tags, san_moves=tuple(moves), result=tok)
                )
                moves = []
                game_tags = {}
                continue
            if _MOVE_NUMBER_RE.match(tok) or tok.startswith("$"):
                continue
            tok = re.sub(r"^\d+\.+", "", tok)  # glued "1.e4" / "1...e5"
            if tok:
                moves.append(tok)
        if moves or game_tags:
            games.append(GameRecord(tags=game_tags, san_moves=tuple(moves), result="*"))
        tags = {}
        movetext_parts = []

    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("["):
            m = _TAG_RE.match(stripped)
            if m:
                if movetext_parts:
                    flush()
                tags[m.group(1)] = m.group(2)
                continue
            if not movetext_parts:
                raise MalformedHeader(f"bad tag pair: {stripped!r}")
            # Unparseable bracket inside movetext: treat as movetext.
        if stripped:
            movetext_parts.append(stripped)

    flush()
    if not games:
        raise EmptyInput("no games found")
    return games


def replay(record: GameRecord) -> list[BoardState]:
    """Board state after each ply, replayed from the standard start."""
    state = START_STATE
    states = []
    for i, san in enumerate(record.san_moves):
        try:
            state = apply_san(state, san)
        except SanError as exc:
            raise ReplayError(ply=i + 1, san=san, cause=exc) from exc
        states.append(state.board)
    return states
