"""Board value types and FEN placement parsing/serialization.

A board is an arbitrary assignment of one of 13 piece classes to each of
the 64 squares; no validity or sanity is assumed at this layer.
"""

from __future__ import annotations

from dataclasses import dataclass

# The 13 piece classes. 'x' is the empty square; lowercase = black,
# uppercase = white. Index in this string is the class code used by the
# array interchange format (0 = empty, 1..6 = black pnbrqk, 7..12 = white).
PIECE_CLASSES = "xpnbrqkPNBRQK"
EMPTY = "x"
CLASS_CODES = {piece: code for code, piece in enumerate(PIECE_CLASSES)}

BLACK_PIECES = "pnbrqk"
WHITE_PIECES = "PNBRQK"

_FEN_CHARS = set("pnbrqkPNBRQK12345678")

FILES = "ABCDEFGH"


class FenError(ValueError):
    """Base class for FEN placement parse failures."""


class IllegalCharacter(FenError):
    pass


class BadRankCount(FenError):
    pass


class BadRankWidth(FenError):
    pass


@dataclass(frozen=True, order=True)
class Square:
    """A board coordinate. file 0..7 = A..H, rank 0..7 = 1..8."""

    file: int
    rank: int

    def __post_init__(self):
        if not (0 <= self.file <= 7 and 0 <= self.rank <= 7):
            raise ValueError(f"square out of range: file={self.file} rank={self.rank}")

    @property
    def name(self) -> str:
        return f"{FILES[self.file]}{self.rank + 1}"

    def is_dark(self) -> bool:
        # A1 (file 0, rank 0) is dark.
        return (self.file + self.rank) % 2 == 0

    def __repr__(self) -> str:
        return f"Square({self.name})"


def _cell_index(square: Square) -> int:
    # Cells are stored in FEN order: rank 8 first, files A..H within a rank.
    return (7 - square.rank) * 8 + square.file


@dataclass(frozen=True)
class BoardState:
    """64 piece classes in FEN cell order (rank 8 -> rank 1, file A -> H)."""

    cells: tuple[str, ...]

    def __post_init__(self):
        if len(self.cells) != 64:
            raise ValueError(f"board needs 64 cells, got {len(self.cells)}")
        for cell in self.cells:
            if cell not in CLASS_CODES:
                raise ValueError(f"unknown piece class {cell!r}")

    def at(self, square: Square) -> str:
        return self.cells[_cell_index(square)]

    def __repr__(self) -> str:
        return f"BoardState({to_fen(self)!r})"


@dataclass(frozen=True)
class PieceCount:
    """Occurrence count of each of the 13 classes; totals 64."""

    counts: tuple[int, ...]

    def __getitem__(self, piece: str) -> int:
        return self.counts[CLASS_CODES[piece]]

    def total(self) -> int:
        return sum(self.counts)


def parse_fen(text: str) -> BoardState:
    """Parse a FEN placement string (or the first field of a full record).

    Lenient on non-canonical digit runs ("44" == 8 empties); strict on
    alphabet, rank count, and rank width.
    """
    placement = text.split()[0] if text.split() else ""
    ranks = placement.split("/")
    if len(ranks) != 8:
        raise BadRankCount(f"expected 8 ranks, got {len(ranks)}: {placement!r}")
    cells: list[str] = []
    for group in ranks:
        width = 0
        for ch in group:
            if ch.isdigit() and ch != "0":
                cells.extend(EMPTY * int(ch))
                width += int(ch)
            elif ch in _FEN_CHARS:
                cells.append(ch)
                width += 1
            else:
                raise IllegalCharacter(f"illegal character {ch!r} in {placement!r}")
        if width != 8:
            raise BadRankWidth(f"rank {group!r} expands to {width} cells, expected 8")
    return BoardState(tuple(cells))


def to_fen(board: BoardState) -> str:
    """Canonical placement string: maximal digit runs, ranks 8 -> 1."""
    ranks = []
    for r in range(8):
        row = board.cells[r * 8 : r * 8 + 8]
        out = []
        run = 0
        for cell in row:
            if cell == EMPTY:
                run += 1
            else:
                if run:
                    out.append(str(run))
                    run = 0
                out.append(cell)
        if run:
            out.append(str(run))
        ranks.append("".join(out))
    return "/".join(ranks)


def piece_count(board: BoardState) -> PieceCount:
    counts = [0] * 13
    for cell in board.cells:
        counts[CLASS_CODES[cell]] += 1
    return PieceCount(tuple(counts))


def locate(board: BoardState, piece: str) -> list[Square]:
    """All squares holding the given non-empty class, file-then-rank order."""
    if piece == EMPTY or piece not in CLASS_CODES:
        raise ValueError(f"locate needs a non-empty piece class, got {piece!r}")
    found = []
    for i, cell in enumerate(board.cells):
        if cell == piece:
            found.append(Square(file=i % 8, rank=7 - i // 8))
    found.sort(key=lambda s: (s.file, s.rank))
    return found


def board_from_codes(codes) -> BoardState:
    """Build a board from 64 integer class codes in FEN cell order."""
    codes = list(codes)
    if len(codes) != 64:
        raise ValueError(f"expected 64 codes, got {len(codes)}")
    cells = []
    for code in codes:
        if not (0 <= int(code) <= 12):
            raise ValueError(f"class code out of range: {code}")
        cells.append(PIECE_CLASSES[int(code)])
    return BoardState(tuple(cells))


def board_to_codes(board: BoardState) -> list[int]:
    """64 integer class codes in FEN cell order."""
    return [CLASS_CODES[cell] for cell in board.cells]


EMPTY_BOARD = BoardState((EMPTY,) * 64)
STARTING_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR"
