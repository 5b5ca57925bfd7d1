from pathlib import Path

import pytest

from chessaudit.board import BoardState, EMPTY, Square

DATA = Path(__file__).parent / "data"


def place(pieces: dict[str, str]) -> BoardState:
    """Build a board from {square_name: piece}, e.g. {"e1": "K"}."""
    cells = [EMPTY] * 64
    for name, piece in pieces.items():
        sq = Square(file=ord(name[0].lower()) - ord("a"), rank=int(name[1]) - 1)
        cells[(7 - sq.rank) * 8 + sq.file] = piece
    return BoardState(tuple(cells))


@pytest.fixture(scope="session")
def selfplay_pgn() -> str:
    return (DATA / "selfplay_corpus.pgn").read_text()


@pytest.fixture(scope="session")
def classic_pgn() -> str:
    return (DATA / "classic_games.pgn").read_text()
