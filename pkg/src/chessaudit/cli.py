"""Batch command-line front-end.

Board streams are FEN-per-line by default; ``--format array`` switches to
lines of 64 space-separated class codes (0 = empty, 1..6 = black pnbrqk,
7..12 = white). Reports are JSON on stdout (or --output); diagnostics go
to stderr.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import baseline as baseline_mod
from . import metrics as metrics_mod
from .board import (
    BoardState,
    FenError,
    PIECE_CLASSES,
    board_from_codes,
    board_to_codes,
    parse_fen,
    to_fen,
)
from .replay import PgnError, ReplayError, parse_pgn, replay
from .rules import check


def _parse_line(line: str, fmt: str) -> BoardState:
    if fmt == "array":
        return board_from_codes(int(tok) for tok in line.split())
    return parse_fen(line)


def _read_boards(path: str, fmt: str) -> list[BoardState]:
    boards = []
    with click.open_file(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                boards.append(_parse_line(line, fmt))
            except (FenError, ValueError) as exc:
                raise click.ClickException(f"{path}:{lineno}: {exc}") from exc
    return boards


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        with click.open_file(output, "w") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Sanity-check chess board states and score prediction sets."""


@main.command("check")
@click.argument("input", default="-")
@click.option("--format", "fmt", type=click.Choice(["fen", "array"]), default="fen")
@click.option("--output", default=None, help="Write the JSONL report here instead of stdout.")
def cmd_check(input, fmt, output):
    """Check a board stream; one JSON object per line, then a summary.

    Exit status: 0 all sane, 1 any insane, 2 on parse errors.
    """
    out = click.open_file(output, "w") if output else sys.stdout
    boards = 0
    insane = 0
    total_violations = 0
    parse_failed = False
    with click.open_file(input) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                state = _parse_line(line, fmt)
            except (FenError, ValueError) as exc:
                click.echo(f"line {lineno}: {exc}", err=True)
                parse_failed = True
                continue
            report = check(state)
            boards += 1
            insane += 0 if report.sane else 1
            total_violations += report.violation_count
            out.write(
                json.dumps(
                    {
                        "line": lineno,
                        "sane": report.sane,
                        "violations": [r.id for r in report.violations],
                    }
                )
                + "\n"
            )
    summary = {
        "summary": {
            "boards": boards,
            "c_pct": 100.0 * insane / boards if boards else 0.0,
            "mu_c": total_violations / boards if boards else 0.0,
        },
        "convention": metrics_mod.COUNTING_CONVENTION,
    }
    out.write(json.dumps(summary) + "\n")
    if output:
        out.close()
    sys.exit(2 if parse_failed else (1 if insane else 0))


@main.command("eval")
@click.option("--truth", required=True, help="Ground-truth board file.")
@click.option("--pred", required=True, help="Prediction board file, line-aligned with --truth.")
@click.option("--baseline-cache", default=None, help="Random-guesser cache for adjusted likelihoods.")
@click.option("--format", "fmt", type=click.Choice(["fen", "array"]), default="fen")
@click.option("--output", default=None)
def cmd_eval(truth, pred, baseline_cache, fmt, output):
    """Score predictions against ground truth; full JSON metric report."""
    truth_boards = _read_boards(truth, fmt)
    pred_boards = _read_boards(pred, fmt)
    if len(truth_boards) != len(pred_boards):
        raise click.ClickException(
            f"length mismatch: {len(truth_boards)} truth vs {len(pred_boards)} predictions"
        )
    if not truth_boards:
        raise click.ClickException("no boards to evaluate")
    insane_truth = sum(1 for b in truth_boards if not check(b).sane)
    if insane_truth:
        click.echo(
            f"warning: {insane_truth} ground-truth board(s) are not sane", err=True
        )
    f_random = None
    if baseline_cache:
        f_random = baseline_mod.load_cache(baseline_cache).frequencies()
    eval_set = metrics_mod.EvalSet(tuple(zip(truth_boards, pred_boards)))
    report = metrics_mod.evaluate(eval_set, f_random=f_random)
    _emit(report.to_json(), output)


@main.command("replay")
@click.argument("pgn", default="-")
@click.option("--output", default=None, help="FEN-per-line destination (default stdout).")
def cmd_replay(pgn, output):
    """Replay PGN games to a per-ply FEN stream (duplicates preserved)."""
    with click.open_file(pgn) as handle:
        text = handle.read()
    try:
        records = parse_pgn(text)
    except PgnError as exc:
        raise click.ClickException(str(exc)) from exc
    out = click.open_file(output, "w") if output else sys.stdout
    skipped = 0
    for game_index, record in enumerate(records, start=1):
        try:
            states = replay(record)
        except ReplayError as exc:
            click.echo(f"game {game_index}: {exc}; skipped", err=True)
            skipped += 1
            continue
        for state in states:
            out.write(to_fen(state) + "\n")
    if output:
        out.close()
    sys.exit(1 if skipped else 0)


@main.command("corrupt")
@click.option("--truth", required=True, help="Input board file to corrupt.")
@click.option("--epsilon", type=click.FloatRange(0.0, 1.0), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--format", "fmt", type=click.Choice(["fen", "array"]), default="fen")
@click.option("--output", default=None)
def cmd_corrupt(truth, epsilon, seed, fmt, output):
    """Replace each cell with a uniform class draw with probability epsilon."""
    boards = _read_boards(truth, fmt)
    out = click.open_file(output, "w") if output else sys.stdout
    rng = np.random.Generator(np.random.Philox(key=seed))
    for state in boards:
        corrupted = corrupt_board(state, epsilon, rng)
        if fmt == "array":
            out.write(" ".join(str(c) for c in board_to_codes(corrupted)) + "\n")
        else:
            out.write(to_fen(corrupted) + "\n")
    if output:
        out.close()


def corrupt_board(state: BoardState, epsilon: float, rng: np.random.Generator) -> BoardState:
    """One corruption pass; draws are consumed even for untouched cells so
    the output stream is deterministic in (seed, line index) alone."""
    hits = rng.random(64) < epsilon
    draws = rng.integers(0, 13, size=64)
    cells = list(state.cells)
    for i in range(64):
        if hits[i]:
            cells[i] = PIECE_CLASSES[draws[i]]
    return BoardState(tuple(cells))


@main.command("baseline")
@click.option("--samples", type=int, default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", required=True, help="Cache file to write.")
def cmd_baseline(samples, seed, output):
    """Estimate the uniform random guesser's per-rule violation rates."""
    estimate = baseline_mod.estimate_random_frequencies(samples, seed)
    baseline_mod.save_cache(output, estimate)
    summary = {
        "samples": estimate.samples,
        "seed": estimate.seed,
        "per_rule": {
            rule.id: {"frequency": freq, "stderr": stderr}
            for rule, (freq, stderr) in estimate.per_rule.items()
        },
    }
    click.echo(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
