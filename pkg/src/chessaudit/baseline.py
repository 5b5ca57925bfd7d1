"""Uniform random guesser over all 13^64 boards and its per-rule
violation frequencies, used to normalize model error profiles.

Sampling uses a counter-based generator (Philox) consumed in fixed-size
chunks with per-chunk jumped streams, so the tallies are identical no
matter how the chunks are scheduled. A fully vectorized rule evaluator
keeps million-board estimation fast; it is property-tested for exact
agreement with the scalar checker.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .board import BoardState, PIECE_CLASSES
from .rules import ALL_RULES, RULESET_VERSION, RuleId, rule_from_id

_CHUNK = 1 << 16

# Class codes in PIECE_CLASSES order: x=0, pnbrqk=1..6, PNBRQK=7..12.
_BP, _BN, _BB, _BR, _BQ, _BK = 1, 2, 3, 4, 5, 6
_WP, _WN, _WB, _WR, _WQ, _WK = 7, 8, 9, 10, 11, 12

_CELL_INDEX = np.arange(64)
_DARK = ((_CELL_INDEX % 8 + 7 - _CELL_INDEX // 8) % 2 == 0)
_EDGE = np.zeros(64, dtype=bool)
_EDGE[:8] = _EDGE[56:] = True


@dataclass(frozen=True)
class BaselineEstimate:
    per_rule: dict  # RuleId -> (frequency, stderr)
    samples: int
    seed: int

    def frequencies(self) -> dict:
        return {rule: freq for rule, (freq, _) in self.per_rule.items()}


def sample_uniform_board(rng: np.random.Generator) -> BoardState:
    """One board with each cell i.i.d. uniform over the 13 classes."""
    codes = rng.integers(0, 13, size=64)
    return BoardState(tuple(PIECE_CLASSES[c] for c in codes))


def _color_violations(codes: np.ndarray, offset: int) -> list[np.ndarray]:
    """Violation flags for families i, iii, iv, v, vi, vii, viii of one
    color. `offset` is 0 for black codes (1..6), 6 for white (7..12)."""
    p = (codes == _BP + offset).sum(axis=1)
    n = (codes == _BN + offset).sum(axis=1)
    b = (codes == _BB + offset).sum(axis=1)
    r = (codes == _BR + offset).sum(axis=1)
    q = (codes == _BQ + offset).sum(axis=1)
    k = (codes == _BK + offset).sum(axis=1)

    v_i = k != 1
    v_iii = p + q + n + b + r > 15
    v_iv = p > 8
    v_v = (codes[:, _EDGE] == _BP + offset).any(axis=1)
    v_vi = (p == 8) & ((q > 1) | (b > 2) | (n > 2) | (r > 2))
    excess = (
        np.maximum(q - 1, 0)
        + np.maximum(b - 2, 0)
        + np.maximum(n - 2, 0)
        + np.maximum(r - 2, 0)
    )
    v_vii = (p < 8) & (excess > 8 - p)
    dark_b = ((codes == _BB + offset) & _DARK).sum(axis=1)
    v_viii = (p == 8) & (b == 2) & (dark_b != 1)
    return [v_i, v_iii, v_iv, v_v, v_vi, v_vii, v_viii]


def _kings_adjacent(codes: np.ndarray) -> np.ndarray:
    grid_b = (codes == _BK).reshape(-1, 8, 8)
    grid_w = (codes == _WK).reshape(-1, 8, 8)
    padded = np.zeros((codes.shape[0], 10, 10), dtype=bool)
    padded[:, 1:9, 1:9] = grid_w
    hit = np.zeros(codes.shape[0], dtype=bool)
    for dr in (0, 1, 2):
        for dc in (0, 1, 2):
            hit |= (grid_b & padded[:, dr : dr + 8, dc : dc + 8]).any(axis=(1, 2))
    return hit


def violation_matrix(codes: np.ndarray) -> np.ndarray:
    """(n, 15) boolean violation flags, columns in ALL_RULES order."""
    codes = np.asarray(codes)
    black = _color_violations(codes, 0)
    white = _color_violations(codes, 6)
    b_i, b_iii, b_iv, b_v, b_vi, b_vii, b_viii = black
    w_i, w_iii, w_iv, w_v, w_vi, w_vii, w_viii = white
    columns = [
        b_i, w_i, _kings_adjacent(codes),
        b_iii, w_iii, b_iv, w_iv, b_v, w_v,
        b_vi, w_vi, b_vii, w_vii, b_viii, w_viii,
    ]
    return np.stack(columns, axis=1)


def estimate_random_frequencies(samples: int, seed: int) -> BaselineEstimate:
    """Monte-Carlo per-rule violation frequency of the uniform guesser."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tallies = np.zeros(len(ALL_RULES), dtype=np.int64)
    done = 0
    chunk_index = 0
    while done < samples:
        size = min(_CHUNK, samples - done)
        rng = np.random.Generator(np.random.Philox(key=seed).jumped(chunk_index))
        codes = rng.integers(0, 13, size=(size, 64), dtype=np.int8)
        tallies += violation_matrix(codes).sum(axis=0)
        done += size
        chunk_index += 1
    per_rule = {}
    for rule, count in zip(ALL_RULES, tallies):
        freq = count / samples
        stderr = math.sqrt(freq * (1 - freq) / samples)
        per_rule[rule] = (freq, stderr)
    return BaselineEstimate(per_rule=per_rule, samples=samples, seed=seed)


def _binom_tail(trials: int, p_num: int, p_den: int, at_least: int) -> float:
    """P(Bin(trials, p_num/p_den) >= at_least), exact rational arithmetic."""
    total = 0
    for k in range(at_least, trials + 1):
        total += (
            math.comb(trials, k)
            * p_num**k
            * (p_den - p_num) ** (trials - k)
        )
    return total / p_den**trials


def analytic_frequency(rule: RuleId) -> float | None:
    """Exact uniform-model violation probability where a closed form
    exists (families i, iii, iv, v); None otherwise."""
    if rule.family == "i":
        # P(count != 1) for count ~ Bin(64, 1/13)
        return 1.0 - 64 * 12**63 / 13**64
    if rule.family == "iii":
        return _binom_tail(64, 5, 13, 16)
    if rule.family == "iv":
        return _binom_tail(64, 1, 13, 9)
    if rule.family == "v":
        return 1.0 - (12 / 13) ** 16
    return None


def save_cache(path: str | Path, estimate: BaselineEstimate) -> None:
    doc = {
        "ruleset_version": RULESET_VERSION,
        "seed": estimate.seed,
        "samples": estimate.samples,
        "per_rule": {
            rule.id: {"frequency": freq, "stderr": stderr}
            for rule, (freq, stderr) in estimate.per_rule.items()
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


class CacheVersionMismatch(ValueError):
    pass


def load_cache(path: str | Path) -> BaselineEstimate:
    doc = json.loads(Path(path).read_text())
    if doc.get("ruleset_version") != RULESET_VERSION:
        raise CacheVersionMismatch(
            f"cache built for ruleset {doc.get('ruleset_version')!r}, "
            f"current is {RULESET_VERSION!r}"
        )
    per_rule = {
        rule_from_id(rid): (entry["frequency"], entry["stderr"])
        for rid, entry in doc["per_rule"].items()
    }
    return BaselineEstimate(per_rule=per_rule, samples=doc["samples"], seed=doc["seed"])
