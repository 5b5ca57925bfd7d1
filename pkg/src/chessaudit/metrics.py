"""Evaluation metrics over aligned ground-truth / prediction board sets.

All coherence measures (contradiction %, sane F1, mean violations, per-rule
frequencies) judge predictions only; ground truth is never rule-checked
here. Violation counting is per color-instantiated rule (15 rules max per
board), recorded in every report as convention "per-instance-15-rules".
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import BoardState, EMPTY
from .rules import (
    ALL_RULES,
    RuleCategory,
    category_of,
    check,
)

COUNTING_CONVENTION = "per-instance-15-rules"
REPORT_VERSION = "1"


class EmptySet(ValueError):
    pass


class ZeroBaseline(ValueError):
    pass


class NoViolations(ValueError):
    pass


@dataclass(frozen=True)
class EvalSet:
    """Index-aligned (ground truth, prediction) board pairs."""

    pairs: tuple[tuple[BoardState, BoardState], ...]

    @property
    def n(self) -> int:
        return len(self.pairs)

    def _require_nonempty(self):
        if not self.pairs:
            raise EmptySet("evaluation set is empty")


def pair_f1(y: BoardState, yhat: BoardState) -> float:
    """Dice overlap of agreeing non-empty cells; 1.0 for two empty boards."""
    agree = 0
    y_pieces = 0
    yhat_pieces = 0
    for a, b in zip(y.cells, yhat.cells):
        if a != EMPTY:
            y_pieces += 1
        if b != EMPTY:
            yhat_pieces += 1
        if a == b and a != EMPTY:
            agree += 1
    denom = y_pieces + yhat_pieces
    if denom == 0:
        return 1.0
    return 2 * agree / denom


def exact_match(eval_set: EvalSet) -> float:
    """Percentage of pairs agreeing on all 64 cells."""
    eval_set._require_nonempty()
    hits = sum(1 for y, yhat in eval_set.pairs if y.cells == yhat.cells)
    return 100.0 * hits / eval_set.n


def f1(eval_set: EvalSet) -> float:
    eval_set._require_nonempty()
    return sum(pair_f1(y, yhat) for y, yhat in eval_set.pairs) / eval_set.n


def contradiction_pct(eval_set: EvalSet) -> float:
    """Percentage of predictions violating at least one sanity rule."""
    eval_set._require_nonempty()
    insane = sum(1 for _, yhat in eval_set.pairs if not check(yhat).sane)
    return 100.0 * insane / eval_set.n


def sane_f1(eval_set: EvalSet) -> float:
    """F1 with insane predictions zeroed but kept in the denominator."""
    eval_set._require_nonempty()
    total = 0.0
    for y, yhat in eval_set.pairs:
        if check(yhat).sane:
            total += pair_f1(y, yhat)
    return total / eval_set.n


def mean_violations(eval_set: EvalSet) -> float:
    """Mean violated-rule count per prediction."""
    eval_set._require_nonempty()
    total = sum(check(yhat).violation_count for _, yhat in eval_set.pairs)
    return total / eval_set.n


def per_rule_frequency(eval_set: EvalSet) -> dict:
    """Fraction of predictions violating each of the 15 rules."""
    eval_set._require_nonempty()
    tallies = {rule: 0 for rule in ALL_RULES}
    for _, yhat in eval_set.pairs:
        for rule in check(yhat).violations:
            tallies[rule] += 1
    return {rule: count / eval_set.n for rule, count in tallies.items()}


def adjusted_likelihood(f_model: dict, f_random: dict) -> dict:
    """Per-rule model/random violation-frequency ratios plus category means."""
    ratios = {}
    for rule in f_model:
        base = f_random[rule]
        if f_model[rule] == 0.0:
            ratios[rule] = 0.0
            continue
        if base == 0.0:
            raise ZeroBaseline(f"random-guesser frequency for {rule.id} is zero")
        ratios[rule] = f_model[rule] / base
    by_category = {}
    for cat in RuleCategory:
        members = [ratios[r] for r in ratios if category_of(r) is cat]
        by_category[cat] = sum(members) / len(members) if members else 0.0
    return {"per_rule": ratios, "per_category": by_category}


def category_prevalence(eval_set: EvalSet) -> dict:
    """How often violating predictions hit counting vs localizing rules.

    Reported over two denominators (the choice matters and both are
    labelled): predictions with at least one violation, and all
    predictions. Raises NoViolations when no prediction violates anything.
    """
    eval_set._require_nonempty()
    violators = 0
    counting_hits = 0
    localizing_hits = 0
    for _, yhat in eval_set.pairs:
        report = check(yhat)
        if report.sane:
            continue
        violators += 1
        cats = {category_of(r) for r in report.violations}
        if RuleCategory.COUNTING in cats:
            counting_hits += 1
        if RuleCategory.LOCALIZING in cats:
            localizing_hits += 1
    if violators == 0:
        raise NoViolations("no prediction violates any rule")
    return {
        "over_violators": {
            RuleCategory.COUNTING: counting_hits / violators,
            RuleCategory.LOCALIZING: localizing_hits / violators,
        },
        "over_all": {
            RuleCategory.COUNTING: counting_hits / eval_set.n,
            RuleCategory.LOCALIZING: localizing_hits / eval_set.n,
        },
    }


@dataclass(frozen=True)
class EvalReport:
    em_pct: float
    f1: float
    c_pct: float
    sf1: float
    mu_c: float
    per_rule_freq: dict
    per_category: dict | None  # None when no prediction violates anything
    adjusted: dict | None = None  # present only when a baseline was supplied
    n: int = 0

    @property
    def gap(self) -> float:
        return self.f1 - self.sf1

    def to_json(self) -> dict:
        doc = {
            "version": REPORT_VERSION,
            "convention": COUNTING_CONVENTION,
            "n": self.n,
            "em_pct": self.em_pct,
            "f1": self.f1,
            "c_pct": self.c_pct,
            "sf1": self.sf1,
            "gap": self.gap,
            "mu_c": self.mu_c,
            "per_rule": {r.id: v for r, v in self.per_rule_freq.items()},
            "per_category": None,
        }
        if self.per_category is not None:
            doc["per_category"] = {
                denom: {cat.value: v for cat, v in stats.items()}
                for denom, stats in self.per_category.items()
            }
        if self.adjusted is not None:
            doc["adjusted_likelihood"] = {
                "per_rule": {r.id: v for r, v in self.adjusted["per_rule"].items()},
                "per_category": {
                    cat.value: v for cat, v in self.adjusted["per_category"].items()
                },
            }
        return doc


def evaluate(eval_set: EvalSet, f_random: dict | None = None) -> EvalReport:
    """Compute the full metric suite for an evaluation set."""
    eval_set._require_nonempty()
    freq = per_rule_frequency(eval_set)
    try:
        prevalence = category_prevalence(eval_set)
    except NoViolations:
        prevalence = None
    adjusted = adjusted_likelihood(freq, f_random) if f_random is not None else None
    return EvalReport(
        em_pct=exact_match(eval_set),
        f1=f1(eval_set),
        c_pct=contradiction_pct(eval_set),
        sf1=sane_f1(eval_set),
        mu_c=mean_violations(eval_set),
        per_rule_freq=freq,
        per_category=prevalence,
        adjusted=adjusted,
        n=eval_set.n,
    )
