"""Exact space-time block sets, trace words, and entropy estimation.

The block set of a rule at width ``n`` and height ``t`` is the set of
``n x t`` patterns (``t`` rows of ``n`` cells, time running down) realized
by some initial configuration.  Read column-wise, the same objects are the
length-``t`` words of the width-``n`` trace, so one engine serves both
views.

For rules whose offsets are all nonnegative the engine runs an exact
column construction instead of enumerating initial words: achievable
radius-wide strips of height ``h + 1`` are exactly the one-step extensions
of achievable strips of height ``h`` by a free top row, because cells never
look left.  Widening a block one column to the left is deterministic row by
row for the same reason.  This reaches alphabets where the word enumeration
is hopeless; rules with negative offsets fall back to the literal
enumeration.  The ``budget`` caps the number of candidate patterns the
chosen strategy actually generates and raising :class:`BudgetError` reports
the count that was needed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import (DEFAULT_BUDGET, BudgetError, RuleTable, compose,
                   extend_rule, identity_rule)


@dataclass(frozen=True)
class TraceSet:
    """A sorted, exact set of ``n x t`` space-time blocks.

    Each pattern is a tuple of ``t`` rows of ``n`` states; equivalently a
    length-``t`` trace word whose letters are the rows.
    """

    n: int
    t: int
    patterns: tuple
    rule_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(sorted(self.patterns)))

    def __len__(self):
        return len(self.patterns)

    def __contains__(self, pattern):
        return tuple(pattern) in self.patterns


def _contiguous_nonneg(rule: RuleTable):
    """Extend to offsets ``0..r`` with ``r = max(1, max offset)``."""
    r = max(1, max(rule.neighborhood))
    ext = extend_rule(rule, tuple(range(0, r + 1)))
    return ext.table, r


class _Work:
    """Running budget: counts candidate patterns generated."""

    def __init__(self, budget: int):
        self.budget = budget
        self.done = 0

    def charge(self, amount: int) -> None:
        self.done += amount
        if self.done > self.budget:
            raise BudgetError(self.done, self.budget)


def _column_blocks(rule: RuleTable, n: int, t: int, work: _Work) -> set:
    """Exact block set for a rule with all offsets >= 0."""
    lookup, r = _contiguous_nonneg(rule)
    k = rule.alphabet_size
    states = range(k)

    # Achievable r-wide strips of height t: a strip of height h + 1 is a free
    # top row followed by the rows forced by it and an achievable height-h
    # strip sitting immediately to the right.
    strips = {(row,) for row in itertools.product(states, repeat=r)}
    work.charge(len(strips))
    for _ in range(t - 1):
        new = set()
        work.charge(len(strips) * k ** r)
        for right in strips:
            for top in itertools.product(states, repeat=r):
                rows = [top]
                for i in range(len(right)):
                    merged = rows[-1] + right[i]
                    rows.append(tuple(lookup[merged[j:j + r + 1]]
                                      for j in range(r)))
                new.add(tuple(rows))
        strips = new

    if n <= r:
        return {tuple(row[:n] for row in strip) for strip in strips}

    # Widen to the left: the new column is forced row by row from its own
    # top cell and the rows already known.
    blocks = strips
    for _ in range(n - r):
        new = set()
        work.charge(len(blocks) * k)
        for blk in blocks:
            for x0 in states:
                rows = [(x0,) + blk[0]]
                for i in range(t - 1):
                    head = lookup[rows[-1][:r + 1]]
                    rows.append((head,) + blk[i + 1])
                new.add(tuple(rows))
        blocks = new
    return blocks


def _enumerated_blocks(rule: RuleTable, n: int, t: int, work: _Work) -> set:
    """Literal block set by running every determining initial word."""
    k = rule.alphabet_size
    r = max(1, rule.radius)
    offsets = tuple(range(-r, r + 1))
    lookup = extend_rule(rule, offsets).table
    span = 2 * r
    length = n + 2 * r * (t - 1)
    work.charge(k ** length)
    left = r * (t - 1)
    found = set()
    for word in itertools.product(range(k), repeat=length):
        rows = [word]
        for _ in range(t - 1):
            prev = rows[-1]
            rows.append(tuple(lookup[prev[j:j + span + 1]]
                              for j in range(len(prev) - span)))
        # Row i starts at absolute position r * i; read columns
        # left .. left + n - 1.
        block = tuple(row[left - r * i:left - r * i + n]
                      for i, row in enumerate(rows))
        found.add(block)
    return found


def _block_set(rule: RuleTable, n: int, t: int, budget: int) -> set:
    if rule.dimension != 1:
        raise ValueError("block sets are 1-dimensional only")
    if n < 1 or t < 1:
        raise ValueError("n and t must be >= 1")
    work = _Work(budget)
    if min(rule.neighborhood) >= 0:
        return _column_blocks(rule, n, t, work)
    return _enumerated_blocks(rule, n, t, work)


def spacetime_patterns(rule: RuleTable, n: int, t: int,
                       budget: int = DEFAULT_BUDGET,
                       rule_id: str | None = None) -> TraceSet:
    """All ``n x t`` space-time blocks the rule realizes."""
    return TraceSet(n, t, tuple(_block_set(rule, n, t, budget)), rule_id)


def trace_words(rule: RuleTable, n: int, t: int,
                budget: int = DEFAULT_BUDGET,
                rule_id: str | None = None) -> TraceSet:
    """All length-``t`` words of the width-``n`` trace of the rule.

    A word is reported as its tuple of ``t`` letters, each letter a width-
    ``n`` row, which makes it literally the same object as the corresponding
    space-time block.
    """
    return spacetime_patterns(rule, n, t, budget, rule_id)


@dataclass(frozen=True)
class EntropyEstimate:
    """Two-step entropy slope plus the raw quotient it refines."""

    estimate: float
    raw_quotient: float
    n: int
    t: int
    count_t: int
    count_prev: int


def entropy_estimate(rule: RuleTable, n: int, t: int,
                     budget: int = DEFAULT_BUDGET) -> EntropyEstimate:
    """Estimate the trace entropy from exact pattern counts.

    The reported estimate is ``(log2 p(t) - log2 p(t - 2)) / 2``, the
    growth rate over the last two steps; the raw quotient ``log2 p(t) / t``
    converges from above much more slowly and is reported alongside.
    """
    if t < 3:
        raise ValueError("t must be >= 3 for the two-step estimate")
    count_t = len(_block_set(rule, n, t, budget))
    count_prev = len(_block_set(rule, n, t - 2, budget))
    estimate = (math.log2(count_t) - math.log2(count_prev)) / 2
    raw = math.log2(count_t) / t
    return EntropyEstimate(estimate, raw, n, t, count_t, count_prev)


def trace_counts(rule: RuleTable, n: int, t: int,
                 budget: int = DEFAULT_BUDGET) -> tuple:
    """Pattern counts ``p(1) .. p(t)`` of the width-``n`` trace."""
    return tuple(len(_block_set(rule, n, h, budget)) for h in range(1, t + 1))


def _minkowski(a_offsets, b_offsets):
    return sorted({x + y for x in a_offsets for y in b_offsets})


def is_nilpotent_within(rule: RuleTable, n: int, q: int,
                        budget: int = DEFAULT_BUDGET) -> bool:
    """Whether the ``n``-th iterate maps every neighborhood to ``q``."""
    if rule.dimension != 1:
        raise ValueError("nilpotency check is 1-dimensional only")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= q < rule.alphabet_size:
        raise ValueError(f"q={q} outside the alphabet")
    power = rule
    offsets = list(rule.neighborhood)
    for _ in range(n - 1):
        offsets = _minkowski(offsets, rule.neighborhood)
        needed = rule.alphabet_size ** len(offsets)
        if needed > budget:
            raise BudgetError(needed, budget)
        power = compose(rule, power)
    return all(value == q for value in power.table.values())


def find_spreading_states(rule: RuleTable) -> tuple:
    """States that every pattern containing them maps to.

    Requires a 1-dimensional rule whose neighborhood includes offsets 0
    and 1, so that a spreading state swallows both itself and its left
    neighbor each step.
    """
    if rule.dimension != 1:
        raise ValueError("spreading states are 1-dimensional only")
    if not {0, 1} <= set(rule.neighborhood):
        raise ValueError("neighborhood must contain offsets 0 and 1")
    out = []
    for s in range(rule.alphabet_size):
        if all(value == s
               for pattern, value in rule.table.items() if s in pattern):
            out.append(s)
    return tuple(out)


def avoiding_window_exists(rule: RuleTable, s: int, m: int,
                           budget: int = DEFAULT_BUDGET) -> bool:
    """Can some width ``m + r*m`` word keep ``s`` out for ``m`` steps?

    Runs every initial word of that width with absent boundary and checks
    all determined cells of all ``m + 1`` rows.  A spreading state admits
    no such window once ``m`` is large enough, and the answer is antitone
    in ``m``.
    """
    if rule.dimension != 1 or min(rule.neighborhood) < 0:
        raise ValueError("needs a 1-dimensional rule with offsets >= 0")
    if not 0 <= s < rule.alphabet_size:
        raise ValueError(f"s={s} outside the alphabet")
    if m < 1:
        raise ValueError("m must be >= 1")
    k = rule.alphabet_size
    r = rule.radius
    offsets = tuple(range(0, r + 1))
    lookup = extend_rule(rule, offsets).table
    length = m + r * m
    if k ** length > budget:
        raise BudgetError(k ** length, budget)
    for word in itertools.product(range(k), repeat=length):
        if s in word:
            continue
        row = word
        clean = True
        for _ in range(m):
            row = tuple(lookup[row[j:j + r + 1]]
                        for j in range(len(row) - r))
            if s in row:
                clean = False
                break
        if clean:
            return True
    return False
