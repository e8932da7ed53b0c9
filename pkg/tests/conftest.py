"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's enumeration machinery:
``brute_blocks`` evaluates the local rule positionally on every initial
word, and ``domino_words`` spells out the two-block language directly.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from catoolkit import ONE_SIDED, TWO_SIDED, RuleTable

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def onesided_from(k, fn):
    """Radius-1 one-sided rule with local map ``fn(b0, b1)``."""
    table = {(b0, b1): fn(b0, b1) for b0 in range(k) for b1 in range(k)}
    return RuleTable(1, k, (0, 1), table, ONE_SIDED)


def h_constant():
    # nilpotent in one step: everything becomes 1
    return onesided_from(2, lambda b0, b1: 1)


def h_step():
    # 0 -> 1 -> 2 -> 2, reading only the cell itself; nilpotent in two steps
    return onesided_from(3, lambda b0, b1: min(b0 + 1, 2))


def h_or():
    # 1 spreads (leftwards); the all-zero orbit never meets it
    return onesided_from(2, lambda b0, b1: max(b0, b1))


def random_rule(rng: random.Random, k: int, offsets: tuple,
                sidedness: str = TWO_SIDED) -> RuleTable:
    table = {p: rng.randrange(k)
             for p in itertools.product(range(k), repeat=len(offsets))}
    return RuleTable(1, k, offsets, table, sidedness)


def brute_blocks(rule: RuleTable, n: int, t: int) -> set:
    """Achievable n-wide, t-tall space-time blocks, by sheer enumeration.

    Runs every initial word long enough to determine the block and reads
    the rule table positionally; no shared code with the enumerators under
    test beyond the table itself.
    """
    offs = rule.neighborhood
    lo, hi = min(offs), max(offs)
    c0 = (t - 1) * max(0, -lo)
    length = c0 + n + (t - 1) * max(0, hi)
    k = rule.alphabet_size
    out = set()
    for word in itertools.product(range(k), repeat=length):
        row = dict(enumerate(word))
        rows = [row]
        for _ in range(t - 1):
            nxt = {}
            for j in row:
                if all(j + off in row for off in offs):
                    nxt[j] = rule.table[tuple(row[j + off] for off in offs)]
            rows.append(nxt)
            row = nxt
        out.add(tuple(tuple(r[c0 + c] for c in range(n)) for r in rows))
    return out


def domino_words(t: int) -> set:
    """Length-``t`` factors of bi-infinite concatenations of 00 and 12."""
    reps = t // 2 + 2
    words = set()
    for blocks in itertools.product(((0, 0), (1, 2)), repeat=reps):
        flat = tuple(c for b in blocks for c in b)
        for phase in (0, 1):
            words.add(flat[phase:phase + t])
    return words


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def data_copy(tmp_path):
    """A scratch copy of the shipped data directory."""
    import shutil

    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    return target
