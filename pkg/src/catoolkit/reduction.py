"""Coupled pair rules that trade nilpotency questions for conjugacy ones.

Given a driving rule on alphabet B with a quiescent state q, build two
rules on the product alphabet A x B, where A is the 2k-fold power of the
three-state reversible example:

* the inert pair rule leaves the A track alone and runs the driver on the
  B track;
* the coupled pair rule additionally advances the A track by the reversible
  power rule wherever the driver's next value is not q.

If the driver dies to q within n steps the two rules are conjugate, and the
map that pushes the A track n steps forward while keeping the original B
track is a witness: it intertwines the two rules and is invertible.  If the
driver never dies near a non-quiescent cell, the coupled rule inherits the
full entropy of the reversible power and the inert rule does not, so no
conjugacy can exist.  ``verify_witness`` checks the two halves of the
witness claim at table level.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from .core import (DEFAULT_BUDGET, ONE_SIDED, BudgetError, RuleTable,
                   compose, equal_ca, extend_rule, identity_rule, product)
from .onesided import invert_up_to_radius, rule_021


@dataclass(frozen=True)
class ReductionSpec:
    """Parameters of the pair construction.

    ``h_rule`` is the driver: one-sided, 1-dimensional, offsets within
    {0, 1}, with quiescent state ``q``.  ``k`` sizes the reversible track
    (alphabet 9**k); ``n`` is the step bound the witness map is built for.
    """

    h_rule: RuleTable
    q: int
    k: int
    n: int

    def __post_init__(self):
        h = self.h_rule
        if h.dimension != 1 or h.sidedness != ONE_SIDED:
            raise ValueError("driver must be a one-sided 1-dimensional rule")
        if not set(h.neighborhood) <= {0, 1}:
            raise ValueError("driver neighborhood must lie within {0, 1}")
        if not 0 <= self.q < h.alphabet_size:
            raise ValueError(f"q={self.q} outside the driver alphabet")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        lookup = extend_rule(h, (0, 1)).table
        if lookup[(self.q, self.q)] != self.q:
            raise ValueError(f"state {self.q} is not quiescent for the driver")
        if 2 ** self.k <= h.alphabet_size:
            warnings.warn(
                "k <= log2 of the driver alphabet: the entropy gap between "
                "the coupled and inert rules is not guaranteed",
                stacklevel=2)

    @property
    def reversible_size(self) -> int:
        return 9 ** self.k

    @property
    def pair_size(self) -> int:
        return self.reversible_size * self.h_rule.alphabet_size


def reversible_power(k: int) -> RuleTable:
    """The 2k-fold product of the three-state reversible rule (9**k states)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = rule_021()
    rule = base
    for _ in range(2 * k - 1):
        rule = product(rule, base)
    return rule


def build_g(spec: ReductionSpec) -> RuleTable:
    """The inert pair rule: identity on the A track, the driver on B."""
    ident = identity_rule(spec.reversible_size, sidedness=ONE_SIDED)
    return product(ident, spec.h_rule)


def build_f(spec: ReductionSpec) -> RuleTable:
    """The coupled pair rule.

    The B track runs the driver.  The A track advances by the reversible
    power rule exactly when the driver's next value is not q, and stands
    still otherwise.
    """
    b_size = spec.h_rule.alphabet_size
    zk = reversible_power(spec.k)
    h_lookup = extend_rule(spec.h_rule, (0, 1)).table
    table = {}
    for p0, p1 in itertools.product(range(spec.pair_size), repeat=2):
        a0, b0 = divmod(p0, b_size)
        a1, b1 = divmod(p1, b_size)
        hb = h_lookup[(b0, b1)]
        av = zk.table[(a0, a1)] if hb != spec.q else a0
        table[(p0, p1)] = av * b_size + hb
    return RuleTable(1, spec.pair_size, (0, 1), table, ONE_SIDED)


def build_phi(spec: ReductionSpec, budget: int = DEFAULT_BUDGET) -> RuleTable:
    """The witness map: A track of the n-th coupled iterate, original B track.

    This is a conjugacy from the coupled rule to the inert rule exactly when
    the driver is nilpotent within n steps; building it does not require
    that, so the same object can be handed to :func:`verify_witness` to test
    the claim.
    """
    coupled = build_f(spec)
    b_size = spec.h_rule.alphabet_size
    needed = spec.pair_size ** (spec.n + 1)
    if needed > budget:
        raise BudgetError(needed, budget)
    power = identity_rule(spec.pair_size, sidedness=ONE_SIDED)
    for _ in range(spec.n):
        power = compose(coupled, power)
    anchor = power.neighborhood.index(0)
    table = {}
    for pattern, value in power.table.items():
        a_part = value // b_size
        b_part = pattern[anchor] % b_size
        table[pattern] = a_part * b_size + b_part
    return RuleTable(1, spec.pair_size, power.neighborhood, table, ONE_SIDED)


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the two witness checks plus the recovered inverse."""

    homomorphism: bool
    invertible: bool
    witnessed: bool
    max_radius: int
    inverse: RuleTable | None


def verify_witness(phi: RuleTable, coupled: RuleTable, inert: RuleTable,
                   max_radius: int,
                   budget: int = DEFAULT_BUDGET) -> WitnessReport:
    """Check that ``phi`` intertwines the two rules and is invertible.

    The homomorphism half compares ``phi`` after ``coupled`` with ``inert``
    after ``phi`` as exact tables; the invertibility half searches for an
    inverse of radius at most ``max_radius``.  Both halves go into the
    report; ``witnessed`` is their conjunction.
    """
    k = phi.alphabet_size
    span = max(
        len({o1 + o2 for o1 in phi.neighborhood
             for o2 in coupled.neighborhood}),
        len({o1 + o2 for o1 in inert.neighborhood
             for o2 in phi.neighborhood}))
    if k ** span > budget:
        raise BudgetError(k ** span, budget)
    left = compose(phi, coupled)
    right = compose(inert, phi)
    homomorphism = equal_ca(left, right)
    inverse = invert_up_to_radius(phi, max_radius, budget)
    invertible = inverse is not None
    return WitnessReport(homomorphism, invertible,
                         homomorphism and invertible, max_radius, inverse)


@dataclass(frozen=True)
class GraphSubshift:
    """Forbidden blocks cutting the graph {(c, image of c)} out of pairs.

    Cells carry pairs ``(x, y)`` of base states; a width-``width`` block is
    forbidden when its y cell at ``anchor`` disagrees with the rule applied
    to its x cells.  Blocks are tuples of pairs.
    """

    alphabet_size: int
    width: int
    anchor: int
    forbidden: frozenset

    def admits(self, pairs) -> bool:
        """Whether a word of pairs contains no forbidden block."""
        pairs = tuple(tuple(p) for p in pairs)
        if len(pairs) < self.width:
            return True
        return not any(pairs[i:i + self.width] in self.forbidden
                       for i in range(len(pairs) - self.width + 1))


def graph_subshift(rule: RuleTable,
                   budget: int = DEFAULT_BUDGET) -> GraphSubshift:
    """The orbit-graph subshift of a 1-dimensional rule.

    A two-track configuration with x track ``c`` and y track ``d`` avoids
    every forbidden block exactly when ``d`` is the image of ``c``.
    """
    if rule.dimension != 1:
        raise ValueError("graph subshifts are 1-dimensional only")
    k = rule.alphabet_size
    offsets = rule.neighborhood
    low, high = min(offsets), max(offsets)
    width = high - low + 1
    anchor = -low
    if (k * k) ** width > budget:
        raise BudgetError((k * k) ** width, budget)
    positions = {off: off - low for off in offsets}
    forbidden = set()
    for block in itertools.product(
            itertools.product(range(k), repeat=2), repeat=width):
        xs = tuple(block[positions[off]][0] for off in offsets)
        if block[anchor][1] != rule.table[xs]:
            forbidden.add(block)
    return GraphSubshift(k, width, anchor, frozenset(forbidden))
