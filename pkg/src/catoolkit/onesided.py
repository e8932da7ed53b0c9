"""One-sided reversible automata built from per-state permutation families.

A family assigns to every state ``a`` a permutation ``perm[a]`` of the
alphabet; the induced radius-1 one-sided rule sends a cell with value ``x``
and right neighbor ``a`` to ``perm[a](x)``.  The module also provides a
bounded-radius inverse search for arbitrary 1-dimensional rules and the
cyclic word-enumeration step of the three-state 021 example.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (DEFAULT_BUDGET, ONE_SIDED, TWO_SIDED, BudgetError,
                   RuleTable, extend_rule)

RHO_ORBIT_CAP = 12


@dataclass(frozen=True)
class PermutationFamily:
    """One permutation of ``range(alphabet_size)`` per state.

    ``perms[a][x]`` is the image of ``x`` under the permutation selected by
    the right neighbor ``a``.
    """

    alphabet_size: int
    perms: tuple

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(tuple(p) for p in self.perms))
        k = self.alphabet_size
        if len(self.perms) != k:
            raise ValueError(f"need exactly {k} permutations, got {len(self.perms)}")
        for a, p in enumerate(self.perms):
            if sorted(p) != list(range(k)):
                raise ValueError(f"perm {a} is not a permutation of 0..{k - 1}: {p}")


def family_to_rule(family: PermutationFamily) -> RuleTable:
    """The one-sided radius-1 rule ``(x, a) -> perms[a](x)``."""
    k = family.alphabet_size
    table = {(x, a): family.perms[a][x]
             for x in range(k) for a in range(k)}
    return RuleTable(1, k, (0, 1), table, ONE_SIDED)


def family_from_rule(rule: RuleTable) -> PermutationFamily:
    """Recover the permutation family of a rule in ``(x, a) -> perm[a](x)`` form.

    Raises if the rule is not a one-sided neighborhood-(0, 1) rule whose
    sections are permutations.
    """
    if rule.dimension != 1 or rule.sidedness != ONE_SIDED:
        raise ValueError("expected a one-sided 1-dimensional rule")
    if rule.neighborhood != (0, 1):
        raise ValueError(f"expected neighborhood (0, 1), got {rule.neighborhood}")
    k = rule.alphabet_size
    perms = tuple(tuple(rule.table[(x, a)] for x in range(k)) for a in range(k))
    return PermutationFamily(k, perms)


# The three-state example: state 1 selects the full cycle 0 -> 1 -> 2 -> 0,
# states 0 and 2 select the transposition swapping 1 and 2.
_SWAP12 = (0, 2, 1)
_CYCLE012 = (1, 2, 0)


def family_021() -> PermutationFamily:
    """The reversible three-state family used throughout the examples."""
    return PermutationFamily(3, (_SWAP12, _CYCLE012, _SWAP12))


def rule_021() -> RuleTable:
    """The rule table induced by :func:`family_021`."""
    return family_to_rule(family_021())


def inverse_family_021() -> PermutationFamily:
    """The permutation family of the inverse of :func:`rule_021`."""
    return PermutationFamily(3, ((0, 2, 1), (0, 2, 1), (2, 0, 1)))


def rho_step(word) -> tuple:
    """One step of the cyclic enumeration map on words over {0, 1, 2}.

    Every position is permuted by the permutation its right neighbor selects
    in :func:`family_021`; the last position, which has no right neighbor,
    is permuted by the full cycle (the permutation selected by state 1).
    """
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    perms = family_021().perms
    out = []
    for i, x in enumerate(word):
        selector = word[i + 1] if i + 1 < len(word) else 1
        out.append(perms[selector][x])
    return tuple(out)


def rho_orbit_length(n: int) -> int:
    """Length of the orbit of the all-zero word under :func:`rho_step`.

    Guarded by ``RHO_ORBIT_CAP`` since the orbit walks the full 3**n space.
    """
    if not 1 <= n <= RHO_ORBIT_CAP:
        raise ValueError(f"n must be in 1..{RHO_ORBIT_CAP}, got {n}")
    start = (0,) * n
    word = rho_step(start)
    length = 1
    while word != start:
        word = rho_step(word)
        length += 1
    return length


def _contiguous_lookup(rule: RuleTable):
    """Extend ``rule`` to a contiguous neighborhood of radius >= 1.

    Returns ``(table, radius)`` where the table is over offsets
    ``0..radius`` (one-sided) or ``-radius..radius`` (two-sided).
    """
    r = max(1, rule.radius)
    if rule.sidedness == ONE_SIDED:
        offsets = tuple(range(0, r + 1))
    else:
        offsets = tuple(range(-r, r + 1))
    return extend_rule(rule, offsets).table, r


def invert_up_to_radius(rule: RuleTable, max_radius: int,
                        budget: int = DEFAULT_BUDGET):
    """Search for an inverse rule of radius at most ``max_radius``.

    Returns a rule ``g`` with both compositions of ``g`` and ``rule`` equal
    to the identity, or ``None`` when no inverse of that radius exists.
    One-sided rules get a one-sided inverse (offsets ``0..max_radius``),
    two-sided rules a centered one.

    The search reads candidate image blocks right to left while tracking the
    set of preimage windows consistent with the letters seen so far, plus the
    decoded value of cell 0 once the window has slid past it.  An image block
    whose consistent preimages disagree on cell 0 rules out radius
    ``max_radius`` entirely; an image block with no preimage rules out
    surjectivity and hence invertibility.  Agreement everywhere pins the
    whole inverse table at once: decoding succeeds on every image of an
    actual configuration by construction, and a one-sided (or two-sided)
    automaton with a left inverse and full image language is bijective, so
    no separate composition check is needed.
    """
    if rule.dimension != 1:
        raise ValueError("inverse search is 1-dimensional only")
    if max_radius < 0:
        raise ValueError("max_radius must be >= 0")
    k = rule.alphabet_size
    one_sided = rule.sidedness == ONE_SIDED
    width = max_radius + 1 if one_sided else 2 * max_radius + 1
    if k ** width > budget:
        raise BudgetError(k ** width, budget)

    lookup, r = _contiguous_lookup(rule)
    if one_sided:
        win_len = r              # preimage cells i+1 .. i+r, left to right
        positions = list(range(max_radius, -1, -1))
        capture_at = 0           # cell 0 enters the window on the last letter
    else:
        win_len = 2 * r          # preimage cells i-r+1 .. i+r
        positions = list(range(max_radius, -max_radius - 1, -1))
        capture_at = r

    # States are frozensets of (window, decoded-cell-0) pairs; the decoded
    # value is None until the window slides over cell 0.
    if capture_at <= positions[0]:
        init = frozenset(
            (w, None) for w in itertools.product(range(k), repeat=win_len))
    else:
        # Only possible two-sided with max_radius < r: cell 0 sits inside the
        # initial window, at index r - max_radius - 1.
        idx = r - max_radius - 1
        init = frozenset(
            (w, w[idx]) for w in itertools.product(range(k), repeat=win_len))

    def step(state, capturing, letter):
        new = set()
        for win, got in state:
            shifted = win[:-1]
            for a in range(k):
                if lookup[(a,) + win] != letter:
                    continue
                new.add(((a,) + shifted, a if capturing else got))
        return frozenset(new)

    trans = {}

    def step_cached(state, capturing, letter):
        key = (state, capturing, letter)
        cached = trans.get(key)
        if cached is None:
            cached = step(state, capturing, letter)
            trans[key] = cached
        return cached

    table = {}
    depth_total = len(positions)

    def fill(state, depth, prefix):
        """Decode every image block extending ``prefix``; False means no inverse."""
        if depth == depth_total:
            values = {got for _, got in state}
            if len(values) != 1:
                # Empty: block outside the image language (not surjective).
                # Larger: two preimages diverging at cell 0 share this block.
                return False
            table[tuple(reversed(prefix))] = values.pop()
            return True
        capturing = positions[depth] == capture_at
        for letter in range(k):
            nxt = step_cached(state, capturing, letter)
            prefix.append(letter)
            ok = fill(nxt, depth + 1, prefix)
            prefix.pop()
            if not ok:
                return False
        return True

    if not fill(init, 0, []):
        return None
    offsets = tuple(range(0, max_radius + 1)) if one_sided \
        else tuple(range(-max_radius, max_radius + 1))
    sided = ONE_SIDED if one_sided else TWO_SIDED
    return RuleTable(1, k, offsets, table, sided)
