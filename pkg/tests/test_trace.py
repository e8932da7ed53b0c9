"""Space-time block enumeration, entropy estimates, and driver checks.

Everything here is cross-checked against the positional brute-force oracle
in conftest or against closed-form counts worked out by hand.
"""

import pytest

from catoolkit import (ONE_SIDED, TWO_SIDED, BudgetError, avoiding_window_exists,
                       entropy_estimate, find_spreading_states, identity_rule,
                       is_nilpotent_within, product, rule_021, spacetime_patterns,
                       trace_counts, trace_words)
from conftest import (brute_blocks, domino_words, h_constant, h_or, h_step,
                      onesided_from, random_rule)

# the width-1 factor counts of the two-block language {00, 12}:
# 3 * 2**m - 1 at even length 2m, 2**(m+2) - 1 at odd length 2m + 1
ZETA_COUNTS = (3, 5, 7, 11, 15, 23, 31, 47, 63, 95, 127, 191)


def test_zeta_trace_counts_exact():
    assert trace_counts(rule_021(), 1, 12) == ZETA_COUNTS


def test_zeta_traces_equal_the_domino_language():
    z = rule_021()
    for t in range(1, 9):
        words = {tuple(row[0] for row in p) for p in trace_words(z, 1, t).patterns}
        assert words == domino_words(t)


def test_forbidden_word_201():
    assert ((2,), (0,), (1,)) not in trace_words(rule_021(), 1, 3)


@pytest.mark.parametrize("offsets,sidedness", [
    ((0, 1), ONE_SIDED),
    ((0, 1, 2), ONE_SIDED),
    ((0,), ONE_SIDED),
    ((-1, 0, 1), TWO_SIDED),
    ((1,), TWO_SIDED),
])
def test_block_sets_match_brute_force(rng, offsets, sidedness):
    for _ in range(5):
        rule = random_rule(rng, 2, offsets, sidedness)
        for n, t in ((1, 3), (2, 2), (2, 3)):
            got = set(spacetime_patterns(rule, n, t).patterns)
            assert got == brute_blocks(rule, n, t)


def test_block_sets_match_brute_force_three_states(rng):
    rule = random_rule(rng, 3, (0, 1), ONE_SIDED)
    assert set(spacetime_patterns(rule, 2, 3).patterns) == \
        brute_blocks(rule, 2, 3)


def test_counts_are_nondecreasing_in_t(rng):
    rule = random_rule(rng, 2, (0, 1), ONE_SIDED)
    counts = trace_counts(rule, 1, 8)
    assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_product_counts_multiply():
    z = rule_021()
    zz = product(z, z)
    single = trace_counts(z, 1, 6)
    double = trace_counts(zz, 1, 6)
    assert double == tuple(c * c for c in single)


def test_entropy_estimate_of_identity_is_zero():
    est = entropy_estimate(identity_rule(3), 1, 6)
    assert est.estimate == 0.0
    assert est.count_t == est.count_prev == 3
    assert est.raw_quotient == pytest.approx(1.584962500721156 / 6)


def test_entropy_estimate_requires_three_steps():
    with pytest.raises(ValueError, match="t must be >= 3"):
        entropy_estimate(rule_021(), 1, 2)


def test_budget_error_carries_the_required_work():
    with pytest.raises(BudgetError) as info:
        trace_words(rule_021(), 1, 10, budget=10)
    assert info.value.required > info.value.budget == 10


class TestDrivers:
    def test_constant_driver_is_nilpotent_in_one_step(self):
        assert is_nilpotent_within(h_constant(), 1, 1)

    def test_step_driver_needs_two_steps(self):
        assert not is_nilpotent_within(h_step(), 1, 2)
        assert is_nilpotent_within(h_step(), 2, 2)

    def test_or_driver_is_never_nilpotent(self):
        for n in range(1, 5):
            assert not is_nilpotent_within(h_or(), n, 1)

    def test_spreading_states(self):
        assert find_spreading_states(h_or()) == (1,)
        assert find_spreading_states(h_constant()) == (1,)
        assert find_spreading_states(rule_021()) == ()

    def test_avoiding_windows_for_the_or_driver(self):
        # the all-zero configuration dodges the spreading state forever
        for m in range(1, 5):
            assert avoiding_window_exists(h_or(), 1, m)

    def test_avoiding_windows_vanish_for_nilpotent_drivers(self):
        assert not avoiding_window_exists(h_constant(), 1, 1)
        assert avoiding_window_exists(h_step(), 2, 1)
        assert not avoiding_window_exists(h_step(), 2, 2)

    def test_nilpotency_respects_budget(self):
        with pytest.raises(BudgetError):
            is_nilpotent_within(h_step(), 12, 2, budget=100)
