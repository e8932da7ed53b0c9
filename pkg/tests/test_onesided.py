"""Permutation-selecting rules, their inverses, and the cyclic word map."""

import pytest

from catoolkit import (ONE_SIDED, TWO_SIDED, RuleTable, PermutationFamily,
                       compose, equal_ca, family_021, family_from_rule,
                       family_to_rule, identity_rule, inverse_family_021,
                       invert_up_to_radius, rho_orbit_length, rho_step,
                       rule_021)
from conftest import random_rule


def test_family_validation():
    with pytest.raises(ValueError):
        PermutationFamily(3, ((0, 1, 2), (0, 1, 2)))  # one family per state
    with pytest.raises(ValueError):
        PermutationFamily(2, ((0, 0), (0, 1)))  # not a permutation


def test_family_rule_roundtrip():
    fam = family_021()
    assert family_from_rule(family_to_rule(fam)) == fam


def test_family_from_rule_rejects_non_family():
    table = {(a, b): max(a, b) for a in range(2) for b in range(2)}
    rule = RuleTable(1, 2, (0, 1), table, ONE_SIDED)
    with pytest.raises(ValueError):
        family_from_rule(rule)  # "or" freezes, so the sections collapse


def test_021_table_spot_values():
    z = rule_021()
    assert z.sidedness == ONE_SIDED and z.neighborhood == (0, 1)
    # the full-cycle section sits at selector 1, the transposition elsewhere
    assert z.table[(0, 1)] == 1 and z.table[(2, 1)] == 0
    assert z.table[(1, 0)] == 2 and z.table[(1, 2)] == 2


class TestInverseSearch:
    def test_021_inverse_is_the_swapped_family(self):
        inv = invert_up_to_radius(rule_021(), 1)
        assert inv is not None
        assert family_from_rule(inv) == inverse_family_021()

    def test_021_compositions_are_identity(self):
        z = rule_021()
        inv = invert_up_to_radius(z, 1)
        ident = identity_rule(3)
        assert equal_ca(compose(inv, z), ident)
        assert equal_ca(compose(z, inv), ident)

    def test_identity_inverts_at_radius_zero(self):
        inv = invert_up_to_radius(identity_rule(4), 0)
        assert inv is not None and equal_ca(inv, identity_rule(4))

    def test_one_sided_shift_is_not_invertible(self):
        # the first letter is lost: 0... and 1... share their image
        table = {(a, b): b for a in range(2) for b in range(2)}
        shift = RuleTable(1, 2, (0, 1), table, ONE_SIDED)
        assert invert_up_to_radius(shift, 3) is None

    def test_merging_family_is_not_invertible(self):
        # sections ``swap`` at selector 0 and ``id`` at 1 glue the constant
        # orbits together: 000... and 111... both map to 111...
        fam = PermutationFamily(2, ((1, 0), (0, 1)))
        assert invert_up_to_radius(family_to_rule(fam), 3) is None

    def test_two_sided_shift_inverts_to_the_other_shift(self):
        shift = RuleTable(1, 2, (1,), {(0,): 0, (1,): 1}, TWO_SIDED)
        inv = invert_up_to_radius(shift, 1)
        back = RuleTable(1, 2, (-1,), {(0,): 0, (1,): 1}, TWO_SIDED)
        assert inv is not None and equal_ca(inv, back)

    def test_radius_zero_misses_the_021_inverse(self):
        assert invert_up_to_radius(rule_021(), 0) is None

    def test_random_noninjective_rules_return_none(self, rng):
        # surjectivity of a permutation family fails for generic tables
        for _ in range(20):
            rule = random_rule(rng, 2, (0, 1), ONE_SIDED)
            inv = invert_up_to_radius(rule, 2)
            if inv is None:
                continue
            assert equal_ca(compose(inv, rule), identity_rule(2))


def test_rho_step_small_words():
    assert rho_step((0,)) == (1,)
    assert rho_step((1,)) == (2,)
    assert rho_step((2,)) == (0,)
    # position 0 is permuted by the section its right neighbour selects
    assert rho_step((0, 0)) == (0, 1)
    assert rho_step((2, 1)) == (0, 2)


def test_rho_orbit_is_full_for_small_n():
    for n in range(1, 7):
        assert rho_orbit_length(n) == 3 ** n


def test_rho_orbit_visits_every_word():
    n = 4
    word = (0,) * n
    seen = {word}
    for _ in range(3 ** n - 1):
        word = rho_step(word)
        seen.add(word)
    assert len(seen) == 3 ** n


def test_rho_orbit_cap():
    with pytest.raises(ValueError, match="1..12"):
        rho_orbit_length(13)
