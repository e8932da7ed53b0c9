"""The coupled/inert pair construction and its conjugacy witness."""

import itertools

import pytest

from catoolkit import (ONE_SIDED, TWO_SIDED, ReductionSpec, RuleTable,
                       build_f, build_g, build_phi, equal_ca, graph_subshift,
                       identity_rule, product, reversible_power, rule_021,
                       split_state, verify_witness)
from conftest import h_constant, h_or, h_step, onesided_from


def spec_for(h, q, k=1, n=1):
    with pytest.warns(UserWarning):
        # k=1 is fine for correctness tests; the gap guarantee needs more
        return ReductionSpec(h, q, k, n)


class TestSpecValidation:
    def test_two_sided_driver_rejected(self):
        table = {(a, b): a for a in range(2) for b in range(2)}
        h = RuleTable(1, 2, (0, 1), table, TWO_SIDED)
        with pytest.raises(ValueError, match="one-sided"):
            ReductionSpec(h, 0, 2, 1)

    def test_wide_neighborhood_rejected(self):
        table = {p: 0 for p in itertools.product(range(2), repeat=3)}
        h = RuleTable(1, 2, (0, 1, 2), table, ONE_SIDED)
        with pytest.raises(ValueError, match="within"):
            ReductionSpec(h, 0, 2, 1)

    def test_non_quiescent_q_rejected(self):
        h = onesided_from(2, lambda b0, b1: 1 - b0)
        with pytest.raises(ValueError, match="quiescent"):
            ReductionSpec(h, 0, 2, 1)

    def test_small_k_warns(self):
        with pytest.warns(UserWarning, match="entropy gap"):
            ReductionSpec(h_constant(), 1, 1, 1)

    def test_sizes(self):
        spec = spec_for(h_step(), 2, k=1, n=2)
        assert spec.reversible_size == 9
        assert spec.pair_size == 27


def test_reversible_power_is_the_squared_rule():
    assert equal_ca(reversible_power(1), product(rule_021(), rule_021()))
    assert reversible_power(2).alphabet_size == 81


def test_inert_rule_runs_driver_under_a_frozen_track():
    h = h_step()
    g = build_g(spec_for(h, 2, n=2))
    b_size = h.alphabet_size
    for p0, p1 in itertools.product(range(g.alphabet_size), repeat=2):
        a0, b0 = split_state(p0, b_size)
        _a1, b1 = split_state(p1, b_size)
        va, vb = split_state(g.table[(p0, p1)], b_size)
        assert va == a0
        assert vb == h.table[(b0, b1)]


def test_coupled_rule_advances_exactly_off_the_quiescent_state():
    h = h_or()
    q = 1
    f = build_f(spec_for(h, q))
    zz = reversible_power(1)
    b_size = h.alphabet_size
    for p0, p1 in itertools.product(range(f.alphabet_size), repeat=2):
        a0, b0 = split_state(p0, b_size)
        a1, b1 = split_state(p1, b_size)
        va, vb = split_state(f.table[(p0, p1)], b_size)
        assert vb == h.table[(b0, b1)]
        if vb == q:
            assert va == a0  # frozen where the driver dies
        else:
            assert va == zz.table[(a0, a1)]


def test_witness_with_zero_steps_is_the_identity():
    spec = spec_for(h_constant(), 1, n=0)
    assert equal_ca(build_phi(spec), identity_rule(spec.pair_size))


def test_witness_verifies_for_the_constant_driver():
    spec = spec_for(h_constant(), 1, n=1)
    rep = verify_witness(build_phi(spec), build_f(spec), build_g(spec), 2)
    assert rep.homomorphism and rep.invertible and rep.witnessed
    assert rep.inverse is not None


def test_witness_fails_for_a_non_nilpotent_driver():
    spec = spec_for(h_or(), 1, n=1)
    rep = verify_witness(build_phi(spec), build_f(spec), build_g(spec), 2)
    assert not rep.witnessed


def test_wrong_witness_map_fails_the_intertwining_half():
    spec = spec_for(h_or(), 1, n=1)
    ident = identity_rule(spec.pair_size)
    rep = verify_witness(ident, build_f(spec), build_g(spec), 1)
    assert not rep.homomorphism
    assert rep.invertible  # the identity inverts fine; the other half fails
    assert not rep.witnessed


class TestGraphSubshift:
    def test_zeta_forbidden_count(self):
        sft = graph_subshift(rule_021())
        assert (sft.width, sft.anchor) == (2, 0)
        # 81 two-cell pair blocks, 27 consistent with the rule
        assert len(sft.forbidden) == 54

    def test_forbidden_blocks_match_the_table(self):
        z = rule_021()
        sft = graph_subshift(z)
        for (x0, y0), (x1, _y1) in sft.forbidden:
            assert y0 != z.table[(x0, x1)]

    def test_two_sided_window_geometry(self):
        table = {p: p[0] ^ p[2]
                 for p in itertools.product(range(2), repeat=3)}
        rule = RuleTable(1, 2, (-1, 0, 1), table, TWO_SIDED)
        sft = graph_subshift(rule)
        assert (sft.width, sft.anchor) == (3, 1)

    def test_admits_orbit_pairs_and_rejects_corruptions(self):
        z = rule_021()
        sft = graph_subshift(z)
        word = (1, 2, 0, 2, 1, 0, 1)
        image = tuple(z.table[(word[i], word[i + 1])]
                      for i in range(len(word) - 1))
        pairs = list(zip(word, image))
        assert sft.admits(pairs)
        bad = list(pairs)
        bad[2] = (bad[2][0], (bad[2][1] + 1) % 3)
        assert not sft.admits(bad)

    def test_short_words_admit_trivially(self):
        sft = graph_subshift(rule_021())
        assert sft.admits([(0, 2)])
