"""Coupling a reversible conveyor to a one-sided driver rule.

Two rules are built over a product alphabet: the coupled rule advances a
reversible track wherever the driver track stays alive, the inert rule
never advances it.  If the driver dies out everywhere within n steps the
two rules are conjugate, and a conjugacy witness is constructed and
machine-checked; if instead the driver has a spreading quiescent state but
avoids it on some windows, the coupled rule keeps strictly more entropy
than the inert one.
"""

import warnings

from catoolkit import (ONE_SIDED, ReductionSpec, RuleTable,
                       avoiding_window_exists, build_f, build_g, build_phi,
                       entropy_estimate, find_spreading_states,
                       is_nilpotent_within, verify_witness)


def driver(k, fn):
    table = {(b0, b1): fn(b0, b1) for b0 in range(k) for b1 in range(k)}
    return RuleTable(1, k, (0, 1), table, ONE_SIDED)


def step_driver():
    """Three states 0 -> 1 -> 2 with 2 absorbing; dead after two steps."""
    return driver(3, lambda b0, b1: min(b0 + 1, 2))


def or_driver():
    """Two states; 1 spreads but all-zero windows survive forever."""
    return driver(2, max)


def make_spec(h, q, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # k=1 keeps the tables tiny
        return ReductionSpec(h, q, 1, n)


def nilpotent_branch():
    h, q, n = step_driver(), 2, 2
    print(f"Driver sends every cell to {q} within {n} steps:",
          is_nilpotent_within(h, n, q))
    spec = make_spec(h, q, n)
    coupled, inert = build_f(spec), build_g(spec)
    report = verify_witness(build_phi(spec), coupled, inert, n + 1)
    print(f"Witness intertwines the two rules: {report.homomorphism}")
    print(f"Witness is invertible (radius {report.max_radius}):"
          f" {report.invertible}")
    for name, rule in (("coupled", coupled), ("inert", inert)):
        est = entropy_estimate(rule, 1, 8)
        print(f"Entropy estimate of the {name} rule: {est.estimate}")
    print()


def gap_branch():
    h, q = or_driver(), 1
    print("Spreading states of the or-driver:", find_spreading_states(h))
    print("A 4-cell window can avoid the spreading state:",
          avoiding_window_exists(h, q, 4))
    spec = make_spec(h, q, 1)
    f_est = entropy_estimate(build_f(spec), 1, 8).estimate
    g_est = entropy_estimate(build_g(spec), 1, 8).estimate
    print(f"Coupled-rule estimate {f_est:.4f} vs inert {g_est:.4f};"
          f" gap {f_est - g_est:.4f}")


if __name__ == "__main__":
    nilpotent_branch()
    gap_branch()
