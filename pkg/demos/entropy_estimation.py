"""Estimating trace entropy by counting space-time patterns.

Counting the distinct t-step histories of a single cell gives an upper
bound on entropy; the two-step difference of log-counts converges much
faster than the raw quotient log(count)/t.  For the conveyor rule the
counts follow the pattern 3, 5, 7, 11, ..., doubling every other step, so
the estimate settles near 1/2 while the raw quotient is still far away.
"""

from catoolkit import entropy_estimate, product, rule_021, trace_words


def count_table():
    z = rule_021()
    print(" t  count   difference-estimate   raw-quotient")
    for t in range(1, 13):
        count = len(trace_words(z, 1, t))
        if t >= 3:
            est = entropy_estimate(z, 1, t)
            print(f"{t:2d} {count:6d}   {est.estimate:19.6f}"
                  f"   {est.raw_quotient:12.6f}")
        else:
            print(f"{t:2d} {count:6d}")
    print()


def closed_forms():
    z = rule_021()
    print("Counts match 3*2^m - 1 at even steps and 2^(m+2) - 1 at odd:")
    for t in range(1, 13):
        count = len(trace_words(z, 1, t))
        m = t // 2
        expected = 3 * 2 ** m - 1 if t % 2 == 0 else 2 ** (m + 2) - 1
        print(f"  t={t:2d}: {count} (formula {expected})")
    print()


def product_counts_square():
    z = rule_021()
    zz = product(z, z)
    print("The product rule's counts are exact squares (entropies add):")
    for t in (2, 4, 6, 8):
        a = len(trace_words(z, 1, t))
        b = len(trace_words(zz, 1, t))
        print(f"  t={t}: {a}^2 = {a * a} vs {b}")
    est = entropy_estimate(zz, 1, 10)
    print(f"Product estimate at t=10: {est.estimate:.6f}"
          f" (about twice {entropy_estimate(z, 1, 10).estimate:.6f})")


if __name__ == "__main__":
    count_table()
    closed_forms()
    product_counts_square()
