"""
Operator norms of truncation projections
========================================

Whether a dual pair construction survives on sequence spaces is governed by
the truncation projections P_N (keep the first N coordinates, zero the
rest).  On the sup norm every P_N has norm exactly 1.  On the
cascaded-difference norm the norm exceeds 1 but decays like 1 + 2^(-N), so
the family is summably close to projections of norm one.
"""

from zenger import SupNorm, example2_family, pn_table

levels = range(1, 13)

print("cascaded-difference norm (ambient dimension N + 1):")
table = pn_table(example2_family, levels)
print("   N   ||P_N||          analytic bound")
for row in table.rows:
    print("  %2d   %.12f   %.12f" % (row.N, row.pn_norm, row.bound))

print()
print("sup norm for comparison:")
flat = pn_table(lambda N: SupNorm(N + 1), levels)
for row in flat.rows:
    assert row.pn_norm == 1.0
print("  ||P_N|| = 1.0 at every level, as it must be")
