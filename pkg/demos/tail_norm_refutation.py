"""
Where the construction breaks: the sup-plus-limsup norm
=======================================================

On eventually constant sequences, norm(x) = sup|x_k| + limsup|x_k| is a
perfectly good norm equivalent to the sup norm.  But it is blind to
truncation in a fatal way: the constant sequence e has norm 2 while every
truncation P_N e has norm 1, so the norm of the limit exceeds the liminf of
the truncated norms.  As a consequence no bundle w on its unit sphere
admits supporting prices of dual norm one; for any candidate there is a
finitely supported witness x with norm(x) = 1 whose pairing against the
candidate prices already exceeds 1.
"""

import numpy as np

from zenger import (
    Example1TailNorm,
    TailVector,
    example1_refute,
    eval_norm,
    geometric_rule,
    liminf_check,
)

spec = Example1TailNorm()

# the constant sequence e: empty head, tail value 1
e = TailVector(np.array([]), 1.0)
print("norm(e) =", eval_norm(spec, e))

report = liminf_check(spec, e, range(1, 30))
print("liminf of norm(P_N e) =", report.limit_estimate)
print("consistent with norm(e)?", report.consistent)

# candidate bundle e/2 sits on the unit sphere; weights alpha_k = 2^(-k)
candidate = TailVector(np.array([]), 0.5)
witness = example1_refute(candidate, geometric_rule(0.5))
print()
print("candidate w = e/2 is refuted at N =", witness.N)
print("witness head =", witness.x.head, " tail =", witness.x.tail)
print("norm(witness) =", eval_norm(spec, witness.x))
print("pairing value =", witness.value, "> 1")
