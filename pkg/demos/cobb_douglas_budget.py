"""
A Cobb-Douglas consumer on a non-standard budget set
====================================================

Maximizing sum alpha_k log x_k is the Cobb-Douglas utility in logs.  With a
plain budget hyperplane the answer is the textbook one: spend fraction
alpha_k on good k.  Here the budget set is instead the unit ball of the
cascaded-difference norm, where good k is also priced against a fraction of
good 1.  The solver returns the optimal bundle together with supporting
prices, and the two multiply coordinatewise back to the weights: at the
optimum, expenditure shares equal utility shares.
"""

import numpy as np

from zenger import (
    Example2Norm,
    ZengerProblem,
    certify,
    eval_norm,
    geometric_alpha,
    solve_zenger,
)

N = 8
alpha = geometric_alpha(0.25, N)
print("geometric weights (renormalized):", np.round(alpha, 6))

spec = Example2Norm(N)
problem = ZengerProblem(spec=spec, alpha=alpha)
pair = solve_zenger(problem)

print("optimal bundle  w   =", np.round(pair.w, 8))
print("prices          phi =", np.round(pair.phi, 8))
print("budget exhausted: norm(w) =", eval_norm(spec, pair.w))
print("total spend: sum w_k phi_k =", float(pair.w @ pair.phi))

shares = pair.w * pair.phi
print("expenditure shares match weights:", np.allclose(shares, alpha, atol=1e-9))
print("certificate ok =", certify(pair, problem).ok)
