"""A user-defined potential from an expression string.

Custom potentials need their singular strength declared; it is never
estimated. Here V(x) = 0.11/x^2 + 5 x on (0, 1): the linear term leaves the
endpoint behaviour (and hence p = 1.2) unchanged but moves the spectrum.
The same problem can be run from the command line:

    domainpert sweep --family custom --expr "0.11/x^2 + 5*x" --c 0.11
"""
from domainpert import ProblemSpec, custom, predict_shift, solve_eigenvalues
from domainpert.sweep_analysis import compare, decade_grid, fit_exponent, run_sweep

V = custom("0.11/x^2 + 5*x", (0.0, 1.0), strength_c=0.11)
eigs = solve_eigenvalues(ProblemSpec(V), 0, 2)
for e in eigs:
    print(f"lambda_{e.n} = {e.lam:.10f}")

for e in eigs:
    pred = predict_shift(V, e)
    fit = fit_exponent(run_sweep(V, e.n, decade_grid(3, 6), lambda_n=e.lam))
    rep = compare(pred, fit)
    print(f"n={e.n}: p={pred.p:.4f} delta={fit.delta:.4f}  c_n={pred.c_n:.3f} c_hat={fit.c_hat:.3f}"
          f"  -> {'pass' if rep.passed else 'fail'}")
