"""The free operator as an exact check.

With V = 0 on (0, 1) the endpoint x = 0 is an inverse-square end of strength
c = 0, so s = 1/2 and p = 1. The recessive solution is x itself, so the full
problem is just Dirichlet: lambda_n = (n + 1)^2 pi^2. Truncating to (eps, 1)
gives (n + 1)^2 pi^2 / (1 - eps)^2 exactly, and for n = 0

    lambda_eps = pi^2 + 2 pi^2 eps + 3 pi^2 eps^2 + ...

so the predicted coefficient is c_0 = 2 pi^2 = p / ||phi_1||^2 with
phi_1 = sin(pi x)/pi.
"""
import math

from domainpert import (ProblemSpec, build_pair, c_epsilon, free, greens_apply, predict_shift,
                        solve_eigenvalues, trial_eigenvalue)
from domainpert.sweep_analysis import decade_grid, fit_exponent, run_sweep

PI2 = math.pi ** 2
V = free((0.0, 1.0))

eigs = solve_eigenvalues(ProblemSpec(V), 0, 2)
for e in eigs:
    print(f"lambda_{e.n} = {e.lam:.12f}   exact {(e.n + 1) ** 2 * PI2:.12f}")

ground = eigs[0]
pred = predict_shift(V, ground)
print(f"\np = {pred.p}, c_0 = {pred.c_n:.10f}, 2 pi^2 = {2 * PI2:.10f}")

pair = build_pair(V, ground.lam)
xi = greens_apply(pair, pair.phi1)
print(f"\n{'eps':>7}  {'lambda_eps':>14}  {'exact':>14}  {'c_eps':>10}  {'trial':>14}")
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    lam = solve_eigenvalues(ProblemSpec(V, eps=eps))[0].lam
    print(f"{eps:7.0e}  {lam:14.10f}  {PI2 / (1 - eps) ** 2:14.10f}  "
          f"{c_epsilon(pair, xi, eps):10.5f}  {trial_eigenvalue(pair, xi, eps):14.10f}")
# the trial value lambda + c_eps eps^p misses the exact value by about 3 pi^2 eps^2

for first, last in ((2, 5), (2, 6), (3, 6)):
    fit = fit_exponent(run_sweep(V, 0, decade_grid(first, last), lambda_n=ground.lam))
    print(f"fit on 1e-{first}..1e-{last}: delta = {fit.delta:.5f}, "
          f"c_hat = {fit.c_hat:.4f} ({fit.c_hat / (2 * PI2) - 1:+.2%} from 2 pi^2)")
