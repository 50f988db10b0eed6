"""How good is the first-order trial eigenvalue?

With phi_1 the eigenfunction and xi the Green's-function solution of
-xi'' + (V - lambda) xi = phi_1, the function h = phi_1 + c_eps eps^p xi
vanishes at a + eps by the choice

    c_eps = -eps^(-p) phi_1(a + eps) / xi(a + eps),

and satisfies -h'' + (V - lambda_eps) h = -c_eps^2 eps^(2p) xi with
lambda_eps = lambda + c_eps eps^p. The distance from lambda_eps to the
truncated spectrum should therefore be O(eps^(2p)). This script checks the
residual identity pointwise and measures that rate for the Bessel case.
"""
import numpy as np

from domainpert import (ProblemSpec, bessel, build_pair, c_epsilon, greens_apply,
                        solve_eigenvalues, trial_eigenvalue, verify_trial_residual)

V = bessel(0.6, (0.0, 1.0))
ground = solve_eigenvalues(ProblemSpec(V))[0]
pair = build_pair(V, ground.lam)
xi = greens_apply(pair, pair.phi1)
print(f"kappa = {pair.kappa:.12f} (expected -2s = -1.2), drift {pair.kappa_deviation:.1e}")
print(f"|kappa| / ||phi1||^2 = {abs(pair.kappa) / pair.phi1_norm_sq:.6f}\n")

eps_grid = [1e-2, 1e-3, 1e-4, 1e-5]
gaps = []
print(f"{'eps':>7}  {'c_eps':>10}  {'trial':>14}  {'truncated':>14}  {'gap':>9}  {'residual':>9}")
for eps in eps_grid:
    rep = verify_trial_residual(pair, xi, eps)
    lam = solve_eigenvalues(ProblemSpec(V, eps=eps))[0].lam
    gaps.append(abs(lam - rep.lam_trial))
    print(f"{eps:7.0e}  {c_epsilon(pair, xi, eps):10.5f}  {trial_eigenvalue(pair, xi, eps):14.10f}"
          f"  {lam:14.10f}  {gaps[-1]:9.2e}  {rep.rel_residual:9.1e}")

# below 1e-4 the gap reaches the eigenvalue tolerance, so fit the first three
slope = np.polyfit(np.log(eps_grid[:3]), np.log(gaps[:3]), 1)[0]
print(f"\nlog-log slope of the gap: {slope:.3f}   (2p = 2.4)")
