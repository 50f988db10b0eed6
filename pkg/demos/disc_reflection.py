"""A potential singular at the right end, handled by reflection.

The disc-reduction potential with parameters (gamma, nu) lives on
(0, 1/(1 - gamma)); its right end carries an inverse-square singularity of
strength (2 gamma - gamma^2) / (4 (1 - gamma)^2), so that
p = 2 sqrt(c + 1/4) = 1/(1 - gamma). The left end is a Bessel-type end of
strength nu^2 - 1/4.

Truncation is implemented at the left end, so the problem is mirrored with
x -> a + b - x first. Eigenvalues do not change; the far end keeps its
Friedrichs condition through a recessive germ.
"""
from domainpert import ProblemSpec, disc, predict_shift, reflect_problem, solve_eigenvalues
from domainpert.sweep_analysis import compare, decade_grid, fit_exponent, run_sweep

V = disc(0.25, 0.6)
R = reflect_problem(V)
print("original :", V.describe())
print("reflected:", R.describe())

orig = solve_eigenvalues(ProblemSpec(V), 0, 2)
refl = solve_eigenvalues(ProblemSpec(R), 0, 2)
for a, b in zip(orig, refl):
    print(f"lambda_{a.n}: original {a.lam:.12f}  reflected {b.lam:.12f}  diff {abs(a.lam - b.lam):.1e}")

pred = predict_shift(R, refl[0])
fit = fit_exponent(run_sweep(R, 0, decade_grid(2, 5), lambda_n=refl[0].lam))
rep = compare(pred, fit)
print(f"\npredicted p = {pred.p:.6f} (1/(1 - gamma) = {1 / 0.75:.6f}), c_0 = {pred.c_n:.4f}")
print(f"fitted delta = {fit.delta:.6f}, c_hat = {fit.c_hat:.4f} -> {'pass' if rep.passed else 'fail'}")
