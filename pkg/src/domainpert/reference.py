"""Reference values for the Bessel potential, nu = 0.6, on (0, 1).

Bottom eigenvalues from an independent singular Sturm-Liouville code (quoted
to 7 decimals, tolerance below 1e-10), and the log-log slope obtained by a
least-squares fit of the truncated values against ``LAMBDA_0``.
"""

BESSEL_NU = 0.6
LAMBDA_0 = 10.7751055
# (eps, bottom eigenvalue on (eps, 1))
TRUNCATED_TABLE = (
    (0.1, 12.6988324),
    (0.01, 10.8878760),
    (0.001, 10.7821955),
    (0.0001, 10.7755528),
    (0.00001, 10.7751337),
    (0.000001, 10.7751073),
)
FITTED_SLOPE = 1.204292602
