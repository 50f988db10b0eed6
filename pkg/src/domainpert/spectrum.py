"""Eigenvalues of the full singular problem and of its truncations.

The full problem imposes the Friedrichs condition at a left LCNO end by
starting from the recessive germ at ``a + delta0``; the truncated problem on
``(a + eps, b)`` starts from ``f = 0, f' = 1`` at ``a + eps``. Both shoot
rightward. The right end is Dirichlet at ``b`` when regular; when it is itself
an LCNO singular end (the disc family after reflection) the shot is matched
against the recessive right germ at ``b - delta0``.

Indexing uses the Prüfer angle: with ``beta`` the phase of the right boundary
condition in ``(0, pi]``, the number of eigenvalues below ``lam`` is the number
of ``k >= 0`` with ``beta + k pi < theta(b; lam)``. Counting brackets each
eigenvalue; Brent's method on the miss distance then narrows the bracket.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .asymptotics import default_delta0, power_law_state
from .errors import (ClassificationError, DomainError, EigenvalueSearchError)
from .ode_engine import (DEFAULT_TOL, PrueferState, SolutionPath, State2, integrate,
                         integrate_pruefer)
from .potential import EndpointClassification, Potential, classify_endpoint

__all__ = ["ProblemSpec", "EigenvalueResult", "miss_distance", "eigen_count",
           "solve_eigenvalues", "DEFAULT_EIG_TOL", "LAMBDA_CEILING", "LAMBDA_FLOOR"]

DEFAULT_EIG_TOL = 1e-10
LAMBDA_CEILING = 1e6
LAMBDA_FLOOR = -1e6


@dataclass(frozen=True)
class ProblemSpec:
    """Full (``eps == 0``) or truncated (``eps > 0``) eigenvalue problem.

    Each LCNO end of the full problem gets the Friedrichs condition (recessive
    germ at distance ``delta0``); regular ends get Dirichlet. Truncation
    applies at the left end, which must then carry the singularity.
    """

    potential: Potential
    eps: float = 0.0
    delta0: Optional[float] = None
    ode_tol: tuple = DEFAULT_TOL

    def __post_init__(self):
        pot = self.potential
        a, b = pot.interval.a, pot.interval.b
        if self.eps and pot.singularity.location == "right":
            raise ClassificationError("truncation needs the singularity on the left; reflect the problem first")
        if self.delta0 is None:
            object.__setattr__(self, "delta0", default_delta0(pot))
        left = classify_endpoint(pot, "left")
        right = classify_endpoint(pot, "right")
        if left not in (EndpointClassification.LCNO, EndpointClassification.REGULAR):
            raise ClassificationError(f"left endpoint is {left.value}; only LCNO or regular supported")
        if right not in (EndpointClassification.LCNO, EndpointClassification.REGULAR):
            raise ClassificationError(f"right endpoint is {right.value}; only LCNO or regular supported")
        eps = float(self.eps)
        if eps < 0 or not math.isfinite(eps):
            raise DomainError(f"truncation eps must be >= 0, got {eps}")
        if eps > 0 and left is EndpointClassification.LCNO and eps < self.delta0:
            raise DomainError(f"eps={eps} is closer to the singular end than delta0={self.delta0}")
        if self.x_left >= self.x_right:
            raise DomainError(f"a + eps = {a + eps} must be < b = {b}")

    @property
    def left_condition(self) -> str:
        if self.eps == 0 and classify_endpoint(self.potential, "left") is EndpointClassification.LCNO:
            return "friedrichs"
        return "dirichlet"

    @property
    def right_condition(self) -> str:
        if classify_endpoint(self.potential, "right") is EndpointClassification.LCNO:
            return "friedrichs"
        return "dirichlet"

    @property
    def x_left(self) -> float:
        a = self.potential.interval.a
        if self.eps > 0:
            return a + self.eps
        return a + self.delta0 if self.left_condition == "friedrichs" else a

    @property
    def x_right(self) -> float:
        b = self.potential.interval.b
        return b - self.delta0 if self.right_condition == "friedrichs" else b

    def _end_s(self, end):
        for info in (self.potential.singularity, self.potential.far_end):
            if info is not None and info.location == end:
                return info.s
        raise ClassificationError(f"no singularity declared at the {end} end")

    def left_state(self) -> State2:
        if self.left_condition == "friedrichs":
            v, d = power_law_state(self._end_s("left"), "recessive", self.delta0)
            return State2(self.x_left, v, d)
        return State2(self.x_left, 0.0, 1.0)

    def right_state(self) -> State2:
        """Unit-norm boundary datum ``r`` at the right; eigenfunctions satisfy ``[f, r] = 0``."""
        if self.right_condition == "friedrichs":
            v, d = power_law_state(self._end_s("right"), "recessive", self.delta0, "right")
            n = math.hypot(v, d)
            return State2(self.x_right, v / n, d / n)
        return State2(self.x_right, 0.0, 1.0)

    def right_phase(self) -> float:
        r = self.right_state()
        beta = math.atan2(r.f, r.df) % math.pi
        return math.pi if beta == 0.0 else beta

    def with_eps(self, eps: float) -> "ProblemSpec":
        return ProblemSpec(self.potential, eps, self.delta0, self.ode_tol)


@dataclass(frozen=True)
class EigenvalueResult:
    n: int
    lam: float
    bracket: tuple
    oscillation_count: int
    phi1_path: SolutionPath = field(repr=False)
    problem: ProblemSpec = field(repr=False)

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def _shoot(problem: ProblemSpec, lam: float) -> SolutionPath:
    return integrate(problem.potential, lam, problem.left_state(), problem.x_right,
                     tol=problem.ode_tol)


def miss_distance(problem: ProblemSpec, lam: float) -> float:
    """Right boundary residual ``[f, r](x_R) / max|f|`` of the left-condition solution.

    For a Dirichlet right end this is ``f(b) / max|f|``. It vanishes exactly
    at eigenvalues (to integration accuracy).
    """
    path = _shoot(problem, lam)
    end = path.end()
    r = problem.right_state()
    w = -end.df * r.f + end.f * r.df
    return w / path.max_abs()


def _final_phase(problem: ProblemSpec, lam: float) -> float:
    start = PrueferState.from_state(problem.left_state())
    return integrate_pruefer(problem.potential, lam, start, problem.x_right,
                             tol=problem.ode_tol).theta


def eigen_count(problem: ProblemSpec, lam: float) -> int:
    """Number of eigenvalues strictly below ``lam``."""
    theta = _final_phase(problem, lam)
    beta = problem.right_phase()
    if theta <= beta:
        return 0
    return math.ceil((theta - beta) / math.pi)


def _brent(f, a, b, fa, fb, xtol, maxiter=200):
    """Brent's method keeping a sign-change bracket.

    Returns ``(root, lo, hi)`` with ``f(lo) f(hi) <= 0`` and ``hi - lo <= xtol``.
    Falls back to bisection whenever the interpolation step leaves the
    bracket or shrinks too slowly; ties (exact zeros) terminate immediately.
    """
    if fa == 0.0:
        return a, a, a
    if fb == 0.0:
        return b, b, b
    if (fa > 0) == (fb > 0):
        raise EigenvalueSearchError("refinement interval does not bracket a sign change")
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.2e-16 * abs(b) + 0.25 * xtol
        m = 0.5 * (c - b)
        if abs(m) <= tol1 or fb == 0.0:
            lo, hi = sorted((b, c))
            return b, lo, hi
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p, q = 2.0 * m * s, 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, m)
        fb = f(b)
    raise EigenvalueSearchError(f"refinement stagnated after {maxiter} iterations")


def solve_eigenvalues(problem: ProblemSpec, n_lo: int = 0, n_hi: Optional[int] = None,
                      tol: float = DEFAULT_EIG_TOL, lam_floor: float = LAMBDA_FLOOR,
                      lam_ceiling: float = LAMBDA_CEILING) -> list:
    """Eigenvalues ``lambda_n`` for ``n_lo <= n <= n_hi`` (0-based).

    Each eigenvalue is isolated by Prüfer counting, refined by Brent's method
    on :func:`miss_distance` to a bracket no wider than ``tol``, and its
    index re-checked from the zero count of the returned eigenfunction.

    Raises
    ------
    EigenvalueSearchError
        If the search leaves ``[lam_floor, lam_ceiling]`` or refinement stalls.
    """
    if n_hi is None:
        n_hi = n_lo
    if not 0 <= n_lo <= n_hi:
        raise DomainError(f"need 0 <= n_lo <= n_hi, got {n_lo}, {n_hi}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    counts = {}

    def count(lam):
        if lam not in counts:
            counts[lam] = eigen_count(problem, lam)
        return counts[lam]

    L = problem.x_right - problem.x_left
    hi = min(((n_hi + 1) * math.pi / L) ** 2 + 10.0, lam_ceiling)
    while count(hi) < n_hi + 1:
        if hi >= lam_ceiling:
            raise EigenvalueSearchError(
                f"eigenvalue {n_hi} not found below the ceiling {lam_ceiling:g}")
        hi = min(2.0 * hi + 10.0, lam_ceiling)
    lo = max(min(0.0, hi - 10.0), lam_floor)
    while count(lo) > n_lo:
        if lo <= lam_floor:
            raise EigenvalueSearchError(f"eigenvalue {n_lo} not found above the floor {lam_floor:g}")
        lo = max(2.0 * lo - 10.0, lam_floor)

    miss = {}

    def f(lam):
        if lam not in miss:
            miss[lam] = miss_distance(problem, lam)
        return miss[lam]

    beta = problem.right_phase()
    results = []
    for n in range(n_lo, n_hi + 1):
        a = max(k for k, v in counts.items() if v <= n)
        b = min(k for k, v in counts.items() if v >= n + 1)
        while not (count(a) == n and count(b) == n + 1 and (f(a) > 0) != (f(b) > 0)):
            if b - a <= tol:
                raise EigenvalueSearchError(f"could not isolate eigenvalue {n} in [{a}, {b}]")
            mid = 0.5 * (a + b)
            if count(mid) <= n:
                a = mid
            else:
                b = mid
        lam, blo, bhi = _brent(f, a, b, f(a), f(b), tol)
        path = _shoot(problem, lam)
        start = PrueferState.from_state(problem.left_state())
        theta = integrate_pruefer(problem.potential, lam, start, problem.x_right,
                                  tol=problem.ode_tol).theta
        osc = round((theta - beta) / math.pi)
        if osc != n:
            raise EigenvalueSearchError(f"eigenfunction for index {n} has {osc} interior zeros")
        results.append(EigenvalueResult(n, lam, (blo, bhi), osc, path, problem))
    return results
