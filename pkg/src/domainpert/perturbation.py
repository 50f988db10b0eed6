"""First-order eigenvalue shift under truncation ``(a, b) -> (a + eps, b)``.

For an eigenvalue ``lam`` of the full problem take the canonical pair
``phi1 ~ (x-a)^(1/2+s)`` (recessive) and ``phi2 ~ (x-a)^(1/2-s)`` (dominant),
with Wronskian ``kappa = [phi1, phi2] = -2s``. The bounded solution of
``-xi'' + (V - lam) xi = g`` with ``[xi, phi2](a) = 0`` is

    xi(x) = (1/kappa) [ phi1(x) A(x) + phi2(x) B(x) ],
    A(x) = int_a^x phi2 g,    B(x) = int_x^b phi1 g.

With ``g = phi1``, ``c_eps = -eps^-p phi1(a+eps) / xi(a+eps)`` makes
``h = phi1 + eps^p c_eps xi`` vanish at ``a + eps``, and ``lam + c_eps eps^p``
is within ``O(eps^2p)`` of an eigenvalue of the truncated problem. The limit
is ``c_n = |kappa| / ||phi1||^2 = p / ||phi1||^2``.

The sign in front of the Green's function is the one that makes ``xi`` an
actual solution (checked by :func:`greens_residual`); with it ``c_n > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate as sp_integrate

from .asymptotics import default_delta0, local_germs
from .errors import DegenerateError, DomainError, GermError
from .ode_engine import SolutionPath, State2, integrate_many
from .potential import EndpointClassification, Potential, classify_endpoint
from .spectrum import EigenvalueResult

__all__ = [
    "NormalizedPair", "PerturbationPrediction", "GreenSolution", "TrialResidualReport",
    "wronskian", "build_pair", "greens_apply", "greens_residual", "c_epsilon",
    "trial_eigenvalue", "verify_trial_residual", "predict_shift",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)


def _values(u, x):
    if isinstance(u, SolutionPath):
        return u(x), u.derivative(x)
    if isinstance(u, State2):
        return u.f, u.df
    f, df = u
    return f, df


def wronskian(u, v, x=None):
    """``[u, v](x) = -u'(x) v(x) + u(x) v'(x)``.

    ``u`` and ``v`` may be solution paths (queried at ``x``, which may be an
    array), :class:`State2` objects or ``(value, derivative)`` pairs.
    """
    uf, ud = _values(u, x)
    vf, vd = _values(v, x)
    return -ud * vf + uf * vd


@dataclass(frozen=True)
class NormalizedPair:
    """Recessive ``phi1`` and dominant ``phi2`` on a shared grid at eigenvalue ``lam``.

    ``left_s``/``right_s`` are the power-law exponents used to integrate over
    the unresolved tails ``(a, x_start)`` and ``(x_end, b)``; ``None`` when the
    path reaches that endpoint.
    """

    potential: Potential
    lam: float
    phi1: SolutionPath = field(repr=False)
    phi2: SolutionPath = field(repr=False)
    kappa: float
    kappa_deviation: float
    phi1_norm_sq: float
    left_s: Optional[float] = None
    right_s: Optional[float] = None

    @property
    def p(self) -> float:
        return 2.0 * self.left_s if self.left_s is not None else 2.0 * self.potential.singularity.s

    def rescaled(self, A: float, B: float) -> "NormalizedPair":
        """Pair with ``phi1 -> A phi1`` and ``phi2 -> B phi2``."""
        return NormalizedPair(self.potential, self.lam, self.phi1.scaled(A), self.phi2.scaled(B),
                              A * B * self.kappa, self.kappa_deviation,
                              A * A * self.phi1_norm_sq, self.left_s, self.right_s)


@dataclass(frozen=True)
class PerturbationPrediction:
    n: int
    lambda_n: float
    p: float
    c_n: float
    kappa: float
    phi1_norm_sq: float

    def as_dict(self) -> dict:
        return {"n": self.n, "lambda_n": self.lambda_n, "p": self.p, "c_n": self.c_n,
                "kappa": self.kappa, "phi1_norm_sq": self.phi1_norm_sq}


def _segment_integrals(xs, fn):
    """Gauss-Legendre integral of ``fn`` over each ``[xs[i], xs[i+1]]``."""
    lo, hi = xs[:-1], xs[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL_W)


def _partial_integrals(x0, x1, fn):
    """Gauss-Legendre integrals over ``[x0, x1]`` elementwise (arrays)."""
    half = 0.5 * (x1 - x0)
    mid = 0.5 * (x1 + x0)
    pts = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL_W)


def _tail_power(u0, v0, t, exponent_sum):
    # int_0^t u0 v0 (tau/t)^e dtau
    return u0 * v0 * t / (exponent_sum + 1.0)


def build_pair(potential: Potential, lam: float, delta0: Optional[float] = None, tol=None,
               scales=(1.0, 1.0), kappa_rtol: float = 1e-6, n_kappa: int = 16) -> NormalizedPair:
    """Integrate the canonical solution pair at ``lam`` across the interval.

    ``kappa`` is the median of ``[phi1, phi2]`` over ``n_kappa`` grid nodes;
    its relative spread is ``kappa_deviation``. ``||phi1||^2`` adds the exact
    power-law integrals over the tails the grid does not cover.

    Raises
    ------
    GermError
        If ``kappa`` varies by more than ``kappa_rtol`` relative.
    """
    if classify_endpoint(potential, "left") is not EndpointClassification.LCNO:
        raise GermError("build_pair needs an LCNO singular left endpoint")
    if delta0 is None:
        delta0 = default_delta0(potential)
    rec, dom = local_germs(potential, lam, delta0, estimate_error=False)
    A, B = scales
    s = rec.s
    b = potential.interval.b
    right_s = None
    x_end = b
    if classify_endpoint(potential, "right") is EndpointClassification.LCNO:
        right_s = potential.far_end.s
        x_end = b - delta0
    # integrate the canonical pair and scale afterwards, so that rescaling
    # does not perturb the step sequence
    starts = [State2(rec.x0, rec.value, rec.derivative), State2(dom.x0, dom.value, dom.derivative)]
    phi1, phi2 = integrate_many(potential, lam, starts, x_end, tol=tol)
    if A != 1.0:
        phi1 = phi1.scaled(A)
    if B != 1.0:
        phi2 = phi2.scaled(B)

    idx = np.unique(np.linspace(0, len(phi1) - 1, n_kappa).round().astype(int))
    w = -phi1.df[idx] * phi2.f[idx] + phi1.f[idx] * phi2.df[idx]
    kappa = float(np.median(w))
    if kappa == 0.0:
        raise DegenerateError("solution pair is linearly dependent")
    deviation = float(np.max(np.abs(w - kappa)) / abs(kappa))
    if deviation > kappa_rtol:
        raise GermError(f"Wronskian varies by {deviation:.3g} relative (limit {kappa_rtol:g})")

    xs = phi1.x
    norm_sq = float(np.sum(_segment_integrals(xs, lambda x: phi1(x) ** 2)))
    norm_sq += _tail_power(phi1.f[0], phi1.f[0], delta0, 1.0 + 2.0 * s)
    if right_s is not None:
        norm_sq += _tail_power(phi1.f[-1], phi1.f[-1], delta0, 1.0 + 2.0 * right_s)
    return NormalizedPair(potential, float(lam), phi1, phi2, kappa, deviation, float(norm_sq),
                          left_s=s, right_s=right_s)


def _as_vectorized(g):
    def fn(x):
        x = np.asarray(x, dtype=float)
        try:
            out = np.asarray(g(x), dtype=float)
            if out.shape != x.shape:
                out = np.broadcast_to(out, x.shape).astype(float)
            return out
        except TypeError:
            return np.fromiter((g(float(t)) for t in x.ravel()), float, x.size).reshape(x.shape)
    return fn


class GreenSolution(SolutionPath):
    """``xi`` on the pair's grid, plus exact evaluation through the integral representation."""

    def __init__(self, pair: NormalizedPair, g, A_nodes, B_nodes, xi, dxi, d2xi):
        super().__init__(pair.phi1.x, xi, dxi, d2xi, pair.phi1.atol, pair.phi1.rtol)
        self.pair = pair
        self.g = g
        self._gfun = pair.phi1 if g is pair.phi1 else _as_vectorized(g)
        self.A_nodes = np.asarray(A_nodes)
        self.B_nodes = np.asarray(B_nodes)

    def integrals(self, xq):
        """``(A(x), B(x))`` at arbitrary grid points."""
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        xs = self.pair.phi1.x
        slack = 1e-12 * (xs[-1] - xs[0])
        if np.any(xq < xs[0] - slack) or np.any(xq > xs[-1] + slack):
            raise DomainError(f"query outside [{xs[0]}, {xs[-1]}]")
        xq = np.clip(xq, xs[0], xs[-1])
        j = np.clip(np.searchsorted(xs, xq, side="right") - 1, 0, xs.size - 2)
        gf = self._gfun
        phi1, phi2 = self.pair.phi1, self.pair.phi2
        A = self.A_nodes[j] + _partial_integrals(xs[j], xq, lambda t: phi2(t) * gf(t))
        B = self.B_nodes[j + 1] + _partial_integrals(xq, xs[j + 1], lambda t: phi1(t) * gf(t))
        return A, B

    def representation(self, xq):
        """``(xi, xi', xi'')`` from the Green's representation, termwise.

        ``xi''`` uses ``phi_i'' = (V - lam) phi_i`` and the jump term
        ``(phi1' phi2 - phi2' phi1) g / kappa``, with no numerical
        differentiation.
        """
        scalar = np.ndim(xq) == 0
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        pair = self.pair
        A, B = self.integrals(xq)
        u, du = pair.phi1(xq), pair.phi1.derivative(xq)
        v, dv = pair.phi2(xq), pair.phi2.derivative(xq)
        q = np.array([pair.potential(t) for t in xq]) - pair.lam
        k = pair.kappa
        xi = (u * A + v * B) / k
        dxi = (du * A + dv * B) / k
        d2xi = (q * u * A + q * v * B + (du * v - dv * u) * self._gfun(xq)) / k
        if scalar:
            return float(xi[0]), float(dxi[0]), float(d2xi[0])
        return xi, dxi, d2xi


def greens_apply(pair: NormalizedPair, g) -> GreenSolution:
    """Solve ``-xi'' + (V - lam) xi = g`` with ``[xi, phi2](a) = 0`` and the
    right boundary condition satisfied by ``phi1``.

    ``g`` is a callable on the interval, a constant, or ``pair.phi1`` itself
    (in which case tail integrals use its exact power-law form).
    """
    phi1, phi2 = pair.phi1, pair.phi2
    xs = phi1.x
    a, b = pair.potential.interval.a, pair.potential.interval.b
    is_phi1 = g is phi1
    if isinstance(g, (int, float)):
        const = float(g)
        g = lambda x: const  # noqa: E731
    gfun = phi1 if is_phi1 else _as_vectorized(g)

    segA = _segment_integrals(xs, lambda t: phi2(t) * gfun(t))
    segB = _segment_integrals(xs, lambda t: phi1(t) * gfun(t))

    tailA = 0.0
    t0 = xs[0] - a
    if pair.left_s is not None and t0 > 0:
        if is_phi1:
            tailA = _tail_power(phi2.f[0], phi1.f[0], t0, 1.0)
        else:
            e2 = 0.5 - pair.left_s
            tailA = sp_integrate.quad(
                lambda x: phi2.f[0] * ((x - a) / t0) ** e2 * g(x), a, xs[0], limit=200)[0]
    tailB = 0.0
    t1 = b - xs[-1]
    if pair.right_s is not None and t1 > 0:
        e1 = 0.5 + pair.right_s
        if is_phi1:
            tailB = _tail_power(phi1.f[-1], phi1.f[-1], t1, 2.0 * e1)
        else:
            tailB = sp_integrate.quad(
                lambda x: phi1.f[-1] * ((b - x) / t1) ** e1 * g(x), xs[-1], b, limit=200)[0]

    A_nodes = tailA + np.concatenate(([0.0], np.cumsum(segA)))
    B_nodes = tailB + np.concatenate((np.cumsum(segB[::-1])[::-1], [0.0]))
    k = pair.kappa
    xi = (phi1.f * A_nodes + phi2.f * B_nodes) / k
    dxi = (phi1.df * A_nodes + phi2.df * B_nodes) / k
    q = np.array([pair.potential(t) for t in xs]) - pair.lam
    d2xi = q * xi - gfun(xs)
    return GreenSolution(pair, g, A_nodes, B_nodes, xi, dxi, d2xi)


def greens_residual(xi: GreenSolution, xq, rel_step: float = 0.01, max_step: float = 0.01) -> np.ndarray:
    """``|-xi'' + (V - lam) xi - g|`` with ``xi''`` from a five-point stencil.

    Independent of the termwise formula: only values of ``xi`` from the
    integral representation enter, at ``x + k h`` for ``k = -2..2`` with
    ``h = min(rel_step (x - a), max_step)`` (clipped to stay on the grid).
    """
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    pair = xi.pair
    a = pair.potential.interval.a
    lo, hi = pair.phi1.lo, pair.phi1.hi
    h = np.minimum(rel_step * (xq - a), max_step)
    h = np.minimum(h, 0.5 * np.minimum(xq - lo, hi - xq))
    f = [xi.representation(xq + k * h)[0] for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
    q = np.array([pair.potential(t) for t in xq]) - pair.lam
    return np.abs(-d2 + q * f[2] - xi._gfun(xq))


def _edge(pair, eps):
    x = pair.potential.interval.a + eps
    if x < pair.phi1.lo * (1.0 - 1e-14):
        raise DomainError(f"a + eps = {x} lies inside the unresolved tail (grid starts at {pair.phi1.lo})")
    return min(max(x, pair.phi1.lo), pair.phi1.hi)


def c_epsilon(pair: NormalizedPair, xi: GreenSolution, eps: float) -> float:
    """``c_eps = -eps^(-p) phi1(a + eps) / xi(a + eps)``."""
    x = _edge(pair, eps)
    xv = xi.representation(x)[0]
    if xv == 0.0:
        raise DegenerateError(f"xi vanishes at a + eps = {x}")
    return -eps ** (-pair.p) * pair.phi1(x) / xv


def trial_eigenvalue(pair: NormalizedPair, xi: GreenSolution, eps: float) -> float:
    """``lam + c_eps eps^p``."""
    if eps == 0:
        return pair.lam
    return pair.lam + c_epsilon(pair, xi, eps) * eps ** pair.p


@dataclass(frozen=True)
class TrialResidualReport:
    eps: float
    lam_trial: float
    c_eps: float
    max_residual: float
    rel_residual: float
    boundary_value: float
    boundary_rel: float
    scale: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def verify_trial_residual(pair: NormalizedPair, xi: GreenSolution, eps: float,
                          n_samples: int = 100) -> TrialResidualReport:
    """Check ``-h'' + (V - lam_eps) h = -c_eps^2 eps^2p xi`` and ``h(a + eps) = 0``.

    ``h''`` is assembled from the equations satisfied by ``phi1`` and ``xi``
    separately. ``rel_residual`` divides each pointwise residual by the
    largest term in the identity at that point.
    """
    a = pair.potential.interval.a
    x0 = _edge(pair, eps)
    x1 = pair.phi1.hi
    xq = np.unique(np.concatenate([
        a + np.geomspace(x0 - a, x1 - a, n_samples // 2),
        np.linspace(x0, x1, n_samples - n_samples // 2)]))
    c = c_epsilon(pair, xi, eps)
    ep = eps ** pair.p
    lam_e = pair.lam + c * ep
    q = np.array([pair.potential(t) for t in xq]) - pair.lam
    u = pair.phi1(xq)
    d2u = q * u
    x, _, d2x = xi.representation(xq)
    h = u + ep * c * x
    d2h = d2u + ep * c * d2x
    res = np.abs(-d2h + (q - c * ep) * h + c * c * ep * ep * x)
    # roundoff scale: sum of the magnitudes of every term before cancellation
    size = (np.abs(d2u) + np.abs(ep * c * d2x) + np.abs(q * u) + np.abs(q * ep * c * x)
            + np.abs(c * ep * h) + np.abs(c * c * ep * ep * x))
    rel = float(np.max(res / np.maximum(size, 1e-300)))
    scale = float(np.max(np.abs(h)))
    hb = abs(float(pair.phi1(x0) + ep * c * xi.representation(x0)[0]))
    return TrialResidualReport(float(eps), lam_e, c, float(res.max()), rel, hb, hb / scale, scale)


def predict_shift(potential: Potential, eigen: EigenvalueResult, tol=None) -> PerturbationPrediction:
    """Predicted exponent ``p = 2 sqrt(c + 1/4)`` and coefficient ``c_n`` for ``lambda_n``."""
    problem = eigen.problem
    if problem.eps != 0 or problem.left_condition != "friedrichs":
        raise DomainError("predict_shift needs an eigenvalue of the full singular problem")
    pair = build_pair(potential, eigen.lam, delta0=problem.delta0,
                      tol=problem.ode_tol if tol is None else tol)
    p = 2.0 * math.sqrt(potential.singularity.strength_c + 0.25)
    c_n = float(abs(pair.kappa) / pair.phi1_norm_sq)
    return PerturbationPrediction(eigen.n, eigen.lam, p, c_n, pair.kappa, pair.phi1_norm_sq)
