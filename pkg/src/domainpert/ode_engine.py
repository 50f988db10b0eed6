"""Adaptive integration of ``-f'' + (V - lambda) f = g``.

The integrator is the Dormand-Prince 5(4) embedded pair (local extrapolation,
FSAL, max-norm error control). Paths keep every accepted step together with
``f, f', f''`` at the nodes, so queries between nodes use quintic Hermite
interpolation, which is one order more accurate than the propagated solution.

The Prüfer form writes ``f = r sin(theta)``, ``f' = r cos(theta)`` and
integrates ``(theta, log r)``; ``theta`` is never wrapped, so the number of
zeros of ``f`` is the number of multiples of pi that ``theta`` passes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, NonFiniteState, StepSizeUnderflow
from .potential import Potential

__all__ = [
    "DEFAULT_TOL", "State2", "PrueferState", "SolutionPath",
    "integrate", "integrate_many", "integrate_pruefer", "dopri5",
    "zero_count", "sign_changes",
]

DEFAULT_TOL = (1e-10, 1e-10)

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# 5th minus 4th order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _tol_pair(tol):
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, (int, float)):
        return float(tol), float(tol)
    atol, rtol = tol
    return float(atol), float(rtol)


def dopri5(rhs: Callable, x0: float, y0: Sequence[float], x1: float, tol=None,
           max_steps: int = 1_000_000, h0: Optional[float] = None):
    """Integrate ``y' = rhs(x, y)`` from ``x0`` to ``x1``.

    ``rhs`` takes and returns plain sequences of floats. Returns three lists:
    the accepted abscissae (ending exactly at ``x1``), the states there and the
    derivatives ``rhs(x, y)`` there.
    """
    atol, rtol = _tol_pair(tol)
    n = len(y0)
    idx = range(n)
    x = float(x0)
    y = [float(v) for v in y0]
    direction = 1.0 if x1 >= x0 else -1.0
    span = abs(x1 - x0)
    k1 = list(rhs(x, y))
    xs, ys, ks = [x], [tuple(y)], [tuple(k1)]
    if span == 0.0:
        return xs, ys, ks

    if h0 is None:
        sc = [atol + rtol * abs(v) for v in y]
        d0 = max(abs(y[i]) / sc[i] for i in idx)
        d1 = max(abs(k1[i]) / sc[i] for i in idx)
        h = 1e-6 * span if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        h = min(h, span)
        yt = [y[i] + direction * h * k1[i] for i in idx]
        kt = rhs(x + direction * h, yt)
        d2 = max(abs(kt[i] - k1[i]) / sc[i] for i in idx) / h
        big = max(d1, d2)
        h1 = (0.01 / big) ** 0.2 if big > 1e-15 else max(1e-6 * span, h * 1e-3)
        h = min(100.0 * h, h1, span)
    else:
        h = min(abs(h0), span)

    steps = 0
    rejected = False
    while True:
        remaining = abs(x1 - x)
        last = h >= remaining
        if last:
            h = remaining
        if h <= 16.0 * math.ulp(max(abs(x), 1.0)):
            raise StepSizeUnderflow(x, h)
        hs = direction * h
        y2 = [y[i] + hs * _A21 * k1[i] for i in idx]
        k2 = rhs(x + _C2 * hs, y2)
        y3 = [y[i] + hs * (_A31 * k1[i] + _A32 * k2[i]) for i in idx]
        k3 = rhs(x + _C3 * hs, y3)
        y4 = [y[i] + hs * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i]) for i in idx]
        k4 = rhs(x + _C4 * hs, y4)
        y5 = [y[i] + hs * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
              for i in idx]
        k5 = rhs(x + _C5 * hs, y5)
        y6 = [y[i] + hs * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i]
                           + _A65 * k5[i]) for i in idx]
        xn = x1 if last else x + hs
        k6 = rhs(x + hs, y6)
        yn = [y[i] + hs * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i]
                           + _B6 * k6[i]) for i in idx]
        k7 = rhs(xn, yn)
        err = 0.0
        for i in idx:
            e = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                      + _E6 * k6[i] + _E7 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yn[i]))
            r = abs(e) / sc
            if r > err:
                err = r
        if not math.isfinite(err):
            if not all(math.isfinite(v) for v in y):
                raise NonFiniteState(x)
            err = 1e10
        steps += 1
        if steps > max_steps:
            raise StepSizeUnderflow(x, h)
        if err <= 1.0:
            if not all(math.isfinite(v) for v in yn):
                raise NonFiniteState(xn)
            x, y, k1 = xn, yn, list(k7)
            xs.append(x)
            ys.append(tuple(y))
            ks.append(tuple(k1))
            if last:
                return xs, ys, ks
            fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
            if rejected:
                fac = min(fac, 1.0)
            h *= fac
            rejected = False
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
            rejected = True


@dataclass(frozen=True)
class State2:
    x: float
    f: float
    df: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.f, self.df)):
            raise NonFiniteState(self.x)


@dataclass(frozen=True)
class PrueferState:
    """Phase/amplitude state; ``theta`` is a continuous lift, not reduced mod 2 pi."""

    x: float
    theta: float
    log_r: float = 0.0

    @classmethod
    def from_state(cls, state: State2) -> "PrueferState":
        r = math.hypot(state.f, state.df)
        if r == 0.0:
            raise DomainError("cannot take the phase of the zero state")
        return cls(state.x, math.atan2(state.f, state.df), math.log(r))

    def to_state(self) -> State2:
        r = math.exp(self.log_r)
        return State2(self.x, r * math.sin(self.theta), r * math.cos(self.theta))

    @property
    def oscillation_count(self) -> int:
        return math.floor(self.theta / math.pi)


# quintic Hermite basis on [0, 1] as polynomial coefficients (highest first)
_HERMITE = np.array([
    [-6, 15, -10, 0, 0, 1],          # y0
    [-3, 8, -6, 0, 1, 0],            # h y0'
    [-0.5, 1.5, -1.5, 0.5, 0, 0],    # h^2 y0''
    [6, -15, 10, 0, 0, 0],           # y1
    [-3, 7, -4, 0, 0, 0],            # h y1'
    [0.5, -1, 0.5, 0, 0, 0],         # h^2 y1''
], dtype=float)


def _septic_basis():
    # basis for y0, h y0', h^2 y0'', h^3 y0''', y1, ... as coefficient rows (highest first)
    M = np.zeros((8, 8))
    for k in range(4):
        for j in range(8):
            M[k, j] = 1.0 if j == k else 0.0
            M[4 + k, j] = math.comb(j, k) if j >= k else 0.0
    scale = np.diag([1.0, 1.0, 0.5, 1.0 / 6.0] * 2)
    coef = np.linalg.solve(M, scale).T
    return coef[:, ::-1]


_SEPTIC = _septic_basis()
_HERMITE_D = [_HERMITE]
_SEPTIC_D = [_SEPTIC]
for _ in range(2):
    _HERMITE_D.append(np.array([np.polyder(row) for row in _HERMITE_D[-1]]))
    _SEPTIC_D.append(np.array([np.polyder(row) for row in _SEPTIC_D[-1]]))


class SolutionPath:
    """Accepted steps of one solution with Hermite interpolation between them.

    Attributes ``x``, ``f``, ``df`` and ``d2f`` are the node arrays in
    integration order; ``atol``/``rtol`` are the tolerances used. Calling the
    path returns interpolated values of ``f``. Given node values ``d3f`` of
    the third derivative the interpolant is septic (error in ``f''`` of order
    ``h^6``), otherwise quintic.
    """

    def __init__(self, x, f, df, d2f, atol=DEFAULT_TOL[0], rtol=DEFAULT_TOL[1], d3f=None):
        self.x = np.asarray(x, dtype=float)
        self.f = np.asarray(f, dtype=float)
        self.df = np.asarray(df, dtype=float)
        self.d2f = np.asarray(d2f, dtype=float)
        self.d3f = None if d3f is None else np.asarray(d3f, dtype=float)
        self.atol = atol
        self.rtol = rtol
        if self.x.size >= 2:
            d = np.diff(self.x)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("path abscissae must be strictly monotone")
        order = np.argsort(self.x)
        self._xs = self.x[order]
        rows = [self.f, self.df, self.d2f] + ([] if self.d3f is None else [self.d3f])
        self._ys = np.stack([r[order] for r in rows])

    def __len__(self):
        return self.x.size

    def __repr__(self):
        return (f"SolutionPath({self.x_start!r} -> {self.x_end!r}, {len(self)} nodes, "
                f"atol={self.atol:g}, rtol={self.rtol:g})")

    @property
    def x_start(self) -> float:
        return float(self.x[0])

    @property
    def x_end(self) -> float:
        return float(self.x[-1])

    @property
    def lo(self) -> float:
        return float(self._xs[0])

    @property
    def hi(self) -> float:
        return float(self._xs[-1])

    def start(self) -> State2:
        return State2(self.x_start, float(self.f[0]), float(self.df[0]))

    def end(self) -> State2:
        return State2(self.x_end, float(self.f[-1]), float(self.df[-1]))

    def _interp(self, xq, order):
        xq_arr = np.asarray(xq, dtype=float)
        scalar = xq_arr.ndim == 0
        xq_arr = np.atleast_1d(xq_arr)
        xs = self._xs
        span = 1e-12 * max(abs(xs[0]), abs(xs[-1]), xs[-1] - xs[0])
        if np.any(xq_arr < xs[0] - span) or np.any(xq_arr > xs[-1] + span):
            raise DomainError(f"query outside path range [{xs[0]}, {xs[-1]}]")
        if xs.size == 1:
            out = np.full(xq_arr.shape, self._ys[order, 0])
            return float(out[0]) if scalar else out
        j = np.clip(np.searchsorted(xs, xq_arr, side="right") - 1, 0, xs.size - 2)
        h = xs[j + 1] - xs[j]
        t = np.clip((xq_arr - xs[j]) / h, 0.0, 1.0)
        m = self._ys.shape[0]
        table = _SEPTIC_D[order] if m == 4 else _HERMITE_D[order]
        val = np.zeros_like(t)
        for k in range(m):
            hk = h ** k
            val += np.polyval(table[k], t) * hk * self._ys[k, j]
            val += np.polyval(table[m + k], t) * hk * self._ys[k, j + 1]
        val = val / h ** order
        return float(val[0]) if scalar else val

    def __call__(self, xq):
        return self._interp(xq, 0)

    def derivative(self, xq):
        return self._interp(xq, 1)

    def second_derivative(self, xq):
        """Second derivative of the interpolant (exact ``f''`` at the nodes)."""
        return self._interp(xq, 2)

    def state(self, xq: float) -> State2:
        return State2(float(xq), self(xq), self.derivative(xq))

    def scaled(self, k: float) -> "SolutionPath":
        d3 = None if self.d3f is None else k * self.d3f
        return SolutionPath(self.x, k * self.f, k * self.df, k * self.d2f, self.atol, self.rtol, d3)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.f)))


def _check_span(potential: Potential, x0, x1):
    a, b = potential.interval.a, potential.interval.b
    lo, hi = min(x0, x1), max(x0, x1)
    if lo < a or hi > b:
        raise DomainError(f"integration span [{lo}, {hi}] leaves the interval [{a}, {b}]")
    sing = set()
    for info in (potential.singularity, potential.far_end):
        if info is not None and info.location != "none":
            sing.add(a if info.location == "left" else b)
    for xs in sing:
        if lo == xs or hi == xs:
            raise DomainError(f"integration span touches the singular endpoint x={xs}")


_FD_REL = 1e-5


def _fd_derivative(fn, xs, a, b):
    """Second-order finite-difference derivative of a smooth ``fn`` at ``xs``.

    The step is ``1e-5`` times the distance to the nearer endpoint, so it
    shrinks with an inverse-square singularity; differences are one-sided
    next to an end.
    """
    out = np.empty(len(xs))
    L = b - a
    for i, x in enumerate(xs):
        d = min(x - a, b - x)
        h = _FD_REL * max(d, 1e-3 * L)
        if x - a >= 2 * h and b - x >= 2 * h:
            out[i] = (fn(x + h) - fn(x - h)) / (2 * h)
        elif x - a < 2 * h:
            out[i] = (-3 * fn(x) + 4 * fn(x + h) - fn(x + 2 * h)) / (2 * h)
        else:
            out[i] = (3 * fn(x) - 4 * fn(x - h) + fn(x - 2 * h)) / (2 * h)
    return out


def _third_derivative(potential, lam, xs, f, df, src=None):
    # differentiate f'' = (V - lam) f - g once more
    a, b = potential.interval.a, potential.interval.b
    V = potential._fn
    q = np.array([V(x) for x in xs]) - lam
    d3 = _fd_derivative(V, xs, a, b) * f + q * df
    if src is not None:
        d3 = d3 - _fd_derivative(src, xs, a, b)
    return d3


def _source(g):
    if g is None:
        return None
    if isinstance(g, (int, float)):
        const = float(g)
        return lambda x: const
    return g


def integrate(potential: Potential, lam: float, start: State2, to: float,
              g=None, tol=None) -> SolutionPath:
    """Integrate ``-f'' + (V - lam) f = g`` from ``start`` to ``to``.

    Parameters
    ----------
    g : callable or float, optional
        Source term; ``None`` gives the homogeneous equation.
    tol : float or (atol, rtol), optional
        Defaults to ``(1e-10, 1e-10)``.
    """
    _check_span(potential, start.x, to)
    atol, rtol = _tol_pair(tol)
    V = potential._fn
    lam = float(lam)
    src = _source(g)
    if src is None:
        def rhs(x, y):
            return (y[1], (V(x) - lam) * y[0])
    else:
        def rhs(x, y):
            return (y[1], (V(x) - lam) * y[0] - src(x))
    xs, ys, ks = dopri5(rhs, start.x, (start.f, start.df), to, (atol, rtol))
    ys = np.asarray(ys)
    ks = np.asarray(ks)
    d3 = _third_derivative(potential, lam, xs, ys[:, 0], ys[:, 1], src)
    return SolutionPath(xs, ys[:, 0], ys[:, 1], ks[:, 1], atol, rtol, d3)


def integrate_many(potential: Potential, lam: float, starts: Sequence[State2], to: float,
                   tol=None) -> list:
    """Integrate several homogeneous solutions on one shared step grid."""
    x0 = starts[0].x
    if any(s.x != x0 for s in starts):
        raise DomainError("all start states must share the same abscissa")
    _check_span(potential, x0, to)
    atol, rtol = _tol_pair(tol)
    V = potential._fn
    lam = float(lam)
    m = len(starts)

    def rhs(x, y):
        q = V(x) - lam
        out = []
        for j in range(m):
            out.append(y[2 * j + 1])
            out.append(q * y[2 * j])
        return out

    y0 = []
    for s in starts:
        y0 += [s.f, s.df]
    xs, ys, ks = dopri5(rhs, x0, y0, to, (atol, rtol))
    ys = np.asarray(ys)
    ks = np.asarray(ks)
    a, b = potential.interval.a, potential.interval.b
    dV = _fd_derivative(V, xs, a, b)
    q = np.array([V(x) for x in xs]) - lam
    return [SolutionPath(xs, ys[:, 2 * j], ys[:, 2 * j + 1], ks[:, 2 * j + 1], atol, rtol,
                         dV * ys[:, 2 * j] + q * ys[:, 2 * j + 1])
            for j in range(m)]


def integrate_pruefer(potential: Potential, lam: float, start: PrueferState, to: float,
                      tol=None) -> PrueferState:
    """Integrate the Prüfer phase equations; returns the final lifted state."""
    _check_span(potential, start.x, to)
    V = potential._fn
    lam = float(lam)
    cos, sin = math.cos, math.sin

    def rhs(x, y):
        c, s = cos(y[0]), sin(y[0])
        q = V(x) - lam
        return (c * c - q * s * s, s * c * (1.0 - q))

    xs, ys, _ = dopri5(rhs, start.x, (start.theta, start.log_r), to, tol)
    return PrueferState(xs[-1], ys[-1][0], ys[-1][1])


def zero_count(theta_start: float, theta_end: float) -> int:
    """Zeros of ``f`` strictly after the start, from the lifted Prüfer angle."""
    return math.floor(theta_end / math.pi) - math.floor(theta_start / math.pi)


def sign_changes(path: SolutionPath) -> int:
    """Sign changes of ``f`` over the path's nodes (exact zeros skipped)."""
    f = path.f[path.f != 0.0]
    return int(np.count_nonzero(np.signbit(f[1:]) != np.signbit(f[:-1])))
