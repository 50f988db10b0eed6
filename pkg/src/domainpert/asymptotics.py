"""Leading-order local solutions at an LCNO endpoint.

Near a singular end with ``V(x) ~ c/(x - a)^2`` there is a basis

    f_+(x) ~ (x - a)^(1/2 + s)    (recessive)
    f_-(x) ~ (x - a)^(1/2 - s)    (dominant),   s = sqrt(c + 1/4).

Germs are these power laws evaluated at ``a + delta0``. No correction terms
are added; accuracy comes from taking ``delta0`` small, and the error is
estimated by comparing against germs started at ``delta0/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ClassificationError, GermError
from .ode_engine import State2, integrate
from .potential import EndpointClassification, Potential, classify_endpoint

__all__ = ["SolutionGerm", "local_germs", "power_law_state", "default_delta0",
           "MAX_DELTA0_FRACTION"]

DEFAULT_DELTA0_FRACTION = 1e-6
MIN_DELTA0_FRACTION = 1e-12
MAX_DELTA0_FRACTION = 1e-2


@dataclass(frozen=True)
class SolutionGerm:
    x0: float
    value: float
    derivative: float
    kind: str  # "recessive" | "dominant"
    lam: float
    s: float
    rel_error: Optional[float] = None
    normalization: str = "power-law"

    def state(self) -> State2:
        return State2(self.x0, self.value, self.derivative)


def default_delta0(potential: Potential) -> float:
    return DEFAULT_DELTA0_FRACTION * potential.interval.length


def power_law_state(s: float, kind: str, t: float, side: str = "left"):
    """``(value, derivative)`` of ``t^(1/2 +- s)`` at distance ``t`` from the end.

    On the right end the derivative is taken with respect to ``x = b - t``.
    """
    e = 0.5 + s if kind == "recessive" else 0.5 - s
    value = t ** e
    deriv = e * t ** (e - 1.0)
    if side == "right":
        deriv = -deriv
    return value, deriv


def _lcno_strength(potential, end):
    cls = classify_endpoint(potential, end)
    if cls is not EndpointClassification.LCNO:
        raise ClassificationError(f"{end} endpoint is {cls.value}, germs need LCNO")
    info = potential.singularity if potential.singularity.location == end else potential.far_end
    return info.s


def _germ_pair(potential, lam, delta0, s):
    a = potential.interval.a
    out = []
    for kind in ("recessive", "dominant"):
        v, d = power_law_state(s, kind, delta0)
        out.append(SolutionGerm(a + delta0, v, d, kind, float(lam), s))
    return out


def _relative_gap(u: State2, v: State2, t):
    num = max(abs(u.f - v.f), t * abs(u.df - v.df))
    den = max(abs(u.f), t * abs(u.df))
    return num / den


def local_germs(potential: Potential, lam: float, delta0: Optional[float] = None,
                estimate_error: bool = True, error_target: float = 1e-6, tol=None):
    """Recessive and dominant germs at ``a + delta0`` for a left LCNO endpoint.

    Parameters
    ----------
    delta0 : float, optional
        Distance from the singular point; defaults to ``1e-6 (b - a)`` and
        must not exceed ``1e-2 (b - a)``.
    estimate_error : bool
        When true each germ carries ``rel_error``: the relative mismatch, at
        ``a + 4 delta0``, between the solution started here and the one
        started from the germ at ``delta0/2``.
    error_target : float
        Raise :class:`GermError` when an estimated error exceeds this.

    Returns
    -------
    (recessive, dominant) : tuple of SolutionGerm
    """
    s = _lcno_strength(potential, "left")
    L = potential.interval.length
    if delta0 is None:
        delta0 = DEFAULT_DELTA0_FRACTION * L
    if not 0.0 < delta0 <= MAX_DELTA0_FRACTION * L:
        raise GermError(f"delta0={delta0} outside (0, {MAX_DELTA0_FRACTION * L}]")
    delta0 = max(delta0, MIN_DELTA0_FRACTION * L)
    germs = _germ_pair(potential, lam, delta0, s)
    if not estimate_error:
        return tuple(germs)

    a = potential.interval.a
    xc = a + 4.0 * delta0
    half = _germ_pair(potential, lam, 0.5 * delta0, s)
    out = []
    for g, gh in zip(germs, half):
        u = integrate(potential, lam, g.state(), xc, tol=tol).end()
        v = integrate(potential, lam, gh.state(), xc, tol=tol).end()
        err = _relative_gap(u, v, xc - a)
        if err > error_target:
            raise GermError(
                f"{g.kind} germ error {err:.3g} exceeds target {error_target:g}; "
                f"reduce delta0={delta0:g}")
        out.append(SolutionGerm(g.x0, g.value, g.derivative, g.kind, g.lam, s, err))
    return tuple(out)
