"""Potentials ``V`` on a finite interval with an inverse-square endpoint singularity.

Built-in families
-----------------
``inverse_square(c)``
    ``V(x) = c / (x - a)^2``; ``c = 0`` is the free problem.
``bessel(nu)``
    ``V(x) = (nu^2 - 1/4) / (x - a)^2``, strength ``nu^2 - 1/4``.
``disc(gamma, nu)``
    The radial reduction of ``-d(x)^{2 gamma} Laplacian`` on the unit disc,
    on ``(0, alpha)`` with ``alpha = 1/(1 - gamma)``; singular at ``x = alpha``
    with strength ``(2 gamma - gamma^2) / (4 (1 - gamma)^2)``. For ``nu != 1/2``
    the centre of the disc (``x = 0``) is a second, Bessel-type singular end.
``custom(expr, ...)``
    Any expression accepted by :mod:`domainpert.exprparse`, with the
    singularity strength declared by the caller.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

from . import exprparse
from .errors import DomainError

__all__ = [
    "Interval", "SingularityInfo", "Potential", "EndpointClassification",
    "ReflectionWarning", "inverse_square", "free", "bessel", "disc", "custom",
    "evaluate", "classify_endpoint", "reflect_problem",
]


class ReflectionWarning(UserWarning):
    """reflect_problem was called on a potential that is not singular on the right."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got ({a}, {b})")
        if not a < b:
            raise DomainError(f"interval must satisfy a < b, got ({a}, {b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x) -> bool:
        return self.a < x < self.b


@dataclass(frozen=True)
class SingularityInfo:
    """Location and strength ``c = lim V(x) (x - x_sing)^2`` of a singular endpoint.

    ``s = sqrt(c + 1/4)`` and ``p = 2 s`` are ``nan`` when ``c <= -1/4``.
    """

    location: str  # "left" | "right" | "none"
    strength_c: Optional[float] = None

    def __post_init__(self):
        if self.location not in ("left", "right", "none"):
            raise DomainError(f"location must be left, right or none, got {self.location!r}")
        if self.location == "none":
            object.__setattr__(self, "strength_c", None)
        elif self.strength_c is None or not math.isfinite(self.strength_c):
            raise DomainError("a singular endpoint needs a finite strength_c")
        else:
            object.__setattr__(self, "strength_c", float(self.strength_c))

    @property
    def s(self) -> float:
        if self.strength_c is None or self.strength_c <= -0.25:
            return math.nan
        return math.sqrt(self.strength_c + 0.25)

    @property
    def p(self) -> float:
        return 2.0 * self.s


class EndpointClassification(enum.Enum):
    REGULAR = "Regular"
    LCNO = "LCNO"
    LP = "LP"
    UNSUPPORTED = "Unsupported"


def _classify_strength(c):
    if c is None:
        return EndpointClassification.REGULAR
    if c <= -0.25:
        return EndpointClassification.UNSUPPORTED
    if c >= 0.75:
        return EndpointClassification.LP
    return EndpointClassification.LCNO


def _make_base(family, params, expr, interval):
    """Closure evaluating the unreflected potential; no domain checks."""
    a = interval.a
    if family in ("inverse-square", "bessel"):
        c = params["c"] if family == "inverse-square" else params["nu"] ** 2 - 0.25
        return lambda x: c / ((x - a) * (x - a))
    if family == "disc":
        gamma, nu = params["gamma"], params["nu"]
        alpha = 1.0 / (1.0 - gamma)
        cb = (2.0 * gamma - gamma * gamma) / (4.0 * (1.0 - gamma) ** 2)
        cn = nu * nu - 0.25
        e2 = 2.0 * gamma * alpha

        def disc_v(x):
            t = alpha - x
            log_u = math.log1p(-x / alpha)
            # 1 - (1 - x/alpha)^alpha without cancellation near x = 0
            den = -math.expm1(alpha * log_u)
            return cb / (t * t) + cn * math.exp(e2 * log_u) / (den * den)

        return disc_v
    if family == "custom":
        return exprparse.compile_expr(expr)
    raise DomainError(f"unknown potential family {family!r}")


@dataclass(frozen=True)
class Potential:
    """An evaluatable potential with its singular-endpoint metadata.

    Instances are immutable. ``far_end`` records a second (LCNO) singular
    endpoint opposite ``singularity``; only the disc family has one.
    Calling the instance evaluates ``V`` without bounds checks; use
    :func:`evaluate` for a checked evaluation.
    """

    interval: Interval
    family: str
    params: tuple
    singularity: SingularityInfo
    far_end: Optional[SingularityInfo] = None
    expr: Optional[exprparse.Expr] = None
    reflected: bool = False
    _fn: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        base = _make_base(self.family, dict(self.params), self.expr, self.interval)
        if self.reflected:
            ab = self.interval.a + self.interval.b
            fn = lambda x: base(ab - x)  # noqa: E731
        else:
            fn = base
        object.__setattr__(self, "_fn", fn)

    def __call__(self, x):
        return self._fn(x)

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_fn", None)
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)
        self.__post_init__()

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def singular_point(self) -> Optional[float]:
        loc = self.singularity.location
        if loc == "left":
            return self.interval.a
        if loc == "right":
            return self.interval.b
        return None

    def describe(self) -> dict:
        out = {
            "family": self.family,
            "params": dict(self.params),
            "interval": [self.interval.a, self.interval.b],
            "singular_end": self.singularity.location,
            "strength_c": self.singularity.strength_c,
            "reflected": self.reflected,
        }
        if self.expr is not None:
            out["expr"] = exprparse.to_source(self.expr)
        if self.far_end is not None:
            out["far_end"] = {"location": self.far_end.location,
                              "strength_c": self.far_end.strength_c}
        return out


def _interval(interval):
    return interval if isinstance(interval, Interval) else Interval(*interval)


def inverse_square(c: float, interval=(0.0, 1.0)) -> Potential:
    return Potential(_interval(interval), "inverse-square", (("c", float(c)),),
                     SingularityInfo("left", c))


def free(interval=(0.0, 1.0)) -> Potential:
    """``V = 0``; the left end is treated as an inverse-square end of strength 0."""
    return inverse_square(0.0, interval)


def bessel(nu: float, interval=(0.0, 1.0)) -> Potential:
    if nu < 0:
        raise DomainError(f"bessel order must be non-negative, got {nu}")
    return Potential(_interval(interval), "bessel", (("nu", float(nu)),),
                     SingularityInfo("left", nu * nu - 0.25))


def disc(gamma: float, nu: float) -> Potential:
    """Disc-reduction potential on ``(0, 1/(1 - gamma))``, singular at the right end."""
    if not 0.0 <= gamma < 0.5:
        raise DomainError(f"gamma must lie in [0, 1/2), got {gamma}")
    if nu < 0:
        raise DomainError(f"nu must be non-negative, got {nu}")
    alpha = 1.0 / (1.0 - gamma)
    cb = (2.0 * gamma - gamma * gamma) / (4.0 * (1.0 - gamma) ** 2)
    cn = nu * nu - 0.25
    far = SingularityInfo("left", cn) if cn != 0.0 else None
    return Potential(Interval(0.0, alpha), "disc", (("gamma", float(gamma)), ("nu", float(nu))),
                     SingularityInfo("right", cb), far_end=far)


def custom(expr, interval, strength_c: Optional[float] = None, location: str = "left") -> Potential:
    """Potential given by an expression in ``x`` with a declared singularity.

    ``expr`` may be a string or a parsed tree. ``strength_c`` is never
    estimated; pass ``location="none"`` for a potential regular at both ends.
    """
    tree = exprparse.parse(expr) if isinstance(expr, str) else expr
    return Potential(_interval(interval), "custom", (), SingularityInfo(location, strength_c),
                     expr=tree)


def evaluate(potential: Potential, x: float) -> float:
    """``V(x)`` for an interior point ``x``; raises :class:`DomainError` otherwise."""
    if not potential.interval.contains(x):
        iv = potential.interval
        raise DomainError(f"x={x!r} is outside the open interval ({iv.a}, {iv.b})")
    return float(potential(x))


def classify_endpoint(potential: Potential, end: str) -> EndpointClassification:
    """Classify the ``left`` or ``right`` endpoint from its declared strength.

    Undeclared ends are Regular; a declared end is LCNO for ``-1/4 < c < 3/4``,
    LP for ``c >= 3/4`` and Unsupported for ``c <= -1/4``.
    """
    if end not in ("left", "right"):
        raise DomainError(f"end must be 'left' or 'right', got {end!r}")
    if potential.singularity.location == end:
        return _classify_strength(potential.singularity.strength_c)
    if potential.far_end is not None and potential.far_end.location == end:
        return _classify_strength(potential.far_end.strength_c)
    return EndpointClassification.REGULAR


def _mirror(info):
    if info is None:
        return None
    flipped = {"left": "right", "right": "left", "none": "none"}[info.location]
    return SingularityInfo(flipped, info.strength_c)


def reflect_problem(potential: Potential) -> Potential:
    """Move a right-end singularity to the left via ``x -> a + b - x``.

    The spectrum is unchanged. A potential produced by an earlier reflection
    is mapped back, so the operation is an involution. Anything else that is
    not singular on the right is returned as-is with a
    :class:`ReflectionWarning`.
    """
    if potential.singularity.location != "right" and not potential.reflected:
        warnings.warn("potential is not singular at the right endpoint; nothing to reflect",
                      ReflectionWarning, stacklevel=2)
        return potential
    return replace(potential, singularity=_mirror(potential.singularity),
                   far_end=_mirror(potential.far_end), reflected=not potential.reflected)
