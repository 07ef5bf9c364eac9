"""Analytic tail models used as ground truth.

Every model is described through ``q(y) = U(exp(y))``, the quantile exceeded
with probability ``exp(-y)``, together with its inverse ``q_inv(x) =
-log(1 - F(x))``.  Normal and lognormal models rely on ``scipy.special``
(``ndtri`` and ``log_ndtr``), which keep full relative accuracy far into the
tail where ``1 - Phi(x)`` would underflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from scipy import special

from .core import h, h_inv
from .errors import ConfigurationError, DomainError, NumericError

__all__ = [
    "TailModel",
    "make_model",
    "q_inv_numeric",
    "q_prime_numeric",
    "MODEL_NAMES",
    "invert_monotone",
]

MODEL_NAMES = (
    "normal",
    "lognormal",
    "pareto_like",
    "burr",
    "exact_weibull",
    "exact_gw",
    "exact_loggw",
    "exact_gp",
    "slowvar_exp",
)

_Y_LO = 1e-300
_Y_HI = 200.0


@dataclass(frozen=True)
class TailModel:
    """A distribution given through its exponential-scale quantile function.

    Attributes
    ----------
    name:
        Canonical identifier, e.g. ``"exact_weibull(0.5)"``.
    q:
        ``y -> U(exp(y))`` for ``y > 0``.
    q_inv_exact:
        Closed-form inverse of ``q`` or ``None`` if it must be found numerically.
    q_lower, q_upper:
        ``q(0+)`` and ``q(inf)``; the range of ``q``.
    gamma_true, rho_gw_true, rho_loggw_true:
        Indices of ``U``, ``q`` and ``log q`` in ERV, when they exist.
    """

    name: str
    q: Callable[[float], float]
    q_inv_exact: Optional[Callable[[float], float]] = None
    q_lower: float = -math.inf
    q_upper: float = math.inf
    gamma_true: Optional[float] = None
    rho_gw_true: Optional[float] = None
    rho_loggw_true: Optional[float] = None
    # monotone reparametrisation (f, f', target-map) for numeric inversion
    _inverse_helper: Optional[tuple] = field(default=None, repr=False, compare=False)

    def U(self, t: float) -> float:
        if not t > 1:
            raise DomainError(f"U is defined on (1, inf), got t={t!r}")
        return self.q(math.log(t))

    def q_inv(self, x: float) -> float:
        return q_inv_numeric(self, x)

    def q_prime(self, y: float) -> float:
        return q_prime_numeric(self, y)


def invert_monotone(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    target: float,
    lo: float = _Y_LO,
    hi: float = _Y_HI,
    maxiter: int = 200,
) -> float:
    """Solve ``f(y) = target`` for increasing ``f`` on ``[lo, hi]``.

    Newton steps are taken while they stay inside the current bracket;
    otherwise the bracket is bisected.
    """
    f_lo = f(lo) - target
    f_hi = f(hi) - target
    if f_lo > 0 or f_hi < 0:
        raise NumericError(
            f"cannot bracket root: f({lo})-target={f_lo:.3g}, f({hi})-target={f_hi:.3g}"
        )
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    tol = 1e-14 * (1.0 + abs(target))
    y = 0.5 * (lo + hi) if target == 0 else min(max(1.0, lo), hi)
    for _ in range(maxiter):
        r = f(y) - target
        if abs(r) <= tol:
            return y
        if r < 0:
            lo = y
        else:
            hi = y
        d = fprime(y)
        step_ok = False
        if d > 0 and math.isfinite(d):
            y_new = y - r / d
            step_ok = lo < y_new < hi
        if not step_ok:
            y_new = 0.5 * (lo + hi)
        if y_new == y or hi - lo <= 4 * math.ulp(y):
            return y_new
        y = y_new
    raise NumericError(f"monotone inversion did not converge for target={target!r}")


def q_inv_numeric(model: TailModel, x: float) -> float:
    """Return ``y`` with ``q(y) = x``.

    ``+inf`` is returned when ``x`` lies beyond ``q(inf)`` (the exceedance
    probability is then zero).

    Raises
    ------
    DomainError
        If ``x`` is below ``q(0+)``.
    """
    if math.isnan(x):
        raise DomainError("q_inv: x is NaN")
    if x < model.q_lower or (x == model.q_lower and math.isfinite(x)):
        raise DomainError(f"q_inv: x={x!r} below q(0+)={model.q_lower!r} for {model.name}")
    if x >= model.q_upper:
        return math.inf
    if model.q_inv_exact is not None:
        return model.q_inv_exact(x)
    if model._inverse_helper is None:
        raise NumericError(f"{model.name} has no inverse available")
    f, fprime, to_target = model._inverse_helper
    return invert_monotone(f, fprime, to_target(x))


def q_prime_numeric(model: TailModel, y: float) -> float:
    """Central finite difference of ``q`` with relative step ``1e-6``."""
    if not y > 0:
        raise DomainError(f"q_prime: y must be positive, got {y!r}")
    step = 1e-6 * y
    return (model.q(y + step) - model.q(y - step)) / (2.0 * step)


# -- individual families ------------------------------------------------------


def _normal_q(y: float) -> float:
    # y = 0 (V = 1) maps to the lower endpoint -inf
    if not y >= 0:
        raise DomainError(f"q: y must be nonnegative, got {y!r}")
    p = math.exp(-y)
    if p < 0.5:
        return -float(special.ndtri(p))
    return float(special.ndtri(-math.expm1(-y)))


def _normal_q_inv(x: float) -> float:
    return -float(special.log_ndtr(-x))


def _normal() -> TailModel:
    return TailModel(
        name="normal",
        q=_normal_q,
        q_inv_exact=_normal_q_inv,
        gamma_true=0.0,
        rho_gw_true=0.5,
        rho_loggw_true=0.0,
    )


def _lognormal() -> TailModel:
    def q_inv(x):
        return _normal_q_inv(math.log(x))

    return TailModel(
        name="lognormal",
        q=lambda y: math.exp(_normal_q(y)),
        q_inv_exact=q_inv,
        q_lower=0.0,
        gamma_true=0.0,
        rho_loggw_true=0.5,
    )


def _pareto_like() -> TailModel:
    # U(t) = t(1 + 2 log(t)^2) - 1; inverted on log(1 + q) = y + log(1 + 2y^2)
    def q(y):
        return math.exp(y) * (1.0 + 2.0 * y * y) - 1.0

    helper = (
        lambda y: y + math.log1p(2.0 * y * y),
        lambda y: 1.0 + 4.0 * y / (1.0 + 2.0 * y * y),
        math.log1p,
    )
    return TailModel(
        name="pareto_like",
        q=q,
        q_lower=0.0,
        gamma_true=1.0,
        rho_loggw_true=1.0,
        _inverse_helper=helper,
    )


def _burr() -> TailModel:
    # U(t) = (t^(1/4) - 1)^4
    return TailModel(
        name="burr",
        q=lambda y: math.expm1(0.25 * y) ** 4,
        q_inv_exact=lambda x: 4.0 * math.log1p(x**0.25),
        q_lower=0.0,
        gamma_true=1.0,
        rho_loggw_true=1.0,
    )


def _slowvar_exp() -> TailModel:
    # log q(y) + 1 = y / log(1 + y), increasing with limit 1 at y = 0
    def phi(y):
        return y / math.log1p(y) if y > 1e-8 else 1.0 + 0.5 * y

    def dphi(y):
        if y < 1e-6:
            return 0.5 - y / 6.0
        l1 = math.log1p(y)
        return (l1 - y / (1.0 + y)) / (l1 * l1)

    return TailModel(
        name="slowvar_exp",
        q=lambda y: math.exp(phi(y) - 1.0),
        q_lower=1.0,
        gamma_true=0.0,
        rho_loggw_true=1.0,
        _inverse_helper=(phi, dphi, lambda x: math.log(x) + 1.0),
    )


def _exact_weibull(theta: float) -> TailModel:
    if not theta > 0:
        raise ConfigurationError(f"exact_weibull needs theta > 0, got {theta!r}")
    return TailModel(
        name=f"exact_weibull({theta!r})",
        q=lambda y: y**theta,
        q_inv_exact=lambda x: x ** (1.0 / theta),
        q_lower=0.0,
        gamma_true=0.0,
        rho_gw_true=theta,
        rho_loggw_true=0.0,
    )


def _exact_gw(alpha: float, beta: float, rho: float) -> TailModel:
    if not beta > 0:
        raise ConfigurationError(f"exact_gw needs beta > 0, got {beta!r}")
    lower = alpha - beta / rho if rho > 0 else -math.inf
    upper = alpha - beta / rho if rho < 0 else math.inf
    if not upper > 1:
        raise ConfigurationError(f"exact_gw({alpha}, {beta}, {rho}) has U(inf) <= 1")
    return TailModel(
        name=f"exact_gw({alpha!r},{beta!r},{rho!r})",
        q=lambda y: alpha + beta * h(rho, y),
        q_inv_exact=lambda x: h_inv(rho, (x - alpha) / beta),
        q_lower=lower,
        q_upper=upper,
        gamma_true=0.0,
        rho_gw_true=rho,
        rho_loggw_true=min(rho, 0.0),
    )


def _exact_loggw(c: float, rho: float) -> TailModel:
    if not c > 0:
        raise ConfigurationError(f"exact_loggw needs c > 0, got {c!r}")
    lower = math.exp(-c / rho) if rho > 0 else 0.0
    upper = math.exp(-c / rho) if rho < 0 else math.inf
    if rho < 1:
        gamma = 0.0
    elif rho == 1:
        gamma = c
    else:
        gamma = None
    return TailModel(
        name=f"exact_loggw({c!r},{rho!r})",
        q=lambda y: math.exp(c * h(rho, y)),
        q_inv_exact=lambda x: h_inv(rho, math.log(x) / c),
        q_lower=lower,
        q_upper=upper,
        gamma_true=gamma,
        rho_gw_true=None,
        rho_loggw_true=rho,
    )


def _exact_gp(alpha: float, beta: float, gamma: float) -> TailModel:
    # U(t) = alpha + beta * h(gamma, t)
    if not beta > 0:
        raise ConfigurationError(f"exact_gp needs beta > 0, got {beta!r}")
    upper = alpha - beta / gamma if gamma < 0 else math.inf
    if not upper > 1:
        raise ConfigurationError(f"exact_gp({alpha}, {beta}, {gamma}) has U(inf) <= 1")

    def q(y):
        if gamma == 0:
            return alpha + beta * y
        return alpha + beta * math.expm1(gamma * y) / gamma

    def q_inv(x):
        s = (x - alpha) / beta
        if gamma == 0:
            return s
        return math.log1p(gamma * s) / gamma

    if gamma > 0:
        rho_l = 1.0
    elif gamma == 0:
        rho_l = 0.0
    else:
        rho_l = None
    return TailModel(
        name=f"exact_gp({alpha!r},{beta!r},{gamma!r})",
        q=q,
        q_inv_exact=q_inv,
        q_lower=alpha,
        q_upper=upper,
        gamma_true=gamma,
        rho_gw_true=1.0 if gamma == 0 else None,
        rho_loggw_true=rho_l,
    )


_FACTORIES = {
    "normal": (_normal, 0),
    "lognormal": (_lognormal, 0),
    "pareto_like": (_pareto_like, 0),
    "burr": (_burr, 0),
    "slowvar_exp": (_slowvar_exp, 0),
    "exact_weibull": (_exact_weibull, 1),
    "exact_gw": (_exact_gw, 3),
    "exact_loggw": (_exact_loggw, 2),
    "exact_gp": (_exact_gp, 3),
}

_NAME_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^()]*)\))?\s*$")


def make_model(name: str, *params: float) -> TailModel:
    """Build a model from its name.

    Parameters may be passed positionally or embedded in the name, so
    ``make_model("exact_gw", 1, 2, -1)`` and ``make_model("exact_gw(1,2,-1)")``
    are equivalent.
    """
    m = _NAME_RE.match(name)
    if m is None:
        raise ConfigurationError(f"malformed model name {name!r}")
    base, arglist = m.group(1), m.group(2)
    if base not in _FACTORIES:
        raise ConfigurationError(f"unknown model {base!r}; choose from {', '.join(MODEL_NAMES)}")
    if arglist is not None and arglist.strip():
        if params:
            raise ConfigurationError("parameters given both in the name and as arguments")
        try:
            params = tuple(float(a) for a in arglist.split(","))
        except ValueError as exc:
            raise ConfigurationError(f"bad parameters in model name {name!r}") from exc
    factory, arity = _FACTORIES[base]
    if len(params) != arity:
        raise ConfigurationError(f"model {base!r} takes {arity} parameter(s), got {len(params)}")
    return factory(*(float(p) for p in params))
