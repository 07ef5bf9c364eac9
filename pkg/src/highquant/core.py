"""Box-Cox type function ``h_rho`` and its derivative kernel.

``h(rho, lam)`` is the integral of ``t**(rho - 1)`` over ``[1, lam]``, i.e.
``(lam**rho - 1) / rho`` with the limit ``log(lam)`` at ``rho = 0``.  It is
the shape function behind every approximation and estimator in the package.
"""

import math

from .errors import DomainError

__all__ = ["h", "h_inv", "kappa", "KAPPA_SERIES_THRESHOLD"]

# below this |rho| kappa switches to its Taylor expansion around rho = 0
KAPPA_SERIES_THRESHOLD = 1e-4
# below this |rho| the product rho*log(lam) may be subnormal and lose digits;
# the first-order series is exact to double precision there
_TINY_RHO = 1e-150


def h(rho: float, lam: float) -> float:
    """Evaluate ``h_rho(lam) = (lam**rho - 1) / rho`` (``log lam`` for rho = 0).

    Uses ``expm1(rho * log lam) / rho`` so the result is continuous in ``rho``
    with no cancellation near zero.
    """
    if not lam > 0:
        raise DomainError(f"h: lambda must be positive, got {lam!r}")
    log_lam = math.log(lam)
    if abs(rho) < _TINY_RHO:
        return log_lam * (1.0 + 0.5 * rho * log_lam)
    try:
        return math.expm1(rho * log_lam) / rho
    except OverflowError:
        return math.inf


def h_inv(rho: float, x: float) -> float:
    """Inverse of ``lam -> h(rho, lam)``: ``(1 + rho*x)**(1/rho)`` or ``exp(x)``.

    Raises
    ------
    DomainError
        If ``x`` is outside ``h_rho((0, inf))``, i.e. ``1 + rho*x <= 0``.
    """
    if abs(rho) < _TINY_RHO:
        return math.exp(x * (1.0 - 0.5 * rho * x))
    rx = rho * x
    if not rx > -1.0:
        raise DomainError(f"h_inv: x={x!r} outside the range of h for rho={rho!r}")
    try:
        return math.exp(math.log1p(rx) / rho)
    except OverflowError:
        return math.inf


def kappa(rho: float, lam: float, iota: float) -> float:
    """Derivative with respect to ``rho`` of ``h_rho(lam) / h_rho(iota)``.

    For ``|rho| < KAPPA_SERIES_THRESHOLD`` a three-term Taylor series in
    ``rho`` replaces the closed form, which is 0/0 at ``rho = 0``.  The value
    at zero is ``log(lam) * (log(lam) - log(iota)) / (2 log(iota))``.
    """
    if not lam > 0:
        raise DomainError(f"kappa: lambda must be positive, got {lam!r}")
    if not iota > 1:
        raise DomainError(f"kappa: iota must exceed 1, got {iota!r}")
    L = math.log(lam)
    I = math.log(iota)
    if abs(rho) < KAPPA_SERIES_THRESHOLD:
        d = L - I
        c0 = L * d / (2.0 * I)
        c1 = L * d * (2.0 * L - I) / (6.0 * I)
        c2 = L * L * d * d / (8.0 * I)
        return c0 + rho * (c1 + rho * c2)
    em_l = math.expm1(rho * L)
    em_i = math.expm1(rho * I)
    num = L * (em_l + 1.0) * em_i - I * (em_i + 1.0) * em_l
    return num / (em_i * em_i)
