"""Numerics for the smooth step s(t) = f(t) / (f(t) + f(1 - t)), f(t) = exp(-1/t) for t > 0.

On (0, 1) the step equals 1 / (1 + exp(u)) with u(t) = 1/t - 1/(1 - t).  Derivatives of
any order are computed by truncated Taylor arithmetic ("jets") on that form, which stays
finite where the closed-form derivative expressions would overflow.
"""

from __future__ import annotations

import math

# Beyond this |u| the step is within exp(-700) of its flat value, along with all
# derivatives of the orders used here.
_SATURATION = 700.0


def _u_jet(t: float, n: int) -> list[float]:
    """Taylor coefficients of u(t + e) = 1/(t + e) - 1/(1 - t - e) up to e**n."""
    return [(-1) ** j / t ** (j + 1) - 1.0 / (1.0 - t) ** (j + 1) for j in range(n + 1)]


def _exp_jet(a: list[float]) -> list[float]:
    out = [math.exp(a[0])]
    for k in range(1, len(a)):
        out.append(sum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k)
    return out


def _recip_jet(a: list[float]) -> list[float]:
    out = [1.0 / a[0]]
    for k in range(1, len(a)):
        out.append(-sum(a[j] * out[k - j] for j in range(1, k + 1)) / a[0])
    return out


def _mul_jet(a: list[float], b: list[float]) -> list[float]:
    return [sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(len(a))]


def step_derivative(t: float, order: int = 0) -> float:
    """Value of the ``order``-th derivative of the step at an interior point 0 < t < 1.

    Flat zones are handled exactly by the caller; this is the rounded interior value.
    """
    if not 0.0 < t < 1.0:
        # an interior rational that rounded onto an edge
        return (1.0 if t >= 1.0 else 0.0) if order == 0 else 0.0
    u = _u_jet(t, order)
    if abs(u[0]) > _SATURATION:
        if order == 0:
            return 0.0 if u[0] > 0 else 1.0
        return 0.0
    if u[0] >= 0:
        # s = E / (1 + E) with E = exp(-u) <= 1
        e = _exp_jet([-c for c in u])
        jet = _mul_jet(e, _recip_jet([1.0 + e[0]] + e[1:]))
    else:
        # s = 1 / (1 + E) with E = exp(u) < 1
        e = _exp_jet(u)
        jet = _recip_jet([1.0 + e[0]] + e[1:])
    return math.factorial(order) * jet[order]
