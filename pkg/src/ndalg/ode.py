"""The model equation ``U'(x) = F(x)`` on the real line, classical and generalized."""

from __future__ import annotations

from dataclasses import dataclass

from .ndalgebra import (
    CheckProtocol, CheckReport, GeneralizedFunction, IdealWitness, derive, embed, equiv,
)
from .smoothfn import Interval, SmoothExpr, diff, exact, is_exact, restrict, to_poly
from .smoothfn.zero import poly_value

_SOLUTION_PROBES = Interval(-8, 8).grid(97)
_TOLERANCE = 1e-9


class ClassicalSolutionError(ValueError):
    """A proposed antiderivative fails ``U' = F``; ``point`` is the worst probe."""

    def __init__(self, point, residual):
        super().__init__(f"U' - F = {residual:.6g} at x = {float(point)!r}")
        self.point = point
        self.residual = residual


class NonStabilizationError(ValueError):
    pass


@dataclass(frozen=True)
class FirstOrderODE:
    rhs: SmoothExpr


def classical_solution(ode: FirstOrderODE, antiderivative: SmoothExpr) -> SmoothExpr:
    """Verify (not synthesize) a classical solution and hand it back.

    ``U' - F`` must vanish at every probe point: exactly when the value is rational,
    within 1e-9 relative to ``|F|`` otherwise.
    """
    dU = diff(antiderivative)
    worst, worst_x = 0.0, None
    for x in _SOLUTION_PROBES:
        lhs, rhs = dU._value(x), ode.rhs._value(x)
        gap = lhs - rhs
        if is_exact(gap):
            bad = abs(float(gap)) if gap != 0 else 0.0
        else:
            bad = abs(gap) if abs(gap) > _TOLERANCE * max(1.0, abs(float(rhs))) else 0.0
        if bad > worst:
            worst, worst_x = bad, x
    if worst_x is not None:
        raise ClassicalSolutionError(worst_x, worst)
    return antiderivative


def embed_solution(U: SmoothExpr) -> GeneralizedFunction:
    """``(U, U, U, ...)`` as an element of the algebra."""
    return embed(U)


def certify_generalized_solution(w: GeneralizedFunction, ode: FirstOrderODE,
                                 witness: IdealWitness, protocol: CheckProtocol) -> CheckReport:
    """Does ``D w = F`` hold in the quotient algebra?"""
    return equiv(derive(w, 1), embed(ode.rhs), witness, protocol)


def _one_sided_gap(w: GeneralizedFunction, a, nu: int):
    """Jump of the nu-th representative across a, read off its smooth one-sided pieces.

    On the probe bands ``a + [delta/2, delta]`` and ``a - [delta, delta/2]`` with
    ``delta = 2/(nu+1)`` the representative restricts to smooth expressions R and L.
    Their difference, normalized and evaluated at a, is the height of the jump with
    the smooth background cancelled exactly.
    """
    delta = exact(2) / (nu + 1)
    rep = w.rep.rule(nu)
    right = restrict(rep, Interval(a + delta / 2, a + delta))
    left = restrict(rep, Interval(a - delta, a - delta / 2))
    gap = to_poly(right - left)
    return poly_value(gap, a)


def jump_magnitude(w: GeneralizedFunction, a, protocol: CheckProtocol) -> float:
    """Persistent jump of ``w`` across ``a``, measured at ``protocol.index_cap``.

    A nonzero value shows ``w`` has no smooth representative near a.  The estimate at
    the cap is compared with the previous index; disagreement beyond 1e-9 raises
    :class:`NonStabilizationError`.
    """
    a = exact(a)
    cap = protocol.index_cap
    current = _one_sided_gap(w, a, cap)
    if cap > 0:
        previous = _one_sided_gap(w, a, cap - 1)
        if abs(float(current - previous)) > 1e-9:
            raise NonStabilizationError(
                f"jump estimate moved from {float(previous)!r} to {float(current)!r} "
                f"between nu={cap - 1} and nu={cap}")
    return float(current)
