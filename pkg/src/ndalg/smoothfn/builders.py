"""Named constructions: the smooth step, cutoff functions, polynomials, jump gluing."""

from __future__ import annotations

from fractions import Fraction

from .expr import (
    Constant, Glued, Identity, SmoothExpr, SmoothStep, add, affine, mul, scale,
)
from .intervals import Interval, exact

X = Identity()


def make_smooth_step() -> SmoothExpr:
    """s with s = 0 on (-inf, 0], s = 1 on [1, inf), strictly increasing in between."""
    return SmoothStep(0)


def make_rho() -> SmoothExpr:
    """Even cutoff: 0 on [-1/2, 1/2], 1 on |x| >= 1, equal to s(2(|x| - 1/2)).

    Realized as s(2x - 1) + s(-2x - 1); at every point at most one summand is nonzero,
    and swapping x for -x swaps the summands.
    """
    s = make_smooth_step()
    return add(affine(2, -1, s), affine(-2, -1, s))


def make_rho_glued() -> SmoothExpr:
    """The same cutoff assembled by gluing the two halves at 0.

    A second admissible cutoff; everything that takes a cutoff must work with it too.
    """
    s = make_smooth_step()
    return Glued(0, affine(-2, -1, s), affine(2, -1, s), Interval(Fraction(-1, 2), Fraction(1, 2)))


def make_rho_wide() -> SmoothExpr:
    """A different admissible cutoff: 0 on [-3/4, 3/4], rising over 3/4 <= |x| <= 1."""
    s = make_smooth_step()
    return add(affine(4, -3, s), affine(-4, -3, s))


def affine_precompose(e: SmoothExpr, slope, offset) -> SmoothExpr:
    """``x -> e(slope*x + offset)``; flat zones move with the inverse map."""
    if exact(slope) == 0:
        raise ValueError("slope must be nonzero")
    return affine(slope, offset, e)


def polynomial(*coeffs) -> SmoothExpr:
    """``c0 + c1*x + c2*x**2 + ...``."""
    terms = [scale(c, mul(*([X] * k))) if k else Constant(c) for k, c in enumerate(coeffs)]
    return add(*terms) if terms else Constant(0)


def cutoff_at(cutoff: SmoothExpr, a, scale_factor) -> SmoothExpr:
    """``x -> cutoff(scale_factor * (x - a))`` with exact offset."""
    a, k = exact(a), exact(scale_factor)
    return affine(k, -k * a, cutoff)


def glue_jumps(s: SmoothExpr, jumps, cutoff: SmoothExpr, scale_factor) -> SmoothExpr:
    """Insert jumps into ``s``: ``prod_a cutoff(k(x - a)) * (s(x) + sum_{a < x} h_a)``.

    ``jumps`` is a sequence of (a, h) with strictly increasing a.  The running sums are
    glued at each a inside the deadzone ``|x - a| <= 1/(2k)`` where the cutoff product
    vanishes, so the result is C-infinity.  The cutoff must be identically 0 on
    [-1/2, 1/2].
    """
    jumps = [(exact(a), exact(h)) for a, h in jumps]
    if not jumps:
        return s
    if any(b <= a for (a, _), (b, _) in zip(jumps, jumps[1:])):
        raise ValueError("jump locations must be strictly increasing")
    k = exact(scale_factor)
    half = 1 / (2 * k)
    product = mul(*(cutoff_at(cutoff, a, k) for a, _ in jumps))
    levels = [Fraction(0)]
    for _, h in jumps:
        levels.append(levels[-1] + h)
    expr = mul(product, add(s, Constant(levels[-1])))
    for i in range(len(jumps) - 1, -1, -1):
        a = jumps[i][0]
        left = mul(product, add(s, Constant(levels[i])))
        expr = Glued(a, left, expr, Interval(a - half, a + half))
    return expr
