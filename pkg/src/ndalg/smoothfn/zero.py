"""Three-valued decision of identical vanishing on an interval.

``YES`` is proved structurally: either the interval sits inside a flat zero zone, or,
after splitting at gluing points and restricting every node to the piece of the
interval it actually sees, the expression normalizes to the zero polynomial over
rational coefficients (non-polynomial subexpressions act as independent atoms).
``NO`` needs a sample point with an exactly known nonzero value, or a rounded value
far above evaluation noise.  Anything else is ``UNKNOWN``.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from fractions import Fraction

from .expr import (
    AffineArg, Compose, Constant, Glued, Identity, Product, Scale, SmoothExpr, Sum,
    add, affine, compose, is_exact, mul, scale,
)
from .intervals import Interval, exact

# A rounded sample counts as nonzero only above this magnitude.
NOISE_FLOOR = 1e-9
SAMPLES = 33


class Decision(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def restrict(e: SmoothExpr, interval: Interval) -> SmoothExpr:
    """An expression equal to ``e`` on ``interval`` with flat parts folded to constants."""
    for zone in e.zones:
        if zone.interval.contains_interval(interval):
            return Constant(zone.value)
    if isinstance(e, Sum):
        return add(*(restrict(t, interval) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(restrict(f, interval) for f in e.factors))
    if isinstance(e, Scale):
        return scale(e.c, restrict(e.expr, interval))
    if isinstance(e, AffineArg):
        inner = restrict(e.expr, interval.image(e.slope, e.offset))
        return affine(e.slope, e.offset, inner)
    if isinstance(e, Compose):
        inner = restrict(e.inner, interval)
        if isinstance(inner, Constant):
            value = e.outer._value(inner.value)
            if is_exact(value):
                return Constant(value)
        return compose(e.outer, inner)
    if isinstance(e, Glued):
        if interval.hi <= e.breakpoint:
            return restrict(e.left, interval)
        if interval.lo >= e.breakpoint:
            return restrict(e.right, interval)
    return e


# polynomial normal form ------------------------------------------------------
# A polynomial is a dict {monomial: Fraction}; a monomial is a frozenset of
# (atom, power) pairs, the atom "x" standing for the identity.

_X = "x"


def _padd(p, q, sign=1):
    out = defaultdict(Fraction, p)
    for m, c in q.items():
        out[m] += sign * c
    return {m: c for m, c in out.items() if c != 0}


def _pmul(p, q):
    out = defaultdict(Fraction)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            powers = dict(m1)
            for atom, k in m2:
                powers[atom] = powers.get(atom, 0) + k
            out[frozenset(powers.items())] += c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def _is_x_only(p) -> bool:
    return all(atom == _X for m in p for atom, _ in m)


def to_poly(e: SmoothExpr) -> dict:
    """Normal form of ``e`` as a polynomial in x and opaque atoms."""
    if isinstance(e, Constant):
        return {frozenset(): e.value} if e.value != 0 else {}
    if isinstance(e, Identity):
        return {frozenset({(_X, 1)}): Fraction(1)}
    if isinstance(e, Sum):
        out: dict = {}
        for t in e.terms:
            out = _padd(out, to_poly(t))
        return out
    if isinstance(e, Product):
        out = {frozenset(): Fraction(1)}
        for f in e.factors:
            out = _pmul(out, to_poly(f))
        return out
    if isinstance(e, Scale):
        return {m: e.c * c for m, c in to_poly(e.expr).items()}
    if isinstance(e, AffineArg):
        inner = to_poly(e.expr)
        if _is_x_only(inner):
            lin = {frozenset({(_X, 1)}): e.slope}
            if e.offset:
                lin[frozenset()] = e.offset
            out = {}
            for m, c in inner.items():
                term = {frozenset(): c}
                for _ in range(dict(m).get(_X, 0)):
                    term = _pmul(term, lin)
                out = _padd(out, term)
            return out
    return {frozenset({(e, 1)}): Fraction(1)}


def poly_value(p: dict, x):
    """Evaluate a normal form at x, exactly where the atoms allow."""
    total = Fraction(0)
    for m, c in p.items():
        term = c
        for atom, k in m:
            base = x if atom == _X else atom._value(exact(x))
            term = term * base ** k
        total = total + term
    return total


# decision --------------------------------------------------------------------


def _pieces(e: SmoothExpr, interval: Interval) -> list[Interval]:
    cuts = sorted(b for b in e.breakpoints if interval.lo < b < interval.hi)
    edges = [interval.lo, *cuts, interval.hi]
    return [Interval(a, b) for a, b in zip(edges, edges[1:])]


def structurally_zero(e: SmoothExpr, interval: Interval) -> bool:
    """Sound proof attempt that ``e`` vanishes identically on ``interval``."""
    for zone in e.zones:
        if zone.value == 0 and zone.interval.contains_interval(interval):
            return True
    for piece in _pieces(e, interval):
        if any(z.value == 0 and z.interval.contains_interval(piece) for z in e.zones):
            continue
        if to_poly(restrict(e, piece)):
            return False
    return True


def nonzero_sample(e: SmoothExpr, interval: Interval, count: int = SAMPLES):
    """First rational sample point where ``e`` is provably nonzero, as (x, value), or None."""
    for x in interval.grid(count):
        value = e._value(x)
        if is_exact(value):
            if value != 0:
                return x, value
        elif abs(value) > NOISE_FLOOR:
            return x, value
    return None


def zero_verdict(e: SmoothExpr, interval: Interval, count: int = SAMPLES):
    """(Decision, counterexample) where the counterexample backs a NO verdict."""
    if structurally_zero(e, interval):
        return Decision.YES, None
    witness = nonzero_sample(e, interval, count)
    if witness is not None:
        return Decision.NO, witness
    return Decision.UNKNOWN, None


def is_zero_on(e: SmoothExpr, interval) -> Decision:
    """Decide whether ``e`` vanishes identically on a nonempty closed interval.

    ``interval`` may be an :class:`Interval` or a ``(lo, hi)`` pair.
    """
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    return zero_verdict(e, interval)[0]


def samples_all_zero(e: SmoothExpr, interval: Interval, count: int) -> bool:
    """True when every one of ``count`` rational samples is exactly zero."""
    return all(is_exact(v := e._value(x)) and v == 0 for x in interval.grid(count))


__all__ = [
    "Decision", "is_zero_on", "zero_verdict", "structurally_zero", "restrict", "to_poly",
    "poly_value", "nonzero_sample", "samples_all_zero",
]
