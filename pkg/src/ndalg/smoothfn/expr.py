"""Expression trees for C-infinity functions of one real variable.

All numeric fields are stored as exact Fractions.  Evaluation carries exact rational
arithmetic as far as it goes; only the interior of the smooth step produces floats.
A Fraction result therefore means "exact", a float result means "rounded".

Every node exposes ``zones``: closed intervals on which the node is identically a
known rational constant.  Zones are derived structurally, never numerically, and are
what makes exact-vanishing questions decidable for the constructions used here.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import cached_property, reduce
import operator

from .intervals import INF, Interval, exact
from .step import step_derivative

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FlatZone:
    """``expr(x) == value`` exactly for every x in ``interval``."""

    interval: Interval
    value: Fraction


def is_exact(value) -> bool:
    return isinstance(value, (Fraction, int))


class SmoothExpr:
    """Base class of all expression nodes.  Nodes are immutable."""

    # structural identity ------------------------------------------------------
    @cached_property
    def _key(self):
        return (type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self))

    @cached_property
    def _hash(self):
        return hash(self._key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SmoothExpr) or self._hash != other._hash:
            return False
        return self._key == other._key

    # arithmetic sugar ---------------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, scale(-1, as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), scale(-1, self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    __rmul__ = __mul__

    def __neg__(self):
        return scale(-1, self)

    def __call__(self, x):
        return evaluate(self, x)

    # semantics ----------------------------------------------------------------
    @cached_property
    def zones(self) -> tuple[FlatZone, ...]:
        return tuple(_merge(self._zones()))

    @cached_property
    def breakpoints(self) -> frozenset:
        """x-coordinates of gluing points that restriction can split at."""
        return frozenset()

    def _zones(self) -> list[FlatZone]:
        return []

    def _value(self, x):
        for zone in self.zones:
            if x in zone.interval:
                return zone.value
        return self._raw(x)

    def _raw(self, x):
        raise NotImplementedError

    def diff(self) -> SmoothExpr:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Constant(SmoothExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", exact(self.value))

    def _zones(self):
        return [FlatZone(Interval.everything(), self.value)]

    def _raw(self, x):
        return self.value

    def diff(self):
        return Constant(0)

    def __repr__(self):
        return f"Constant({self.value})"


@dataclass(frozen=True, eq=False)
class Identity(SmoothExpr):
    def _raw(self, x):
        return x

    def diff(self):
        return Constant(1)

    def __repr__(self):
        return "x"


@dataclass(frozen=True, eq=False)
class Sum(SmoothExpr):
    terms: tuple

    def _zones(self):
        acc = [FlatZone(Interval.everything(), ZERO)]
        for term in self.terms:
            acc = [
                FlatZone(both, a.value + b.value)
                for a in acc
                for b in term.zones
                if (both := a.interval.intersect(b.interval)) is not None
            ]
            if not acc:
                break
        return acc

    @cached_property
    def breakpoints(self):
        return frozenset().union(*(t.breakpoints for t in self.terms))

    def _raw(self, x):
        return reduce(operator.add, (t._value(x) for t in self.terms))

    def diff(self):
        return add(*(t.diff() for t in self.terms))

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")"


@dataclass(frozen=True, eq=False)
class Product(SmoothExpr):
    factors: tuple

    def _zones(self):
        out = [z for f in self.factors for z in f.zones if z.value == 0]
        acc = [FlatZone(Interval.everything(), ONE)]
        for factor in self.factors:
            acc = [
                FlatZone(both, a.value * b.value)
                for a in acc
                for b in factor.zones
                if (both := a.interval.intersect(b.interval)) is not None
            ]
            if not acc:
                break
        return out + acc

    @cached_property
    def breakpoints(self):
        return frozenset().union(*(f.breakpoints for f in self.factors))

    def _raw(self, x):
        result = ONE
        for factor in self.factors:
            value = factor._value(x)
            if is_exact(value) and value == 0:
                return ZERO
            result = result * value
        return result

    def diff(self):
        terms = []
        for i, factor in enumerate(self.factors):
            rest = self.factors[:i] + (factor.diff(),) + self.factors[i + 1:]
            terms.append(mul(*rest))
        return add(*terms)

    def __repr__(self):
        return "(" + " * ".join(map(repr, self.factors)) + ")"


@dataclass(frozen=True, eq=False)
class Scale(SmoothExpr):
    c: Fraction
    expr: SmoothExpr

    def __post_init__(self):
        object.__setattr__(self, "c", exact(self.c))

    def _zones(self):
        return [FlatZone(z.interval, self.c * z.value) for z in self.expr.zones]

    @cached_property
    def breakpoints(self):
        return self.expr.breakpoints

    def _raw(self, x):
        value = self.expr._value(x)
        if self.c == 0:
            return ZERO
        return self.c * value

    def diff(self):
        return scale(self.c, self.expr.diff())

    def __repr__(self):
        return f"{self.c}*{self.expr!r}"


@dataclass(frozen=True, eq=False)
class Compose(SmoothExpr):
    """``outer(inner(x))``."""

    outer: SmoothExpr
    inner: SmoothExpr

    def _zones(self):
        out = []
        for z in self.inner.zones:
            value = self.outer._value(z.value)
            if is_exact(value):
                out.append(FlatZone(z.interval, Fraction(value)))
        return out

    @cached_property
    def breakpoints(self):
        return self.inner.breakpoints

    def _raw(self, x):
        return self.outer._value(self.inner._value(x))

    def diff(self):
        return mul(compose(self.outer.diff(), self.inner), self.inner.diff())

    def __repr__(self):
        return f"{self.outer!r}∘{self.inner!r}"


@dataclass(frozen=True, eq=False)
class AffineArg(SmoothExpr):
    """``expr(slope*x + offset)``."""

    slope: Fraction
    offset: Fraction
    expr: SmoothExpr

    def __post_init__(self):
        object.__setattr__(self, "slope", exact(self.slope))
        object.__setattr__(self, "offset", exact(self.offset))
        if self.slope == 0:
            raise ValueError("affine reparametrization needs a nonzero slope")

    def _zones(self):
        return [FlatZone(z.interval.preimage(self.slope, self.offset), z.value)
                for z in self.expr.zones]

    @cached_property
    def breakpoints(self):
        return frozenset((b - self.offset) / self.slope for b in self.expr.breakpoints)

    def _raw(self, x):
        return self.expr._value(self.slope * x + self.offset)

    def diff(self):
        return scale(self.slope, affine(self.slope, self.offset, self.expr.diff()))

    def __repr__(self):
        return f"{self.expr!r}({self.slope}*x + {self.offset})"


@dataclass(frozen=True, eq=False)
class SmoothStep(SmoothExpr):
    """The ``order``-th derivative of the smooth step s (0 below 0, 1 above 1)."""

    order: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("derivative order must be nonnegative")

    def _zones(self):
        top = ONE if self.order == 0 else ZERO
        return [FlatZone(Interval(-INF, 0), ZERO), FlatZone(Interval(1, INF), top)]

    def _raw(self, x):
        return step_derivative(float(x), self.order)

    def diff(self):
        return SmoothStep(self.order + 1)

    def __repr__(self):
        return "s" + "'" * self.order


@dataclass(frozen=True, eq=False)
class Glued(SmoothExpr):
    """``left(x)`` for x <= breakpoint, ``right(x)`` above it.

    Only constructible when both pieces are provably identically zero on the closure
    of ``deadzone`` and the breakpoint lies strictly inside it, which makes the
    result C-infinity.
    """

    breakpoint: Fraction
    left: SmoothExpr
    right: SmoothExpr
    deadzone: Interval

    def __post_init__(self):
        from .zero import Decision, is_zero_on

        object.__setattr__(self, "breakpoint", exact(self.breakpoint))
        dz = self.deadzone
        if not (dz.bounded and dz.lo < self.breakpoint < dz.hi):
            raise ValueError("breakpoint must lie strictly inside a bounded deadzone")
        for side, piece in (("left", self.left), ("right", self.right)):
            if is_zero_on(piece, dz) is not Decision.YES:
                raise ValueError(f"{side} piece is not certified zero on deadzone {dz}")

    def _zones(self):
        below = Interval(-INF, self.breakpoint)
        above = Interval(self.breakpoint, INF)
        out = [FlatZone(self.deadzone, ZERO)]
        for zone in self.left.zones:
            if (part := zone.interval.intersect(below)) is not None:
                out.append(FlatZone(part, zone.value))
        for zone in self.right.zones:
            if (part := zone.interval.intersect(above)) is not None:
                out.append(FlatZone(part, zone.value))
        return out

    @cached_property
    def breakpoints(self):
        return frozenset({self.breakpoint}) | self.left.breakpoints | self.right.breakpoints

    def _raw(self, x):
        return self.left._value(x) if x <= self.breakpoint else self.right._value(x)

    def diff(self):
        return Glued(self.breakpoint, self.left.diff(), self.right.diff(), self.deadzone)

    def __repr__(self):
        return f"Glued({self.breakpoint}; {self.left!r} | {self.right!r})"


def _merge(zones: list[FlatZone]) -> list[FlatZone]:
    """Drop single points, merge overlapping zones carrying the same value."""
    zones = sorted((z for z in zones if z.interval.lo < z.interval.hi),
                   key=lambda z: (z.value, z.interval.lo))
    out: list[FlatZone] = []
    for z in zones:
        if out and out[-1].value == z.value and z.interval.lo <= out[-1].interval.hi:
            prev = out[-1]
            out[-1] = FlatZone(Interval(prev.interval.lo, max(prev.interval.hi, z.interval.hi)),
                               z.value)
        else:
            out.append(z)
    # zero zones first: they are the ones queried most
    out.sort(key=lambda z: (z.value != 0, z.interval.lo))
    return out


# ----------------------------------------------------------------------------
# simplifying constructors


def as_expr(value) -> SmoothExpr:
    return value if isinstance(value, SmoothExpr) else Constant(value)


def add(*terms: SmoothExpr) -> SmoothExpr:
    flat: list[SmoothExpr] = []
    const = ZERO
    for t in terms:
        for u in (t.terms if isinstance(t, Sum) else (t,)):
            if isinstance(u, Constant):
                const += u.value
            else:
                flat.append(u)
    if const != 0 or not flat:
        flat.append(Constant(const))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def mul(*factors: SmoothExpr) -> SmoothExpr:
    flat: list[SmoothExpr] = []
    coef = ONE
    for f in factors:
        for g in (f.factors if isinstance(f, Product) else (f,)):
            if isinstance(g, Constant):
                coef *= g.value
            elif isinstance(g, Scale):
                coef *= g.c
                flat.append(g.expr)
            else:
                flat.append(g)
    if coef == 0:
        return Constant(0)
    if not flat:
        return Constant(coef)
    body = flat[0] if len(flat) == 1 else Product(tuple(flat))
    return scale(coef, body)


def scale(c, expr: SmoothExpr) -> SmoothExpr:
    c = exact(c)
    if c == 0:
        return Constant(0)
    if c == 1:
        return expr
    if isinstance(expr, Constant):
        return Constant(c * expr.value)
    if isinstance(expr, Scale):
        return scale(c * expr.c, expr.expr)
    return Scale(c, expr)


def affine(slope, offset, expr: SmoothExpr) -> SmoothExpr:
    """``x -> expr(slope*x + offset)``, folding the trivial cases."""
    slope, offset = exact(slope), exact(offset)
    if slope == 0:
        raise ValueError("affine reparametrization needs a nonzero slope")
    if isinstance(expr, Constant) or (slope == 1 and offset == 0):
        return expr
    if isinstance(expr, Identity):
        return add(scale(slope, expr), Constant(offset))
    if isinstance(expr, AffineArg):
        return affine(expr.slope * slope, expr.slope * offset + expr.offset, expr.expr)
    return AffineArg(slope, offset, expr)


def compose(outer: SmoothExpr, inner: SmoothExpr) -> SmoothExpr:
    """``outer(inner(x))``; affine inner functions become AffineArg nodes."""
    if isinstance(inner, Identity):
        return outer
    if isinstance(outer, Constant):
        return outer
    lin = _as_linear(inner)
    if lin is not None:
        return affine(lin[0], lin[1], outer)
    return Compose(outer, inner)


def _as_linear(e: SmoothExpr):
    """(slope, offset) if e is syntactically ``slope*x + offset`` with slope != 0."""
    if isinstance(e, Identity):
        return ONE, ZERO
    if isinstance(e, Scale) and isinstance(e.expr, Identity):
        return e.c, ZERO
    if isinstance(e, Sum) and len(e.terms) == 2 and isinstance(e.terms[1], Constant):
        head = _as_linear(e.terms[0])
        if head is not None and head[1] == 0:
            return head[0], e.terms[1].value
    return None


def evaluate(e: SmoothExpr, x) -> float:
    """``e(x)`` as a float; the single rounding happens at the very end."""
    return float(e._value(exact(x)))


def evaluate_exact(e: SmoothExpr, x):
    """``e(x)`` as a Fraction when the value is exactly known, else a float."""
    return e._value(exact(x))
