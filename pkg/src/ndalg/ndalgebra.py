"""Sequences of smooth functions modulo the nowhere-dense ideal.

A :class:`RepSequence` is a closed-form description of ``nu -> s_nu``; the
description tree is all the state there is.  A :class:`GeneralizedFunction` is a
representative together with a hint of where its singularities sit.

Membership in the ideal asks for a closed nowhere-dense singular set G such that
every point off G has a neighbourhood on which ``w_nu`` vanishes identically for all
large nu.  :func:`ideal_member` checks that claim for a finite G against a finite
protocol (window, sample points, largest index) and answers in three values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .smoothfn import (
    Constant, Interval, SmoothExpr, add, diff, evaluate, exact, expr_from_json, expr_to_json,
    glue_jumps, make_rho, mul, number_from_json, number_to_json, scale,
)
from .smoothfn.zero import Decision, samples_all_zero, zero_verdict

# Exact samples per neighbourhood when the structural proof is unavailable.
NEIGHBOURHOOD_SAMPLES = 32


# ----------------------------------------------------------------------------
# representative sequences


class RepSequence:
    """``nu -> s_nu`` given by a finite description; ``rule(nu)`` is memoized."""

    def rule(self, nu: int) -> SmoothExpr:
        if nu < 0:
            raise ValueError("sequence index must be a natural number")
        cache = self.__dict__.setdefault("_rules", {})
        if nu not in cache:
            cache[nu] = self._build(nu)
        return cache[nu]

    def __call__(self, nu: int) -> SmoothExpr:
        return self.rule(nu)

    def _build(self, nu: int) -> SmoothExpr:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class ConstantSeq(RepSequence):
    """``(psi, psi, psi, ...)``."""

    expr: SmoothExpr

    def _build(self, nu):
        return self.expr


@dataclass(frozen=True, eq=False)
class JumpSeq(RepSequence):
    """Jumps of heights h_a inserted at points a, cutoff shrinking like 1/(nu+1)."""

    base: RepSequence
    jumps: tuple  # ((a, h), ...) with strictly increasing a
    cutoff: SmoothExpr = field(default_factory=make_rho)

    def _build(self, nu):
        return glue_jumps(self.base.rule(nu), self.jumps, self.cutoff, nu + 1)


@dataclass(frozen=True, eq=False)
class SumSeq(RepSequence):
    terms: tuple

    def _build(self, nu):
        return add(*(t.rule(nu) for t in self.terms))


@dataclass(frozen=True, eq=False)
class ProductSeq(RepSequence):
    factors: tuple

    def _build(self, nu):
        return mul(*(f.rule(nu) for f in self.factors))


@dataclass(frozen=True, eq=False)
class ScaleSeq(RepSequence):
    c: Fraction
    base: RepSequence

    def _build(self, nu):
        return scale(self.c, self.base.rule(nu))


@dataclass(frozen=True, eq=False)
class DeriveSeq(RepSequence):
    base: RepSequence
    order: int = 1

    def _build(self, nu):
        return diff(self.base.rule(nu), self.order)


def sequence_to_json(s: RepSequence) -> dict:
    if isinstance(s, ConstantSeq):
        return {"tag": "constant", "expr": expr_to_json(s.expr)}
    if isinstance(s, JumpSeq):
        out = {"tag": "jump", "base": sequence_to_json(s.base),
               "jumps": [[number_to_json(a), number_to_json(h)] for a, h in s.jumps]}
        if s.cutoff != make_rho():
            out["cutoff"] = expr_to_json(s.cutoff)
        return out
    if isinstance(s, SumSeq):
        return {"tag": "sum", "terms": [sequence_to_json(t) for t in s.terms]}
    if isinstance(s, ProductSeq):
        return {"tag": "product", "factors": [sequence_to_json(f) for f in s.factors]}
    if isinstance(s, ScaleSeq):
        return {"tag": "scale", "c": number_to_json(s.c), "base": sequence_to_json(s.base)}
    if isinstance(s, DeriveSeq):
        return {"tag": "derive", "order": s.order, "base": sequence_to_json(s.base)}
    raise TypeError(f"cannot serialize {type(s).__name__}")


def sequence_from_json(obj: dict) -> RepSequence:
    tag = obj["tag"]
    if tag == "constant":
        return ConstantSeq(expr_from_json(obj["expr"]))
    if tag == "jump":
        jumps = tuple((number_from_json(a), number_from_json(h)) for a, h in obj["jumps"])
        cutoff = expr_from_json(obj["cutoff"]) if "cutoff" in obj else make_rho()
        return JumpSeq(sequence_from_json(obj["base"]), jumps, cutoff)
    if tag == "sum":
        return SumSeq(tuple(sequence_from_json(t) for t in obj["terms"]))
    if tag == "product":
        return ProductSeq(tuple(sequence_from_json(f) for f in obj["factors"]))
    if tag == "scale":
        return ScaleSeq(number_from_json(obj["c"]), sequence_from_json(obj["base"]))
    if tag == "derive":
        return DeriveSeq(sequence_from_json(obj["base"]), int(obj["order"]))
    raise ValueError(f"unknown sequence tag {tag!r}")


# ----------------------------------------------------------------------------
# generalized functions


@dataclass(frozen=True)
class GeneralizedFunction:
    """An element ``rep + I_nd`` of the quotient algebra."""

    rep: RepSequence
    singular_support_hint: frozenset = frozenset()

    def __add__(self, other):
        return add_gf(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add_gf(self, neg(_lift(other)))

    def __mul__(self, other):
        if isinstance(other, GeneralizedFunction):
            return mul_gf(self, other)
        return scale_gf(other, self)

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)


def _lift(value) -> GeneralizedFunction:
    if isinstance(value, GeneralizedFunction):
        return value
    if isinstance(value, SmoothExpr):
        return embed(value)
    return embed(Constant(value))


def embed(psi: SmoothExpr) -> GeneralizedFunction:
    """The constant sequence ``(psi, psi, ...)``: the smooth function inside the algebra."""
    return GeneralizedFunction(ConstantSeq(psi))


def add_gf(*ws: GeneralizedFunction) -> GeneralizedFunction:
    return GeneralizedFunction(SumSeq(tuple(w.rep for w in ws)),
                               frozenset().union(*(w.singular_support_hint for w in ws)))


def mul_gf(*ws: GeneralizedFunction) -> GeneralizedFunction:
    return GeneralizedFunction(ProductSeq(tuple(w.rep for w in ws)),
                               frozenset().union(*(w.singular_support_hint for w in ws)))


def scale_gf(c, w: GeneralizedFunction) -> GeneralizedFunction:
    return GeneralizedFunction(ScaleSeq(exact(c), w.rep), w.singular_support_hint)


def neg(w: GeneralizedFunction) -> GeneralizedFunction:
    return scale_gf(-1, w)


def derive(w: GeneralizedFunction, order: int = 1) -> GeneralizedFunction:
    """Termwise p-fold derivative; well defined on classes since D^p maps the ideal into itself."""
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    if order == 0:
        return w
    return GeneralizedFunction(DeriveSeq(w.rep, order), w.singular_support_hint)


def eval_representative(w: GeneralizedFunction | RepSequence, nu: int, x) -> float:
    rep = w.rep if isinstance(w, GeneralizedFunction) else w
    return evaluate(rep.rule(nu), x)


# ----------------------------------------------------------------------------
# ideal membership


class Verdict(enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class IdealWitness:
    """Candidate singular set plus the rate at which the bad neighbourhoods shrink.

    The support of ``w_nu`` near the singular set is assumed to lie within
    ``radius(nu) = radius_scale / (nu + 1)`` of it.  ``stabilization``, when given,
    overrides the index from which vanishing is demanded.
    """

    gamma: tuple = ()
    radius_scale: Fraction = Fraction(1)
    stabilization: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(sorted({exact(g) for g in self.gamma})))
        object.__setattr__(self, "radius_scale", exact(self.radius_scale))
        if self.radius_scale <= 0:
            raise ValueError("radius_scale must be positive")
        if self.stabilization is not None and self.stabilization < 0:
            raise ValueError("stabilization index must be a natural number")

    def radius(self, nu: int) -> Fraction:
        return self.radius_scale / (nu + 1)

    def distance(self, x) -> Fraction | float:
        return min((abs(x - g) for g in self.gamma), default=math.inf)

    def stabilization_index(self, distance) -> int:
        """First nu with ``radius(nu) <= distance / 2``."""
        if self.stabilization is not None:
            return self.stabilization
        if distance == math.inf:
            return 0
        return max(0, math.ceil(2 * self.radius_scale / distance) - 1)


def witness_to_json(w: IdealWitness) -> dict:
    return {"gamma": [number_to_json(g) for g in w.gamma],
            "radius_scale": number_to_json(w.radius_scale),
            "stabilization": w.stabilization}


def witness_from_json(obj: dict) -> IdealWitness:
    return IdealWitness(tuple(number_from_json(g) for g in obj.get("gamma", [])),
                        number_from_json(obj.get("radius_scale", 1)),
                        obj.get("stabilization"))


@dataclass(frozen=True)
class CheckProtocol:
    """Finite stand-in for the quantifiers over all x and all large nu."""

    window: tuple
    sample_count: int = 41
    index_cap: int = 16
    margin: Fraction = Fraction(1, 4)

    def __post_init__(self):
        lo, hi = (exact(v) for v in self.window)
        if not lo < hi:
            raise ValueError(f"check window must be a nonempty interval, got [{lo}, {hi}]")
        object.__setattr__(self, "window", (lo, hi))
        object.__setattr__(self, "margin", exact(self.margin))
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        if self.sample_count < 1 or self.index_cap < 0:
            raise ValueError("sample_count must be positive and index_cap natural")

    @property
    def spacing(self) -> Fraction:
        lo, hi = self.window
        return (hi - lo) / max(self.sample_count - 1, 1)

    def points(self) -> list[Fraction]:
        return Interval(*self.window).grid(self.sample_count)


@dataclass(frozen=True)
class CheckReport:
    decision: Verdict
    window: tuple
    checked_indices: tuple
    gamma: tuple
    counterexample: tuple | None = None  # (nu, x, value)
    detail: str = ""

    def to_json(self) -> dict:
        out = {
            "decision": self.decision.value,
            "window": [number_to_json(v) for v in self.window],
            "checked_indices": list(self.checked_indices),
            "gamma": [number_to_json(g) for g in self.gamma],
        }
        if self.counterexample is not None:
            nu, x, value = self.counterexample
            out["counterexample"] = {"nu": nu, "x": float(x), "value": float(value)}
        if self.detail:
            out["detail"] = self.detail
        return out


def _clean_region(witness: IdealWitness, protocol: CheckProtocol, nu: int) -> list[Interval]:
    """Window (padded by one spacing) minus the points closer than the nu-radius to gamma.

    Every neighbourhood the pointwise check would use at index nu lies in this region.
    """
    lo, hi = protocol.window
    pad = protocol.spacing
    keep = protocol.margin / 2
    if witness.stabilization is None:
        keep = max(keep, witness.radius(nu))
    out = []
    left = lo - pad
    for g in witness.gamma:
        if g - keep > left:
            out.append(Interval(left, min(g - keep, hi + pad)))
        left = max(left, g + keep)
    if left < hi + pad:
        out.append(Interval(left, hi + pad))
    return out


def _neighbourhood_verdict(e: SmoothExpr, nbhd: Interval):
    decision, witness = zero_verdict(e, nbhd)
    if decision is Decision.UNKNOWN and samples_all_zero(e, nbhd, NEIGHBOURHOOD_SAMPLES):
        decision = Decision.YES
    return decision, witness


def ideal_member(w: RepSequence | GeneralizedFunction, witness: IdealWitness,
                 protocol: CheckProtocol) -> CheckReport:
    """Check that ``w`` lies in the nowhere-dense ideal with singular set ``witness.gamma``.

    For each sample x of the window at distance >= margin from gamma, a neighbourhood
    V = [x - d, x + d] with d = min(spacing, dist(x, gamma)/2) must carry ``w_nu == 0``
    for every nu from the witness's stabilization index up to ``index_cap``.  Vanishing
    is proved structurally where possible, else by exact rational samples.

    Certified: every such (x, nu) verified.  Refuted: some w_cap is provably nonzero
    inside a neighbourhood, so no vanishing set out of the window has set in by the
    last checked index.  Inconclusive otherwise.
    """
    rep = w.rep if isinstance(w, GeneralizedFunction) else w
    cap = protocol.index_cap
    plan = []
    for x in protocol.points():
        dist = witness.distance(x)
        if dist < protocol.margin:
            continue
        mu = witness.stabilization_index(dist)
        half = min(protocol.spacing, dist / 2)
        plan.append((x, mu, Interval(x - half, x + half)))
    if not plan:
        return CheckReport(Verdict.INCONCLUSIVE, protocol.window, (), witness.gamma,
                           detail="no sample point clears the margin")
    first = min(mu for _, mu, _ in plan)
    indices = tuple(range(first, cap + 1))
    unresolved = None
    for x, mu, _ in plan:
        if mu > cap:
            unresolved = f"stabilization index {mu} at x={float(x)} exceeds index_cap {cap}"

    for nu in indices:
        expr = rep.rule(nu)
        region = _clean_region(witness, protocol, nu)
        if all(_neighbourhood_verdict(expr, part)[0] is Decision.YES for part in region):
            continue
        for x, mu, nbhd in plan:
            if mu > nu:
                continue
            decision, bad = _neighbourhood_verdict(expr, nbhd)
            if decision is Decision.YES:
                continue
            if decision is Decision.NO and nu == cap:
                return CheckReport(Verdict.REFUTED, protocol.window, indices, witness.gamma,
                                   counterexample=(nu, bad[0], bad[1]))
            unresolved = unresolved or f"could not verify vanishing at nu={nu}, x={float(x)}"
    if unresolved:
        return CheckReport(Verdict.INCONCLUSIVE, protocol.window, indices, witness.gamma,
                           detail=unresolved)
    return CheckReport(Verdict.CERTIFIED, protocol.window, indices, witness.gamma)


def equiv(w1: GeneralizedFunction, w2: GeneralizedFunction, witness: IdealWitness,
          protocol: CheckProtocol) -> CheckReport:
    """Whether ``w1 - w2`` lies in the ideal, i.e. both name the same class."""
    return ideal_member(SumSeq((w1.rep, ScaleSeq(Fraction(-1), w2.rep))), witness, protocol)
