"""Group actions on smooth and generalized functions.

Two families live here:

* projectable point transformations ``(x, u) -> (g1(x), alpha(x) u + beta(x))``, acting
  on a function U through ``x -> g2(g1^{-1}(x), U(g1^{-1}(x)))``; the vertical shift
  ``(x, u) -> (x, u + eps)`` is the one that leaves ``U' = F`` invariant;
* jump actions ``J_{a,h}`` and their multi-point versions ``J_{A,H}``, which act on
  representative sequences by gluing a height-h step into ``s_nu`` over a band of
  width ``1/(nu+1)`` around a.  They descend to the quotient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .ndalgebra import (
    ConstantSeq, GeneralizedFunction, JumpSeq, RepSequence, SumSeq,
)
from .smoothfn import (
    Constant, Identity, Interval, SmoothExpr, add, compose, diff, evaluate, exact,
    make_rho, mul, number_from_json, number_to_json,
)

# ----------------------------------------------------------------------------
# projectable actions

_PROBES = Interval(-10, 10).grid(201)


@dataclass(frozen=True)
class ProjectableAction:
    """``(x, u) -> (g1(x), alpha(x) * u + beta(x))`` with g1 a diffeomorphism of the line."""

    g1_forward: SmoothExpr
    g1_inverse: SmoothExpr
    alpha: SmoothExpr = Constant(1)
    beta: SmoothExpr = Constant(0)

    def __post_init__(self):
        slopes = [evaluate(diff(self.g1_forward), x) for x in _PROBES]
        if not (all(v > 0 for v in slopes) or all(v < 0 for v in slopes)):
            raise ValueError("g1_forward is not strictly monotone, so not a diffeomorphism")
        for x in _PROBES:
            back = evaluate(self.g1_forward, evaluate(self.g1_inverse, x))
            if abs(back - float(x)) > 1e-9 * max(1.0, abs(float(x))):
                raise ValueError(f"g1_inverse does not invert g1_forward at x={float(x)}")
        if any(evaluate(self.alpha, x) <= 0 for x in _PROBES):
            raise ValueError("alpha must be positive")

    @classmethod
    def identity(cls) -> ProjectableAction:
        return cls(Identity(), Identity())

    @classmethod
    def vertical(cls, epsilon) -> ProjectableAction:
        """The one-parameter symmetry ``(x, u) -> (x, u + epsilon)`` of ``U' = F``."""
        return cls(Identity(), Identity(), Constant(1), Constant(epsilon))

    @classmethod
    def translation(cls, c) -> ProjectableAction:
        """``(x, u) -> (x + c, u)``."""
        c = exact(c)
        return cls(add(Identity(), Constant(c)), add(Identity(), Constant(-c)))

    def g2(self, x, u) -> float:
        return evaluate(self.alpha, x) * float(u) + evaluate(self.beta, x)


def apply_projectable(act: ProjectableAction, U: SmoothExpr) -> SmoothExpr:
    """``x -> g2(g1^{-1}(x), U(g1^{-1}(x)))``."""
    inv = act.g1_inverse
    return add(mul(compose(act.alpha, inv), compose(U, inv)), compose(act.beta, inv))


def vertical_shift(epsilon, w: GeneralizedFunction) -> GeneralizedFunction:
    """Add the constant epsilon to every representative."""
    return GeneralizedFunction(SumSeq((w.rep, ConstantSeq(Constant(epsilon)))),
                               w.singular_support_hint)


# ----------------------------------------------------------------------------
# jump actions


@dataclass(frozen=True)
class JumpAction:
    """``J_{a,h}``: a jump of height h at a."""

    a: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", exact(self.a))
        object.__setattr__(self, "h", exact(self.h))

    def __matmul__(self, other: JumpAction) -> JumpAction:
        return compose_jump(self, other)


@dataclass(frozen=True)
class MultiJumpAction:
    """``J_{A,H}``: heights ``H(a)`` at the points of a finite set A, kept sorted."""

    jumps: tuple = ()

    def __post_init__(self):
        pairs = tuple(sorted((exact(a), exact(h)) for a, h in self.jumps))
        if any(p[0] == q[0] for p, q in zip(pairs, pairs[1:])):
            raise ValueError("jump locations must be distinct")
        object.__setattr__(self, "jumps", pairs)

    @classmethod
    def from_mapping(cls, heights: Mapping) -> MultiJumpAction:
        return cls(tuple(heights.items()))

    @classmethod
    def single(cls, act: JumpAction) -> MultiJumpAction:
        return cls(((act.a, act.h),))

    @property
    def locations(self) -> tuple:
        return tuple(a for a, _ in self.jumps)

    def as_dict(self) -> dict:
        return dict(self.jumps)

    def normalized(self) -> MultiJumpAction:
        """Drop zero heights; acts the same modulo the ideal."""
        return MultiJumpAction(tuple((a, h) for a, h in self.jumps if h != 0))

    def inverse(self) -> MultiJumpAction:
        return MultiJumpAction(tuple((a, -h) for a, h in self.jumps))

    def __matmul__(self, other: MultiJumpAction) -> MultiJumpAction:
        return compose_multi(self, other)


def apply_jump(act: JumpAction, s: RepSequence, cutoff: SmoothExpr | None = None) -> RepSequence:
    """Termwise ``rho((nu+1)(x-a)) * s_nu`` left of a and ``rho(...) * (s_nu + h)`` right of a."""
    return JumpSeq(s, ((act.a, act.h),), cutoff if cutoff is not None else make_rho())


def apply_jump_gf(act: JumpAction, w: GeneralizedFunction,
                  cutoff: SmoothExpr | None = None) -> GeneralizedFunction:
    return GeneralizedFunction(apply_jump(act, w.rep, cutoff),
                               w.singular_support_hint | {act.a})


def apply_multi(act: MultiJumpAction, s: RepSequence,
                cutoff: SmoothExpr | None = None) -> RepSequence:
    """Cutoff product over A times ``s_nu + sum_{a < x} h_a``; the identity when A is empty."""
    if not act.jumps:
        return s
    return JumpSeq(s, act.jumps, cutoff if cutoff is not None else make_rho())


def apply_multi_gf(act: MultiJumpAction, w: GeneralizedFunction,
                   cutoff: SmoothExpr | None = None) -> GeneralizedFunction:
    return GeneralizedFunction(apply_multi(act, w.rep, cutoff),
                               w.singular_support_hint | set(act.locations))


def compose_jump(act1: JumpAction, act2: JumpAction) -> JumpAction:
    """``J_{a,h} o J_{a,k} = J_{a,h+k}``."""
    if act1.a != act2.a:
        raise ValueError(
            f"jumps at different points ({act1.a} vs {act2.a}) do not compose to a single "
            "jump; lift both with MultiJumpAction.single and use compose_multi")
    return JumpAction(act1.a, act1.h + act2.h)


def compose_multi(act1: MultiJumpAction, act2: MultiJumpAction) -> MultiJumpAction:
    """Heights add on shared points; the location set is the union."""
    heights = dict(act1.jumps)
    for b, k in act2.jumps:
        heights[b] = heights[b] + k if b in heights else k
    return MultiJumpAction(tuple(heights.items()))


# ----------------------------------------------------------------------------
# JSON action descriptors


def action_to_json(act) -> dict:
    if isinstance(act, JumpAction):
        return {"type": "jump", "a": number_to_json(act.a), "h": number_to_json(act.h)}
    if isinstance(act, MultiJumpAction):
        return {"type": "multi",
                "jumps": [[number_to_json(a), number_to_json(h)] for a, h in act.jumps]}
    if isinstance(act, VerticalShift):
        return {"type": "vertical", "epsilon": number_to_json(act.epsilon)}
    raise TypeError(f"not an action: {act!r}")


@dataclass(frozen=True)
class VerticalShift:
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "epsilon", exact(self.epsilon))


def action_from_json(obj, path: str = "$"):
    """Parse ``{"type": "jump"|"multi"|"vertical", ...}``; errors name the field."""
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected an action object")
    kind = obj.get("type")

    def num(key):
        if key not in obj:
            raise ValueError(f"{path}.{key}: missing")
        return number_from_json(obj[key], f"{path}.{key}")

    if kind == "jump":
        return JumpAction(num("a"), num("h"))
    if kind == "vertical":
        return VerticalShift(num("epsilon"))
    if kind == "multi":
        jumps = obj.get("jumps")
        if isinstance(jumps, dict):
            jumps = list(jumps.items())
        if not isinstance(jumps, list):
            raise ValueError(f"{path}.jumps: expected a list of [a, h] pairs")
        pairs = []
        for i, pair in enumerate(jumps):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValueError(f"{path}.jumps[{i}]: expected [a, h]")
            pairs.append((number_from_json(pair[0], f"{path}.jumps[{i}][0]"),
                          number_from_json(pair[1], f"{path}.jumps[{i}][1]")))
        try:
            return MultiJumpAction(tuple(pairs))
        except ValueError as err:
            raise ValueError(f"{path}.jumps: {err}") from err
    raise ValueError(f"{path}.type: unknown action type {kind!r}")


def apply_action(act, w: GeneralizedFunction) -> GeneralizedFunction:
    if isinstance(act, JumpAction):
        return apply_jump_gf(act, w)
    if isinstance(act, MultiJumpAction):
        return apply_multi_gf(act, w)
    if isinstance(act, VerticalShift):
        return vertical_shift(act.epsilon, w)
    raise TypeError(f"not an action: {act!r}")
