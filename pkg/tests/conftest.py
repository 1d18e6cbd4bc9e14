from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import pytest

from ndalg.ndalgebra import (
    ConstantSeq, DeriveSeq, IdealWitness, ProductSeq, RepSequence, ScaleSeq, SumSeq,
)
from ndalg.smoothfn import (
    Constant, X, affine, make_rho, make_rho_glued, make_rho_wide, make_smooth_step, polynomial,
)
from ndalg.symmetry import JumpAction, MultiJumpAction, apply_jump, apply_multi, compose_multi

RHO_BUILDERS = {"sum": make_rho, "glued": make_rho_glued, "wide": make_rho_wide}


@pytest.fixture(params=sorted(RHO_BUILDERS))
def rho(request):
    """Every admissible cutoff the suite knows about."""
    return RHO_BUILDERS[request.param]()


# independent oracles ---------------------------------------------------------


def step_oracle(t: float) -> float:
    """f(t) / (f(t) + f(1 - t)) with f(t) = exp(-1/t) for t > 0, written out directly."""
    def f(u):
        return math.exp(-1.0 / u) if u > 0 else 0.0
    return f(t) / (f(t) + f(1.0 - t))


def band_oracle(s_exact, a, h, nu, x):
    """Three-band formula for a jump of height h at a applied to s at index nu.

    Returns the exact value, or None in the transition bands where it says nothing.
    """
    a, h, x = Fraction(a), Fraction(h), Fraction(x)
    r = Fraction(1, nu + 1)
    if x <= a - r:
        return s_exact(x)
    if a - r / 2 <= x <= a + r / 2:
        return Fraction(0)
    if x >= a + r:
        return s_exact(x) + h
    return None


def cumulative_oracle(jumps, s_exact, x):
    """s(x) + sum of heights at points strictly left of x (valid off the bands)."""
    return s_exact(Fraction(x)) + sum((Fraction(h) for a, h in jumps if Fraction(a) < x),
                                      Fraction(0))


# fragment ideal members ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StepTail(RepSequence):
    """s((nu + 1) x): 0 left of 0, 1 right of 1/(nu+1)."""

    def _build(self, nu):
        return affine(nu + 1, 0, make_smooth_step())


def bump(c, psi):
    """(1 - rho((nu+1)(x - c))) * psi, supported in |x - c| < 1/(nu+1)."""
    base = ConstantSeq(psi)
    return SumSeq((base, ScaleSeq(Fraction(-1), apply_jump(JumpAction(c, 0), base))))


def fragment_members(c, d, s: RepSequence):
    """Ten ideal members with their singular sets, built only from library operations."""
    psi = polynomial(1, -2, 1)
    phi = affine(1, Fraction(-1, 3), make_rho())
    m1 = MultiJumpAction(((c, 1), (d, 2)))
    m2 = MultiJumpAction(((d, -1),))
    wide = apply_jump(JumpAction(c, 3), ConstantSeq(Constant(0)), cutoff=make_rho_wide())
    return [
        (ConstantSeq(Constant(0)), ()),
        (bump(c, psi), (c,)),
        (ScaleSeq(Fraction(7, 3), bump(d, phi)), (d,)),
        (ProductSeq((bump(c, X), ConstantSeq(phi))), (c,)),
        (SumSeq((bump(c, psi), bump(d, X))), (c, d)),
        (DeriveSeq(bump(d, polynomial(0, 0, 1)), 1), (d,)),
        (SumSeq((apply_jump(JumpAction(c, 2), apply_jump(JumpAction(c, -5), s)),
                 ScaleSeq(Fraction(-1), apply_jump(JumpAction(c, -3), s)))), (c,)),
        (SumSeq((apply_multi(m1, apply_multi(m2, s)),
                 ScaleSeq(Fraction(-1), apply_multi(compose_multi(m1, m2), s)))), (c, d)),
        (SumSeq((wide, ScaleSeq(Fraction(-1),
                                apply_jump(JumpAction(c, 3), ConstantSeq(Constant(0)))))), (c,)),
        (ProductSeq((bump(c, psi), bump(c, phi))), (c,)),
    ]


BASE_SEQUENCES = {
    "zero": ConstantSeq(Constant(0)),
    "x": ConstantSeq(X),
    "x2": ConstantSeq(polynomial(0, 0, 1)),
}

EXACT_BASES = {
    "zero": lambda x: Fraction(0),
    "x": lambda x: Fraction(x),
    "x2": lambda x: Fraction(x) ** 2,
}


def witness(*points) -> IdealWitness:
    return IdealWitness(tuple(points))


# acceptance summary ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
