"""Level-graded direct sums of shifted fundamental-ideal powers.

A ShiftedIdealSum is a finite multiset of integer shifts; evaluated at
level j it denotes the group (+)_s (I^{j-s})^{m_s}, concretely a direct
sum of subgroups 2^max(j-s,0) Z of the integers.  Raising the level by
one applies multiplication by <<-1>> summand by summand: bijective on a
summand whose current level j - s is non-negative, and of index 2
(signature doubling into the even integers) while the level is still
negative.

Everything about cokernels of iterated steps therefore reduces to
counting, per summand, how many of the steps from level j0 to level j1
happen while that summand sits below level 0.  A summand with shift s
spends min(max(s - j0, 0), j1 - j0) steps below zero, contributing a
cyclic group of that 2-power order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from math import gcd

from .witt import IdealLevel

__all__ = [
    "ShiftedIdealSum",
    "AbelianGroupPresentation",
    "StepKind",
    "StepVerdict",
]


class StepKind(Enum):
    ISO = "ISO"
    INJECTIVE_NOT_SURJECTIVE = "INJECTIVE_NOT_SURJECTIVE"


def _divisibility_normal_form(orders: list[int]) -> tuple[int, ...]:
    # Repeatedly replace a pair by (gcd, lcm) until every pair divides;
    # this is the classical reduction to invariant factors and needs no
    # integer factorization.
    work = [abs(o) for o in orders if abs(o) != 1]
    if any(o == 0 for o in work):
        raise ValueError("torsion orders must be nonzero")
    changed = True
    while changed:
        changed = False
        for i, k in itertools.combinations(range(len(work)), 2):
            a, b = work[i], work[k]
            if b % a != 0:
                g = gcd(a, b)
                work[i], work[k] = g, a * b // g
                changed = True
        work = [o for o in work if o != 1]
        work.sort()
    return tuple(work)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """A finitely generated abelian group in invariant-factor normal form.

    torsion_orders is sorted so that each order divides the next; the
    constructor rejects tuples that are not already in normal form (use
    from_orders to normalize an arbitrary multiset of cyclic orders).

    >>> AbelianGroupPresentation.from_orders(0, [4, 2, 3])
    AbelianGroupPresentation(free_rank=0, torsion_orders=(2, 12))
    """

    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        for o in self.torsion_orders:
            if o < 2:
                raise ValueError("torsion orders must be at least 2")
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            if b % a != 0:
                raise ValueError(
                    "torsion orders must form a divisibility chain, got %r"
                    % (self.torsion_orders,)
                )

    @classmethod
    def from_orders(cls, free_rank: int, orders) -> "AbelianGroupPresentation":
        return cls(free_rank, _divisibility_normal_form(list(orders)))

    @classmethod
    def trivial(cls) -> "AbelianGroupPresentation":
        return cls(0, ())

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_orders

    @property
    def exponent(self) -> int:
        """Smallest n killing the torsion part (1 if torsion-free)."""
        return self.torsion_orders[-1] if self.torsion_orders else 1

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        for order, group in itertools.groupby(self.torsion_orders):
            count = len(list(group))
            parts.append("Z/%d" % order if count == 1 else "(Z/%d)^%d" % (order, count))
        return " (+) ".join(parts)


@dataclass(frozen=True)
class StepVerdict:
    kind: StepKind
    cokernel: AbelianGroupPresentation

    @property
    def is_iso(self) -> bool:
        return self.kind is StepKind.ISO


@dataclass(frozen=True)
class ShiftedIdealSum:
    """A multiset {(shift, multiplicity)} denoting (+)_s (I^{j-s})^m at level j.

    Summands are stored sorted by shift with multiplicities merged, so
    equal multisets compare equal.

    >>> gm = ShiftedIdealSum.from_pairs([(0, 1), (1, 1)])
    >>> gm.describe_at(2)
    '4Z (+) 2Z'
    >>> gm.describe_at(0)
    'Z (+) Z'
    """

    summands: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for shift, mult in self.summands:
            if mult < 0:
                raise ValueError("multiplicities must be non-negative")
            if mult:
                merged[shift] = merged.get(shift, 0) + mult
        object.__setattr__(
            self, "summands", tuple(sorted(merged.items()))
        )

    @classmethod
    def from_pairs(cls, pairs) -> "ShiftedIdealSum":
        return cls(tuple(pairs))

    @classmethod
    def empty(cls) -> "ShiftedIdealSum":
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.summands

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.summands)

    @property
    def max_shift(self) -> int | None:
        return self.summands[-1][0] if self.summands else None

    def evaluate(self, j: int) -> tuple[tuple[IdealLevel, int], ...]:
        """The group at level j as (ideal power, multiplicity) pairs."""
        return tuple((IdealLevel(j - s), m) for s, m in self.summands)

    def describe_at(self, j: int) -> str:
        if self.is_empty:
            return "0"
        parts = []
        for level, mult in self.evaluate(j):
            base = level.subgroup_str()
            parts.extend([base] * mult)
        return " (+) ".join(parts)

    def step_verdict(self, j: int) -> StepVerdict:
        """Verdict for the single step from level j to level j + 1.

        The step is injective always (multiplication by a nonzero
        integer on each summand) and bijective exactly on the summands
        already at non-negative level; each summand still below level 0
        contributes Z/2 to the cokernel.
        """
        coker_rank = sum(m for s, m in self.summands if s > j)
        if coker_rank == 0:
            return StepVerdict(StepKind.ISO, AbelianGroupPresentation.trivial())
        return StepVerdict(
            StepKind.INJECTIVE_NOT_SURJECTIVE,
            AbelianGroupPresentation(0, (2,) * coker_rank),
        )

    def graded_step_verdict(self, j: int) -> StepVerdict:
        """Verdict for the step on graded pieces at level j.

        On the quotient chain a summand with shift s contributes the
        graded piece of I^{j-s}, which has order 2 for j - s >= 0 and is
        trivial below.  The graded step on a summand fails to be onto
        exactly when the piece jumps from trivial to order 2, i.e. when
        j - s == -1; everywhere else it maps a piece isomorphically (or
        zero to zero).
        """
        coker_rank = sum(m for s, m in self.summands if s == j + 1)
        if coker_rank == 0:
            return StepVerdict(StepKind.ISO, AbelianGroupPresentation.trivial())
        return StepVerdict(
            StepKind.INJECTIVE_NOT_SURJECTIVE,
            AbelianGroupPresentation(0, (2,) * coker_rank),
        )

    def composite_cokernel(self, j0: int, j1: int) -> AbelianGroupPresentation:
        """Cokernel of the composite of steps from level j0 to level j1.

        Each summand of shift s contributes a cyclic group of order
        2^min(max(s - j0, 0), j1 - j0): one factor of 2 for every step
        taken while its level is still negative, capped by the number of
        steps taken at all.

        >>> str(ShiftedIdealSum.from_pairs([(3, 2)]).composite_cokernel(1, 5))
        '(Z/4)^2'
        """
        if j1 < j0:
            raise ValueError("target level must not be below source level")
        orders: list[int] = []
        for s, m in self.summands:
            k = min(max(s - j0, 0), j1 - j0)
            if k > 0:
                orders.extend([2 ** k] * m)
        return AbelianGroupPresentation.from_orders(0, orders)

    def cokernel_exponent(self, j0: int) -> int:
        """Exponent of the cokernel from level j0 into any stable level.

        Stable means at or above the maximal shift, where every later
        step is bijective.  Equals 2^max(0, max_shift - j0); an empty
        sum gives 1.
        """
        if self.is_empty:
            return 1
        return 2 ** max(0, self.max_shift - j0)

    def __str__(self) -> str:
        if self.is_empty:
            return "0"

        def term(s: int, m: int) -> str:
            if s > 0:
                base = "I[j-%d]" % s
            elif s < 0:
                base = "I[j+%d]" % -s
            else:
                base = "I[j]"
            return base if m == 1 else "%s^%d" % (base, m)

        return " (+) ".join(term(s, m) for s, m in self.summands)
