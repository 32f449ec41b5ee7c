"""Explicit cohomology of torus cells and of P^c x Gm^e.

These are the two families whose cohomology is written down exactly, as
shifted ideal sums, rather than bounded by range rules.  For a torus
cell A^n x Gm^d the degree-0 cohomology of the untwisted ideal sheaves
is a binomial pattern of shifts 0..d (the Kunneth expansion of d copies
of the two-term Gm answer).  For P^c x Gm^e and the twist O(c+1) the
cellular complex in degree c has zero incoming differential, so the
degree-c cohomology is the same binomial pattern shifted by c.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .shifted import ShiftedIdealSum
from .witt import TwistLabel

__all__ = [
    "UnsupportedDifferentialError",
    "CellularComplexSlice",
    "h0_torus_cells",
    "hc_proj_times_torus",
    "cellular_complex_proj_times_torus",
    "expected_twist",
]


class UnsupportedDifferentialError(ValueError):
    """Raised when a twist or degree is outside the computed cases."""


def h0_torus_cells(n: int, d: int) -> ShiftedIdealSum:
    """Degree-0 cohomology of A^n x Gm^d as a shifted ideal sum.

    The affine factor contributes nothing; each torus factor tensors the
    answer with (shift 0) + (shift 1), so the shifts follow the binomial
    distribution on 0..d.

    >>> h0_torus_cells(0, 1).summands
    ((0, 1), (1, 1))
    >>> h0_torus_cells(2, 3).total_multiplicity
    8
    """
    if n < 0 or d < 0:
        raise ValueError("cell parameters must be non-negative")
    return ShiftedIdealSum.from_pairs((i, comb(d, i)) for i in range(d + 1))


def expected_twist(c: int) -> TwistLabel:
    """The unique twist for which the degree-c differential vanishes."""
    return TwistLabel.o(c + 1)


@dataclass(frozen=True)
class CellularComplexSlice:
    """The cellular complex around degree c for P^c x Gm^e.

    incoming is the degree c-1 term, current the degree-c term, and
    differential names the incoming map.  Only the vanishing case is
    computed; every other twist is refused rather than guessed.
    """

    degree: int
    twist: TwistLabel
    incoming: ShiftedIdealSum
    current: ShiftedIdealSum
    differential: str = "ZERO"


def cellular_complex_proj_times_torus(c: int, e: int,
                                      twist: TwistLabel) -> CellularComplexSlice:
    """Cellular complex slice at degree c for P^c x Gm^e with a twist.

    Requires c >= 1 (degree c - 1 must exist) and the twist O(c+1); for
    that twist the top incoming differential is zero, which is what
    makes the degree-c cohomology an honest direct sum.

    >>> s = cellular_complex_proj_times_torus(1, 2, TwistLabel.o(2))
    >>> s.incoming.summands
    ((0, 1), (1, 2), (2, 1))
    >>> s.current.summands
    ((1, 1), (2, 2), (3, 1))
    """
    if c < 1:
        raise UnsupportedDifferentialError(
            "cellular slice needs c >= 1; the point case has no incoming term"
        )
    if e < 0:
        raise ValueError("torus rank must be non-negative")
    if twist != expected_twist(c):
        raise UnsupportedDifferentialError(
            "differential only known to vanish for twist %s, got %s"
            % (expected_twist(c), twist)
        )
    incoming = ShiftedIdealSum.from_pairs((c - 1 + i, comb(e, i)) for i in range(e + 1))
    current = ShiftedIdealSum.from_pairs((c + i, comb(e, i)) for i in range(e + 1))
    return CellularComplexSlice(c, twist, incoming, current)


def hc_proj_times_torus(c: int, e: int, twist: TwistLabel) -> ShiftedIdealSum:
    """Degree-c cohomology of P^c x Gm^e with the twist O(c+1).

    For c = 0 the projective factor is a point and the twist is
    immaterial (any label denoting the trivial bundle on a point is
    accepted); the answer is the torus-cell sum.

    >>> hc_proj_times_torus(2, 3, TwistLabel.o(3)).summands
    ((2, 1), (3, 3), (4, 3), (5, 1))
    """
    if c < 0 or e < 0:
        raise ValueError("parameters must be non-negative")
    if c == 0:
        if not (twist.is_trivial or twist == TwistLabel.o(1) or twist == TwistLabel.o(0)):
            raise UnsupportedDifferentialError(
                "on a point only the trivial twist makes sense, got %s" % twist
            )
        return h0_torus_cells(0, e)
    return cellular_complex_proj_times_torus(c, e, twist).current
