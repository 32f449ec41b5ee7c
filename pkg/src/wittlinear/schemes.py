"""Construction trees for linear schemes and stratification combinatorics.

A scheme is described by how it is built: affine cells and tori as
leaves, open/closed decompositions, products, and stratifications as
inner nodes.  Two integer invariants are propagated up such trees.

The glue level (j_linear_level) counts construction depth: how many
decomposition steps separate the scheme from affine pieces.  The range
level (range_level) is the invariant that actually controls where the
graded step acts bijectively on cohomology; it grows strictly slower,
because closed decompositions and stratifications do not raise it.
Both recursions record which rule fired at each node so that verdicts
downstream can cite their derivation.

Stratifications come in two flavours: symbolic (a Stratified node whose
strata are scheme expressions plus a closure order) and realized (a
FinitePosetRealization partitioning an explicit finite point set).  Both
support splitting off a closed stratum at a time, which is how a
stratification is rewritten as a nested closed decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .witt import TwistLabel

__all__ = [
    "SchemeError",
    "InvalidStratificationError",
    "InternalConsistencyError",
    "SchemeExpr",
    "Empty",
    "Affine",
    "TorusCell",
    "ProjTimesTorus",
    "OpenGlue",
    "ClosedGlue",
    "Product",
    "Stratified",
    "ClosureOrder",
    "RuleApplication",
    "j_linear_level_with_rules",
    "range_level_with_rules",
    "split_order",
    "stratification_to_tree",
    "as_torus_cell",
    "torus_cell_as_glue_tree",
    "FinitePosetRealization",
    "VennStratum",
    "VennReport",
    "venn_stratification",
    "scheme_to_json",
    "scheme_from_json",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1


class SchemeError(ValueError):
    """Raised for structurally invalid scheme expressions."""


class InvalidStratificationError(SchemeError):
    """Raised when closure data is not a partial order on the strata."""


class InternalConsistencyError(RuntimeError):
    """Raised when a check that is mathematically forced fails anyway."""


@dataclass(frozen=True)
class SchemeExpr:
    """Base class for scheme construction trees.

    smooth_flag is a user assertion overriding the structural default;
    None means "derive from the construction".
    """

    smooth_flag: bool | None = field(default=None, kw_only=True)

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def is_empty(self) -> bool:
        return False

    def _derived_smooth(self) -> bool:
        raise NotImplementedError

    @property
    def smooth(self) -> bool:
        if self.smooth_flag is not None:
            return self.smooth_flag
        return self._derived_smooth()

    def assume_smooth(self) -> "SchemeExpr":
        return replace(self, smooth_flag=True)

    def children(self) -> tuple["SchemeExpr", ...]:
        return ()

    def label(self) -> str:
        raise NotImplementedError

    def j_linear_level(self) -> int:
        return j_linear_level_with_rules(self)[0]

    def range_level(self) -> int:
        return range_level_with_rules(self)[0]


@dataclass(frozen=True)
class Empty(SchemeExpr):
    """The empty scheme; dimension -1 by convention."""

    @property
    def dim(self) -> int:
        return -1

    @property
    def is_empty(self) -> bool:
        return True

    def _derived_smooth(self) -> bool:
        return True

    def label(self) -> str:
        return "empty"


@dataclass(frozen=True)
class Affine(SchemeExpr):
    """Affine space of dimension n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise SchemeError("affine dimension must be non-negative")

    @property
    def dim(self) -> int:
        return self.n

    def _derived_smooth(self) -> bool:
        return True

    def label(self) -> str:
        return "A^%d" % self.n


@dataclass(frozen=True)
class TorusCell(SchemeExpr):
    """A cell A^n x Gm^d: affine space times a split torus."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.d < 0:
            raise SchemeError("torus cell parameters must be non-negative")

    @property
    def dim(self) -> int:
        return self.n + self.d

    def _derived_smooth(self) -> bool:
        return True

    def label(self) -> str:
        if self.d == 0:
            return "A^%d" % self.n
        gm = "Gm" if self.d == 1 else "Gm^%d" % self.d
        return gm if self.n == 0 else "A^%d*%s" % (self.n, gm)


@dataclass(frozen=True)
class ProjTimesTorus(SchemeExpr):
    """P^c x Gm^e, carrying a line-bundle twist label on the P^c factor."""

    c: int
    e: int
    twist: TwistLabel = TwistLabel.trivial()

    def __post_init__(self) -> None:
        if self.c < 0 or self.e < 0:
            raise SchemeError("projective/torus parameters must be non-negative")

    @property
    def dim(self) -> int:
        return self.c + self.e

    def _derived_smooth(self) -> bool:
        return True

    def label(self) -> str:
        s = "P^%d" % self.c
        if not self.twist.is_trivial:
            s += "@%s" % self.twist
        if self.e:
            s += "*Gm" if self.e == 1 else "*Gm^%d" % self.e
        return s


@dataclass(frozen=True)
class OpenGlue(SchemeExpr):
    """The open complement of a closed piece inside an ambient scheme.

    The closed piece must have strictly smaller dimension than the
    ambient scheme (or be empty), so the complement is dense.
    """

    ambient: SchemeExpr
    closed: SchemeExpr

    def __post_init__(self) -> None:
        if not self.closed.is_empty and self.closed.dim >= self.ambient.dim:
            raise SchemeError(
                "removed closed piece must have smaller dimension than the ambient scheme"
            )

    @property
    def dim(self) -> int:
        return self.ambient.dim

    @property
    def is_empty(self) -> bool:
        return self.ambient.is_empty

    def _derived_smooth(self) -> bool:
        # an open subscheme of a smooth scheme is smooth
        return self.ambient.smooth

    def children(self) -> tuple[SchemeExpr, ...]:
        return (self.ambient, self.closed)

    def label(self) -> str:
        return "open(%s, %s)" % (self.ambient.label(), self.closed.label())


@dataclass(frozen=True)
class ClosedGlue(SchemeExpr):
    """A scheme split into a closed piece and its open complement."""

    closed: SchemeExpr
    open_part: SchemeExpr

    @property
    def dim(self) -> int:
        return max(self.closed.dim, self.open_part.dim)

    @property
    def is_empty(self) -> bool:
        return self.closed.is_empty and self.open_part.is_empty

    def _derived_smooth(self) -> bool:
        # gluing a closed stratum back in usually creates singular points;
        # smoothness of the total space is an assertion, not a derivation
        return False

    def children(self) -> tuple[SchemeExpr, ...]:
        return (self.closed, self.open_part)

    def label(self) -> str:
        return "closed(%s, %s)" % (self.closed.label(), self.open_part.label())


@dataclass(frozen=True)
class Product(SchemeExpr):
    left: SchemeExpr
    right: SchemeExpr

    @property
    def dim(self) -> int:
        if self.is_empty:
            return -1
        return self.left.dim + self.right.dim

    @property
    def is_empty(self) -> bool:
        return self.left.is_empty or self.right.is_empty

    def _derived_smooth(self) -> bool:
        return self.left.smooth and self.right.smooth

    def children(self) -> tuple[SchemeExpr, ...]:
        return (self.left, self.right)

    def label(self) -> str:
        return "%s*%s" % (self.left.label(), self.right.label())


@dataclass(frozen=True)
class ClosureOrder:
    """The closure relation on stratum indices, stored reflexively and
    transitively closed.  A pair (i, k) means stratum i lies in the
    closure of stratum k.
    """

    size: int
    relation: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, k in self.relation:
            if not (0 <= i < self.size and 0 <= k < self.size):
                raise InvalidStratificationError("closure pair out of range")
        rel = self.relation
        for i in range(self.size):
            if (i, i) not in rel:
                raise InvalidStratificationError("closure relation must be reflexive")
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    raise InvalidStratificationError("closure relation must be transitive")
            if a != b and (b, a) in rel:
                raise InvalidStratificationError(
                    "strata %d and %d lie in each other's closure" % (a, b)
                )

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "ClosureOrder":
        rel = {(i, i) for i in range(size)}
        rel.update((int(a), int(b)) for a, b in pairs)
        for a, b in rel:
            if not (0 <= a < size and 0 <= b < size):
                raise InvalidStratificationError("closure pair out of range")
        # transitive closure by iteration; strata counts are tiny
        changed = True
        while changed:
            changed = False
            new = {(a, d) for (a, b) in rel for (c, d) in rel if b == c} - rel
            if new:
                rel.update(new)
                changed = True
        return cls(size, frozenset(rel))

    @classmethod
    def discrete(cls, size: int) -> "ClosureOrder":
        return cls.from_pairs(size, ())

    @classmethod
    def chain(cls, size: int) -> "ClosureOrder":
        return cls.from_pairs(size, ((i, i + 1) for i in range(size - 1)))

    def leq(self, i: int, k: int) -> bool:
        """Whether stratum i lies in the closure of stratum k."""
        return (i, k) in self.relation

    def minimal_among(self, indices: Sequence[int]) -> list[int]:
        """Indices whose closure meets no other listed stratum: the closed ones."""
        pool = set(indices)
        return sorted(
            i for i in pool
            if not any(k != i and (k, i) in self.relation for k in pool)
        )

    def cover_pairs(self) -> list[tuple[int, int]]:
        """Transitive reduction, for canonical printing."""
        strict = {(a, b) for (a, b) in self.relation if a != b}
        return sorted(
            (a, b) for (a, b) in strict
            if not any((a, m) in strict and (m, b) in strict for m in range(self.size))
        )

    def strict_pairs(self) -> list[tuple[int, int]]:
        return sorted((a, b) for (a, b) in self.relation if a != b)


@dataclass(frozen=True)
class Stratified(SchemeExpr):
    """A scheme given by finitely many locally closed strata plus the
    closure relation among them.
    """

    strata: tuple[SchemeExpr, ...]
    closure_order: ClosureOrder

    def __post_init__(self) -> None:
        if not self.strata:
            raise SchemeError("a stratification needs at least one stratum")
        if any(s.is_empty for s in self.strata):
            raise SchemeError("strata must be nonempty")
        if self.closure_order.size != len(self.strata):
            raise InvalidStratificationError(
                "closure order is on %d strata but %d were given"
                % (self.closure_order.size, len(self.strata))
            )

    @property
    def dim(self) -> int:
        return max(s.dim for s in self.strata)

    def _derived_smooth(self) -> bool:
        return False

    def children(self) -> tuple[SchemeExpr, ...]:
        return self.strata

    def label(self) -> str:
        return "strat[%d]" % len(self.strata)

    def to_glue_tree(self) -> SchemeExpr:
        """Rewrite as nested closed decompositions.

        Repeatedly split off a stratum that is closed in what remains
        (a minimal one in the closure order; lowest index on ties).
        With a single stratum the stratification is the stratum.
        """
        order = split_order(self.closure_order)
        tree = self.strata[order[-1]]
        for idx in reversed(order[:-1]):
            tree = ClosedGlue(self.strata[idx], tree)
        return tree


@dataclass(frozen=True)
class RuleApplication:
    """One rule firing at one tree node: inputs are child levels."""

    node: str
    rule: str
    inputs: tuple[int, ...]
    level: int


def _apply(rules: list[RuleApplication], node: SchemeExpr, rule: str,
           inputs: tuple[int, ...], level: int) -> int:
    rules.append(RuleApplication(node.label(), rule, inputs, level))
    return level


def j_linear_level_with_rules(x: SchemeExpr) -> tuple[int, tuple[RuleApplication, ...]]:
    """Glue level with the rule applications that witness it.

    Affine pieces sit at level 0; each open or closed decomposition
    costs one level over its parts; a product adds levels; a
    stratification with k strata costs one splitting plus k - 1 further
    closed decompositions over its worst stratum.
    """
    rules: list[RuleApplication] = []

    def go(t: SchemeExpr) -> int:
        if isinstance(t, Empty):
            return _apply(rules, t, "leaf-empty", (), 0)
        if isinstance(t, Affine):
            return _apply(rules, t, "leaf-affine", (), 0)
        if isinstance(t, TorusCell):
            return _apply(rules, t, "leaf-torus-cell", (), t.d)
        if isinstance(t, ProjTimesTorus):
            # c closed cell decompositions for the projective factor,
            # one torus step per Gm factor
            return _apply(rules, t, "leaf-proj-cell-chain", (), t.c + t.e)
        if isinstance(t, OpenGlue):
            a, c = go(t.ambient), go(t.closed)
            return _apply(rules, t, "open-glue-split", (a, c), 1 + max(a, c))
        if isinstance(t, ClosedGlue):
            c, u = go(t.closed), go(t.open_part)
            return _apply(rules, t, "closed-glue-split", (c, u), 1 + max(c, u))
        if isinstance(t, Product):
            l, r = go(t.left), go(t.right)
            return _apply(rules, t, "product-sum", (l, r), l + r)
        if isinstance(t, Stratified):
            levels = tuple(go(s) for s in t.strata)
            lvl = 1 + (len(t.strata) - 1) + max(levels)
            return _apply(rules, t, "stratified-split", levels, lvl)
        raise SchemeError("unknown scheme node %r" % (t,))

    level = go(x)
    return level, tuple(rules)


def range_level_with_rules(x: SchemeExpr) -> tuple[int, tuple[RuleApplication, ...]]:
    """Range level with the rule applications that witness it.

    This is the bound n such that the graded step acts bijectively on
    homology along the diagonal i + j >= n.  Closed decompositions and
    stratifications keep the maximum of their parts (five-lemma on the
    localization sequence); removing a closed piece costs one; products
    add; a torus factor costs one per Gm while projective cells are
    free.
    """
    rules: list[RuleApplication] = []

    def go(t: SchemeExpr) -> int:
        if isinstance(t, Empty):
            return _apply(rules, t, "leaf-empty", (), 0)
        if isinstance(t, Affine):
            return _apply(rules, t, "leaf-affine", (), 0)
        if isinstance(t, TorusCell):
            return _apply(rules, t, "leaf-torus-cell", (), t.d)
        if isinstance(t, ProjTimesTorus):
            return _apply(rules, t, "leaf-proj-cell-strata", (), t.e)
        if isinstance(t, OpenGlue):
            a, c = go(t.ambient), go(t.closed)
            return _apply(rules, t, "open-glue-shift", (a, c), max(a, c) + 1)
        if isinstance(t, ClosedGlue):
            c, u = go(t.closed), go(t.open_part)
            return _apply(rules, t, "closed-glue-five-lemma", (c, u), max(c, u))
        if isinstance(t, Product):
            l, r = go(t.left), go(t.right)
            return _apply(rules, t, "product-sum", (l, r), l + r)
        if isinstance(t, Stratified):
            levels = tuple(go(s) for s in t.strata)
            return _apply(rules, t, "stratified-refinement", levels, max(levels))
        raise SchemeError("unknown scheme node %r" % (t,))

    level = go(x)
    return level, tuple(rules)


def split_order(order: ClosureOrder) -> tuple[int, ...]:
    """The order in which strata are split off as closed pieces.

    At each step pick the lowest-indexed stratum that is minimal in the
    closure order among those remaining; such a stratum is closed in the
    remaining space, so it can be split off by a closed decomposition.
    """
    remaining = list(range(order.size))
    out: list[int] = []
    while len(remaining) > 1:
        pick = order.minimal_among(remaining)[0]
        out.append(pick)
        remaining.remove(pick)
    out.extend(remaining)
    return tuple(out)


def stratification_to_tree(strata: Sequence[SchemeExpr],
                           closure_order: ClosureOrder) -> SchemeExpr:
    """Nested closed decomposition realizing a stratification."""
    return Stratified(tuple(strata), closure_order).to_glue_tree()


def as_torus_cell(x: SchemeExpr) -> tuple[int, int] | None:
    """Recognize trees that are structurally A^n x Gm^d; None otherwise.

    Recognition is purely structural (Affine, TorusCell and products
    thereof); glue trees that happen to describe a torus are not
    chased.
    """
    if isinstance(x, Affine):
        return (x.n, 0)
    if isinstance(x, TorusCell):
        return (x.n, x.d)
    if isinstance(x, Product):
        l = as_torus_cell(x.left)
        r = as_torus_cell(x.right)
        if l is not None and r is not None:
            return (l[0] + r[0], l[1] + r[1])
    return None


def torus_cell_as_glue_tree(n: int, d: int) -> SchemeExpr:
    """A^n x Gm^d built from affine leaves with one open split per torus
    factor; a structural witness that the torus cell has range level d.
    """
    tree: SchemeExpr = Affine(n)
    for _ in range(d):
        tree = Product(tree, OpenGlue(Affine(1), Affine(0)))
    return tree


@dataclass(frozen=True)
class FinitePosetRealization:
    """A finite model of a stratified space: a ground set partitioned
    into pieces, with explicit closures given as index sets.

    closure_sets[i] lists the pieces contained in the closure of piece
    i (always including i itself).  Validation enforces that the pieces
    partition the ground set and that "lies in the closure of" is a
    partial order; a cycle of distinct pieces is rejected.
    """

    ground: frozenset
    pieces: tuple[frozenset, ...]
    closure_sets: tuple[frozenset, ...]

    def __post_init__(self) -> None:
        ground = frozenset(self.ground)
        pieces = tuple(frozenset(p) for p in self.pieces)
        closure_sets = tuple(frozenset(int(i) for i in cs) for cs in self.closure_sets)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "closure_sets", closure_sets)

        if len(pieces) != len(closure_sets):
            raise InvalidStratificationError("one closure set per piece required")
        if not pieces:
            raise InvalidStratificationError("at least one piece required")
        seen: set = set()
        for p in pieces:
            if not p:
                raise InvalidStratificationError("pieces must be nonempty")
            if p & seen:
                raise InvalidStratificationError("pieces must be disjoint")
            seen |= p
        if seen != ground:
            raise InvalidStratificationError("pieces must cover the ground set")
        n = len(pieces)
        for i, cs in enumerate(closure_sets):
            if i not in cs:
                raise InvalidStratificationError("piece %d missing from its own closure" % i)
            for k in cs:
                if not 0 <= k < n:
                    raise InvalidStratificationError("closure index out of range")
        # ClosureOrder re-checks transitivity and rejects 2-cycles
        self.closure_order()

    @property
    def size(self) -> int:
        return len(self.pieces)

    def closure_order(self) -> ClosureOrder:
        pairs = {(k, i) for i, cs in enumerate(self.closure_sets) for k in cs}
        return ClosureOrder.from_pairs(len(self.pieces), pairs)

    def closure_points(self, i: int) -> frozenset:
        out: set = set()
        for k in self.closure_sets[i]:
            out |= self.pieces[k]
        return frozenset(out)

    def replay_split(self) -> tuple[int, ...]:
        """Split off closed pieces in the canonical order, verifying at
        each step that the picked piece really is closed in what
        remains of the ground set.  Returns the pick order.

        For validated closure data the verification cannot fail; a
        failure therefore raises InternalConsistencyError.
        """
        order = split_order(self.closure_order())
        space = set(self.ground)
        for idx in order[:-1]:
            visible_closure = self.closure_points(idx) & space
            if visible_closure != self.pieces[idx]:
                raise InternalConsistencyError(
                    "piece %d is not closed in the remaining space" % idx
                )
            space -= self.pieces[idx]
        if space != set(self.pieces[order[-1]]):
            raise InternalConsistencyError("leftover points after the final piece")
        return order

    def to_json(self) -> dict:
        def key(p):
            return sorted(str(x) for x in p)

        return {
            "schema_version": SCHEMA_VERSION,
            "ground": sorted(str(x) for x in self.ground),
            "pieces": [key(p) for p in self.pieces],
            "closure": [sorted(cs) for cs in self.closure_sets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinitePosetRealization":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidStratificationError("unsupported schema_version")
        return cls(
            frozenset(data["ground"]),
            tuple(frozenset(p) for p in data["pieces"]),
            tuple(frozenset(cs) for cs in data["closure"]),
        )


@dataclass(frozen=True)
class VennStratum:
    """One candidate stratum: the points lying in exactly the sets
    indexed by members."""

    members: frozenset
    points: frozenset


@dataclass(frozen=True)
class VennReport:
    strata: tuple[VennStratum, ...]
    partition_ok: bool
    boundary_ok: bool
    counterexamples: tuple[str, ...]
    declared_irreducible: bool

    @property
    def nonempty(self) -> tuple[VennStratum, ...]:
        return tuple(s for s in self.strata if s.points)

    def to_realization(self) -> FinitePosetRealization:
        live = self.nonempty
        ground = frozenset().union(*(s.points for s in live)) if live else frozenset()
        closure_sets = tuple(
            frozenset(k for k, other in enumerate(live) if s.members <= other.members)
            for s in live
        )
        return FinitePosetRealization(ground, tuple(s.points for s in live), closure_sets)


def venn_stratification(sets: Sequence[Iterable], ground: Iterable | None = None,
                        declared_irreducible: bool = True) -> VennReport:
    """Decompose a union of n subsets into its 2^n - 1 intersection strata.

    The stratum for a nonempty index set J consists of the points lying
    in every listed set indexed by J and in none of the others.  Under
    the declared irreducibility of the intersections, the closure of the
    J-stratum is the full intersection over J, so strata order
    themselves by reverse inclusion of index sets.

    The partition and boundary claims are verified pointwise; a failure
    is impossible for honest set inputs and raises
    InternalConsistencyError.
    """
    families = [frozenset(s) for s in sets]
    n = len(families)
    if n == 0:
        raise SchemeError("need at least one set")
    universe = frozenset().union(*families)
    if ground is not None:
        declared = frozenset(ground)
        if not universe <= declared:
            raise SchemeError("sets contain points outside the declared ground set")

    subsets = sorted(
        (frozenset(J) for r in range(1, n + 1) for J in itertools.combinations(range(n), r)),
        key=lambda J: (-len(J), sorted(J)),
    )
    strata = []
    for J in subsets:
        inter = frozenset.intersection(*(families[j] for j in J))
        outer = frozenset().union(*(families[j] for j in range(n) if j not in J), frozenset())
        strata.append(VennStratum(J, inter - outer))

    counterexamples: list[str] = []

    # partition: each point lies in exactly the stratum of its membership pattern
    located: dict = {}
    for s in strata:
        for p in s.points:
            if p in located:
                counterexamples.append(
                    "point %r lies in two strata %r and %r"
                    % (p, sorted(located[p]), sorted(s.members))
                )
            located[p] = s.members
    for p in universe:
        pattern = frozenset(j for j in range(n) if p in families[j])
        if located.get(p) != pattern:
            counterexamples.append(
                "point %r has pattern %r but was filed under %r"
                % (p, sorted(pattern), sorted(located.get(p, frozenset())))
            )
    partition_ok = not counterexamples

    # boundary: the full intersection over J is exactly the union of the
    # strata with index set containing J
    boundary_bad: list[str] = []
    for s in strata:
        inter = frozenset.intersection(*(families[j] for j in s.members))
        deeper = frozenset().union(
            *(t.points for t in strata if s.members <= t.members), frozenset()
        )
        if inter != deeper:
            boundary_bad.append(
                "closure of stratum %r mismatches its deeper strata" % sorted(s.members)
            )
    boundary_ok = not boundary_bad
    counterexamples.extend(boundary_bad)

    report = VennReport(
        tuple(strata), partition_ok, boundary_ok, tuple(counterexamples),
        declared_irreducible,
    )
    if not (partition_ok and boundary_ok):
        raise InternalConsistencyError(
            "venn decomposition checks failed: %s" % "; ".join(counterexamples)
        )
    return report


_LEAF_KINDS = {
    "empty": Empty,
    "affine": Affine,
    "torus_cell": TorusCell,
    "proj_times_torus": ProjTimesTorus,
}


def _node_to_dict(x: SchemeExpr) -> dict:
    d: dict
    if isinstance(x, Empty):
        d = {"kind": "empty"}
    elif isinstance(x, Affine):
        d = {"kind": "affine", "n": x.n}
    elif isinstance(x, TorusCell):
        d = {"kind": "torus_cell", "n": x.n, "d": x.d}
    elif isinstance(x, ProjTimesTorus):
        d = {"kind": "proj_times_torus", "c": x.c, "e": x.e, "twist": x.twist.name}
    elif isinstance(x, OpenGlue):
        d = {"kind": "open_glue", "ambient": _node_to_dict(x.ambient),
             "closed": _node_to_dict(x.closed)}
    elif isinstance(x, ClosedGlue):
        d = {"kind": "closed_glue", "closed": _node_to_dict(x.closed),
             "open": _node_to_dict(x.open_part)}
    elif isinstance(x, Product):
        d = {"kind": "product", "left": _node_to_dict(x.left),
             "right": _node_to_dict(x.right)}
    elif isinstance(x, Stratified):
        d = {
            "kind": "stratified",
            "strata": [_node_to_dict(s) for s in x.strata],
            "closure_pairs": [list(p) for p in x.closure_order.strict_pairs()],
        }
    else:
        raise SchemeError("unknown scheme node %r" % (x,))
    if x.smooth_flag is not None:
        d["smooth"] = x.smooth_flag
    return d


def _node_from_dict(d: dict) -> SchemeExpr:
    kind = d.get("kind")
    smooth = d.get("smooth")
    x: SchemeExpr
    if kind == "empty":
        x = Empty()
    elif kind == "affine":
        x = Affine(int(d["n"]))
    elif kind == "torus_cell":
        x = TorusCell(int(d["n"]), int(d["d"]))
    elif kind == "proj_times_torus":
        x = ProjTimesTorus(int(d["c"]), int(d["e"]), TwistLabel(str(d["twist"])))
    elif kind == "open_glue":
        x = OpenGlue(_node_from_dict(d["ambient"]), _node_from_dict(d["closed"]))
    elif kind == "closed_glue":
        x = ClosedGlue(_node_from_dict(d["closed"]), _node_from_dict(d["open"]))
    elif kind == "product":
        x = Product(_node_from_dict(d["left"]), _node_from_dict(d["right"]))
    elif kind == "stratified":
        strata = tuple(_node_from_dict(s) for s in d["strata"])
        order = ClosureOrder.from_pairs(
            len(strata), (tuple(p) for p in d["closure_pairs"])
        )
        x = Stratified(strata, order)
    else:
        raise SchemeError("unknown scheme node kind %r" % (kind,))
    if smooth is not None:
        x = replace(x, smooth_flag=bool(smooth))
    return x


def scheme_to_json(x: SchemeExpr) -> dict:
    return {"schema_version": SCHEMA_VERSION, "expr": _node_to_dict(x)}


def scheme_from_json(data: dict) -> SchemeExpr:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise SchemeError("unsupported schema_version")
    return _node_from_dict(data["expr"])
