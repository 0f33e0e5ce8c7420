"""Finite equivalence relations on {0, ..., n-1} as validated partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class EqrelError(ValueError):
    """Raised when partition data or a relation precondition is invalid."""


def _canon(classes: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    out = [tuple(sorted(set(c))) for c in classes]
    out = [c for c in out if c]
    out.sort(key=lambda c: c[0])
    return tuple(out)


@dataclass(frozen=True)
class FinEqrel:
    """An equivalence relation on {0..n-1}, stored as its partition.

    Classes are sorted tuples, ordered by least element.  The constructor
    validates that the classes partition the ground set exactly.
    """

    n: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", _canon(self.classes))
        seen: set[int] = set()
        for c in self.classes:
            for x in c:
                if not (0 <= x < self.n):
                    raise EqrelError(f"point {x} outside ground set of size {self.n}")
                if x in seen:
                    raise EqrelError(f"point {x} appears in two classes")
                seen.add(x)
        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - seen)
            raise EqrelError(f"points {missing} not covered by any class")
        object.__setattr__(self, "_cls_of", self._build_index())

    def _build_index(self) -> tuple[int, ...]:
        idx = [0] * self.n
        for i, c in enumerate(self.classes):
            for x in c:
                idx[x] = i
        return tuple(idx)

    # --- queries ---------------------------------------------------------

    def class_index(self, x: int) -> int:
        return self._cls_of[x]  # type: ignore[attr-defined]

    def class_of(self, x: int) -> tuple[int, ...]:
        return self.classes[self.class_index(x)]

    def related(self, x: int, y: int) -> bool:
        return self.class_index(x) == self.class_index(y)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return self.related(*pair)

    def refines(self, other: "FinEqrel") -> bool:
        """True iff self is a subrelation of other (every class inside one class)."""
        if self.n != other.n:
            return False
        return all(
            len({other.class_index(x) for x in c}) == 1 for c in self.classes
        )

    def pairs(self) -> list[tuple[int, int]]:
        """All related ordered pairs (x, y), x != y."""
        return [
            (x, y) for c in self.classes for x in c for y in c if x != y
        ]

    # --- operations ------------------------------------------------------

    def saturate(self, a: Iterable[int]) -> frozenset[int]:
        """Union of all classes meeting a."""
        out: set[int] = set()
        for x in a:
            out.update(self.class_of(x))
        return frozenset(out)

    def hull(self, a: Iterable[int]) -> frozenset[int]:
        """Largest invariant subset of a: complement of the saturation of the complement."""
        aset = set(a)
        return frozenset(range(self.n)) - self.saturate(set(range(self.n)) - aset)

    def restrict(self, a: Iterable[int]) -> dict[int, tuple[int, ...]]:
        """Restriction to a as a map point -> class-within-a (no relabelling)."""
        aset = set(a)
        out: dict[int, tuple[int, ...]] = {}
        for c in self.classes:
            part = tuple(x for x in c if x in aset)
            for x in part:
                out[x] = part
        return out

    def transversal(self) -> tuple[int, ...]:
        """Least element of each class, in class order."""
        return tuple(c[0] for c in self.classes)

    def index_in(self, other: "FinEqrel") -> dict[tuple[int, ...], int]:
        """Number of self-classes inside each class of the coarser relation."""
        if not self.refines(other):
            raise EqrelError("index_in: relation is not a subrelation")
        counts: dict[tuple[int, ...], int] = {c: 0 for c in other.classes}
        for c in self.classes:
            counts[other.class_of(c[0])] += 1
        return counts


def build_partition(n: int, classes: Sequence[Sequence[int]]) -> FinEqrel:
    """Validate and build a FinEqrel from raw class data."""
    return FinEqrel(n, _canon(classes))


def delta(n: int) -> FinEqrel:
    """The identity relation on n points."""
    return FinEqrel(n, tuple((i,) for i in range(n)))


def full(n: int) -> FinEqrel:
    """The indiscrete relation on n points."""
    return FinEqrel(n, (tuple(range(n)),))


def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> FinEqrel:
    """Smallest equivalence relation containing the given pairs (union-find)."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return FinEqrel(n, tuple(tuple(g) for g in groups.values()))


def join(e: FinEqrel, f: FinEqrel) -> FinEqrel:
    """Smallest common coarsening of two relations."""
    if e.n != f.n:
        raise EqrelError("join: mismatched ground sets")
    return from_pairs(e.n, e.pairs() + f.pairs())


def restrict_relabel(e: FinEqrel, points: Sequence[int]) -> tuple[FinEqrel, dict[int, int]]:
    """Restriction of e to `points`, relabelled to {0..len-1}.

    Returns the restricted relation and the map old point -> new label.
    """
    pts = sorted(set(points))
    relabel = {p: i for i, p in enumerate(pts)}
    classes: dict[int, list[int]] = {}
    for p in pts:
        classes.setdefault(e.class_index(p), []).append(relabel[p])
    return FinEqrel(len(pts), tuple(tuple(c) for c in classes.values())), relabel


# --- lazy amplification ---------------------------------------------------

DEFAULT_WINDOW_BUDGET = 10_000


class WindowExhausted(RuntimeError):
    """A query addressed a point outside the enumerated window."""


class LazySpace:
    """Windowed model of the product of a finite base space with the naturals.

    Points are pairs (x, m): base point x and copy index m < depth.  Queries
    outside the window are hard errors, never silent truncation.
    """

    def __init__(self, base_size: int, depth: int, budget: int = DEFAULT_WINDOW_BUDGET):
        if base_size <= 0 or depth <= 0:
            raise EqrelError("LazySpace needs a nonempty base and positive depth")
        if base_size * depth > budget:
            raise WindowExhausted(
                f"window of {base_size}*{depth} points exceeds budget {budget}"
            )
        self.base_size = base_size
        self.depth = depth

    def check(self, p: tuple[int, int]) -> tuple[int, int]:
        x, m = p
        if not (0 <= x < self.base_size):
            raise EqrelError(f"base point {x} outside base space")
        if not (0 <= m < self.depth):
            raise WindowExhausted(
                f"copy index {m} outside window of depth {self.depth}; increase depth"
            )
        return p

    def points(self) -> list[tuple[int, int]]:
        return [(x, m) for x in range(self.base_size) for m in range(self.depth)]

    def __len__(self) -> int:
        return self.base_size * self.depth


def lazy_amplify(
    e: FinEqrel, depth: int, budget: int = DEFAULT_WINDOW_BUDGET
) -> tuple[LazySpace, Callable[[tuple[int, int], tuple[int, int]], bool]]:
    """Windowed amplification of e: (x, m) ~ (y, k) iff x e y.

    Returns the window and the relation oracle; the oracle raises
    WindowExhausted on out-of-window queries.
    """
    space = LazySpace(e.n, depth, budget)

    def related(p: tuple[int, int], q: tuple[int, int]) -> bool:
        space.check(p)
        space.check(q)
        return e.related(p[0], q[0])

    return space, related
