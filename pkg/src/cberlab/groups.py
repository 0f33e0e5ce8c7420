"""Finite groups acting on finite spaces: orbit relations, automorphisms, normality."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .eqrel import EqrelError, FinEqrel, from_pairs, join

TABLE_ORDER_CAP = 24
CLOSURE_CAP = 10_000

Perm = tuple[int, ...]


class GroupError(ValueError):
    """Raised on invalid group or action data."""


def perm_of(seq: Sequence[int], n: int | None = None) -> Perm:
    """Validate a one-line-form permutation."""
    p = tuple(seq)
    size = len(p) if n is None else n
    if len(p) != size or sorted(p) != list(range(size)):
        raise GroupError(f"not a permutation of {size} points: {seq}")
    return p


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """(p ∘ q)(x) = p(q(x))."""
    return tuple(p[q[x]] for x in range(len(p)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Perm:
    out = list(range(n))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            out[x] = cyc[(i + 1) % len(cyc)]
    return perm_of(out, n)


def shortlex_closure(gens: Sequence[Perm], cap: int = CLOSURE_CAP) -> list[Perm]:
    """Group elements generated by gens, in shortlex word order (first occurrence).

    Deterministic: breadth-first over words gens[0], gens[1], ... applied on the
    right.  Raises if the closure exceeds the cap.
    """
    if not gens:
        raise GroupError("need at least one generator (use the identity)")
    n = len(gens[0])
    out: list[Perm] = [identity_perm(n)]
    seen = set(out)
    frontier = [identity_perm(n)]
    while frontier:
        nxt: list[Perm] = []
        for w in frontier:
            for g in gens:
                e = compose(w, g)
                if e not in seen:
                    seen.add(e)
                    out.append(e)
                    nxt.append(e)
                    if len(out) > cap:
                        raise GroupError(f"generated group exceeds cap {cap}")
        frontier = nxt
    return out


@dataclass(frozen=True)
class FinGroup:
    """A finite group given by a full multiplication table over element indices.

    For order ≤ 24 the table axioms are checked exhaustively; larger groups
    must come from `FinGroup.generated`, whose permutation realization is
    associative for free.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    identity: int
    checked: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.mul) != self.order or any(len(r) != self.order for r in self.mul):
            raise GroupError("multiplication table has wrong shape")
        e = self.identity
        for a in range(self.order):
            if self.mul[e][a] != a or self.mul[a][e] != a:
                raise GroupError("identity axiom fails")
        for a in range(self.order):
            if e not in self.mul[a]:
                raise GroupError(f"element {a} has no inverse")
        if self.order <= TABLE_ORDER_CAP and not self.checked:
            for a, b, c in itertools.product(range(self.order), repeat=3):
                if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                    raise GroupError(f"associativity fails at ({a},{b},{c})")

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inv(self, a: int) -> int:
        return self.mul[a].index(self.identity)

    @staticmethod
    def generated(gens: Sequence[Perm], cap: int = CLOSURE_CAP) -> tuple["FinGroup", list[Perm]]:
        """Group of permutations generated by gens, with its element list."""
        elems = shortlex_closure(gens, cap)
        index = {p: i for i, p in enumerate(elems)}
        mul = tuple(
            tuple(index[compose(a, b)] for b in elems) for a in elems
        )
        return FinGroup(len(elems), mul, index[identity_perm(len(gens[0]))], checked=True), elems

    @staticmethod
    def cyclic(n: int) -> "FinGroup":
        mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return FinGroup(n, mul, 0)


@dataclass(frozen=True)
class GroupAction:
    """An action of a FinGroup on {0..n-1}; axioms checked on construction."""

    group: FinGroup
    space_size: int
    act: tuple[Perm, ...]  # one permutation per group element

    def __post_init__(self) -> None:
        if len(self.act) != self.group.order:
            raise GroupError("need one permutation per group element")
        for p in self.act:
            perm_of(p, self.space_size)
        if self.act[self.group.identity] != identity_perm(self.space_size):
            raise GroupError("identity must act trivially")
        for a in range(self.group.order):
            for b in range(self.group.order):
                if compose(self.act[a], self.act[b]) != self.act[self.group.op(a, b)]:
                    raise GroupError(f"action axiom fails at ({a},{b})")

    def apply(self, g: int, x: int) -> int:
        return self.act[g][x]


def orbit_eqrel(a: GroupAction) -> FinEqrel:
    """Orbit equivalence relation of an action."""
    pairs = [(x, p[x]) for p in a.act for x in range(a.space_size)]
    return from_pairs(a.space_size, pairs)


def orbit_eqrel_of_perms(n: int, gens: Sequence[Perm]) -> FinEqrel:
    """Orbit relation of the group generated by permutations (no closure needed)."""
    return from_pairs(n, [(x, g[x]) for g in gens for x in range(n)])


@dataclass(frozen=True)
class AutClassification:
    verdict: str  # "not-automorphism" | "inner" | "outer-nontrivial"
    witness: object


def is_automorphism(e: FinEqrel, t: Perm) -> bool:
    return all(e.related(t[x], t[y]) == e.related(x, y) for x, y in itertools.combinations(range(e.n), 2))


def classify_automorphism(e: FinEqrel, t: Sequence[int]) -> AutClassification:
    """Classify a permutation as not-automorphism / inner / outer-nontrivial.

    Inner means every point stays in its own class.  The witness is a failing
    pair, the per-point within-class evidence, or the induced class pairing.
    """
    p = perm_of(t, e.n)
    for x, y in itertools.combinations(range(e.n), 2):
        if e.related(x, y) != e.related(p[x], p[y]):
            return AutClassification("not-automorphism", (x, y))
    if all(e.related(x, p[x]) for x in range(e.n)):
        return AutClassification("inner", tuple((x, p[x]) for x in range(e.n)))
    pairing = tuple(
        (e.class_index(c[0]), e.class_index(p[c[0]])) for c in e.classes
    )
    return AutClassification("outer-nontrivial", pairing)


def extend_by_group(e: FinEqrel, gens: Sequence[Sequence[int]]) -> tuple[FinEqrel, bool]:
    """E^{∨G} = E joined with the orbit relation of gens; verdict = normality witnessed.

    The verdict is true iff every generator is an automorphism of E, in which
    case the generators witness E ◁ E^{∨G}.
    """
    perms = [perm_of(g, e.n) for g in gens]
    f = join(e, orbit_eqrel_of_perms(e.n, perms))
    witnessed = all(is_automorphism(e, p) for p in perms)
    return f, witnessed


def perm_power_orbit(t: Perm, x: int) -> list[int]:
    """x, t(x), t²(x), ... until the cycle closes."""
    out = [x]
    y = t[x]
    while y != x:
        out.append(y)
        y = t[y]
    return out


def normal_restrict(e: FinEqrel, t: Sequence[int], f_prime: FinEqrel) -> Perm:
    """Restrict an automorphism along an intermediate relation.

    Given E ⊆ F′ ⊆ E^{∨T} with T ∈ Aut(E), returns T′ with T′(x) = T^n(x) for
    the least n > 0 with T^n(x) F′ x.  Asserts T′ ∈ Aut(E) and
    E^{∨T′} = F′ ∩ E^{∨T}.
    """
    tp = perm_of(t, e.n)
    if not is_automorphism(e, tp):
        raise GroupError("T is not an automorphism of E")
    e_vee_t, _ = extend_by_group(e, [tp])
    if not e.refines(f_prime):
        raise GroupError("E is not contained in F'")
    if not f_prime.refines(e_vee_t):
        raise GroupError("F' is not contained in E^{∨T}")
    out = []
    for x in range(e.n):
        y = tp[x]
        n = 1
        while not f_prime.related(y, x):
            y = tp[y]
            n += 1
            if n > e.n:
                raise AssertionError("no return time within T-orbit")  # pragma: no cover
        out.append(y)
    tprime = perm_of(out, e.n)
    if not is_automorphism(e, tprime):
        raise AssertionError("restricted map lost the automorphism property")
    e_vee_tp, _ = extend_by_group(e, [tprime])
    meet_classes = {}
    for x in range(e.n):
        key = (f_prime.class_index(x), e_vee_t.class_index(x))
        meet_classes.setdefault(key, []).append(x)
    meet = FinEqrel(e.n, tuple(tuple(c) for c in meet_classes.values()))
    if e_vee_tp != meet:
        raise AssertionError("E^{∨T'} differs from F' ∩ E^{∨T}")
    return tprime


OUT_ENUM_CAP = 8


def aut_inn_out(e: FinEqrel) -> tuple[list[Perm], list[Perm], list[tuple[Perm, ...]]]:
    """Aut(E), Inn(E), and the Out-cosets, by brute force (|X| ≤ 8 only)."""
    if e.n > OUT_ENUM_CAP:
        raise GroupError(f"Out enumeration is exhaustive only for |X| <= {OUT_ENUM_CAP}")
    aut = [p for p in itertools.permutations(range(e.n)) if is_automorphism(e, p)]
    inn = [p for p in aut if all(e.related(x, p[x]) for x in range(e.n))]
    inn_set = set(inn)
    cosets: dict[frozenset[Perm], list[Perm]] = {}
    for p in aut:
        coset = frozenset(compose(p, q) for q in inn_set)
        cosets.setdefault(coset, []).append(p)
    return aut, inn, [tuple(sorted(v)) for v in cosets.values()]
