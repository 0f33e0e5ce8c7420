"""Links between nested equivalence relations, and the lifts they induce.

A link for a pair E ⊆ F is a subrelation L ⊆ F such that within every
F-class, every E-class meets every L-class exactly once.  Links are the
combinatorial core of every construction here: they are produced for
finite-index normal pairs, extended along chains, and converted into
class-bijective group actions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .eqrel import EqrelError, FinEqrel, from_pairs, join, restrict_relabel
from .groups import (
    FinGroup,
    GroupAction,
    GroupError,
    Perm,
    compose,
    identity_perm,
    invert,
    is_automorphism,
    orbit_eqrel_of_perms,
    perm_of,
    shortlex_closure,
)


class LinkError(ValueError):
    """Raised when link data or preconditions are invalid."""


def verify_link(
    e: FinEqrel, f: FinEqrel, l: FinEqrel
) -> tuple[bool, tuple | None]:
    """Check the all-ones incidence condition in every F-class.

    Returns (True, None) or (False, (F-class, E-class, L-class, count)).
    Containment violations raise LinkError.
    """
    if not e.refines(f):
        raise LinkError("E is not a subrelation of F")
    if not l.refines(f):
        raise LinkError("L is not a subrelation of F")
    for c in f.classes:
        cset = set(c)
        ecs = {ec for x in c for ec in [e.class_of(x)]}
        lcs = {tuple(sorted(set(lc) & cset)) for x in c for lc in [l.class_of(x)]}
        for ec in ecs:
            eset = set(ec)
            for lc in lcs:
                count = len(eset & set(lc))
                if count != 1:
                    return False, (c, ec, lc, count)
    return True, None


@dataclass(frozen=True)
class Link:
    """A verified (E, F)-link; the constructor runs verify_link."""

    e: FinEqrel
    f: FinEqrel
    l: FinEqrel

    def __post_init__(self) -> None:
        ok, bad = verify_link(self.e, self.f, self.l)
        if not ok:
            raise LinkError(f"incidence condition fails: {bad}")


@dataclass(frozen=True)
class Fsr:
    """A finite partial subequivalence relation: disjoint finite classes,
    each within one class of the ambient relation."""

    ambient: FinEqrel
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for c in self.classes:
            if not c:
                raise LinkError("empty fsr class")
            if len({self.ambient.class_index(x) for x in c}) != 1:
                raise LinkError(f"fsr class {c} is not within one ambient class")
            for x in c:
                if x in seen:
                    raise LinkError(f"point {x} in two fsr classes")
                seen.add(x)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for c in self.classes for x in c)


def _candidate_key(s: frozenset[int]) -> tuple:
    return (min(s), len(s), tuple(sorted(s)))


def max_fsr(
    ambient: FinEqrel,
    phi: Callable[[frozenset[int]], bool],
    candidates: Iterable[frozenset[int]] | None = None,
) -> Fsr:
    """Greedy maximal fsr whose classes satisfy phi.

    Candidates default to all nonempty subsets of ambient classes; a caller
    may pass the phi-satisfying universe directly.  Greedy order is
    (min element, size, lex); maximality is verified exhaustively: no
    candidate satisfying phi is disjoint from the returned domain.
    """
    if candidates is None:
        pool = [
            frozenset(sub)
            for c in ambient.classes
            for r in range(1, len(c) + 1)
            for sub in itertools.combinations(c, r)
        ]
    else:
        pool = list(candidates)
    pool.sort(key=_candidate_key)
    chosen: list[frozenset[int]] = []
    dom: set[int] = set()
    for cand in pool:
        if cand.isdisjoint(dom) and phi(cand):
            chosen.append(cand)
            dom.update(cand)
    for cand in pool:
        if cand.isdisjoint(dom) and phi(cand):  # pragma: no cover - guards greedy bugs
            raise AssertionError(f"greedy fsr is not maximal: {sorted(cand)} addable")
    return Fsr(ambient, tuple(tuple(sorted(c)) for c in chosen))


def _e_transversals_per_f_class(e: FinEqrel, f: FinEqrel) -> list[frozenset[int]]:
    """All transversals of E restricted to a single F-class, for every F-class."""
    out: list[frozenset[int]] = []
    for c in f.classes:
        eclasses = sorted({e.class_of(x) for x in c}, key=lambda t: t[0])
        for pick in itertools.product(*eclasses):
            out.append(frozenset(pick))
    return out


def _validate_witness(e: FinEqrel, f: FinEqrel, gens: Sequence[Sequence[int]]) -> list[Perm]:
    perms = [perm_of(g, e.n) for g in gens]
    for i, p in enumerate(perms):
        if not is_automorphism(e, p):
            raise LinkError(f"witness generator {i} ({p}) is not an automorphism of E")
    if join(e, orbit_eqrel_of_perms(e.n, perms)) != f:
        raise LinkError("witness does not generate F over E")
    return perms


def link_finite_index(
    e: FinEqrel, f: FinEqrel, gens: Sequence[Sequence[int]]
) -> Link:
    """Construct an (E, F)-link from a normality witness.

    Takes a maximal fsr R of F whose classes are E-transversals of single
    F-classes, forms the E-hull Y of dom(R), and routes every point outside Y
    into Y along the least witness-group element (shortlex order).
    """
    if not e.refines(f):
        raise LinkError("E is not a subrelation of F")
    perms = _validate_witness(e, f, gens)
    cands = _e_transversals_per_f_class(e, f)

    def phi(s: frozenset[int]) -> bool:
        fc = {f.class_index(x) for x in s}
        if len(fc) != 1:
            return False
        c = f.classes[fc.pop()]
        picked = {e.class_index(x) for x in s}
        needed = {e.class_index(x) for x in c}
        return len(picked) == len(s) and picked == needed

    r = max_fsr(f, phi, cands)
    return _link_from_fsr(e, f, r, perms)


def _link_from_fsr(e: FinEqrel, f: FinEqrel, r: Fsr, perms: Sequence[Perm]) -> Link:
    dom = r.domain
    y = e.hull(dom)
    if not y:
        raise LinkError("fsr domain has empty hull; cannot seed a link")
    pairs: list[tuple[int, int]] = []
    for c in r.classes:
        in_y = [x for x in c if x in y]
        pairs.extend(zip(in_y, in_y[1:]))
    outside = [x for x in range(e.n) if x not in y]
    if outside:
        elems = shortlex_closure([identity_perm(e.n), *map(tuple, perms)])
        for x in outside:
            for g in elems:
                if g[x] in y:
                    pairs.append((x, g[x]))
                    break
            else:
                raise LinkError(f"no witness element carries {x} into the hull")
    return Link(e, f, from_pairs(e.n, pairs))


# --- link extension along a chain -----------------------------------------


def _link_classes_on(
    points: frozenset[int], e: FinEqrel, f: FinEqrel, l: FinEqrel
) -> list[frozenset[int]]:
    """Link classes of an (E↾points, all)-link containing L↾points.

    `points` must be F-saturated.  Induction: split off the part Y where the
    greedy matching of link-transversal points across F-classes is complete,
    recurse on both sides, then glue the two partial links along their
    transversals (counted exactly, matched in canonical order).
    """
    f_classes = [c for c in f.classes if c[0] in points]
    l_classes = [frozenset(c) for c in l.classes if c[0] in points]
    if len(f_classes) == 1:
        return l_classes
    # S: least point of each L-class, grouped by F-class.
    s_by_f: dict[int, list[int]] = {}
    l_of: dict[int, frozenset[int]] = {}
    for lc in l_classes:
        m = min(lc)
        s_by_f.setdefault(f.class_index(m), []).append(m)
        l_of[m] = lc
    for v in s_by_f.values():
        v.sort()
    # Greedy maximal matching: one unused S-point per F-class, least first.
    rows: list[list[int]] = []
    cursor = {fc: 0 for fc in s_by_f}
    while all(cursor[fc] < len(s_by_f[fc]) for fc in s_by_f):
        rows.append([s_by_f[fc][cursor[fc]] for fc in s_by_f])
        for fc in s_by_f:
            cursor[fc] += 1
    exhausted = {fc for fc in s_by_f if cursor[fc] == len(s_by_f[fc])}
    if len(exhausted) == len(s_by_f):
        # Every transversal point is matched: rows generate the link directly.
        return [frozenset().union(*(l_of[m] for m in row)) for row in rows]
    y = frozenset(x for fc in exhausted for x in f.classes[fc]) & points
    z = points - y
    if not y or not z:  # pragma: no cover - maximality guarantees both sides
        raise AssertionError("degenerate split in link extension")
    l_y = _link_classes_on(y, e, f, l)
    l_z = _link_classes_on(z, e, f, l)
    s_y = sorted(min(c) for c in l_y)
    s_z = sorted(min(c) for c in l_z)
    if len(s_y) != len(s_z):
        raise AssertionError(
            f"cancellation-count mismatch: {len(s_y)} vs {len(s_z)} transversal points"
        )
    by_min_y = {min(c): c for c in l_y}
    by_min_z = {min(c): c for c in l_z}
    return [by_min_y[a] | by_min_z[b] for a, b in zip(s_y, s_z)]


def extend_link(
    e: FinEqrel,
    f: FinEqrel,
    f_prime: FinEqrel,
    link: Link,
    gens: Sequence[Sequence[int]],
) -> Link:
    """Extend an (E, F)-link to an (E, F′)-link containing it."""
    if link.e != e or link.f != f:
        raise LinkError("link does not match the given pair")
    if not f.refines(f_prime):
        raise LinkError("F is not a subrelation of F'")
    _validate_witness(e, f_prime, gens)
    classes: list[frozenset[int]] = []
    for c in f_prime.classes:
        classes.extend(_link_classes_on(frozenset(c), e, f, link.l))
    out = Link(e, f_prime, FinEqrel(e.n, tuple(tuple(sorted(c)) for c in classes)))
    if not link.l.refines(out.l):
        raise AssertionError("extension lost the input link")  # pragma: no cover
    return out


def hf_link(
    e: FinEqrel,
    chain: Sequence[FinEqrel],
    witnesses: Sequence[Sequence[Sequence[int]]],
) -> Link:
    """Iterated extension along an ascending chain F_0 ⊆ ... ⊆ F_m.

    witnesses[i] must witness E ◁ F_i.  Every intermediate link contains its
    predecessor.
    """
    if not chain:
        raise LinkError("empty chain")
    if len(witnesses) != len(chain):
        raise LinkError("need one witness list per chain entry")
    link = link_finite_index(e, chain[0], witnesses[0])
    for f_prev, f_next, wit in zip(chain, chain[1:], witnesses[1:]):
        link = extend_link(e, f_prev, f_next, link, wit)
    return link


# --- smooth links ----------------------------------------------------------


def link_smooth(
    e: FinEqrel, f: FinEqrel, witness: Sequence[Sequence[int]] | None = None
) -> Link:
    """Rank link: x L y iff x F y and x, y have the same rank in their E-class.

    Requires all E-classes within an F-class to have equal size (a normality
    consequence; reported as a violation otherwise).
    """
    if not e.refines(f):
        raise LinkError("E is not a subrelation of F")
    if witness is not None:
        _validate_witness(e, f, witness)
    for c in f.classes:
        sizes = {len(e.class_of(x)) for x in c}
        if len(sizes) != 1:
            raise LinkError(
                f"normality violation: F-class {c} has E-class sizes {sorted(sizes)}"
            )
    rank = {x: sorted(e.class_of(x)).index(x) for x in range(e.n)}
    groups: dict[tuple[int, int], list[int]] = {}
    for x in range(e.n):
        groups.setdefault((f.class_index(x), rank[x]), []).append(x)
    return Link(e, f, FinEqrel(e.n, tuple(tuple(c) for c in groups.values())))


# --- lifts from links ------------------------------------------------------


@dataclass(frozen=True)
class OuterAction:
    """Class-level action data: one permutation of E-classes per generator."""

    e: FinEqrel
    gens: tuple[Perm, ...]

    def __post_init__(self) -> None:
        k = len(self.e.classes)
        for g in self.gens:
            perm_of(g, k)

    def coarsening(self) -> FinEqrel:
        """E joined with the class moves of the generated group: E^{∨G}."""
        pairs = [
            (self.e.classes[i][0], self.e.classes[g[i]][0])
            for g in self.gens
            for i in range(len(self.e.classes))
        ]
        return join(self.e, from_pairs(self.e.n, pairs))


def lift_from_link(outer: OuterAction, link: Link) -> GroupAction:
    """Lift an outer (class-level) action to points through a link.

    g·x is the unique element of [x]_L in the class g·[x]_E.  The result is a
    genuine class-bijective action inducing the given class data.
    """
    e = outer.e
    if link.e != e:
        raise LinkError("link base relation does not match the outer action")
    if not outer.coarsening().refines(link.f):
        raise LinkError("link pair does not absorb the class moves")
    gens = outer.gens if outer.gens else (identity_perm(len(e.classes)),)
    group, elems = FinGroup.generated([tuple(g) for g in gens])
    acts: list[Perm] = []
    for cp in elems:
        img = []
        for x in range(e.n):
            target = set(e.classes[cp[e.class_index(x)]]) & set(link.l.class_of(x))
            if len(target) != 1:
                raise LinkError(
                    f"link invalid for lifting: |[{x}]_L ∩ g·[{x}]_E| = {len(target)}"
                )
            img.append(target.pop())
        acts.append(perm_of(img, e.n))
    action = GroupAction(group, e.n, tuple(acts))
    for cp, p in zip(elems, acts):
        for x in range(e.n):
            if e.class_index(p[x]) != cp[e.class_index(x)]:  # pragma: no cover
                raise AssertionError("lift does not induce the outer data")
            if cp[e.class_index(x)] == e.class_index(x) and p[x] != x:  # pragma: no cover
                raise AssertionError("lift is not class-bijective")
    return action


# --- bounded-index outer subgroups -----------------------------------------


def finite_outer_subgroup(
    e: FinEqrel, f: FinEqrel, h_gens: Sequence[Sequence[int]]
) -> list[Perm]:
    """Coset representatives of a finite outer subgroup regenerating F.

    Brute-forces the automorphism/inner coset structure (|X| ≤ 8), pushes the
    witness generators to cosets, closes, and returns the least representative
    of each coset.  Checks E^{∨reps} = F.
    """
    from .groups import aut_inn_out

    perms = _validate_witness(e, f, h_gens)
    _aut, inn, cosets = aut_inn_out(e)
    inn_set = frozenset(inn)
    coset_of: dict[Perm, int] = {}
    for i, cs in enumerate(cosets):
        for p in cs:
            coset_of[p] = i
    reps = [min(cs) for cs in cosets]
    start = {coset_of[p] for p in perms}
    closure = {coset_of[identity_perm(e.n)]}
    frontier = set(start)
    closure |= frontier
    while frontier:
        new = set()
        for a in closure:
            for b in frontier:
                c = coset_of[compose(reps[a], reps[b])]
                if c not in closure and c not in new:
                    new.add(c)
        closure |= new
        frontier = new
    out = sorted(reps[i] for i in closure)
    regen = join(e, orbit_eqrel_of_perms(e.n, out))
    if regen != f:
        raise AssertionError("outer representatives fail to regenerate F")
    return out


# --- equidecomposability ----------------------------------------------------


@dataclass(frozen=True)
class EquidecompWitness:
    """A bijection A → B whose graph lies inside E."""

    e: FinEqrel
    mapping: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        src = [a for a, _ in self.mapping]
        dst = [b for _, b in self.mapping]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise LinkError("witness is not a bijection")
        for a, b in self.mapping:
            if not self.e.related(a, b):
                raise LinkError(f"witness pair ({a},{b}) not related")


def equidecompose(
    e: FinEqrel, a: Iterable[int], b: Iterable[int]
) -> EquidecompWitness | None:
    """Match A to B inside E-classes, or report impossibility (None).

    A witness exists iff |A ∩ C| = |B ∩ C| for every class C; it is built by
    pairing the sorted intersections.
    """
    aset, bset = sorted(set(a)), sorted(set(b))
    per_class_a: dict[int, list[int]] = {}
    per_class_b: dict[int, list[int]] = {}
    for x in aset:
        per_class_a.setdefault(e.class_index(x), []).append(x)
    for x in bset:
        per_class_b.setdefault(e.class_index(x), []).append(x)
    if set(per_class_a) != set(per_class_b):
        return None
    mapping: list[tuple[int, int]] = []
    for ci, xs in per_class_a.items():
        ys = per_class_b[ci]
        if len(xs) != len(ys):
            return None
        mapping.extend(zip(xs, ys))
    return EquidecompWitness(e, tuple(sorted(mapping)))


def cancel_equidecomposition(
    e: FinEqrel, a: Iterable[int], b: Iterable[int], copies: int
) -> EquidecompWitness | None:
    """Cancellation: n·A ~ n·B implies A ~ B, with an explicit witness.

    Checks equidecomposability of the copied sets inside the amplified
    relation; when it holds, the per-class counts of A and B must already be
    equal, so a witness for A ~ B exists and is returned.
    """
    if copies < 1:
        raise LinkError("need at least one copy")
    big = amplify_relation(e, copies)
    big_a = [x + e.n * j for j in range(copies) for x in a]
    big_b = [x + e.n * j for j in range(copies) for x in b]
    if equidecompose(big, big_a, big_b) is None:
        return None
    wit = equidecompose(e, a, b)
    if wit is None:  # pragma: no cover - cancellation law guarantees this
        raise AssertionError("cancellation failed: copies match but sets do not")
    return wit


def amplify_relation(e: FinEqrel, copies: int) -> FinEqrel:
    """E on `copies` disjoint copies of the space: point x in copy j is x + n·j."""
    classes = [
        tuple(x + e.n * j for j in range(copies) for x in c) for c in e.classes
    ]
    return FinEqrel(e.n * copies, tuple(classes))


# --- lifting through a finite normal subgroup ------------------------------


def _class_perm_of(e: FinEqrel, p: Perm) -> Perm:
    return tuple(e.class_index(p[c[0]]) for c in e.classes)


def lift_through_finite_normal(
    e: FinEqrel,
    n_gens: Sequence[Sequence[int]],
    outer_gens: Sequence[Sequence[int]],
) -> GroupAction:
    """Lift class data through a finite normal subgroup acting on points.

    n_gens generate a class-bijective action of N on points; outer_gens are
    E-class permutations for the remaining generators of G.  G is realized as
    the generated group of class permutations (class-bijective actions are
    determined by their class data), with N required normal.  The lift builds
    the orbit link L of N, a quotient link L' over a transversal of L, and
    lifts through the join of the two.
    """
    n_perms = [perm_of(p, e.n) for p in n_gens]
    for p in n_perms:
        if not is_automorphism(e, p):
            raise LinkError(f"normal-subgroup generator {p} is not an automorphism")
    # Class-bijectivity of the N-action, element by element.
    _n_group, n_elems = FinGroup.generated(
        [identity_perm(e.n), *n_perms]
    )
    for p in n_elems:
        for x in range(e.n):
            if e.related(p[x], x) and p[x] != x:
                raise LinkError("N-action is not class-bijective")
    l_rel = orbit_eqrel_of_perms(e.n, n_perms)
    f = join(e, l_rel)
    link_l = Link(e, f, l_rel)

    k = len(e.classes)
    n_cls = [_class_perm_of(e, p) for p in n_elems]
    all_cls_gens = [perm_of(g, k) for g in outer_gens] + n_cls
    g_group, g_elems = FinGroup.generated([identity_perm(k), *all_cls_gens])
    n_cls_set = set(n_cls)
    if len(n_cls_set) != len(n_elems):
        raise LinkError("N-action class data collapses; not class-bijective")
    for g in g_elems:
        for p in n_cls_set:
            if compose(compose(g, p), invert(g)) not in n_cls_set:
                raise LinkError("N is not normal in the generated group")

    outer = OuterAction(e, tuple(g_elems))
    f_prime = outer.coarsening()

    # Quotient pair over a transversal of L.
    s = [min(c) for c in l_rel.classes]
    f_s, relabel = restrict_relabel(f, s)
    fp_s, _ = restrict_relabel(f_prime, s)
    back = {v: p for p, v in relabel.items()}
    # Witnesses on the quotient: block maps induced by the class generators.
    wit: list[Perm] = []
    for g in all_cls_gens:
        img = [0] * len(s)
        moved: dict[int, list[int]] = {}
        for p in s:
            tgt_cls = g[e.class_index(p)]
            tgt_f = f.class_index(e.classes[tgt_cls][0])
            moved.setdefault(tgt_f, []).append(p)
        for tgt_f, srcs in moved.items():
            dsts = sorted(p for p in s if f.class_index(p) == tgt_f)
            if len(srcs) != len(dsts):
                raise AssertionError(
                    "cancellation-count mismatch on the quotient transversal"
                )
            for p, q in zip(sorted(srcs), dsts):
                img[relabel[p]] = relabel[q]
        wit.append(perm_of(img, len(s)))
    if f_s == fp_s:
        l_prime_pairs: list[tuple[int, int]] = []
    else:
        lq = link_finite_index(f_s, fp_s, wit)
        l_prime_pairs = [
            (back[a], back[b]) for c in lq.l.classes for a, b in zip(c, c[1:])
        ]
    l_star = join(l_rel, from_pairs(e.n, l_prime_pairs))
    link_star = Link(e, f_prime, l_star)

    action = lift_from_link(outer, link_star)
    # The lift must extend the supplied N-action.
    elem_index = {p: i for i, p in enumerate(g_elems)}
    for p_pt, p_cls in zip(n_elems, n_cls):
        if action.act[elem_index[p_cls]] != p_pt:
            raise AssertionError("lift does not extend the normal-subgroup action")
    _ = link_l
    return action
