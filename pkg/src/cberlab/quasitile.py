"""Quasi-tilings of amenable-group windows by epsilon-disjoint translates.

All arithmetic is exact: ratios are fractions, and comparisons against
fractional powers (1-eps)^(a/q) are decided by cross-raising to integer
powers.  Shapes and windows are finite subsets of a finitely generated
group given by an explicit element encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class TileError(ValueError):
    """Raised when tiling inputs or preconditions are invalid."""


# --- groups -----------------------------------------------------------------


class MarkedGroup:
    """A group with explicit element encoding and a canonical total order."""

    def op(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    @property
    def identity(self):
        raise NotImplementedError

    def sort_key(self, a):
        return a


class ZdGroup(MarkedGroup):
    """Z^d with tuple elements and lexicographic canonical order."""

    def __init__(self, d: int):
        if d < 1:
            raise TileError("dimension must be positive")
        self.d = d

    def op(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    @property
    def identity(self):
        return (0,) * self.d

    def box(self, side: int) -> frozenset:
        return frozenset(itertools.product(range(side), repeat=self.d))

    def segment(self, length: int) -> frozenset:
        return frozenset((x,) + (0,) * (self.d - 1) for x in range(length))


class CyclicGroup(MarkedGroup):
    """Z/n with integer elements 0..n-1."""

    def __init__(self, n: int):
        if n < 1:
            raise TileError("order must be positive")
        self.n = n

    def op(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    @property
    def identity(self):
        return 0


# --- bitset encoding for Z^d ------------------------------------------------


class _ZdBits:
    """Subsets of Z^d as integer bitmasks under a linear position encoding,
    so a translate is a single shift and set algebra is int arithmetic."""

    def __init__(self, group: ZdGroup, a: frozenset, b: frozenset):
        amin = [min(p[j] for p in a) for j in range(group.d)]
        amax = [max(p[j] for p in a) for j in range(group.d)]
        bmin = [min(q[j] for q in b) for j in range(group.d)]
        bmax = [max(q[j] for q in b) for j in range(group.d)]
        los = [min(amin[j], amin[j] + bmin[j]) for j in range(group.d)]
        his = [max(amax[j], amax[j] + bmax[j]) for j in range(group.d)]
        self.strides = [1] * group.d
        for j in range(group.d - 2, -1, -1):
            self.strides[j] = self.strides[j + 1] * (his[j + 1] - los[j + 1] + 1)
        self.zero = -sum(lo * s for lo, s in zip(los, self.strides))

    def raw(self, v) -> int:
        return sum(x * s for x, s in zip(v, self.strides))

    def pos(self, v) -> int:
        return self.raw(v) + self.zero

    def mask(self, s: Iterable) -> int:
        m = 0
        for v in s:
            m |= 1 << self.pos(v)
        return m

    def shifted(self, base_mask: int, c) -> int:
        r = self.raw(c)
        return base_mask << r if r >= 0 else base_mask >> -r


# --- invariance -------------------------------------------------------------


def translate(group: MarkedGroup, b: frozenset, c) -> frozenset:
    return frozenset(group.op(v, c) for v in b)


def t_set(group: MarkedGroup, a: frozenset, b: frozenset) -> frozenset:
    """Centers whose whole B-translate stays inside A."""
    if isinstance(group, ZdGroup):
        bits = _ZdBits(group, a, b)
        ma, mb = bits.mask(a), bits.mask(b)
        return frozenset(c for c in a if bits.shifted(mb, c) & ~ma == 0)
    return frozenset(c for c in a if all(group.op(v, c) in a for v in b))


def is_invariant(
    group: MarkedGroup, a: frozenset, b: frozenset, eps: Fraction
) -> tuple[bool, int]:
    """(B, eps)-invariance of A: |A \\ T(A,B)| <= eps|A|.

    When invariant, the growth consequence |BA| <= (1 + eps|B|)|A| is asserted
    as a sanity check of the combinatorics.
    """
    t = t_set(group, a, b)
    ok = len(a) - len(t) <= eps * len(a)
    if ok:
        if isinstance(group, ZdGroup):
            bits = _ZdBits(group, a, b)
            mb = bits.mask(b)
            mba = 0
            for x in a:
                mba |= bits.shifted(mb, x)
            n_ba = mba.bit_count()
        else:
            n_ba = len({group.op(v, x) for v in b for x in a})
        assert n_ba <= (1 + eps * len(b)) * len(a), "growth bound violated"
    return ok, len(t)


def power_le(r: Fraction, base: Fraction, num: int, den: int) -> bool:
    """Decide r <= base**(num/den) exactly for r, base > 0, den > 0."""
    if r <= 0:
        return True
    return r**den <= base**num


def power_ge(r: Fraction, base: Fraction, num: int, den: int) -> bool:
    if r <= 0:
        return False
    return r**den >= base**num


# --- greedy epsilon-disjoint families --------------------------------------


@dataclass
class DisjointFamily:
    centers: list  # canonical order of acceptance
    witnesses: list[int]  # |Bc \ U| at acceptance time
    covered: frozenset


def greedy_disjoint_translates(
    group: MarkedGroup, a: frozenset, b: frozenset, eps: Fraction
) -> DisjointFamily:
    """Maximal eps-disjoint family of B-translates inside A, canonical order.

    A center c in T(A,B) is accepted when the new part Bc \\ U keeps at least
    (1 - eps)|B| points.  Maximality: every rejected center is rechecked.
    """
    if not b:
        raise TileError("empty tile")
    order = sorted(t_set(group, a, b), key=group.sort_key)
    fam = DisjointFamily([], [], frozenset())
    need = (1 - eps) * len(b)
    if isinstance(group, ZdGroup):
        bits = _ZdBits(group, a, b)
        mb = bits.mask(b)
        mu = 0
        for c in order:
            mbc = bits.shifted(mb, c)
            if (mbc & ~mu).bit_count() >= need:
                fam.centers.append(c)
                fam.witnesses.append((mbc & ~mu).bit_count())
                mu |= mbc
        accepted = set(fam.centers)
        for c in order:
            if c not in accepted:
                assert (bits.shifted(mb, c) & ~mu).bit_count() < need, (
                    "greedy family is not maximal"
                )
        used = {c for c in translate_union(group, b, fam.centers)}
        assert len(used) == mu.bit_count()
    else:
        used = set()
        for c in order:
            bc = translate(group, b, c)
            new = bc - used
            if len(new) >= need:
                fam.centers.append(c)
                fam.witnesses.append(len(new))
                used |= bc
        accepted = set(fam.centers)
        for c in order:
            if c not in accepted:
                bc = translate(group, b, c)
                assert len(bc - used) < need, "greedy family is not maximal"
    fam.covered = frozenset(used)
    return fam


def translate_union(group: MarkedGroup, b: frozenset, centers: Iterable) -> set:
    out: set = set()
    for c in centers:
        out |= translate(group, b, c)
    return out


def covering_family(
    group: MarkedGroup, a: frozenset, b: frozenset, eps: Fraction, delta: Fraction
) -> DisjointFamily:
    """Greedy family plus the covering bound for (B, delta)-invariant windows:
    a maximal eps-disjoint family covers at least eps(1-delta)|A| points."""
    ok, _ = is_invariant(group, a, b, delta)
    if not ok:
        raise TileError("window is not sufficiently invariant for the covering bound")
    fam = greedy_disjoint_translates(group, a, b, eps)
    assert len(fam.covered) >= eps * (1 - delta) * len(a), "covering bound violated"
    return fam


# --- the quasi-tiling construction -----------------------------------------


def tiling_constants(eps: Fraction) -> tuple[int, list[Fraction], list[Fraction]]:
    """Shape count k, raw budgets p_i, and invariance moduli eta_i.

    k is least with 2*eps >= (1-eps)^k; p_i = eps(1-eps)^i;
    eta_i = (1-2eps)/(2*3^(k-i)) for i < k-1.
    """
    if not 0 < eps < 1:
        raise TileError("eps must be in (0,1)")
    k = 1
    while 2 * eps < (1 - eps) ** k:
        k += 1
    p = [eps * (1 - eps) ** i for i in range(k)]
    eta = [(1 - 2 * eps) / (2 * 3 ** (k - i)) for i in range(k - 1)]
    return k, p, eta


@dataclass
class QuasiTiling:
    eps: Fraction
    shapes: list[frozenset]
    centers: list[list]  # centers[i] for shape i
    witnesses: list[list[int]]
    budgets_raw: list[Fraction]
    budgets_scaled: list[Fraction]
    coverage: Fraction
    ledger: list[tuple[str, Fraction, str, bool]] = field(default_factory=list)

    def log(self, key: str, value: Fraction, relation: str, ok: bool) -> None:
        self.ledger.append((key, value, relation, ok))
        assert ok, f"{key}: {value} fails {relation}"


def _band(eps: Fraction, i: int):
    """Relative coverage band for stage i as exact-power predicates.

    Lower bound: max(eps(1-eps)^(1/2^i), 1-(1-eps)^(1-1/2^i));
    upper bound: min(eps(1-eps)^(-1/2^i), 1-(1-eps)^(1+1/2^i)).
    """
    q = 2**i
    base = 1 - eps

    def ge_lo(r: Fraction) -> bool:
        return power_ge(r / eps, base, 1, q) and power_le(1 - r, base, q - 1, q)

    def le_hi(r: Fraction) -> bool:
        return power_le(r / eps, base, -1, q) and power_ge(1 - r, base, q + 1, q)

    return ge_lo, le_hi


def quasi_tile(
    group: MarkedGroup,
    a: frozenset,
    chain: Sequence[frozenset],
    eps: Fraction,
) -> QuasiTiling:
    """Epsilon-quasi-tile the window A by the descending shape chain.

    Stage i takes a maximal eps-disjoint family of B_i-translates inside the
    residue A_i, trims it from the end of the canonical order into the stage
    coverage band and under the normalized budget p_i / sum(p), and removes
    the covered part.  The final coverage is asserted to reach 1 - eps.
    """
    k, p_raw, eta = tiling_constants(eps)
    if len(chain) != k:
        raise TileError(f"need {k} shapes for eps={eps}, got {len(chain)}")
    for b in chain:
        if group.identity not in b:
            raise TileError("every shape must contain the identity")
    for b0, b1 in zip(chain, chain[1:]):
        if not b1 <= b0:
            raise TileError("shape chain must be descending")
    total = sum(p_raw)
    p_scaled = [x / total for x in p_raw]
    for i, eta_i in enumerate(eta):
        binv = frozenset(group.inv(v) for v in chain[i + 1])
        ok, _ = is_invariant(group, chain[i], binv, eta_i / len(chain[i + 1]))
        if not ok:
            raise TileError(f"shape {i} is not invariant enough for shape {i + 1}")
    delta = Fraction(1, 3**k)
    if len(a) * delta <= 1:
        raise TileError("window too small for the chosen eps")

    qt = QuasiTiling(eps, list(chain), [], [], p_raw, p_scaled, Fraction(0))
    residue = a
    for i, b in enumerate(chain):
        ok, _ = is_invariant(group, residue, b, Fraction(1, 3 ** (k - i)))
        qt.log(f"stage{i}:residue-invariance", Fraction(len(residue), len(a)),
               f"A_{i} is (B_{i}, 3^-{k - i})-invariant", ok)
        fam = greedy_disjoint_translates(group, residue, b, eps)
        floor = eps * (1 - Fraction(1, 3 ** (k - i))) * len(residue)
        qt.log(f"stage{i}:greedy-coverage", Fraction(len(fam.covered), len(residue)),
               f">= eps(1-3^-{k - i})", len(fam.covered) >= floor)
        ge_lo, le_hi = _band(eps, i)
        centers = list(fam.centers)
        witnesses = list(fam.witnesses)
        # Trimming keeps prefixes of the acceptance order, so prefix coverage
        # is the running sum of the acceptance witnesses.
        count = len(centers)
        while count and not le_hi(Fraction(sum(witnesses[:count]), len(residue))):
            count -= 1
        budget = p_scaled[i] * len(a) / len(b)
        while count > budget:
            count -= 1
        centers, witnesses = centers[:count], witnesses[:count]
        cov: set = set()
        for c in centers:
            cov |= translate(group, b, c)
        assert len(cov) == sum(witnesses), "witness bookkeeping is off"
        ratio = Fraction(len(cov), len(residue))
        qt.log(f"stage{i}:band-low", ratio, f">= max(eps(1-eps)^(1/{2**i}), 1-(1-eps)^(1-1/{2**i}))",
               ge_lo(ratio))
        qt.log(f"stage{i}:band-high", ratio, f"<= min(eps(1-eps)^(-1/{2**i}), 1-(1-eps)^(1+1/{2**i}))",
               le_hi(ratio))
        abs_ratio = Fraction(len(cov), len(a))
        qt.log(f"stage{i}:absolute-band-low", abs_ratio,
               f">= eps(1-eps)^({i}+1/{2**i})",
               power_ge(abs_ratio / eps, 1 - eps, i * 2**i + 1, 2**i))
        qt.log(f"stage{i}:absolute-band-high", abs_ratio,
               f"<= eps(1-eps)^({i}-1/{2**i})",
               power_le(abs_ratio / eps, 1 - eps, i * 2**i - 1, 2**i))
        qt.log(f"stage{i}:budget-scaled", Fraction(len(b) * len(centers), len(a)),
               f"<= {p_scaled[i]}", len(b) * len(centers) <= p_scaled[i] * len(a))
        qt.centers.append(centers)
        qt.witnesses.append(witnesses)
        residue = residue - cov
        res_ratio = Fraction(len(residue), len(a))
        qt.log(f"stage{i}:residue-band-low", res_ratio,
               f">= (1-eps)^({i + 1}+1/{2**i})",
               power_ge(res_ratio, 1 - eps, (i + 1) * 2**i + 1, 2**i))
        qt.log(f"stage{i}:residue-band-high", res_ratio,
               f"<= (1-eps)^({i + 1}-1/{2**i})",
               power_le(res_ratio, 1 - eps, (i + 1) * 2**i - 1, 2**i))
    qt.coverage = Fraction(len(a) - len(residue), len(a))
    qt.log("final:coverage", qt.coverage, ">= 1-eps", qt.coverage >= 1 - eps)
    return qt


@dataclass
class TilingCheck:
    eps_disjoint: bool
    coverage_ok: bool
    budget_raw_ok: bool
    budget_scaled_ok: bool
    coverage: Fraction


def check_tiling(group: MarkedGroup, a: frozenset, qt: QuasiTiling) -> TilingCheck:
    """Independent re-verification of a quasi-tiling from its centers alone."""
    eps = qt.eps
    used: set = set()
    disjoint = True
    for b, centers in zip(qt.shapes, qt.centers):
        for c in centers:
            bc = translate(group, b, c)
            if not bc <= a:
                disjoint = False
            if len(bc - used) < (1 - eps) * len(b):
                disjoint = False
            used |= bc
    coverage = Fraction(len(used), len(a))
    raw_ok = all(
        len(b) * len(cs) <= pb * len(a)
        for b, cs, pb in zip(qt.shapes, qt.centers, qt.budgets_raw)
    )
    scaled_ok = all(
        len(b) * len(cs) <= pb * len(a)
        for b, cs, pb in zip(qt.shapes, qt.centers, qt.budgets_scaled)
    )
    return TilingCheck(disjoint, coverage >= 1 - eps, raw_ok, scaled_ok, coverage)


# --- hierarchies of exact tilings ------------------------------------------

FOLNER_CAP = 10**6


@dataclass
class HierarchyLevel:
    tile: frozenset
    side: int
    eps: Fraction
    centers: list  # tiling of this tile by the previous level's tile


@dataclass
class TilingHierarchy:
    group: ZdGroup
    levels: list[HierarchyLevel]


def build_hierarchy(
    group: ZdGroup, eps_seq: Sequence[Fraction], levels: int, cap: int = FOLNER_CAP
) -> TilingHierarchy:
    """Nested exact box tilings of Z^d: one tile per level.

    Level n+1's side is the least multiple of level n's side making level n+1
    (level-n-tile, eps_n)-invariant and eps_{n+1}-deep for the generators.
    Sizes beyond `cap` raise TileError.
    """
    if levels < 1:
        raise TileError("need at least one level")
    if len(eps_seq) < levels:
        raise TileError("need one eps per level")
    sides = [1]
    for n in range(1, levels):
        prev = sides[-1]
        lo = prev
        # invariance: (prev - 1) / side <= eps_{n-1}; generator depth: 1/side <= eps_n
        while (prev - 1) > eps_seq[n - 1] * lo or 1 > eps_seq[n] * lo:
            lo += prev
        if lo**group.d > cap:
            raise TileError(
                f"level {n} needs side {lo} (|tile| = {lo**group.d} > cap {cap})"
            )
        sides.append(lo)
    out = TilingHierarchy(group, [])
    for n, side in enumerate(sides):
        tile = group.box(side)
        if n == 0:
            centers = []
        else:
            prev = sides[n - 1]
            centers = sorted(
                itertools.product(range(0, side, prev), repeat=group.d)
            )
            used: set = set()
            for c in centers:
                bc = translate(group, group.box(prev), c)
                assert bc <= tile and not (bc & used), "grid tiling broken"
                used |= bc
            assert len(used) == len(tile), "grid tiling incomplete"
            ok, _ = is_invariant(group, tile, group.box(prev), eps_seq[n - 1])
            if not ok:
                raise TileError(f"level {n} fails ({prev}-box, eps) invariance")
        out.levels.append(HierarchyLevel(tile, side, eps_seq[n], centers))
    return out
