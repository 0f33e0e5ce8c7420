from fractions import Fraction as F

import pytest

from cberlab.intervals import (
    FULL,
    IntervalError,
    IntervalMap,
    IntervalSet,
    identity_map,
    partial_bijection_between,
    subset_of_measure,
)


def test_normalization_merges_adjacent():
    s = IntervalSet([(F(1, 2), 1), (0, F(1, 2))])
    assert s.intervals == ((F(0), F(1)),)
    assert s.measure == 1


def test_overlap_rejected():
    with pytest.raises(IntervalError):
        IntervalSet([(0, F(1, 2)), (F(1, 4), 1)])


def test_set_algebra():
    a = IntervalSet([(0, F(1, 2))])
    b = IntervalSet([(F(1, 4), F(3, 4))])
    assert a.intersect(b).measure == F(1, 4)
    assert a.union(b).measure == F(3, 4)
    assert a.difference(b).intervals == ((F(0), F(1, 4)),)
    assert FULL.contains_set(a)


def test_subset_of_measure_prefix_convention():
    assert subset_of_measure(IntervalSet([(0, F(1, 2))]), F(1, 3)).intervals == (
        (F(0), F(1, 3)),
    )
    s = IntervalSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
    out = subset_of_measure(s, F(3, 8))
    assert out.intervals == ((F(0), F(1, 4)), (F(1, 2), F(5, 8)))
    assert subset_of_measure(s, 0).measure == 0
    with pytest.raises(IntervalError):
        subset_of_measure(s, F(2, 3))


def test_partial_bijection_examples():
    m = partial_bijection_between(IntervalSet([(0, F(1, 2))]), IntervalSet([(F(1, 2), 1)]))
    assert m.pieces == ((F(0), F(1, 2), F(1, 2)),)
    m2 = partial_bijection_between(
        IntervalSet([(0, F(1, 4)), (F(3, 4), 1)]),
        IntervalSet([(F(1, 4), F(3, 4))]),
    )
    assert m2.apply(0) == F(1, 4)
    assert m2.apply(F(3, 4)) == F(1, 2)
    assert m2.image().measure == F(1, 2)
    assert partial_bijection_between(
        IntervalSet([(0, F(1, 3))]), IntervalSet([(0, F(1, 2))])
    ) is None


def test_map_compose_inverse_agreement():
    a = IntervalSet([(0, F(1, 2))])
    m = partial_bijection_between(a, IntervalSet([(F(1, 2), 1)]))
    assert m.compose(m.inverse()).agreement_with(identity_map(m.image())).measure == F(1, 2)
    assert m.inverse().apply(F(1, 2)) == 0


def test_map_rejects_overlapping_targets():
    with pytest.raises(IntervalError):
        IntervalMap([(0, F(1, 4), F(1, 4)), (F(1, 4), F(1, 2), 0)])


def test_measure_preservation_automatic():
    m = IntervalMap([(0, F(1, 8), F(1, 2)), (F(1, 4), F(3, 8), F(1, 2))])
    assert m.domain().measure == m.image().measure == F(1, 4)
    s = IntervalSet([(0, F(1, 16))])
    assert m.apply_set(s).measure == s.measure
