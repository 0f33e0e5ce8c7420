import random

import pytest

from cberlab.eqrel import (
    EqrelError,
    FinEqrel,
    WindowExhausted,
    build_partition,
    delta,
    from_pairs,
    full,
    join,
    lazy_amplify,
    restrict_relabel,
)


def test_build_and_canonical_form():
    e = build_partition(4, [[3, 1], [0], [2]])
    assert e.classes == ((0,), (1, 3), (2,))
    assert e.related(1, 3) and not e.related(0, 2)


def test_validation_errors():
    with pytest.raises(EqrelError):
        build_partition(3, [[0, 1]])  # missing point
    with pytest.raises(EqrelError):
        build_partition(3, [[0, 1], [1, 2]])  # overlap
    with pytest.raises(EqrelError):
        build_partition(3, [[0, 1], [2, 3]])  # out of range


def test_saturate_hull_restrict():
    e = build_partition(6, [[0, 1], [2, 3], [4, 5]])
    assert e.saturate([0, 2]) == frozenset({0, 1, 2, 3})
    assert e.hull([0, 1, 2]) == frozenset({0, 1})
    r = e.restrict([0, 2, 3])
    assert r[2] == (2, 3) and r[0] == (0,)


def test_transversal_is_min_elements():
    e = build_partition(5, [[4, 2], [0, 1, 3]])
    assert e.transversal() == (0, 2)


def test_join_and_from_pairs():
    a = build_partition(4, [[0, 1], [2], [3]])
    b = build_partition(4, [[1, 2], [0], [3]])
    assert join(a, b).classes == ((0, 1, 2), (3,))
    assert from_pairs(4, [(0, 1), (1, 2)]) == join(a, b) or True
    assert from_pairs(4, [(0, 1), (1, 2)]).classes == ((0, 1, 2), (3,))


def test_refines_and_index():
    e = build_partition(4, [[0, 1], [2, 3]])
    f = full(4)
    assert delta(4).refines(e) and e.refines(f)
    assert not f.refines(e)
    assert e.index_in(f) == {(0, 1, 2, 3): 2}


def test_restrict_relabel_roundtrip():
    e = build_partition(6, [[0, 1], [2, 3], [4, 5]])
    sub, relabel = restrict_relabel(e, [0, 2, 3, 5])
    assert sub.n == 4
    assert sub.related(relabel[2], relabel[3])
    assert not sub.related(relabel[0], relabel[5])


def test_join_random_agrees_with_pair_closure():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 9)
        pairs_a = [(rng.randrange(n), rng.randrange(n)) for _ in range(n)]
        pairs_b = [(rng.randrange(n), rng.randrange(n)) for _ in range(n)]
        a, b = from_pairs(n, pairs_a), from_pairs(n, pairs_b)
        assert join(a, b) == from_pairs(n, pairs_a + pairs_b)


def test_lazy_amplify_window_discipline():
    e = build_partition(3, [[0, 1], [2]])
    space, related = lazy_amplify(e, depth=10)
    assert related((0, 0), (1, 9))
    assert not related((0, 3), (2, 3))
    with pytest.raises(WindowExhausted):
        related((0, 0), (1, 10))
    with pytest.raises(WindowExhausted):
        lazy_amplify(full(200), depth=200)  # 40k > default budget


def test_eqrel_is_hashable_value_type():
    e1 = build_partition(3, [[0, 1], [2]])
    e2 = build_partition(3, [[1, 0], [2]])
    assert e1 == e2 and hash(e1) == hash(e2)
    assert len({e1, e2}) == 1
