import pytest

from cberlab.eqrel import build_partition, delta, full
from cberlab.groups import (
    FinGroup,
    GroupAction,
    GroupError,
    aut_inn_out,
    classify_automorphism,
    compose,
    extend_by_group,
    from_cycles,
    identity_perm,
    invert,
    normal_restrict,
    orbit_eqrel,
    shortlex_closure,
)


def test_perm_basics():
    p = from_cycles(4, [(0, 1, 2)])
    assert p == (1, 2, 0, 3)
    assert compose(p, invert(p)) == identity_perm(4)


def test_shortlex_closure_s3():
    gens = [from_cycles(3, [(0, 1)]), from_cycles(3, [(0, 1, 2)])]
    elems = shortlex_closure(gens)
    assert len(elems) == 6
    assert elems[0] == identity_perm(3)


def test_fingroup_generated_and_action_axioms():
    g, elems = FinGroup.generated([from_cycles(4, [(0, 1, 2, 3)])])
    assert g.order == 4
    act = GroupAction(g, 4, tuple(elems))
    assert act.apply(g.op(1, 1), 0) == act.apply(1, act.apply(1, 0))


def test_bad_action_rejected():
    g = FinGroup.cyclic(2)
    with pytest.raises(GroupError):
        GroupAction(g, 2, ((1, 0), (0, 1)))  # identity element acts nontrivially


def test_orbit_eqrel():
    g, elems = FinGroup.generated([from_cycles(4, [(0, 1), (2, 3)])])
    act = GroupAction(g, 4, tuple(elems))
    assert orbit_eqrel(act).classes == ((0, 1), (2, 3))


def test_classify_automorphism_three_verdicts():
    e = build_partition(4, [[0, 1], [2, 3]])
    assert classify_automorphism(e, (0, 2, 1, 3)).verdict == "not-automorphism"
    assert classify_automorphism(e, (1, 0, 2, 3)).verdict == "inner"
    c = classify_automorphism(e, (2, 3, 0, 1))
    assert c.verdict == "outer-nontrivial"
    assert (0, 1) in c.witness and (1, 0) in c.witness


def test_extend_by_group():
    e = delta(4)
    f, witnessed = extend_by_group(e, [(1, 0, 3, 2)])
    assert f.classes == ((0, 1), (2, 3)) and witnessed
    e2 = build_partition(4, [[0, 1], [2, 3]])
    _, witnessed2 = extend_by_group(e2, [(0, 2, 1, 3)])
    assert not witnessed2  # not an automorphism, so normality not witnessed


def test_normal_restrict_frozen_shape():
    # T is a 4-cycle over delta; F' the two-orbit coarsening of its square.
    e = delta(4)
    t = from_cycles(4, [(0, 1, 2, 3)])
    f_prime = build_partition(4, [[0, 2], [1, 3]])
    tp = normal_restrict(e, t, f_prime)
    assert tp == (2, 3, 0, 1)  # least power landing in the same F'-class


def test_normal_restrict_rejects_bad_chain():
    e = delta(4)
    t = from_cycles(4, [(0, 1)])
    with pytest.raises(GroupError):
        normal_restrict(e, t, build_partition(4, [[0, 2], [1, 3]]))


def test_aut_inn_out_pairs():
    e = build_partition(4, [[0, 1], [2, 3]])
    aut, inn, cosets = aut_inn_out(e)
    assert len(inn) == 4  # swaps within each class
    assert len(aut) == 8  # wreath-type automorphisms
    assert len(cosets) == 2  # Out has order 2: swap the classes or not


def test_full_relation_aut_is_symmetric_group():
    aut, inn, cosets = aut_inn_out(full(3))
    assert len(aut) == 6 and len(inn) == 6 and len(cosets) == 1
