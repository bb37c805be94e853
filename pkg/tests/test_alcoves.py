"""Alcove geometry: actions, box representatives, hat/check, generic order."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affkl import alcoves, weyl
from affkl.rootdata import neg_weight, pair


def _alcove_strategy(datum, max_word=5):
    n_gens = len(weyl.all_generators(datum))

    def build(indices):
        gens = weyl.all_generators(datum)
        x = weyl.identity(datum)
        for i in indices:
            x = weyl.multiply(x, gens[i])
        return alcoves.from_weyl(x)

    return st.builds(build,
                     st.lists(st.integers(0, n_gens - 1), max_size=max_word))


def test_fundamental_alcove_is_dominant(a1, c2):
    for d in (a1, c2):
        fund = alcoves.fundamental_alcove(d)
        assert alcoves.is_dominant(fund)
        bary = fund.barycenter
        for c in d.positive_coroots:
            assert 0 < pair(bary, c) < 1


def test_dominant_iff_coset_minimal(c2):
    for a in alcoves.enumerate_alcoves(c2, 6):
        assert alcoves.is_dominant(a) == weyl.is_fW(alcoves.to_weyl(a))


def test_from_weyl_rejects_non_lattice_translation(a1):
    with pytest.raises(ValueError):
        alcoves.from_weyl(weyl.translation(a1, (1,)))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_left_action_composes(c2, data):
    a = data.draw(_alcove_strategy(c2))
    x = alcoves.to_weyl(data.draw(_alcove_strategy(c2, max_word=3)))
    y = alcoves.to_weyl(data.draw(_alcove_strategy(c2, max_word=3)))
    assert alcoves.act_left(weyl.multiply(x, y), a) \
        == alcoves.act_left(x, alcoves.act_left(y, a))


def test_box_representatives(a1, c2):
    # below: A - mu lies in the unit box below zero; above: in the box above
    fund = alcoves.fundamental_alcove(a1)
    assert alcoves.box_rep_below(fund) == (1,)
    assert alcoves.box_rep_above(fund) == (0,)
    for d in (a1, c2):
        for a in alcoves.enumerate_alcoves(d, 4):
            below = alcoves.translate(a, neg_weight(alcoves.box_rep_below(a)))
            above = alcoves.translate(a, neg_weight(alcoves.box_rep_above(a)))
            for c in d.simple_coroots:
                assert -1 < pair(below.barycenter, c) < 0
                assert 0 < pair(above.barycenter, c) < 1


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_hat_check_are_inverse(a2, data):
    a = data.draw(_alcove_strategy(a2))
    assert alcoves.check(alcoves.hat(a)) == a
    assert alcoves.hat(alcoves.check(a)) == a


def test_hat_is_translation_equivariant(a1):
    for a in alcoves.enumerate_alcoves(a1, 4):
        shifted = alcoves.translate(a, a1.varsigma)
        assert alcoves.hat(shifted) \
            == alcoves.translate(alcoves.hat(a), a1.varsigma)


# -- generic order -----------------------------------------------------------


def test_generic_order_examples(a1):
    fund = alcoves.fundamental_alcove(a1)
    s0, s1 = weyl.all_generators(a1)
    assert alcoves.generic_leq(alcoves.act_right(fund, s1), fund) \
        == "less-equal"
    assert alcoves.generic_leq(fund, alcoves.act_right(fund, s0)) \
        == "less-equal"


def test_generic_order_reflexive_and_antisymmetric(c2):
    window = alcoves.enumerate_alcoves(c2, 4)
    for a in window:
        assert alcoves.generic_leq(a, a) == "equal"
    for a in window[:8]:
        for b in window[:8]:
            if a == b:
                continue
            if alcoves.generic_leq(a, b) == "less-equal":
                assert alcoves.generic_leq(b, a) != "less-equal"


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_generic_order_translation_invariant(a2, data):
    a = data.draw(_alcove_strategy(a2, max_word=4))
    b = data.draw(_alcove_strategy(a2, max_word=4))
    base = alcoves.generic_leq(a, b)
    shifted = alcoves.generic_leq(
        alcoves.translate(a, a2.varsigma),
        alcoves.translate(b, a2.varsigma),
    )
    assert base == shifted


def test_wall_neighbors_always_comparable(c2):
    for a in alcoves.enumerate_alcoves(c2, 3):
        for s in weyl.all_generators(c2):
            b = alcoves.act_right(a, s)
            assert alcoves.generic_leq(a, b) in ("less-equal",
                                                 "greater-equal")
