"""Extended affine Weyl group: lengths, words, decompositions, orders."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affkl import weyl
from oracles import bfs_lengths


def _elem_strategy(datum, max_word=6):
    """Random extended elements: a generator word times a length-zero twist."""
    n_gens = len(weyl.all_generators(datum))
    n_omega = len(weyl.omega_elements(datum))

    def build(indices, om):
        gens = weyl.all_generators(datum)
        x = weyl.identity(datum)
        for i in indices:
            x = weyl.multiply(x, gens[i])
        return weyl.multiply(x, weyl.omega_elements(datum)[om])

    return st.builds(
        build,
        st.lists(st.integers(0, n_gens - 1), max_size=max_word),
        st.integers(0, n_omega - 1),
    )


# -- length ------------------------------------------------------------------


def test_length_matches_bfs_small(a1, c2):
    for d, bound in ((a1, 8), (c2, 6)):
        depth = bfs_lengths(d, bound)
        for x, dep in depth.items():
            assert x.length() == dep


def test_translation_lengths(a1, c2):
    alpha = a1.simple_roots[0]
    assert weyl.translation(a1, alpha).length() == 2
    rho = tuple(int(c) for c in c2.rho)
    assert weyl.translation(c2, rho).length() == 7  # = bounds baseline


def test_generators_have_length_one(a1, a2, c2):
    for d in (a1, a2, c2):
        for g in weyl.all_generators(d):
            assert g.length() == 1


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_length_of_inverse(a2, data):
    x = data.draw(_elem_strategy(a2))
    assert weyl.invert(x).length() == x.length()


# -- omega -------------------------------------------------------------------


def test_omega_elements_have_length_zero(a1, a2, c2):
    for d in (a1, a2, c2):
        for om in weyl.omega_elements(d):
            assert om.length() == 0


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_omega_decompose_reassembles(a2, data):
    x = data.draw(_elem_strategy(a2))
    omega, w = weyl.omega_decompose(x)
    assert omega.length() == 0
    assert weyl._in_root_lattice(a2, w.trans)
    assert weyl.multiply(omega, w) == x


def test_tau_preserves_generator_length(a2):
    lam = a2.varsigma
    for s in weyl.all_generators(a2):
        assert weyl.tau(a2, lam, s).length() == 1


# -- words and text ----------------------------------------------------------


def test_reduced_word_has_length_many(a2):
    gens = weyl.all_generators(a2)
    for x in weyl.enumerate_W(a2, 5):
        word = weyl.reduced_word(x)
        assert len(word) == x.length()
        rebuilt = weyl.identity(a2)
        for i in word:
            rebuilt = weyl.multiply(rebuilt, gens[i])
        assert rebuilt == x


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_text_roundtrip(c2, data):
    x = data.draw(_elem_strategy(c2, max_word=5))
    assert weyl.from_text(c2, weyl.to_text(x)) == x


def test_text_examples(a1):
    assert weyl.to_text(weyl.identity(a1)) == "e"
    t = weyl.translation(a1, (2,))
    assert weyl.from_text(a1, weyl.to_text(t)) == t


# -- Bruhat order ------------------------------------------------------------


def test_bruhat_examples(a1):
    s0, s1 = weyl.all_generators(a1)
    s0s1s0 = weyl.multiply_all([s0, s1, s0])
    assert weyl.bruhat_leq(s0, s0s1s0) is True
    assert weyl.bruhat_leq(s0, s1) is False
    assert weyl.bruhat_leq(s1, s0) is False


def test_bruhat_cross_coset_incomparable(a1):
    om = weyl.omega_elements(a1)[1]
    e = weyl.identity(a1)
    assert weyl.bruhat_leq(e, om) is None


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_bruhat_respects_length(a2, data):
    x = data.draw(_elem_strategy(a2, max_word=4))
    y = data.draw(_elem_strategy(a2, max_word=4))
    if weyl.bruhat_leq(x, y) is True and x != y:
        assert x.length() < y.length()


# -- coset minimality, dot action, restriction --------------------------------


def test_enumerate_fW_is_coset_minimal(c2):
    for w in weyl.enumerate_fW(c2, 5):
        assert weyl.is_fW(w)
        assert weyl.is_fWext(w)


def test_dot_action_example(a1):
    om = weyl.omega_elements(a1)[1]
    # the nontrivial twist sends 0 to (p-2) * rho under the dilated dot action
    assert weyl.dot_p(om, (0,), 5) == (3,)


def test_restricted_verdicts(a1):
    om = weyl.omega_elements(a1)[1]
    assert weyl.is_restricted(om)
    assert weyl.is_restricted(weyl.identity(a1))
    assert not weyl.is_restricted(weyl.translation(a1, (2,)))


def test_restricted_box_membership_is_p_independent(a1):
    # spot-check: verdict computed at the reference prime matches p = 11
    for w in weyl.enumerate_fWext(a1, 4):
        lam = weyl.dot_p(w, (0,), 11)
        in_box = all(0 <= weyl.pair(lam, c) <= 10 for c in a1.simple_coroots)
        assert weyl.is_restricted(w) == in_box
