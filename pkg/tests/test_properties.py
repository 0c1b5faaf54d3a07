"""Seeded property suites over every node of the corpus towers."""

import functools

from hypothesis import given, settings, strategies as st

from conftest import corpus_env
from hopf_forge.recipe import build_extension, check_hypotheses
from hopf_forge.tower import INFINITE, FiniteNode
from hopf_forge.words import EMPTY, Word, free_reduce

SUITE = settings(max_examples=1000, derandomize=True, deadline=None)


@functools.lru_cache(maxsize=None)
def corpus_nodes():
    nodes = []
    for stem in ("prop4_1", "prop4_2", "thm1_1"):
        env = corpus_env(stem)
        nodes.extend(env.groups.values())
        for inp in env.recipes.values():
            nodes.append(build_extension(inp, check_hypotheses(inp)))
    return tuple(nodes)


def words_over(gens, max_letters=8, max_exp=3):
    letter = st.tuples(st.sampled_from(gens), st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(letter, max_size=max_letters).map(Word)


@st.composite
def node_and_word(draw, max_letters=8):
    node = draw(st.sampled_from(corpus_nodes()))
    return node, draw(words_over(node.generators, max_letters))


# free reduction


@SUITE
@given(st.lists(st.tuples(st.sampled_from("abcd"), st.integers(-4, 4)), max_size=20))
def test_free_reduction_idempotent(pairs):
    once = free_reduce(pairs)
    assert free_reduce(once.letters) == once
    assert Word(once.letters) == once


# w w^-1 = 1


@SUITE
@given(node_and_word())
def test_word_times_inverse_is_trivial(nw):
    node, w = nw
    assert node.is_identity(w * w.inverse())
    assert node.is_identity(w.inverse() * w)
    assert node.are_equal(node.reduce(w), w)


# finite nodes against independent oracles


def _dihedral(n):
    """c^i b^e with (i,e)(j,d) = (i + (-1)^e j mod n, e + d mod 2); generators b, c."""
    def act(x, name, e):
        i, s = x
        for _ in range(abs(e)):
            if name == "b":
                s = 1 - s  # b is an involution
            else:
                i = (i + (-1) ** s * (1 if e > 0 else -1)) % n
        return i, s
    return act, (0, 0)


def _cyclic_2x3():
    def act(x, name, e):
        i, j = x
        return ((i + e) % 2, j) if name == "a" else (i, (j + e) % 3)
    return act, (0, 0)


ORACLES = {("prop4_1", "H0"): _dihedral(9), ("thm1_1", "H0"): _dihedral(9),
           ("prop4_1", "D6"): _dihedral(3), ("prop4_2", "C6"): _cyclic_2x3()}


@functools.lru_cache(maxsize=None)
def finite_cases():
    return tuple((corpus_env(stem).groups[name], oracle) for (stem, name), oracle in ORACLES.items())


@SUITE
@given(st.data())
def test_finite_is_identity_matches_oracle(data):
    node, (act, one) = data.draw(st.sampled_from(finite_cases()))
    assert isinstance(node, FiniteNode)
    w = data.draw(words_over(node.generators, 12, 10))
    x = one
    for g, e in w.letters:
        x = act(x, g.name, e)
    assert node.is_identity(w) == (x == one)


# orders


@SUITE
@given(node_and_word(6))
def test_order_contract_for_small_powers(nw):
    node, w = nw
    n = node.order(w)
    for k in range(1, 9):
        trivial = node.is_identity(w ** k)
        if n == INFINITE:
            assert not trivial
        else:
            assert trivial == (k % n == 0)


# cyclic membership


@SUITE
@given(st.data())
def test_cyclic_member_recheck(data):
    node, g = data.draw(node_and_word(5))
    if node.is_identity(g):
        return
    if data.draw(st.booleans()):
        n = data.draw(st.integers(-5, 5))
        w = g ** n
        m = node.cyclic_member(g, w)
        assert m is not None
        if node.order(g) == INFINITE:
            assert m == n
        assert node.are_equal(g ** m, w)
    else:
        w = data.draw(words_over(node.generators, 6))
        m = node.cyclic_member(g, w)
        if m is None:
            for n in range(-6, 7):
                assert not node.are_equal(w, g ** n)
        else:
            assert node.are_equal(w, g ** m)


# H embeds in the image extension


@functools.lru_cache(maxsize=None)
def extension_pairs():
    pairs = []
    for stem, name in (("prop4_1", "first_example"), ("prop4_2", "second_example")):
        inp = corpus_env(stem).recipes[name]
        pairs.append((inp.H, build_extension(inp, check_hypotheses(inp))))
    return tuple(pairs)


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.data())
def test_nontrivial_h_words_stay_nontrivial_in_g(data):
    for H, G in extension_pairs():
        h = data.draw(words_over(H.generators, 12))
        if not H.is_identity(h):
            assert not G.is_identity(h)


def test_every_node_is_covered():
    kinds = {node.kind for node in corpus_nodes()}
    assert kinds == {"finite", "free", "free_abelian", "free_product", "hnn", "hnn_auto"}
    assert EMPTY == Word()
