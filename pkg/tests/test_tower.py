import pytest

from hopf_forge.errors import AssocValidationFailed, GeneratorClash, NotAFreeProduct, TrivialGenerator, UnknownGenerator
from hopf_forge.tower import (
    INFINITE,
    CyclicAssoc,
    FreeAbelianNode,
    FreeNode,
    FreeProductNode,
    find_pinch,
    format_order,
    hnn,
    syllables,
)
from hopf_forge.words import EMPTY, Word, format_word


def red(node, w, text):
    return format_word(node.reduce(w(node, text)))


def test_hnn_pinches_both_directions(first_plan, w):
    H = first_plan.groups["H"]
    assert red(H, w, "k^-1 s^2 k") == "s^6"
    assert red(H, w, "k s^3 k^-1") == "s"
    # s is not a power of s^3 inside H1, so k s k^-1 stays
    assert red(H, w, "k s k^-1") == "k s k^-1"


def test_britton_form_and_pinch_detection(first_plan, w):
    H = first_plan.groups["H"]
    segs, signs = H.britton_form(w(H, "k s k^-1 b"))
    assert [format_word(s) for s in segs] == ["1", "s", "b"]
    assert signs == [1, -1]
    assert find_pinch(H, w(H, "b k^-1 s^2 k c")) is not None
    assert find_pinch(H, w(H, "k s k^-1")) is None


def test_automorphism_normal_form(first_plan, w):
    H1 = first_plan.groups["H1"]
    n, h = H1.normal_form(w(H1, "b s"))
    assert n == 1 and format_word(h) == "b c^-3"
    assert H1.are_equal(w(H1, "s^-1 b s"), w(H1, "b c^-3"))
    assert H1.are_equal(w(H1, "s^-1 c s"), w(H1, "c"))
    assert H1.order(w(H1, "s")) == INFINITE


def test_orders(first_plan, w):
    H = first_plan.groups["H"]
    assert H.order(w(H, "c^3")) == 3
    assert H.order(w(H, "b")) == 2
    assert H.order(w(H, "")) == 1
    assert H.order(w(H, "k")) == INFINITE
    assert H.order(w(H, "(k s^-1 k^-1) b (k s k^-1) c b^-1")) == INFINITE
    # conjugate of a torsion element stays torsion
    assert H.order(w(H, "k s b s^-1 k^-1")) == 2
    assert format_order(INFINITE) == "Infinite" and format_order(3) == "3"


def test_cyclic_member(first_plan, w):
    H = first_plan.groups["H"]
    assert H.cyclic_member(w(H, "k"), w(H, "k^-3")) == -3
    assert H.cyclic_member(w(H, "s"), w(H, "k s^6 k^-1")) == 2
    assert H.cyclic_member(w(H, "s"), w(H, "k s k^-1")) is None
    assert H.cyclic_member(w(H, "c^3"), w(H, "c^-6")) == 1
    assert H.cyclic_member(w(H, "k"), w(H, "")) == 0
    with pytest.raises(TrivialGenerator):
        H.cyclic_member(w(H, "b^2"), w(H, "b"))


def test_free_abelian():
    Z = FreeAbelianNode("Z", ["a", "b"])
    a, b = Word.gen(Z.generator("a")), Word.gen(Z.generator("b"))
    assert Z.vector(a * b * a ** -3) == (-2, 1)
    assert Z.is_identity(a * b * a.inverse() * b.inverse())
    assert Z.cyclic_member(a ** 2 * b, a ** -4 * b ** -2) == -2
    assert Z.cyclic_member(a ** 2 * b, a * b) is None
    assert Z.order(a) == INFINITE


def test_free_product_syllables(second_plan, w):
    HX = second_plan.groups["HX"]
    parts = syllables(HX, w(HX, "[[s a^2 s^-1, b], x]"))
    assert [tag for tag, _ in parts] == ["H", "X", "H", "X"]
    assert HX.order(w(HX, "s x s^-1 x^-1")) == INFINITE
    assert HX.order(w(HX, "x b x^-1")) == INFINITE
    with pytest.raises(NotAFreeProduct):
        syllables(second_plan.groups["H"], w(second_plan.groups["H"], "a"))


def test_free_product_finite_factor(first_plan, w):
    X = FreeNode("X", ["x"])
    HX = FreeProductNode("HX", first_plan.groups["H"], X)
    assert HX.order(w(HX, "x b x^-1")) == 2
    assert HX.is_identity(w(HX, "x b^2 x^-1"))
    assert HX.cyclic_member(w(HX, "c^3 x"), w(HX, "(c^3 x)^-2")) == -2


def test_hnn_rejects_finite_associated_element(first_plan, w):
    H0 = first_plan.groups["H0"]
    with pytest.raises(AssocValidationFailed):
        hnn("bad", H0, "t", CyclicAssoc(w(H0, "c"), w(H0, "c^2")))


def test_hnn_rejects_stable_letter_clash():
    F = FreeNode("F", ["a"])
    a = Word.gen(F.generator("a"))
    with pytest.raises(GeneratorClash):
        hnn("bad", F, "a", CyclicAssoc(a, a))


def test_unknown_generator():
    F = FreeNode("F", ["a"])
    with pytest.raises(UnknownGenerator):
        F.generator("b")


def test_original_tower_smoke(tower_plan, w):
    K, G = tower_plan.groups["K"], tower_plan.groups["G"]
    assert K.are_equal(w(K, "u^-1 (b a c b^-1) u"), w(K, "a"))
    assert K.are_equal(w(K, "v^-1 a v"), w(K, "t s t^-1"))
    assert G.are_equal(w(G, "x^-1 u x"), w(G, "c^3 e c^3 e^-1"))
    assert not G.is_identity(w(G, "x y x^-1 y^-1"))
    assert G.is_identity(w(G, "") * EMPTY)
