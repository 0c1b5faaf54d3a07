import pytest
from hypothesis import given, strategies as st

from hopf_forge.errors import UnmappedGenerator
from hopf_forge.words import (
    EMPTY,
    CyclicWord,
    GeneratorId,
    Word,
    commutator,
    cyclically_reduce,
    format_word,
    free_reduce,
    substitute,
)

a, b, c = (GeneratorId(n, "F") for n in "abc")
A, B = Word.gen(a), Word.gen(b)

letters = st.lists(st.tuples(st.sampled_from([a, b, c]), st.integers(-3, 3)), max_size=12)


def raw(pairs):
    return free_reduce(pairs)


def test_junction_merge_and_cancel():
    assert format_word(A * A) == "a^2"
    assert A * A.inverse() == EMPTY
    assert format_word(Word.gen(a, 2) * Word.gen(a, -3) * B) == "a^-1 b"


def test_identity_prints_as_one():
    assert format_word(EMPTY) == "1"
    assert not EMPTY


def test_commutator_convention():
    # [a, b] = a b a^-1 b^-1
    assert format_word(commutator(A, B)) == "a b a^-1 b^-1"
    assert commutator(A, A) == EMPTY


def test_power_and_negative_power():
    ab = A * B
    assert ab ** 3 == ab * ab * ab
    assert ab ** -2 == (ab * ab).inverse()
    assert ab ** 0 == EMPTY


def test_substitute_requires_every_generator():
    with pytest.raises(UnmappedGenerator):
        substitute(A * B, {a: B})
    assert substitute(A * B, {a: B, b: A}) == B * A


def test_cyclically_reduce_example():
    w = B * A * Word.gen(c, 2) * B.inverse()
    conj, core = cyclically_reduce(w)
    assert conj == B
    assert core == A * Word.gen(c, 2)


def test_cyclically_reduce_partial_runs():
    # the cancellation eats only part of the a^3 run
    w = Word.gen(a, 3) * B * Word.gen(a, -1)
    conj, core = cyclically_reduce(w)
    assert conj * core * conj.inverse() == w
    assert core == Word.gen(a, 2) * B


def test_cyclic_word_rotation_equality():
    assert CyclicWord(A * B * Word.gen(c)) == CyclicWord(Word.gen(c) * A * B)
    assert CyclicWord(A * B) != CyclicWord(A * B.inverse())


@given(letters)
def test_free_reduce_idempotent(pairs):
    w = raw(pairs)
    assert free_reduce(w.letters) == w


@given(letters)
def test_inverse_cancels(pairs):
    w = raw(pairs)
    assert w * w.inverse() == EMPTY
    assert w.inverse().inverse() == w


@given(letters)
def test_cyclically_reduce_round_trip(pairs):
    w = raw(pairs)
    conj, core = cyclically_reduce(w)
    assert conj * core * conj.inverse() == w
    if len(core.letters) > 1:
        (g0, e0), (g1, e1) = core.letters[0], core.letters[-1]
        assert g0 != g1 or (e0 > 0) == (e1 > 0)


@given(letters, letters)
def test_inverse_antihomomorphism(p, q):
    u, v = raw(p), raw(q)
    assert (u * v).inverse() == v.inverse() * u.inverse()
