import dataclasses

import pytest

from hopf_forge.dsl import parse_word
from hopf_forge.errors import HypothesesNotChecked, SurjectivityWitnessFailed, TrivialU
from hopf_forge.plan import resolve_word
from hopf_forge.recipe import (
    assemble_nonhopf,
    build_extension,
    certify_hyperbolic,
    check_hypotheses,
    elementary_search,
    enumerate_reduced_words,
    extend_endomorphism,
    free_product_with_x,
    hyperbolic_syllables,
    run_recipe,
)
from hopf_forge.report import ASSUMED, INCONCLUSIVE, PASS
from hopf_forge.tower import FreeNode
from hopf_forge.words import Word, commutator

FAST = (2, 1)


def test_hypotheses_first_example(first_plan):
    report = check_hypotheses(first_plan.recipes["first_example"])
    assert len(report.entries) == 8
    assert report.all_passed


def test_hypotheses_with_trivial_u_fail(first_plan, w):
    inp = first_plan.recipes["first_example"]
    bad = dataclasses.replace(inp, u=w(inp.H, "c^9"), y=w(inp.H, "c^3"))
    report = check_hypotheses(bad)
    assert {e.id.split(".")[-1] for e in report.failed} >= {"u_nontrivial", "u_squared"}
    with pytest.raises(HypothesesNotChecked):
        build_extension(bad, report)
    with pytest.raises(HypothesesNotChecked):
        build_extension(inp, None)


def test_certificate_inconclusive_when_v_projects_into_image(second_plan, w):
    inp = second_plan.recipes["second_example"]
    # b lies in the image of psi, so the certificate cannot separate it
    odd = dataclasses.replace(inp, v=w(inp.H, "b"))
    entry = check_hypotheses(odd).entries[-1]
    assert entry.id.endswith("v_not_image") and entry.status == INCONCLUSIVE


def test_extension_relators_and_psi_tilde(first_plan):
    inp = first_plan.recipes["first_example"]
    G = build_extension(inp, check_hypotheses(inp))
    assert len(G.relators) == 7
    e = extend_endomorphism(inp, G)
    assert G.is_identity(e.apply(inp.u)) and not G.is_identity(inp.u)
    x, t = Word.gen(inp.x), Word.gen(inp.t)
    assert G.are_equal(t * commutator(inp.u, x) * t.inverse(), inp.v)


def test_hyperbolic_certificate(first_plan, w):
    H = first_plan.groups["H"]
    assert hyperbolic_syllables(H, w(H, "c^3")) == 4
    assert certify_hyperbolic(H, w(H, "k"))
    with pytest.raises(TrivialU):
        certify_hyperbolic(H, w(H, "b^2"))


def test_enumerate_reduced_words_counts():
    F = FreeNode("F", ["a", "b"])
    words = list(enumerate_reduced_words(F.generators, 3))
    # 1 + 4 + 12 + 36 reduced words on two generators
    assert len(words) == 53
    assert len(set(words)) == 53
    assert [len(u) for u in words] == sorted(len(u) for u in words)


def test_elementary_search_free_group():
    F = FreeNode("F", ["a"])
    a = Word.gen(F.generators[0])
    stats = {}
    assert elementary_search(F, a, 3, 2, stats=stats) == []
    # the identity and g^{+-1} are skipped by the membership filter
    assert stats["in_cyclic_subgroup"] >= 1


def test_elementary_search_small_bounds(second_plan):
    inp = second_plan.recipes["second_example"]
    HX, _ = free_product_with_x(inp.H)
    assert elementary_search(inp.H, inp.u, 2, 2, HX) == []


def test_run_recipe_entry_order(first_plan):
    entries, witness = run_recipe(first_plan.recipes["first_example"], FAST)
    ids = [e.id.split(".", 1)[1] for e in entries]
    assert ids[:8] == ["hyp." + s for s in ("u_nontrivial", "u_squared", "v_nontrivial", "v_infinite",
                                            "u_kernel", "v_kernel", "u_image", "v_not_image")]
    assert ids[8:14] == ["ext.build", "ext.embedding", "ext.hyperbolic", "ext.elementary",
                         "ext.psi_tilde", "ext.v_image"]
    assert ids[-3:] == ["noninjective", "assumed.relhyp", "assumed.hopfian"]
    assert sum(1 for i in ids if i.startswith("surj.")) == 6
    assert all(e.status in (PASS, ASSUMED) for e in entries)
    assert all(e.citation for e in entries if e.status == ASSUMED)
    assert witness is not None


def test_assemble_nonhopf_second_example(second_plan):
    witness = assemble_nonhopf(second_plan.recipes["second_example"], FAST)
    assert witness.G.is_identity(witness.psi_tilde.apply(witness.kernel_element))
    assert "Andreadakis" in witness.hopfian_assumption


def test_b_squared_variant_needs_adapted_witness(second_plan):
    inp = second_plan.recipes["second_example_b2"]
    assert assemble_nonhopf(inp, FAST) is not None
    a = inp.H.generator("a")
    lookup = {**{g.name: g for g in inp.H.generators}, "x": inp.x, "t": inp.t}
    literal = resolve_word(parse_word("s t [[s a s^-1, b], x] t^-1 a s^-1"), lookup.__getitem__)
    broken = dataclasses.replace(inp, witnesses={**inp.witnesses, a: literal})
    with pytest.raises(SurjectivityWitnessFailed):
        assemble_nonhopf(broken, FAST)


def test_missing_witness_fails(first_plan):
    inp = first_plan.recipes["first_example"]
    c = inp.H.generator("c")
    partial = dataclasses.replace(inp, witnesses={g: v for g, v in inp.witnesses.items() if g != c})
    with pytest.raises(SurjectivityWitnessFailed):
        assemble_nonhopf(partial, FAST)
