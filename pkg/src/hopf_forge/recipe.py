"""The image-extension construction and the non-Hopf witness built from it.

Given an endomorphism psi of H and elements u, v of H, the extension is

    G = < H * <x>, t | t^-1 v t = [u, x] >,

and psi extends to G by fixing x and t.  Everything here is mechanical
checking; relative hyperbolicity of G and Hopfian-ness of H are recorded as
assumptions, never claimed as computed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    HypothesesNotChecked,
    NonInjectivityFailed,
    SurjectivityWitnessFailed,
    TrivialU,
    WitnessIncomplete,
)
from .morphism import Endomorphism, QuotientCertificate, image_generators, nonmembership_evidence
from .report import ASSUMED, FAIL, INCONCLUSIVE, PASS, Entry, VerificationReport, timed_entry
from .tower import INFINITE, CyclicAssoc, FreeNode, FreeProductNode, GroupNode, format_order, hnn
from .words import EMPTY, GeneratorId, Word, commutator, format_word

DEFAULT_BOUNDS = (4, 2)
EMBEDDING_SAMPLES = 200

RELHYP_CITATION = ("G is hyperbolic relative to H by the elementary-subgroup embedding theorem and the "
                   "HNN combination theorem for relatively hyperbolic groups (Osin); only their premises "
                   "are machine-checked here")
DEFAULT_HOPFIAN_CITATION = "Hopfian-ness of H is an external result; no citation supplied"


def extension_generators(name: str) -> tuple[GeneratorId, GeneratorId]:
    """The ``x`` and ``t`` generator ids the extension built for recipe ``name`` will use."""
    return GeneratorId("x", f"{name}.X"), GeneratorId("t", f"{name}.G")


@dataclass
class RecipeInput:
    name: str
    H: GroupNode
    psi: Endomorphism
    u: Word
    v: Word
    y: Word
    cert: QuotientCertificate
    witnesses: Mapping = field(default_factory=dict)
    hopfian_citation: str = DEFAULT_HOPFIAN_CITATION

    def __post_init__(self):
        if self.psi.domain is not self.H:
            raise ValueError(f"psi is an endomorphism of {self.psi.domain.name}, not {self.H.name}")
        for w in (self.u, self.v, self.y):
            self.H.check(w)
        self.x, self.t = extension_generators(self.name)


@dataclass
class NonHopfWitness:
    G: GroupNode
    psi_tilde: Endomorphism
    kernel_element: Word
    checks: VerificationReport
    hopfian_assumption: str


def free_product_with_x(H: GroupNode, name: str | None = None) -> tuple[FreeProductNode, Word]:
    """``H * <x>`` together with the word ``x``."""
    name = name or f"{H.name}*X"
    X = FreeNode(f"{name}.X", ["x"])
    return FreeProductNode(name, H, X), Word.gen(X.generators[0])


# ---------------------------------------------------------------------------
# hypotheses


def check_hypotheses(inp: RecipeInput) -> VerificationReport:
    H, psi, u, v, y = inp.H, inp.psi, inp.u, inp.v, inp.y
    report = VerificationReport(inp.name)
    p = f"{inp.name}.hyp"

    def nontrivial(w):
        return lambda: (not H.is_identity(w), f"reduced form {format_word(H.reduce(w))}")

    def u_squared():
        n = H.order(u)
        return not H.is_identity(u ** 2), f"order(u) = {format_order(n)}; u^2 reduces to {format_word(H.reduce(u ** 2))}"

    def v_infinite():
        n = H.order(v)
        conj, core = H.cyclic_reduce(v)
        return n == INFINITE, f"order(v) = {format_order(n)}; cyclically reduced core {format_word(core)}"

    def kernel(w):
        def run():
            img = psi.apply(w)
            return H.is_identity(img), f"psi image {format_word(img)} reduces to {format_word(H.reduce(img))}"
        return run

    def preimage():
        img = psi.apply(y)
        return H.are_equal(img, u), f"psi(y) = {format_word(img)}; psi(y) u^-1 reduces to {format_word(H.reduce(img * u.inverse()))}"

    def nonmember():
        outside, idx, closure = nonmembership_evidence(H, image_generators(psi), v, inp.cert)
        table = inp.cert.target.table
        evidence = (f"v maps to {format_word(table.representatives[idx])} in {inp.cert.target.name} "
                    f"(order {table.order}); image subgroup closure has {len(closure)} elements: "
                    + ", ".join(format_word(table.representatives[i]) for i in sorted(closure)))
        return (PASS if outside else INCONCLUSIVE), evidence

    report.check(f"{p}.u_nontrivial", "u != 1 in H", nontrivial(u))
    report.check(f"{p}.u_squared", "u^2 != 1 in H", u_squared)
    report.check(f"{p}.v_nontrivial", "v != 1 in H", nontrivial(v))
    report.check(f"{p}.v_infinite", "v has infinite order in H", v_infinite)
    report.check(f"{p}.u_kernel", "u in ker psi", kernel(u))
    report.check(f"{p}.v_kernel", "v in ker psi", kernel(v))
    report.check(f"{p}.u_image", "u in im psi (psi(y) = u)", preimage)
    report.check(f"{p}.v_not_image", "v not in im psi (finite quotient certificate)", nonmember)
    return report


# ---------------------------------------------------------------------------
# construction


def build_extension(inp: RecipeInput, hypotheses: VerificationReport | None) -> GroupNode:
    if hypotheses is None or hypotheses.plan_name != inp.name or not hypotheses.entries:
        raise HypothesesNotChecked(f"hypotheses of recipe {inp.name} have not been checked")
    if not hypotheses.all_passed:
        failed = ", ".join(e.id for e in hypotheses.failed)
        raise HypothesesNotChecked(f"hypotheses failed: {failed}")
    X = FreeNode(inp.x.scope, [inp.x.name])
    HX = FreeProductNode(f"{inp.name}.HX", inp.H, X)
    x = Word.gen(inp.x)
    return hnn(inp.t.scope, HX, inp.t.name, CyclicAssoc(inp.v, commutator(inp.u, x)))


def extend_endomorphism(inp: RecipeInput, G: GroupNode) -> Endomorphism:
    images = dict(inp.psi.images)
    images[inp.x] = Word.gen(inp.x)
    images[inp.t] = Word.gen(inp.t)
    return Endomorphism.build(G, images)


def certify_hyperbolic(H: GroupNode, u: Word, HX: FreeProductNode | None = None) -> bool:
    """``[u, x]`` is cyclically reduced with at least two syllables in ``H * <x>``."""
    return hyperbolic_syllables(H, u, HX) >= 2


def hyperbolic_syllables(H: GroupNode, u: Word, HX: FreeProductNode | None = None) -> int:
    if H.is_identity(u):
        raise TrivialU(f"u = {format_word(u)} is trivial in {H.name}")
    if HX is None:
        HX, x = free_product_with_x(H)
    else:
        x = Word.gen(HX.factors[1].generators[0])
    _, core = HX._cyclic_syllables(commutator(u, x))
    return len(core)


def enumerate_reduced_words(generators, max_len: int):
    """Freely reduced words with letters ``g^{+-1}``, length-lexicographic."""
    alphabet = [(g, s) for g in generators for s in (1, -1)]
    yield EMPTY
    for length in range(1, max_len + 1):
        for letters in itertools.product(alphabet, repeat=length):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(letters, letters[1:])):
                continue
            yield Word(letters)


def elementary_search(H: GroupNode, u: Word, max_len: int, max_pow: int,
                      HX: FreeProductNode | None = None, stats: dict | None = None) -> list:
    """Words f outside <[u,x]> with f [u,x]^n f^-1 = [u,x]^{+-n} for some 1 <= n <= max_pow."""
    if H.is_identity(u):
        raise TrivialU(f"u = {format_word(u)} is trivial in {H.name}")
    if HX is None:
        HX, x = free_product_with_x(H)
    else:
        x = Word.gen(HX.factors[1].generators[0])
    g = commutator(u, x)
    powers = [(g ** n, g ** (-n)) for n in range(1, max_pow + 1)]
    found = []
    examined = skipped = 0
    for f in enumerate_reduced_words(HX.generators, max_len):
        examined += 1
        if HX._cyclic_member(g, f) is not None:
            skipped += 1
            continue
        finv = f.inverse()
        for pos, neg in powers:
            conj = f * pos * finv
            if HX._is_identity(conj * neg) or HX._is_identity(conj * pos):
                found.append(f)
                break
    if stats is not None:
        stats.update(examined=examined, in_cyclic_subgroup=skipped)
    return found


# ---------------------------------------------------------------------------
# full run


def _random_word(rng: random.Random, generators, max_len: int) -> Word:
    length = rng.randint(1, max_len)
    return Word((rng.choice(generators), rng.choice((1, -1))) for _ in range(length))


def run_recipe(inp: RecipeInput, bounds=DEFAULT_BOUNDS, seed: int = 0,
               samples: int = EMBEDDING_SAMPLES) -> tuple[list, NonHopfWitness | None]:
    """Every recipe stage as report entries, in order; the witness if all pass."""
    p = inp.name
    hyp = check_hypotheses(inp)
    entries = list(hyp.entries)
    state: dict = {}

    def build():
        G = build_extension(inp, hyp)
        state["G"] = G
        rel = G.relators[-1]
        return True, (f"G = {G.name}: HNN of {G.base.name} with t^-1 v t = [u,x]; "
                      f"both associated elements have infinite order; new relator {format_word(rel)}")

    entries.append(timed_entry(f"{p}.ext.build", "G = <H, x, t | t^-1 v t = [u,x]> constructed", build))
    G = state.get("G")

    def skipped():
        return FAIL, "skipped: extension was not constructed"

    def need_g(fn):
        return fn if G is not None else skipped

    def embedding():
        rng = random.Random(seed)
        gens = list(inp.H.generators)
        checked = 0
        attempts = 0
        while checked < samples and attempts < samples * 20:
            attempts += 1
            h = _random_word(rng, gens, 12)
            if inp.H.is_identity(h):
                continue
            checked += 1
            if G.is_identity(h):
                return False, f"{format_word(h)} is nontrivial in H but trivial in G"
        return checked == samples, f"{checked} random nontrivial words of H (seed {seed}) remain nontrivial in G"

    entries.append(timed_entry(f"{p}.ext.embedding", "H embeds in G (sampled)", need_g(embedding)))

    def hyperbolic():
        n = hyperbolic_syllables(inp.H, inp.u, G.base)
        return n >= 2, f"[u,x] is cyclically reduced in H * <x> with {n} syllables"

    entries.append(timed_entry(f"{p}.ext.hyperbolic", "[u,x] is a hyperbolic element of H * <x>",
                               need_g(hyperbolic)))

    def elementary():
        stats: dict = {}
        found = elementary_search(inp.H, inp.u, bounds[0], bounds[1], G.base, stats)
        ev = (f"max_len={bounds[0]}, max_pow={bounds[1]}: {stats['examined']} words examined, "
              f"{stats['in_cyclic_subgroup']} in <[u,x]>, {len(found)} counterexamples")
        if found:
            ev += ": " + "; ".join(format_word(f) for f in found[:5])
        return not found, ev

    entries.append(timed_entry(f"{p}.ext.elementary", "E([u,x]) = <[u,x]> (bounded search)",
                               need_g(elementary)))

    def psi_tilde():
        e = extend_endomorphism(inp, G)
        state["psi_tilde"] = e
        return True, f"all {len(G.relators)} relators of G map to the identity"

    entries.append(timed_entry(f"{p}.ext.psi_tilde", "psi~ (psi on H, x -> x, t -> t) is an endomorphism of G",
                               need_g(psi_tilde)))
    e = state.get("psi_tilde")

    def need_e(fn):
        if e is None:
            return lambda: (FAIL, "skipped: psi~ is not a verified endomorphism")
        return fn

    x, t = Word.gen(inp.x), Word.gen(inp.t)

    def v_in_image():
        w = t * commutator(inp.y, x) * t.inverse()
        img = e.apply(w)
        return G.are_equal(img, inp.v), f"psi~(t [y,x] t^-1) = {format_word(img)}"

    entries.append(timed_entry(f"{p}.ext.v_image", "v in im psi~", need_e(v_in_image)))

    targets = list(inp.H.generators) + [inp.x, inp.t]
    for g in targets:
        def surj(g=g):
            if g in inp.witnesses:
                wit = inp.witnesses[g]
            elif g in (inp.x, inp.t):
                wit = Word.gen(g)
            else:
                return False, f"no surjectivity witness supplied for {g.name}"
            img = e.apply(wit)
            return G.are_equal(img, Word.gen(g)), (
                f"witness {format_word(wit)} maps to {format_word(img)}; "
                f"image times {g.name}^-1 reduces to {format_word(G.reduce(img * Word.gen(g, -1)))}")
        entries.append(timed_entry(f"{p}.surj.{g.name}", f"{g.name} in im psi~", need_e(surj)))

    def noninjective():
        img = e.apply(inp.u)
        ok = G.is_identity(img) and not G.is_identity(inp.u)
        return ok, f"psi~(u) = {format_word(img)} is trivial in G; u reduces to {format_word(G.reduce(inp.u))} in G"

    entries.append(timed_entry(f"{p}.noninjective", "psi~(u) = 1 and u != 1 in G", need_e(noninjective)))

    entries.append(Entry(f"{p}.assumed.relhyp", "G is hyperbolic relative to H", ASSUMED,
                         f"assumed: {RELHYP_CITATION}", 0, RELHYP_CITATION))
    entries.append(Entry(f"{p}.assumed.hopfian", "H is Hopfian", ASSUMED,
                         f"assumed: {inp.hopfian_citation}", 0, inp.hopfian_citation))

    witness = None
    if all(en.status in (PASS, ASSUMED) for en in entries):
        checks = VerificationReport(inp.name, list(entries), has_witness=True)
        witness = NonHopfWitness(G, e, inp.u, checks, inp.hopfian_citation)
    return entries, witness


def assemble_nonhopf(inp: RecipeInput, bounds=DEFAULT_BOUNDS, seed: int = 0) -> NonHopfWitness:
    entries, witness = run_recipe(inp, bounds, seed)
    if witness is not None:
        return witness
    failed = [en for en in entries if en.status not in (PASS, ASSUMED)]
    ids = ", ".join(en.id for en in failed)
    if any(".hyp." in en.id for en in failed):
        raise HypothesesNotChecked(f"hypotheses failed: {ids}")
    if any(".surj." in en.id for en in failed):
        raise SurjectivityWitnessFailed(ids)
    if any(en.id.endswith(".noninjective") for en in failed):
        raise NonInjectivityFailed(ids)
    raise WitnessIncomplete(ids)

