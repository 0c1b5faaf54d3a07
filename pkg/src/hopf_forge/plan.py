"""Elaborating parsed plans into towers, morphisms and recipe inputs, and running them."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import dsl
from .cosets import FinitePresentation
from .errors import (
    AssocValidationFailed,
    GeneratorClash,
    HopfForgeError,
    InvalidCertificate,
    ResolveError,
    UndefinedName,
    UnknownGenerator,
)
from .morphism import Endomorphism, QuotientCertificate, relator_results
from .recipe import DEFAULT_BOUNDS, EMBEDDING_SAMPLES, DEFAULT_HOPFIAN_CITATION, RecipeInput, run_recipe
from .report import FAIL, PASS, Entry, VerificationReport, timed_entry
from .tower import (
    INFINITE,
    BaseAutomorphism,
    CyclicAssoc,
    FiniteNode,
    FreeAbelianNode,
    FreeNode,
    FreeProductNode,
    GroupNode,
    HnnAutoNode,
    format_order,
    hnn,
    invert_automorphism,
)
from .words import EMPTY, Word, commutator, format_word


def resolve_word(expr: dsl.WordExpr, lookup) -> Word:
    out = EMPTY
    for atom in expr.atoms:
        if isinstance(atom, dsl.One):
            continue
        if isinstance(atom, dsl.Letter):
            out = out * Word.gen(lookup(atom.name), atom.exp)
        elif isinstance(atom, dsl.Group):
            out = out * resolve_word(atom.word, lookup) ** atom.exp
        else:
            c = commutator(resolve_word(atom.left, lookup), resolve_word(atom.right, lookup))
            out = out * c ** atom.exp
    return out


def node_lookup(node: GroupNode):
    def lookup(name):
        try:
            return node.generator(name)
        except UnknownGenerator:
            raise UndefinedName(f"{name!r} is not a generator of {node.name}") from None
    return lookup


def word_in(node: GroupNode, text_or_expr) -> Word:
    expr = dsl.parse_word(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return resolve_word(expr, node_lookup(node))


@dataclass
class Environment:
    plan: dsl.PlanFile
    groups: dict = field(default_factory=dict)
    endos: dict = field(default_factory=dict)
    certs: dict = field(default_factory=dict)
    recipes: dict = field(default_factory=dict)
    # construction-time validation entries, keyed by declaration index
    construction: dict = field(default_factory=dict)


def _images(node: GroupNode, pairs, value_lookup):
    images = {}
    key_lookup = node_lookup(node)
    for name, expr in pairs:
        images[key_lookup(name)] = resolve_word(expr, value_lookup)
    return images


def _build_group(env: Environment, d: dsl.GroupDecl) -> tuple[GroupNode, str]:
    b = d.body
    if isinstance(b, dsl.Presentation):
        scratch = FreeNode(d.name, b.gens)
        rels = tuple(resolve_word(r, node_lookup(scratch)) for r in b.rels)
        node = FiniteNode(d.name, FinitePresentation(scratch.generators, rels))
        return node, f"coset enumeration closed: order {node.table.order}"
    if isinstance(b, dsl.Free):
        return FreeNode(d.name, b.names), f"free group of rank {len(b.names)}"
    if isinstance(b, dsl.FreeAbelian):
        return FreeAbelianNode(d.name, b.names), f"free abelian group of rank {len(b.names)}"
    if isinstance(b, dsl.FreeProduct):
        node = FreeProductNode(d.name, env.groups[b.left], env.groups[b.right])
        return node, f"free product {b.left} * {b.right}"
    base = env.groups[b.base]
    if base.has_generator(b.stable):
        raise GeneratorClash(f"stable letter {b.stable!r} is already a generator of {base.name}")
    if isinstance(b.assoc, dsl.CyclicSyntax):
        lookup = node_lookup(base)
        a, c = resolve_word(b.assoc.a, lookup), resolve_word(b.assoc.b, lookup)
        node = hnn(d.name, base, b.stable, CyclicAssoc(a, c))
        return node, (f"{b.stable}^-1 ({format_word(a)})^k {b.stable} = ({format_word(c)})^k; "
                      f"both associated elements have infinite order in {base.name}")
    images = _images(base, b.assoc.images, node_lookup(base))
    missing = [g.name for g in base.generators if g not in images]
    if missing:
        raise AssocValidationFailed(f"automorphism has no image for {', '.join(missing)}")
    if not isinstance(base, FiniteNode):
        raise AssocValidationFailed("automorphism inverses are only computed over finite bases")
    inverse = invert_automorphism(base, images)
    node = hnn(d.name, base, b.stable, BaseAutomorphism(images, inverse))
    assert isinstance(node, HnnAutoNode)
    inv = ", ".join(f"{g.name} -> {format_word(w)}" for g, w in inverse.items())
    return node, f"automorphism of {base.name} verified with inverse {inv}"


def _build_recipe(env: Environment, d: dsl.RecipeDecl) -> RecipeInput:
    H = env.groups[d.H]
    psi = env.endos[d.psi]
    if psi.domain is not H:
        raise UndefinedName(f"endomorphism {d.psi} is defined on {psi.domain.name}, not {d.H}")
    cdecl = env.certs[d.cert]
    target = env.groups[cdecl.target]
    if not isinstance(target, FiniteNode):
        raise InvalidCertificate(f"certificate target {target.name} is not a finite presentation")
    proj = _images(H, cdecl.images, node_lookup(target))
    cert = QuotientCertificate(H, target, proj)
    lookup = node_lookup(H)
    u, v, y = (resolve_word(w, lookup) for w in (d.u, d.v, d.y))
    inp = RecipeInput(d.name, H, psi, u, v, y, cert, {}, d.hopfian or DEFAULT_HOPFIAN_CITATION)
    extra = {inp.x.name: inp.x, inp.t.name: inp.t}
    for name in extra:
        if H.has_generator(name):
            raise GeneratorClash(f"{d.H} already has a generator named {name!r}")

    def ext_lookup(name):
        return extra[name] if name in extra else lookup(name)

    witnesses = {}
    for name, expr in d.witness:
        witnesses[ext_lookup(name)] = resolve_word(expr, ext_lookup)
    inp.witnesses = witnesses
    return inp


def resolve(plan: dsl.PlanFile) -> Environment:
    env = Environment(plan)
    for index, d in enumerate(plan.declarations):
        start = time.perf_counter()
        entry = None
        try:
            if isinstance(d, dsl.GroupDecl):
                node, evidence = _build_group(env, d)
                env.groups[d.name] = node
                entry = Entry(f"group.{d.name}", f"group {d.name} constructed ({node.kind})", PASS, evidence)
            elif isinstance(d, dsl.EndoDecl):
                node = env.groups[d.group]
                images = _images(node, d.images, node_lookup(node))
                env.endos[d.name] = Endomorphism.build(node, images)
            elif isinstance(d, dsl.CertDecl):
                env.certs[d.name] = d
            elif isinstance(d, dsl.RecipeDecl):
                inp = _build_recipe(env, d)
                env.recipes[d.name] = inp
                target = inp.cert.target
                entry = Entry(f"{d.name}.cert", "certificate projection respects every relator of H", PASS,
                              f"projection onto {target.name} (order {target.table.order}) "
                              f"checked on {len(inp.H.relators)} relators")
            else:
                node = env.groups[d.assertion.group]
                for w in d.assertion.words:
                    word_in(node, w)
        except HopfForgeError as exc:
            raise ResolveError(d.span[0] if d.span else None, exc) from exc
        except RecursionError as exc:
            raise ResolveError(d.span[0] if d.span else None, HopfForgeError("nesting too deep")) from exc
        if entry is not None:
            entry.elapsed_ms = int(round((time.perf_counter() - start) * 1000))
            env.construction[index] = entry
    return env


def load(text: str) -> Environment:
    return resolve(dsl.parse(text))


# ---------------------------------------------------------------------------
# running


@dataclass
class RunOptions:
    seed: int = 0
    bounds: tuple = DEFAULT_BOUNDS
    samples: int = EMBEDDING_SAMPLES


def _check_entry(env: Environment, index: int, d: dsl.CheckDecl) -> Entry:
    a = d.assertion
    node = env.groups[a.group]
    words = [word_in(node, w) for w in a.words]

    def run():
        w = words[0]
        if a.kind == "equal":
            return node.are_equal(w, words[1]), f"u v^-1 reduces to {format_word(node.reduce(w * words[1].inverse()))}"
        if a.kind == "not_equal":
            return not node.are_equal(w, words[1]), f"u v^-1 reduces to {format_word(node.reduce(w * words[1].inverse()))}"
        if a.kind == "identity":
            return node.is_identity(w), f"reduces to {format_word(node.reduce(w))}"
        if a.kind == "nontrivial":
            return not node.is_identity(w), f"reduces to {format_word(node.reduce(w))}"
        if a.kind == "order":
            n = node.order(w)
            want = INFINITE if a.expected == "infinite" else a.expected
            return n == want, f"order = {format_order(n)}"
        n = node.cyclic_member(w, words[1])
        want = None if a.expected == "none" else a.expected
        return n == want, f"cyclic_member = {'none' if n is None else n}"

    return timed_entry(f"check.{index}", d.label, run)


def run(env: Environment, options: RunOptions | None = None, plan_name: str = "plan") -> VerificationReport:
    options = options or RunOptions()
    report = VerificationReport(plan_name)
    checks = 0
    for index, d in enumerate(env.plan.declarations):
        if index in env.construction:
            report.add(env.construction[index])
        if isinstance(d, dsl.EndoDecl):
            e = env.endos[d.name]
            for i, (rel, img, ok) in enumerate(relator_results(e.domain, e.images), 1):
                report.add(Entry(f"endo.{d.name}.relator.{i}", f"{d.name} preserves relator {format_word(rel)}",
                                 PASS if ok else FAIL, f"image reduces to {format_word(img)}"))
        elif isinstance(d, dsl.RecipeDecl):
            entries, witness = run_recipe(env.recipes[d.name], options.bounds, options.seed, options.samples)
            report.extend(entries)
            report.has_witness = report.has_witness or witness is not None
        elif isinstance(d, dsl.CheckDecl):
            checks += 1
            report.add(_check_entry(env, checks, d))
    return report
