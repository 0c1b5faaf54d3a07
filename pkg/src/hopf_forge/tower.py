"""Word-problem engine over towers of group constructions.

Every node decides triviality of words over its visible generators:

* ``FiniteNode``      -- a finite group, via its enumerated multiplication table
* ``FreeAbelianNode`` -- exponent vectors
* ``FreeNode``        -- free reduction
* ``FreeProductNode`` -- syllable normal form
* ``HnnNode``         -- HNN extension with infinite cyclic associated subgroups,
  decided by Britton reduction (pinch removal)
* ``HnnAutoNode``     -- HNN extension along an automorphism of the whole base,
  normal form ``t^n h``

Equality is decided as triviality of ``u v^-1``; Britton-reduced words are not
unique normal forms, so they are never compared directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import groupby
from typing import Mapping

from .cosets import FinitePresentation, MultiplicationTable, element_order, enumerate_group
from .errors import (
    AssocValidationFailed,
    BoundUnavailable,
    GeneratorClash,
    NotAFreeProduct,
    TrivialGenerator,
    UnknownGenerator,
    WordTooLong,
)
from .words import EMPTY, GeneratorId, Word, commutator, cyclically_reduce, format_word, substitute

INFINITE = math.inf

_CACHE_LIMIT = 200_000
# Britton reduction keeps one entry per stable letter
MAX_STABLE_LETTERS = 1_000_000


def format_order(n) -> str:
    return "Infinite" if n == INFINITE else str(n)


class GroupNode:
    kind = "abstract"

    def __init__(self, name: str, generators):
        self.name = name
        self.generators = tuple(generators)
        self._gen_set = frozenset(self.generators)
        self._by_name: dict = {}
        for g in self.generators:
            if g.name in self._by_name:
                raise GeneratorClash(f"generator name {g.name!r} is visible twice in {name}")
            self._by_name[g.name] = g
        self._reduce_cache: dict = {}
        self._relators = None

    # ---- lookup ---------------------------------------------------------

    def generator(self, name: str) -> GeneratorId:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownGenerator(f"{name!r} is not a generator of {self.name}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._by_name

    def check(self, w: Word) -> Word:
        for g, _ in w.letters:
            if g not in self._gen_set:
                raise UnknownGenerator(f"{g.name!r} is not a generator of {self.name}")
        return w

    @property
    def relators(self) -> tuple:
        if self._relators is None:
            self._relators = tuple(self._build_relators())
        return self._relators

    def _build_relators(self):
        return ()

    # ---- public decision procedures ---------------------------------------

    def reduce(self, w: Word) -> Word:
        return self._reduce(self.check(w))

    def is_identity(self, w: Word) -> bool:
        return self._is_identity(self.check(w))

    def are_equal(self, u: Word, v: Word) -> bool:
        return self.is_identity(u * v.inverse())

    def order(self, w: Word):
        return self._order(self.check(w))

    def cyclic_member(self, g: Word, w: Word):
        self.check(g)
        self.check(w)
        if self._is_identity(g):
            raise TrivialGenerator(f"{format_word(g)} is trivial in {self.name}")
        return self._cyclic_member(g, w)

    def cyclic_reduce(self, w: Word) -> tuple[Word, Word]:
        """``(conj, core)`` with ``w = conj core conj^-1`` and ``core`` cyclically reduced."""
        return self._cyclic_reduce(self.check(w))

    # ---- internals (no generator checks) ----------------------------------

    def _reduce(self, w: Word) -> Word:
        cache = self._reduce_cache
        hit = cache.get(w)
        if hit is None:
            if len(cache) > _CACHE_LIMIT:
                cache.clear()
            hit = cache[w] = self._reduce_impl(w)
        return hit

    def _reduce_impl(self, w: Word) -> Word:
        raise NotImplementedError

    def _is_identity(self, w: Word) -> bool:
        # every _reduce_impl returns the empty word exactly for the identity
        return not self._reduce(w)

    def _order(self, w: Word):
        raise NotImplementedError

    def _cyclic_member(self, g: Word, w: Word):
        raise BoundUnavailable(f"no membership bound for node kind {self.kind}")

    def _cyclic_reduce(self, w: Word) -> tuple[Word, Word]:
        return EMPTY, self._reduce(w)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "generators": [g.name for g in self.generators],
            "relators": [format_word(r) for r in self.relators],
        }

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------------------
# base nodes


class FiniteNode(GroupNode):
    kind = "finite"

    def __init__(self, name: str, presentation: FinitePresentation, table: MultiplicationTable | None = None,
                 max_cosets: int | None = None):
        super().__init__(name, presentation.generators)
        self.presentation = presentation
        self.table = table if table is not None else enumerate_group(presentation, max_cosets)

    def _build_relators(self):
        return self.presentation.relators

    def index(self, w: Word) -> int:
        return self.table.act(0, self.check(w))

    def _reduce_impl(self, w):
        return self.table.representatives[self.table.act(0, w)]

    def _is_identity(self, w):
        return self.table.act(0, w) == 0

    def _order(self, w):
        return element_order(self.table, w)

    def _cyclic_member(self, g, w):
        t = self.table
        gi, wi = t.act(0, g), t.act(0, w)
        cur = 0
        for n in range(t.order):
            if cur == wi:
                return n
            cur = t.multiply(cur, gi)
        return None

    def to_json(self):
        data = super().to_json()
        data["table"] = self.table.to_json()
        return data


class FreeAbelianNode(GroupNode):
    kind = "free_abelian"

    def __init__(self, name: str, names):
        super().__init__(name, [GeneratorId(n, name) for n in names])
        self._pos = {g: i for i, g in enumerate(self.generators)}

    def _build_relators(self):
        gens = [Word.gen(g) for g in self.generators]
        return [commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]

    def vector(self, w: Word) -> tuple:
        vec = [0] * len(self.generators)
        for g, e in w.letters:
            vec[self._pos[g]] += e
        return tuple(vec)

    def _reduce_impl(self, w):
        return Word._raw(tuple((g, e) for g, e in zip(self.generators, self.vector(w)) if e))

    def _order(self, w):
        return 1 if not any(self.vector(w)) else INFINITE

    def _cyclic_member(self, g, w):
        gv, wv = self.vector(g), self.vector(w)
        i = next(i for i, e in enumerate(gv) if e)
        if wv[i] % gv[i]:
            return None
        n = wv[i] // gv[i]
        return n if all(b == n * a for a, b in zip(gv, wv)) else None


class FreeNode(GroupNode):
    kind = "free"

    def __init__(self, name: str, names):
        super().__init__(name, [GeneratorId(n, name) for n in names])

    def _reduce_impl(self, w):
        return w

    def _order(self, w):
        return 1 if not w else INFINITE

    def _cyclic_reduce(self, w):
        return cyclically_reduce(w)

    def _cyclic_member(self, g, w):
        conj, core = cyclically_reduce(g)
        wp = conj.inverse() * w * conj
        size = len(core)
        # a power of a cyclically reduced word has no cancellation
        if len(wp) % size:
            return None
        m = len(wp) // size
        for n in dict.fromkeys((m, -m)):
            if wp == core ** n:
                return n
        return None


# ---------------------------------------------------------------------------
# free products


class FreeProductNode(GroupNode):
    kind = "free_product"

    def __init__(self, name: str, left: GroupNode, right: GroupNode):
        if left._gen_set & right._gen_set:
            raise GeneratorClash(f"factors {left.name} and {right.name} share generators")
        super().__init__(name, left.generators + right.generators)
        self.factors = (left, right)
        self._side = {g: 0 for g in left.generators}
        self._side.update({g: 1 for g in right.generators})

    def _build_relators(self):
        return self.factors[0].relators + self.factors[1].relators

    def _syllables(self, w: Word) -> list:
        side_of = self._side
        stack: list = []
        for side, run in groupby(w.letters, key=lambda letter: side_of[letter[0]]):
            factor = self.factors[side]
            piece = Word._raw(tuple(run))
            if stack and stack[-1][0] == side:
                merged = factor._reduce(stack[-1][1] * piece)
                if merged:
                    stack[-1] = (side, merged)
                else:
                    stack.pop()
            else:
                piece = factor._reduce(piece)
                if piece:
                    stack.append((side, piece))
        return stack

    @staticmethod
    def _join(syls) -> Word:
        out = []
        for _, s in syls:
            out.extend(s.letters)
        return Word._raw(tuple(out))

    def syllables(self, w: Word) -> list:
        return [(self.factors[side].name, s) for side, s in self._syllables(self.check(w))]

    def _reduce_impl(self, w):
        return self._join(self._syllables(w))

    def _cyclic_syllables(self, w):
        syls = self._syllables(w)
        conj = EMPTY
        while len(syls) >= 2 and syls[0][0] == syls[-1][0]:
            side, last = syls[-1]
            conj = conj * last.inverse()
            merged = self.factors[side]._reduce(last * syls[0][1])
            syls = ([(side, merged)] if merged else []) + syls[1:-1]
        return conj, syls

    def _cyclic_reduce(self, w):
        conj, syls = self._cyclic_syllables(w)
        return conj, self._join(syls)

    def _order(self, w):
        _, syls = self._cyclic_syllables(w)
        if not syls:
            return 1
        if len(syls) == 1:
            side, s = syls[0]
            return self.factors[side]._order(s)
        return INFINITE

    def membership_bound(self, g: Word, w: Word) -> int:
        _, core = self._cyclic_syllables(g)
        return len(self._syllables(w)) // max(len(core), 1) + 2

    def _cyclic_member(self, g, w):
        conj, core = self._cyclic_syllables(g)
        wp = self._reduce(conj.inverse() * w * conj)
        wsyl = self._syllables(wp)
        if len(core) == 1:
            side, gs = core[0]
            if not wsyl:
                return 0
            if len(wsyl) == 1 and wsyl[0][0] == side:
                return self.factors[side]._cyclic_member(gs, wsyl[0][1])
            return None
        ell = len(core)
        bound = len(wsyl) // ell + 2
        # g' is cyclically reduced with >= 2 syllables, so g'^n has exactly |n|*ell syllables
        if len(wsyl) % ell:
            return None
        m = len(wsyl) // ell
        core_word = self._join(core)
        for n in dict.fromkeys((m, -m)):
            if abs(n) <= bound and self._is_identity(wp * core_word ** (-n)):
                return n
        return None


# ---------------------------------------------------------------------------
# HNN extensions


@dataclass(frozen=True)
class CyclicAssoc:
    """``t^-1 a^k t = b^k`` for all integers k."""

    a: Word
    b: Word


@dataclass(frozen=True)
class BaseAutomorphism:
    """``t^-1 h t = map(h)`` for every base element h."""

    map: Mapping = field(hash=False)
    inverse_map: Mapping = field(hash=False)


class HnnBase(GroupNode):
    def __init__(self, name: str, base: GroupNode, stable: str):
        self.base = base
        self.stable = GeneratorId(stable, name)
        super().__init__(name, base.generators + (self.stable,))
        self._stable_word = Word.gen(self.stable)

    def stable_count(self, w: Word) -> int:
        return sum(abs(e) for g, e in w.letters if g == self.stable)


class HnnNode(HnnBase):
    kind = "hnn"

    def __init__(self, name: str, base: GroupNode, stable: str, assoc: CyclicAssoc):
        super().__init__(name, base, stable)
        base.check(assoc.a)
        base.check(assoc.b)
        for label, w in (("first", assoc.a), ("second", assoc.b)):
            if base._order(w) != INFINITE:
                raise AssocValidationFailed(
                    f"{label} associated generator {format_word(w)} does not have infinite order in {base.name}")
        self.assoc = assoc

    def _build_relators(self):
        t = self._stable_word
        return self.base.relators + (t.inverse() * self.assoc.a * t * self.assoc.b.inverse(),)

    def _britton(self, w: Word):
        """Pinch-free decomposition ``h0 t^e1 h1 ... t^en hn`` as (segments, signs)."""
        base, stable = self.base, self.stable
        a, b = self.assoc.a, self.assoc.b
        segs = [EMPTY]
        signs: list = []
        for g, e in w.letters:
            if g != stable:
                segs[-1] = segs[-1] * Word._raw(((g, e),))
                continue
            step = 1 if e > 0 else -1
            if len(signs) + abs(e) > MAX_STABLE_LETTERS:
                raise WordTooLong(f"more than {MAX_STABLE_LETTERS} stable letters {self.stable.name}")
            for i in range(abs(e)):
                if i and signs and signs[-1] == step:
                    # the rest of a same-sign run cannot pinch
                    rest = abs(e) - i
                    signs.extend([step] * rest)
                    segs.extend([EMPTY] * rest)
                    break
                mid = segs[-1] = base._reduce(segs[-1])
                n = None
                if signs and signs[-1] == -step:
                    if step == 1:
                        # t^-1 a^n t -> b^n
                        n = base._cyclic_member(a, mid)
                        repl = b
                    else:
                        # t b^n t^-1 -> a^n
                        n = base._cyclic_member(b, mid)
                        repl = a
                if n is None:
                    signs.append(step)
                    segs.append(EMPTY)
                else:
                    signs.pop()
                    segs.pop()
                    segs[-1] = base._reduce(segs[-1] * repl ** n)
        segs[-1] = base._reduce(segs[-1])
        return segs, signs

    def _assemble(self, segs, signs) -> Word:
        out = segs[0]
        t = self._stable_word
        for s, h in zip(signs, segs[1:]):
            out = out * (t if s > 0 else t.inverse()) * h
        return out

    def _reduce_impl(self, w):
        return self._assemble(*self._britton(w))

    def britton_form(self, w: Word):
        return self._britton(self.check(w))

    def _cyclic_britton(self, w):
        segs, signs = self._britton(w)
        conj = EMPTY
        t = self._stable_word
        while signs:
            block = (t if signs[-1] > 0 else t.inverse()) * segs[-1]
            rotated = block * self._assemble(segs[:-1], signs[:-1])
            nsegs, nsigns = self._britton(rotated)
            if len(nsigns) >= len(signs):
                break
            conj = conj * block.inverse()
            segs, signs = nsegs, nsigns
        return conj, segs, signs

    def _cyclic_reduce(self, w):
        conj, segs, signs = self._cyclic_britton(w)
        return conj, self._assemble(segs, signs)

    def _order(self, w):
        _, segs, signs = self._cyclic_britton(w)
        if signs:
            return INFINITE
        return self.base._order(segs[0])

    def membership_bound(self, g: Word, w: Word):
        _, _, signs = self._cyclic_britton(g)
        if not signs:
            return None
        return len(self._britton(w)[1]) // len(signs) + 2

    def _cyclic_member(self, g, w):
        conj, gsegs, gsigns = self._cyclic_britton(g)
        wp = conj.inverse() * w * conj
        segs, signs = self._britton(wp)
        k = len(gsigns)
        if k == 0:
            if signs:
                return None
            return self.base._cyclic_member(gsegs[0], segs[0])
        # a cyclically reduced core with k stable letters has |n|*k of them in its n-th power
        if len(signs) % k:
            return None
        m = len(signs) // k
        bound = len(signs) // k + 2
        core = self._assemble(gsegs, gsigns)
        sg, sw = sum(gsigns), sum(signs)
        for n in dict.fromkeys((m, -m)):
            if abs(n) > bound or n * sg != sw:
                continue
            if self._is_identity(wp * core ** (-n)):
                return n
        return None

    def to_json(self):
        data = super().to_json()
        data.update(base=self.base.name, stable=self.stable.name,
                    assoc={"type": "cyclic", "a": format_word(self.assoc.a), "b": format_word(self.assoc.b)})
        return data


class HnnAutoNode(HnnBase):
    kind = "hnn_auto"

    def __init__(self, name: str, base: GroupNode, stable: str, assoc: BaseAutomorphism):
        super().__init__(name, base, stable)
        self.assoc = assoc
        self._validate()
        self._phi_cache: dict = {}
        self._period = False

    def _validate(self):
        base, fwd, back = self.base, self.assoc.map, self.assoc.inverse_map
        for label, images in (("map", fwd), ("inverse map", back)):
            missing = [g.name for g in base.generators if g not in images]
            if missing:
                raise AssocValidationFailed(f"{label} has no image for {', '.join(missing)}")
            for img in images.values():
                base.check(img)
            for r in base.relators:
                if not base._is_identity(substitute(r, images)):
                    raise AssocValidationFailed(f"{label} does not respect relator {format_word(r)}")
        for g in base.generators:
            gw = Word.gen(g)
            if not base._is_identity(substitute(fwd[g], back) * gw.inverse()):
                raise AssocValidationFailed(f"maps are not mutually inverse on {g.name}")
            if not base._is_identity(substitute(back[g], fwd) * gw.inverse()):
                raise AssocValidationFailed(f"maps are not mutually inverse on {g.name}")

    def _build_relators(self):
        t = self._stable_word
        return self.base.relators + tuple(
            t.inverse() * Word.gen(g) * t * self.assoc.map[g].inverse() for g in self.base.generators)

    @property
    def period(self):
        """Order of the automorphism when the base is finite, else None."""
        if self._period is False:
            self._period = None
            if isinstance(self.base, FiniteNode):
                # the automorphism permutes a finite set, so some power is the identity
                gens = [Word.gen(g) for g in self.base.generators]
                cur, m = list(gens), 0
                while True:
                    cur = [self.base._reduce(substitute(w, self.assoc.map)) for w in cur]
                    m += 1
                    if all(self.base._is_identity(c * g.inverse()) for c, g in zip(cur, gens)):
                        self._period = m
                        break
        return self._period

    def _phi(self, h: Word, e: int) -> Word:
        if self.period:
            e %= self.period
        key = (h, e)
        hit = self._phi_cache.get(key)
        if hit is None:
            images = self.assoc.map if e > 0 else self.assoc.inverse_map
            out = h
            for _ in range(abs(e)):
                out = self.base._reduce(substitute(out, images))
            if len(self._phi_cache) > _CACHE_LIMIT:
                self._phi_cache.clear()
            hit = self._phi_cache[key] = out
        return hit

    def normal_form(self, w: Word) -> tuple[int, Word]:
        """``(n, h)`` with ``w = t^n h`` and h a reduced base word."""
        n, h = 0, EMPTY
        for g, e in w.letters:
            if g == self.stable:
                # h t^e = t^e phi^e(h)
                h = self._phi(self.base._reduce(h), e)
                n += e
            else:
                h = h * Word._raw(((g, e),))
        return n, self.base._reduce(h)

    def _reduce_impl(self, w):
        n, h = self.normal_form(w)
        return Word.gen(self.stable, n) * h

    def _order(self, w):
        n, h = self.normal_form(w)
        return INFINITE if n else self.base._order(h)

    def _cyclic_member(self, g, w):
        ng, hg = self.normal_form(g)
        nw, hw = self.normal_form(w)
        if ng == 0:
            return None if nw else self.base._cyclic_member(hg, hw)
        if nw % ng:
            return None
        n = nw // ng
        return n if self._is_identity(w * g ** (-n)) else None

    def to_json(self):
        data = super().to_json()
        data.update(base=self.base.name, stable=self.stable.name,
                    assoc={"type": "automorphism",
                           "map": {g.name: format_word(w) for g, w in self.assoc.map.items()}})
        return data


def hnn(name: str, base: GroupNode, stable: str, assoc) -> HnnBase:
    if isinstance(assoc, CyclicAssoc):
        return HnnNode(name, base, stable, assoc)
    return HnnAutoNode(name, base, stable, assoc)


def invert_automorphism(base: FiniteNode, images: Mapping) -> dict:
    """Inverse generator map of an automorphism of a finite group, via its table."""
    t = base.table
    perm = [t.act(0, substitute(rep, images)) for rep in t.representatives]
    if len(set(perm)) != t.order:
        raise AssocValidationFailed("map is not a bijection of the base group")
    preimage = {j: i for i, j in enumerate(perm)}
    return {g: t.representatives[preimage[t.act(0, Word.gen(g))]] for g in base.generators}


# ---------------------------------------------------------------------------
# operation-style entry points


def britton_reduce(node: GroupNode, w: Word) -> Word:
    return node.reduce(w)


def is_identity(node: GroupNode, w: Word) -> bool:
    return node.is_identity(w)


def are_equal(node: GroupNode, u: Word, v: Word) -> bool:
    return node.are_equal(u, v)


def order(node: GroupNode, w: Word):
    return node.order(w)


def cyclic_member(node: GroupNode, g: Word, w: Word):
    return node.cyclic_member(g, w)


def syllables(node: GroupNode, w: Word) -> list:
    if not isinstance(node, FreeProductNode):
        raise NotAFreeProduct(f"{node.name} is not a free product")
    return node.syllables(w)


def find_pinch(node: HnnNode, w: Word):
    """Position of the first pinch in ``w`` read as written, or None."""
    letters = w.expanded()
    stable = node.stable
    positions = [i for i, (g, _) in enumerate(letters) if g == stable]
    for i, j in zip(positions, positions[1:]):
        ei, ej = letters[i][1], letters[j][1]
        if ei != -ej:
            continue
        mid = Word(letters[i + 1:j])
        g = node.assoc.a if ei < 0 else node.assoc.b
        if node.base._cyclic_member(g, mid) is not None:
            return i
    return None
