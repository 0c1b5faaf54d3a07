"""Coset enumeration over the trivial subgroup.

Turns a finite presentation into an explicit permutation action of each
generator on group elements, which is then the ground-truth word-problem
oracle for finite base groups.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .errors import CosetOverflow, EmptyPresentation, UnknownGenerator
from .words import EMPTY, GeneratorId, Word, cyclically_reduce, format_word

DEFAULT_MAX_COSETS = 100_000
# relators are scanned letter by letter, so their expanded length is capped
MAX_RELATOR_LETTERS = 1_000_000


def default_max_cosets() -> int:
    value = os.environ.get("HOPF_FORGE_MAX_COSETS")
    return int(value) if value else DEFAULT_MAX_COSETS


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = set(self.generators)
        rels = []
        for r in self.relators:
            extra = r.generators() - gens
            if extra:
                names = ", ".join(sorted(g.name for g in extra))
                raise UnknownGenerator(f"relator {format_word(r)} uses undeclared {names}")
            _, core = cyclically_reduce(r)
            if core:
                rels.append(core)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(rels))


class MultiplicationTable:
    """Right-regular action of a finite group on its element indices.

    Index 0 is the identity.  ``action[i][j]`` is the index of element ``i``
    times generator ``j``; ``inverse_action`` is the same for inverses.
    """

    def __init__(self, generators, action, inverse_action, representatives):
        self.generators = tuple(generators)
        self.action = action
        self.inverse_action = inverse_action
        self.representatives = representatives
        self._column = {g: j for j, g in enumerate(self.generators)}
        self._gen_order = [self._perm_order(row) for row in zip(*action)] if action else []

    @property
    def order(self) -> int:
        return len(self.action)

    @staticmethod
    def _perm_order(perm) -> int:
        # order of the permutation i -> perm[i] restricted to the orbit of 0,
        # which for a regular action is the order of the generator
        n, i = 1, perm[0]
        while i != 0:
            i = perm[i]
            n += 1
        return n

    def column(self, g: GeneratorId) -> int:
        try:
            return self._column[g]
        except KeyError:
            raise UnknownGenerator(f"generator {g.name!r} not in table") from None

    def act(self, index: int, w: Word) -> int:
        for g, e in w.letters:
            j = self.column(g)
            e %= self._gen_order[j]
            for _ in range(e):
                index = self.action[index][j]
        return index

    def multiply(self, i: int, j: int) -> int:
        return self.act(i, self.representatives[j])

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "generators": [g.name for g in self.generators],
            "action": [list(row) for row in self.action],
            "representatives": [format_word(r) for r in self.representatives],
        }


def enumerate_group(p: FinitePresentation, max_cosets: int | None = None) -> MultiplicationTable:
    """Todd-Coxeter (HLT with coincidence handling) over the trivial subgroup."""
    if max_cosets is None:
        max_cosets = default_max_cosets()
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    ngens = len(p.generators)
    if ngens == 0:
        raise EmptyPresentation("presentation has no generators")
    col = {g: 2 * j for j, g in enumerate(p.generators)}
    ncols = 2 * ngens

    def letters(w):
        return [col[g] ^ (0 if s > 0 else 1) for g, s in w.expanded()]

    total = sum(len(r) for r in p.relators)
    if total > MAX_RELATOR_LETTERS:
        raise CosetOverflow(f"relators have {total} letters in all; the scan limit is {MAX_RELATOR_LETTERS}")
    relators = [letters(r) for r in p.relators]

    table: list = [[None] * ncols]
    parent = [0]

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        if len(table) >= max_cosets:
            raise CosetOverflow(f"coset limit {max_cosets} exceeded")
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c

    def merge(k, l, queue):
        k, l = find(k), find(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        parent[l] = k
        queue.append(l)

    def coincidence(a, b):
        queue: list = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][x ^ 1] = None
                mu, nu = find(g), find(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(c, rel):
        f, i = c, 0
        b, j = c, len(rel) - 1
        while True:
            while i <= j and table[f][rel[i]] is not None:
                f = table[f][rel[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][rel[j] ^ 1] is not None:
                b = table[b][rel[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][rel[i]] = b
                table[b][rel[i] ^ 1] = f
                return
            define(f, rel[i])

    c = 0
    while c < len(table):
        for rel in relators:
            if parent[c] != c:
                break
            scan_and_fill(c, rel)
        if parent[c] == c:
            for x in range(ncols):
                if table[c][x] is None:
                    define(c, x)
        c += 1

    live = [c for c in range(len(table)) if parent[c] == c]
    for c in live:
        table[c] = [find(d) for d in table[c]]
    return _relabel(p, table, live, ncols)


def _relabel(p, table, live, ncols) -> MultiplicationTable:
    """Breadth-first renumbering from the identity: gens in declaration order, g before g^-1."""
    new_index = {0: 0}
    reps = [EMPTY]
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(ncols):
            d = table[c][x]
            if d not in new_index:
                new_index[d] = len(reps)
                g = p.generators[x // 2]
                reps.append(reps[new_index[c]] * Word.gen(g, -1 if x & 1 else 1))
                queue.append(d)
    assert len(new_index) == len(live)
    order = len(reps)
    old = [None] * order
    for o, n in new_index.items():
        old[n] = o
    action = [tuple(new_index[table[old[i]][2 * j]] for j in range(ncols // 2)) for i in range(order)]
    inverse = [tuple(new_index[table[old[i]][2 * j + 1]] for j in range(ncols // 2)) for i in range(order)]
    return MultiplicationTable(p.generators, action, inverse, reps)


def evaluate(t: MultiplicationTable, w: Word) -> int:
    return t.act(0, w)


def element_order(t: MultiplicationTable, w: Word) -> int:
    target = evaluate(t, w)
    n, cur = 1, target
    while cur != 0:
        cur = t.multiply(cur, target)
        n += 1
    return n


def subgroup_closure(t: MultiplicationTable, gens) -> set:
    """Elements of the subgroup generated by the given words (breadth-first orbit of 0)."""
    steps = []
    for w in gens:
        steps.append(w)
        steps.append(w.inverse())
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for w in steps:
            j = t.act(i, w)
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return seen
