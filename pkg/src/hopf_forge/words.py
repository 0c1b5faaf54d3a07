"""Words over scoped generator alphabets.

A word is stored run-length encoded: ``c^9`` is one entry ``(c, 9)``, and
inverse letters carry negative exponents.  The constructor always freely
reduces, so every ``Word`` value is in canonical form.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .errors import UnmappedGenerator, WordTooLong

MAX_RUNS = 1_000_000


class GeneratorId(NamedTuple):
    name: str
    scope: str


Letter = tuple  # (GeneratorId, nonzero int)


class Word:
    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        out: list = []
        for gen, exp in letters:
            if not exp:
                continue
            if out and out[-1][0] == gen:
                total = out[-1][1] + exp
                if total:
                    out[-1] = (gen, total)
                else:
                    out.pop()
            else:
                out.append((gen, exp))
        self.letters = tuple(out)
        self._hash = None

    @classmethod
    def _raw(cls, letters: tuple) -> "Word":
        # caller guarantees canonical form
        w = object.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    @classmethod
    def gen(cls, g: GeneratorId, exp: int = 1) -> "Word":
        return cls._raw(((g, exp),)) if exp else EMPTY

    def __mul__(self, other: "Word") -> "Word":
        if not other.letters:
            return self
        if not self.letters:
            return other
        left = list(self.letters)
        right = other.letters
        i = 0
        while left and i < len(right):
            g, e = left[-1]
            h, f = right[i]
            if g != h:
                break
            i += 1
            if e + f:
                left[-1] = (g, e + f)
                break
            left.pop()
        return Word._raw(tuple(left) + right[i:])

    def inverse(self) -> "Word":
        return Word._raw(tuple((g, -e) for g, e in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if len(self.letters) > 1 and n * len(self.letters) > MAX_RUNS:
            raise WordTooLong(f"power {n} of a {len(self.letters)}-run word exceeds {MAX_RUNS} runs")
        result, base = EMPTY, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: GeneratorId) -> int:
        return sum(e for h, e in self.letters if h == g)

    def expanded(self) -> list:
        """Letters one at a time, as ``(gen, +1|-1)`` pairs."""
        out = []
        for g, e in self.letters:
            step = 1 if e > 0 else -1
            out.extend([(g, step)] * abs(e))
        return out

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


EMPTY = Word._raw(())


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return " ".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in w.letters)


def free_reduce(letters) -> Word:
    """Freely reduce a letter sequence (or re-normalize a ``Word``)."""
    if isinstance(letters, Word):
        letters = letters.letters
    return Word(letters)


def invert(w: Word) -> Word:
    return w.inverse()


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(conjugator, core)`` with ``w == conjugator * core * conjugator^-1``."""
    letters = list(w.letters)
    conj = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
        g, a = letters[0]
        _, b = letters[-1]
        if (a > 0) == (b > 0):
            break
        m = min(abs(a), abs(b))
        step = m if a > 0 else -m
        conj.append((g, step))
        a -= step
        b += step
        if b:
            letters[-1] = (g, b)
        else:
            letters.pop()
        if a:
            letters[0] = (g, a)
        else:
            letters.pop(0)
    return Word(conj), Word._raw(tuple(letters))


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


def substitute(w: Word, images: Mapping[GeneratorId, Word]) -> Word:
    out = EMPTY
    for g, e in w.letters:
        try:
            img = images[g]
        except KeyError:
            raise UnmappedGenerator(f"no image for generator {g.name!r}") from None
        out = out * img ** e
    return out


class CyclicWord:
    """A cyclically reduced word up to rotation."""

    __slots__ = ("core", "marker")

    def __init__(self, w: Word, marker: int = 0):
        _, self.core = cyclically_reduce(w)
        self.marker = marker

    def rotations(self):
        flat = self.core.expanded()
        for i in range(max(len(flat), 1)):
            yield Word(flat[i:] + flat[:i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        if len(self.core) != len(other.core):
            return False
        return any(r == other.core for r in self.rotations())

    def __hash__(self) -> int:
        return hash(min(tuple(map(str, r.letters)) for r in self.rotations()))

    def __repr__(self) -> str:
        return f"CyclicWord({format_word(self.core)!r})"
