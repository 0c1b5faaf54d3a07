"""Random corruption of plan text, shared by the fuzz and acceptance tests."""

import random
import re

_TOKENS = ["{", "}", "(", ")", "[", "]", ";", ",", "->", "^", "=", "#", '"', "^-", "0", "-3", "99",
           "group", "hnn", "cyclic", "auto", "free", "check", "identity", "order", "member", "x", "t"]


def _delete_span(rng, text):
    i = rng.randrange(len(text))
    return text[:i] + text[i + rng.randint(1, 12):]


def _insert_token(rng, text):
    i = rng.randrange(len(text) + 1)
    return text[:i] + rng.choice(_TOKENS) + text[i:]


def _lines(rng, text, op):
    lines = text.split("\n")
    i, j = rng.randrange(len(lines)), rng.randrange(len(lines))
    if op == "drop":
        del lines[i]
    elif op == "dup":
        lines.insert(j, lines[i])
    else:
        lines[i], lines[j] = lines[j], lines[i]
    return "\n".join(lines)


def _renumber(rng, text):
    spots = [m.span() for m in re.finditer(r"-?\d+", text)]
    if not spots:
        return text
    a, b = rng.choice(spots)
    return text[:a] + str(rng.choice([0, 1, -1, 2, 5, 27, -9, 1000, 10 ** 9])) + text[b:]


def _rename(rng, text):
    names = sorted(set(re.findall(r"\b[A-Za-z]\w*\b", text)))
    spots = [m.span() for m in re.finditer(r"\b[A-Za-z]\w*\b", text)]
    a, b = rng.choice(spots)
    return text[:a] + rng.choice(names) + text[b:]


MUTATIONS = [
    _delete_span,
    _insert_token,
    lambda rng, t: _lines(rng, t, "drop"),
    lambda rng, t: _lines(rng, t, "dup"),
    lambda rng, t: _lines(rng, t, "swap"),
    _renumber,
    _rename,
]


def mutate(rng: random.Random, text: str) -> str:
    for _ in range(rng.randint(1, 3)):
        text = rng.choice(MUTATIONS)(rng, text)
    return text


def mutated_plans(sources, count, seed=0):
    rng = random.Random(seed)
    return [mutate(rng, rng.choice(sources)) for _ in range(count)]
