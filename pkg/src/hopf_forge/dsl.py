"""Plan-file language: tokenizer, AST, parser and pretty-printer.

Word literals are whitespace-separated letters with caret exponents,
``k s^-1 k^-1 b (k s k^-1) c b^-1``; parentheses group subwords, ``1`` is the
identity and ``[a, b]`` is the commutator ``a b a^-1 b^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DuplicateName, PlanSyntaxError, UndefinedName

# ---------------------------------------------------------------------------
# word expressions


@dataclass(frozen=True)
class Letter:
    name: str
    exp: int = 1


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Group:
    word: "WordExpr"
    exp: int = 1


@dataclass(frozen=True)
class Comm:
    left: "WordExpr"
    right: "WordExpr"
    exp: int = 1


@dataclass(frozen=True)
class WordExpr:
    atoms: tuple = ()


def format_word_expr(w: WordExpr) -> str:
    if not w.atoms:
        return "1"
    return " ".join(_format_atom(a) for a in w.atoms)


def _format_atom(a) -> str:
    if isinstance(a, One):
        return "1"
    if isinstance(a, Letter):
        body = a.name
    elif isinstance(a, Group):
        body = f"({format_word_expr(a.word)})"
    else:
        body = f"[{format_word_expr(a.left)}, {format_word_expr(a.right)}]"
    return body if a.exp == 1 else f"{body}^{a.exp}"


# ---------------------------------------------------------------------------
# declarations


@dataclass(frozen=True)
class Presentation:
    gens: tuple
    rels: tuple


@dataclass(frozen=True)
class Free:
    names: tuple


@dataclass(frozen=True)
class FreeAbelian:
    names: tuple


@dataclass(frozen=True)
class FreeProduct:
    left: str
    right: str


@dataclass(frozen=True)
class CyclicSyntax:
    a: WordExpr
    b: WordExpr


@dataclass(frozen=True)
class AutoSyntax:
    images: tuple  # ((name, WordExpr), ...)


@dataclass(frozen=True)
class Hnn:
    base: str
    stable: str
    assoc: object


@dataclass(frozen=True)
class GroupDecl:
    name: str
    body: object
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class EndoDecl:
    name: str
    group: str
    images: tuple
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class CertDecl:
    name: str
    target: str
    images: tuple
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class RecipeDecl:
    name: str
    H: str
    psi: str
    u: WordExpr
    v: WordExpr
    y: WordExpr
    cert: str
    witness: tuple
    hopfian: str | None = None
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Assertion:
    kind: str  # equal | not_equal | identity | nontrivial | order | member
    group: str
    words: tuple
    expected: object = None  # int, "infinite" or "none"


@dataclass(frozen=True)
class CheckDecl:
    label: str
    assertion: Assertion
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class PlanFile:
    declarations: tuple = ()

    @property
    def source_spans(self) -> list:
        return [d.span for d in self.declarations]


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>-?[0-9]+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}()\[\],;:=^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise PlanSyntaxError(line, col, "a token", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tok = m.group()
            if kind in ("punct", "arrow"):
                kind = tok
            tokens.append(Token(kind, tok, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


# ---------------------------------------------------------------------------
# parser

_WORD_START = {"name", "int", "(", "["}


MAX_NESTING = 100


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise PlanSyntaxError(t.line, t.col, expected, t.text or "end of input")

    def expect(self, kind, text=None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self.fail(repr(text or kind))
        self.i += 1
        return t

    def keyword(self, word) -> Token:
        return self.expect("name", word)

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def name(self) -> str:
        return self.expect("name").text

    def integer(self) -> int:
        return int(self.expect("int").text)

    # words

    def word(self) -> WordExpr:
        if self.depth >= MAX_NESTING:
            self.fail(f"at most {MAX_NESTING} levels of nested brackets")
        self.depth += 1
        atoms = []
        while self.tok.kind in _WORD_START:
            atoms.append(self.atom())
        if not atoms:
            self.fail("a word")
        self.depth -= 1
        return WordExpr(tuple(atoms))

    def atom(self):
        t = self.tok
        if t.kind == "int":
            if t.text != "1":
                self.fail("a generator, '(', '[' or 1")
            self.i += 1
            return One()
        if t.kind == "name":
            self.i += 1
            return Letter(t.text, self.exponent())
        if t.kind == "(":
            self.i += 1
            inner = self.word()
            self.expect(")")
            return Group(inner, self.exponent())
        self.expect("[")
        left = self.word()
        self.expect(",")
        right = self.word()
        self.expect("]")
        return Comm(left, right, self.exponent())

    def exponent(self) -> int:
        if self.at("^"):
            self.i += 1
            e = self.integer()
            if e == 0:
                self.fail("a nonzero exponent")
            return e
        return 1

    def names_until(self, closer) -> tuple:
        names = []
        while not self.at(closer):
            names.append(self.name())
            if self.at(","):
                self.i += 1
        return tuple(names)

    def image_block(self) -> tuple:
        self.expect("{")
        pairs = [self.image()]
        while not self.at("}"):
            pairs.append(self.image())
        self.expect("}")
        return tuple(pairs)

    def image(self):
        n = self.name()
        self.expect("->")
        w = self.word()
        self.expect(";")
        return (n, w)

    # declarations

    def plan(self) -> PlanFile:
        decls = []
        while not self.at("eof"):
            decls.append(self.decl())
        return PlanFile(tuple(decls))

    def decl(self):
        t = self.tok
        start = (t.line, t.col)
        if not self.at("name") or t.text not in ("group", "endo", "cert", "recipe", "check"):
            self.fail("'group', 'endo', 'cert', 'recipe' or 'check'")
        self.i += 1
        node = getattr(self, f"decl_{t.text}")()
        prev = self.toks[self.i - 1]
        return _with_span(node, (start, (prev.line, prev.col + len(prev.text))))

    def decl_group(self):
        name = self.name()
        self.expect("=")
        kind = self.tok.text if self.at("name") else None
        if kind == "presentation":
            self.i += 1
            self.expect("{")
            self.keyword("gens")
            gens = self.names_until(";")
            self.expect(";")
            self.keyword("rels")
            rels = [self.word()]
            while self.at(","):
                self.i += 1
                rels.append(self.word())
            self.expect(";")
            self.expect("}")
            body = Presentation(gens, tuple(rels))
        elif kind in ("free", "free_abelian"):
            self.i += 1
            self.expect("(")
            names = self.names_until(")")
            self.expect(")")
            body = Free(names) if kind == "free" else FreeAbelian(names)
        elif kind == "free_product":
            self.i += 1
            self.expect("(")
            left = self.name()
            self.expect(",")
            right = self.name()
            self.expect(")")
            body = FreeProduct(left, right)
        elif kind == "hnn":
            self.i += 1
            self.expect("(")
            base = self.name()
            self.expect(",")
            stable = self.name()
            self.expect(",")
            body = Hnn(base, stable, self.assoc())
            self.expect(")")
        else:
            self.fail("'presentation', 'free', 'free_abelian', 'free_product' or 'hnn'")
        return GroupDecl(name, body)

    def assoc(self):
        if self.at("name", "cyclic"):
            self.i += 1
            self.expect("{")
            a = self.word()
            self.expect("->")
            b = self.word()
            self.expect("}")
            return CyclicSyntax(a, b)
        if self.at("name", "auto"):
            self.i += 1
            return AutoSyntax(self.image_block())
        self.fail("'cyclic' or 'auto'")

    def decl_endo(self):
        name = self.name()
        self.expect(":")
        group = self.name()
        return EndoDecl(name, group, self.image_block())

    def decl_cert(self):
        name = self.name()
        self.expect("{")
        self.keyword("target")
        target = self.name()
        self.expect(";")
        self.keyword("map")
        images = self.image_block()
        self.expect("}")
        return CertDecl(name, target, images)

    def decl_recipe(self):
        name = self.name()
        self.expect("{")
        fields = {}
        for key in ("H", "psi", "u", "v", "y", "cert"):
            self.keyword(key)
            fields[key] = self.name() if key in ("H", "psi", "cert") else self.word()
            self.expect(";")
        self.keyword("witness")
        witness = self.image_block()
        hopfian = None
        if self.at("name", "hopfian"):
            self.i += 1
            hopfian = _unquote(self.expect("string").text)
            self.expect(";")
        self.expect("}")
        return RecipeDecl(name, witness=witness, hopfian=hopfian, **fields)

    def decl_check(self):
        label = _unquote(self.expect("string").text)
        self.expect("{")
        assertion = self.assertion()
        self.expect("}")
        return CheckDecl(label, assertion)

    def assertion(self) -> Assertion:
        kinds = ("equal", "not_equal", "identity", "nontrivial", "order", "member")
        if not self.at("name") or self.tok.text not in kinds:
            self.fail("one of " + ", ".join(kinds))
        kind = self.name()
        group = self.name()
        self.expect(":")
        first = self.word()
        if kind in ("identity", "nontrivial"):
            return Assertion(kind, group, (first,))
        if kind == "member":
            self.expect(",")
            second = self.word()
            self.expect("=")
            if self.at("name", "none"):
                self.i += 1
                return Assertion(kind, group, (first, second), "none")
            return Assertion(kind, group, (first, second), self.integer())
        self.expect("=")
        if kind == "order":
            if self.at("name", "infinite"):
                self.i += 1
                return Assertion(kind, group, (first,), "infinite")
            n = self.integer()
            if n < 1:
                self.fail("a positive order")
            return Assertion(kind, group, (first,), n)
        return Assertion(kind, group, (first, self.word()))


def _with_span(node, span):
    object.__setattr__(node, "span", span)
    return node


def parse(text: str) -> PlanFile:
    plan = _Parser(text).plan()
    check_names(plan)
    return plan


def parse_word(text: str) -> WordExpr:
    """A standalone word literal; the empty string is the identity."""
    p = _Parser(text)
    if p.at("eof"):
        return WordExpr(())
    w = p.word()
    p.expect("eof")
    return w


def check_names(plan: PlanFile):
    """Declaration names are unique and declared before use."""
    kinds: dict = {}

    def need(name, kind, decl):
        if kinds.get(name) != kind:
            line, col = decl.span[0] if decl.span else (0, 0)
            what = "undeclared" if name not in kinds else f"a {kinds[name]}, not a {kind}"
            raise UndefinedName(f"{line}:{col}: {name!r} is {what}")

    for d in plan.declarations:
        if isinstance(d, GroupDecl):
            b = d.body
            if isinstance(b, FreeProduct):
                need(b.left, "group", d)
                need(b.right, "group", d)
            elif isinstance(b, Hnn):
                need(b.base, "group", d)
        elif isinstance(d, EndoDecl):
            need(d.group, "group", d)
        elif isinstance(d, CertDecl):
            need(d.target, "group", d)
        elif isinstance(d, RecipeDecl):
            need(d.H, "group", d)
            need(d.psi, "endo", d)
            need(d.cert, "cert", d)
        elif isinstance(d, CheckDecl):
            need(d.assertion.group, "group", d)
        if not isinstance(d, CheckDecl):
            if d.name in kinds:
                line, col = d.span[0] if d.span else (0, 0)
                raise DuplicateName(f"{line}:{col}: {d.name!r} is declared twice")
            kinds[d.name] = {GroupDecl: "group", EndoDecl: "endo", CertDecl: "cert",
                             RecipeDecl: "recipe"}[type(d)]


# ---------------------------------------------------------------------------
# printer


def _format_images(images, indent="    ") -> str:
    inner = "".join(f"\n{indent}{n} -> {format_word_expr(w)};" for n, w in images)
    return "{" + inner + "\n" + indent[:-4] + "}"


def format_decl(d) -> str:
    w = format_word_expr
    if isinstance(d, GroupDecl):
        b = d.body
        if isinstance(b, Presentation):
            body = (f"presentation {{ gens {' '.join(b.gens)}; rels "
                    + ", ".join(w(r) for r in b.rels) + "; }")
        elif isinstance(b, Free):
            body = f"free({' '.join(b.names)})"
        elif isinstance(b, FreeAbelian):
            body = f"free_abelian({' '.join(b.names)})"
        elif isinstance(b, FreeProduct):
            body = f"free_product({b.left}, {b.right})"
        else:
            a = b.assoc
            if isinstance(a, CyclicSyntax):
                assoc = f"cyclic {{ {w(a.a)} -> {w(a.b)} }}"
            else:
                assoc = "auto { " + " ".join(f"{n} -> {w(x)};" for n, x in a.images) + " }"
            body = f"hnn({b.base}, {b.stable}, {assoc})"
        return f"group {d.name} = {body}"
    if isinstance(d, EndoDecl):
        return f"endo {d.name} : {d.group} {_format_images(d.images)}"
    if isinstance(d, CertDecl):
        return f"cert {d.name} {{\n    target {d.target};\n    map {_format_images(d.images, '        ')}\n}}"
    if isinstance(d, RecipeDecl):
        lines = [f"recipe {d.name} {{", f"    H {d.H};", f"    psi {d.psi};", f"    u {w(d.u)};",
                 f"    v {w(d.v)};", f"    y {w(d.y)};", f"    cert {d.cert};",
                 f"    witness {_format_images(d.witness, '        ')}"]
        if d.hopfian is not None:
            lines.append(f"    hopfian {_quote(d.hopfian)};")
        lines.append("}")
        return "\n".join(lines)
    a = d.assertion
    words = [w(x) for x in a.words]
    if a.kind in ("identity", "nontrivial"):
        body = f"{a.kind} {a.group}: {words[0]}"
    elif a.kind == "member":
        body = f"member {a.group}: {words[0]}, {words[1]} = {a.expected}"
    elif a.kind == "order":
        body = f"order {a.group}: {words[0]} = {a.expected}"
    else:
        body = f"{a.kind} {a.group}: {words[0]} = {words[1]}"
    return f"check {_quote(d.label)} {{ {body} }}"


def format_plan(plan: PlanFile) -> str:
    return "\n\n".join(format_decl(d) for d in plan.declarations) + "\n"
