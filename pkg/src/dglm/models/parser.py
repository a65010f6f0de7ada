"""Line-oriented model files.

::

    # comments start with '#'
    model X
    generator x1 degree 1
    generator x2 degree 3
    d x2 = 1/2*[x1, x1]

    model A
    generator u degree 1

    map i : A -> X
    i u = x1

``model <name>`` opens a model; generator and differential lines before
any header belong to a model named ``L``. Expressions are sums of
``rational*atom`` terms, where an atom is a generator name or a bracket
``[expr, expr]``; ``0`` is the empty sum.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

from dglm.core.exactlin import ONE, Rational, format_rational, q
from dglm.core.gla_free import (
    GENERATOR_NAME,
    FreeGradedLie,
    LieElement,
    LieMorphism,
    graded_commutator,
    verify_morphism,
)
from dglm.errors import InvalidModel, ModelParseError
from dglm.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_MODEL = "L"


# --------------------------------------------------------------------------- #
# Expression AST
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Bracket:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sum:
    """``Σ c_i * atom_i``; the empty sum is zero."""

    terms: tuple[tuple[Rational, Gen | Bracket], ...] = ()


Expr = Union[Gen, Bracket, Sum]


def _collapse(terms: Sequence[tuple[Rational, Gen | Bracket]]) -> Expr:
    if len(terms) == 1 and terms[0][0] == ONE:
        return terms[0][1]
    return Sum(tuple(terms))


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Gen):
        return expr.name
    if isinstance(expr, Bracket):
        return f"[{format_expr(expr.left)}, {format_expr(expr.right)}]"
    if not expr.terms:
        return "0"
    parts: list[str] = []
    for i, (c, atom) in enumerate(expr.terms):
        body = format_expr(atom)
        magnitude = -c if c < 0 else c
        text = body if magnitude == ONE else f"{format_rational(magnitude)}*{body}"
        if i == 0:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[\[\],+\-*]))")


def _tokens(text: str, line: int | None) -> list[str]:
    out: list[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ModelParseError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}", line)
        out.append(m.group(m.lastgroup or "op"))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, text: str, line: int | None):
        self.tokens = _tokens(text, line)
        self.pos = 0
        self.line = line
        self.text = text

    def error(self, message: str) -> ModelParseError:
        return ModelParseError(f"{message} in expression {self.text.strip()!r}", self.line)

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise self.error(f"expected {expected or 'a token'}, got {tok or 'end of line'}")
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        expr = self.expr()
        if self.peek() is not None:
            raise self.error(f"trailing {self.peek()!r}")
        return expr

    def expr(self) -> Expr:
        terms: list[tuple[Rational, Gen | Bracket]] = []
        negative = False
        if self.peek() in ("+", "-"):
            negative = self.take() == "-"
        while True:
            term = self.term()
            if term is not None:
                c, atom = term
                terms.append((-c if negative else c, atom))
            if self.peek() not in ("+", "-"):
                break
            negative = self.take() == "-"
        return _collapse(terms)

    def term(self) -> tuple[Rational, Gen | Bracket] | None:
        tok = self.peek()
        if tok is not None and tok[0].isdigit():
            c = q(self.take())
            if self.peek() != "*":
                if c == 0:
                    return None
                raise self.error("a bare rational other than 0 has no degree")
            self.take("*")
            atom = self.atom()
            return (c, atom) if c else None
        return ONE, self.atom()

    def atom(self) -> Gen | Bracket:
        tok = self.take()
        if tok == "[":
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Bracket(left, right)
        if GENERATOR_NAME.match(tok):
            return Gen(tok)
        raise self.error(f"unexpected {tok!r}")


def parse_expr(text: str, line: int | None = None) -> Expr:
    return _ExprParser(text, line).parse()


def evaluate(expr: Expr, degrees: Mapping[str, int], degree: int, line: int | None = None) -> LieElement:
    """The Lie element an expression denotes; ``degree`` is used for zero."""

    def walk(e: Expr) -> LieElement:
        if isinstance(e, Gen):
            if e.name not in degrees:
                raise ModelParseError(f"unknown generator {e.name!r}", line)
            return LieElement(degrees[e.name], {(e.name,): ONE})
        if isinstance(e, Bracket):
            return graded_commutator(walk(e.left), walk(e.right))
        total: LieElement | None = None
        for c, atom in e.terms:
            value = c * walk(atom)
            if total is not None and value.degree != total.degree:
                raise ModelParseError(f"inhomogeneous sum {format_expr(e)!r}", line)
            total = value if total is None else total + value
        return total if total is not None else LieElement(degree, {})

    value = walk(expr)
    if value.degree != degree and value:
        raise ModelParseError(f"{format_expr(expr)!r} has degree {value.degree}, expected {degree}", line)
    return value if value else LieElement(degree, {})


# --------------------------------------------------------------------------- #
# Model files
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ModelSpec:
    name: str
    generators: tuple[tuple[str, int], ...] = ()
    differential: tuple[tuple[str, Expr], ...] = ()

    @property
    def degrees(self) -> dict[str, int]:
        return dict(self.generators)

    def build(self, cutoff: int) -> FreeGradedLie:
        degrees = self.degrees
        unknown = [g for g, _ in self.differential if g not in degrees]
        if unknown:
            raise InvalidModel(f"model {self.name}: differential for unknown generator {unknown[0]!r}")
        d = {g: evaluate(e, degrees, degrees[g] - 1) for g, e in self.differential}
        return FreeGradedLie(self.generators, d, cutoff, name=self.name)


@dataclass(frozen=True)
class MapSpec:
    name: str
    source: str
    target: str
    images: tuple[tuple[str, Expr], ...] = ()

    def build(self, source: FreeGradedLie, target: FreeGradedLie) -> LieMorphism:
        unknown = [g for g, _ in self.images if g not in source.generators]
        if unknown:
            raise InvalidModel(f"map {self.name}: {source.name} has no generator {unknown[0]!r}")
        images = {g: evaluate(e, target.gen_degree, source.gen_degree[g]) for g, e in self.images}
        f = LieMorphism(source, target, images, name=self.name)
        verdict = verify_morphism(f)
        if not verdict:
            raise InvalidModel(f"map {self.name} is not a dg Lie morphism: {verdict.witness}")
        return f


@dataclass(frozen=True)
class ModelFile:
    models: tuple[ModelSpec, ...] = ()
    maps: tuple[MapSpec, ...] = ()

    def model(self, name: str | None = None) -> ModelSpec:
        if name is None:
            if len(self.models) != 1:
                raise InvalidModel(f"choose a model: {', '.join(m.name for m in self.models)}")
            return self.models[0]
        for m in self.models:
            if m.name == name:
                return m
        raise InvalidModel(f"no model named {name!r}")

    def map(self, name: str | None = None) -> MapSpec:
        if name is None:
            if len(self.maps) != 1:
                raise InvalidModel(f"choose a map: {', '.join(m.name for m in self.maps) or 'none defined'}")
            return self.maps[0]
        for m in self.maps:
            if m.name == name:
                return m
        raise InvalidModel(f"no map named {name!r}")

    def build_map(self, cutoff: int, name: str | None = None) -> LieMorphism:
        spec = self.map(name)
        return spec.build(self.model(spec.source).build(cutoff), self.model(spec.target).build(cutoff))


@dataclass
class _Draft:
    name: str
    generators: list[tuple[str, int]] = field(default_factory=list)
    differential: list[tuple[str, Expr]] = field(default_factory=list)

    def freeze(self) -> ModelSpec:
        return ModelSpec(self.name, tuple(self.generators), tuple(self.differential))


def _lines(text: str) -> Iterator[tuple[int, list[str], str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split(), line


def parse_model_file(text: str) -> ModelFile:
    """
    Parse model-file text.

    Raises:
        ModelParseError: on a malformed line, with its line number.
    """
    drafts: list[_Draft] = []
    maps: list[tuple[str, str, str, list[tuple[str, Expr]]]] = []
    current: _Draft | None = None

    def model() -> _Draft:
        nonlocal current
        if current is None:
            current = _Draft(DEFAULT_MODEL)
            drafts.append(current)
        return current

    for number, words, line in _lines(text):
        head = words[0]
        if head == "model":
            if len(words) != 2 or not GENERATOR_NAME.match(words[1]):
                raise ModelParseError("expected 'model <name>'", number)
            if any(d.name == words[1] for d in drafts):
                raise ModelParseError(f"model {words[1]!r} defined twice", number)
            current = _Draft(words[1])
            drafts.append(current)
        elif head == "generator":
            if len(words) != 4 or words[2] != "degree":
                raise ModelParseError("expected 'generator <name> degree <int>'", number)
            try:
                degree = int(words[3])
            except ValueError:
                raise ModelParseError(f"degree {words[3]!r} is not an integer", number) from None
            model().generators.append((words[1], degree))
        elif head == "d":
            name, sep, rhs = line[1:].partition("=")
            if not sep or not GENERATOR_NAME.match(name.strip()):
                raise ModelParseError("expected 'd <name> = <expr>'", number)
            model().differential.append((name.strip(), parse_expr(rhs, number)))
        elif head == "map":
            m = re.fullmatch(r"map\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)", line)
            if m is None:
                raise ModelParseError("expected 'map <name> : <source> -> <target>'", number)
            maps.append((m.group(1), m.group(2), m.group(3), []))
        else:
            entry = next((mp for mp in maps if mp[0] == head), None)
            lhs, sep, rhs = line.partition("=")
            if entry is None or not sep or len(lhs.split()) != 2:
                raise ModelParseError(f"unrecognised line {line!r}", number)
            entry[3].append((lhs.split()[1], parse_expr(rhs, number)))

    models = tuple(d.freeze() for d in drafts)
    names = {m.name for m in models}
    for name, src, tgt, _ in maps:
        for ref in (src, tgt):
            if ref not in names:
                raise ModelParseError(f"map {name} refers to unknown model {ref!r}")
    logger.debug("parsed %d models and %d maps", len(models), len(maps))
    return ModelFile(models, tuple(MapSpec(n, s, t, tuple(im)) for n, s, t, im in maps))


def format_model_file(spec: ModelFile) -> str:
    """Canonical model-file text; ``parse_model_file`` inverts it."""
    blocks: list[str] = []
    for m in spec.models:
        lines = [f"model {m.name}"]
        lines += [f"generator {g} degree {d}" for g, d in m.generators]
        lines += [f"d {g} = {format_expr(e)}" for g, e in m.differential]
        blocks.append("\n".join(lines))
    for mp in spec.maps:
        lines = [f"map {mp.name} : {mp.source} -> {mp.target}"]
        lines += [f"{mp.name} {g} = {format_expr(e)}" for g, e in mp.images]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
