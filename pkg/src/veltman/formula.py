r"""Formulas of interpretability logic: AST, parser, printer, schemata.

The AST has exactly five constructors (Bot, Var, Implies, Box, Rhd).
Derived operators desugar at parse time:

    ~A        ==  A -> bot
    <>A       ==  ~[]~A
    A /\ B    ==  ~(A -> ~B)
    A \/ B    ==  ~A -> B
    A <-> B   ==  (A -> B) /\ (B -> A)

Surface syntax (ASCII): ``bot ~ [] <> /\ \/ |> -> <->``.  Binding, from
strongest to weakest: the unary operators; then ``/\`` and ``\/`` (equally
strong, left-associative); then ``|>`` (non-associative); then ``->``
(right-associative) and ``<->`` (non-associative).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache


class ParseError(ValueError):
    """Raised on malformed input; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MixedChainWarning(UserWarning):
    """A mixed /\\ and \\/ chain was parsed without disambiguating parens."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Bot(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Var(Formula):
    name: str
    __slots__ = ("name",)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    __slots__ = ("left", "right")


@dataclass(frozen=True)
class Box(Formula):
    inner: Formula
    __slots__ = ("inner",)


@dataclass(frozen=True)
class Rhd(Formula):
    left: Formula
    right: Formula
    __slots__ = ("left", "right")


BOT = Bot()


def Neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def Diamond(f: Formula) -> Formula:
    return Neg(Box(Neg(f)))


def And(a: Formula, b: Formula) -> Formula:
    return Neg(Implies(a, Neg(b)))


def Or(a: Formula, b: Formula) -> Formula:
    return Implies(Neg(a), b)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def conj(formulas) -> Formula:
    """Right-nested conjunction of a non-empty sequence (single item as-is)."""
    formulas = list(formulas)
    if not formulas:
        raise ValueError("empty conjunction")
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = And(f, out)
    return out


def is_neg(f: Formula) -> bool:
    return isinstance(f, Implies) and f.right == BOT


def single_negation(f: Formula) -> Formula:
    """~A: strip one outer negation if present, else negate."""
    if is_neg(f):
        return f.left
    return Neg(f)


@lru_cache(maxsize=None)
def subformulas(f: Formula) -> frozenset:
    """All subformulas of f, itself included.

    Negation is treated as a unit: the ``bot`` inside ``A -> bot`` is not
    listed, matching the convention that adequate sets never carry ``bot``.
    """
    out = {f}
    if isinstance(f, Implies):
        out |= subformulas(f.left)
        if f.right != BOT:
            out |= subformulas(f.right)
    elif isinstance(f, Box):
        out |= subformulas(f.inner)
    elif isinstance(f, Rhd):
        out |= subformulas(f.left) | subformulas(f.right)
    elif isinstance(f, Bot):
        out = set()
    return frozenset(out)


def variables(f: Formula) -> frozenset:
    """Names of the propositional variables occurring in f."""
    if isinstance(f, Var):
        return frozenset((f.name,))
    if isinstance(f, Implies):
        return variables(f.left) | variables(f.right)
    if isinstance(f, Rhd):
        return variables(f.left) | variables(f.right)
    if isinstance(f, Box):
        return variables(f.inner)
    return frozenset()


def adequate_closure(seed) -> frozenset:
    """Smallest superset of seed closed under subformulas and single negation."""
    out = set()
    todo = [f for f in seed]
    while todo:
        f = todo.pop()
        if f in out or f == BOT:
            continue
        out.add(f)
        todo.extend(subformulas(f))
        todo.append(single_negation(f))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKENS = ("<->", "->", "|>", "/\\", "\\/", "[]", "<>", "~", "(", ")")


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        for sym in _TOKENS:
            if text.startswith(sym, i):
                toks.append((sym, i))
                i += len(sym)
                break
        else:
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("ident", i, text[i:j]))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("end", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0]

    def here(self):
        return self.toks[self.pos][1]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        if self.peek() != kind:
            raise ParseError(f"expected {kind!r}, found {self.peek()!r}", self.here())
        return self.take()

    # formula := iff
    def formula(self):
        f = self.iff()
        self.expect("end")
        return f

    # iff := imp ("<->" imp)?   with an explicit non-associativity error
    def iff(self):
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            right = self.imp()
            if self.peek() == "<->":
                raise ParseError(
                    "<-> is non-associative, parenthesize the chain", self.here()
                )
            return Iff(left, right)
        return left

    # imp := rhd ("->" imp)?    right-associative
    def imp(self):
        left = self.rhd()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    # rhd := andor ("|>" andor)?   non-associative
    def rhd(self):
        left = self.andor()
        if self.peek() == "|>":
            self.take()
            right = self.andor()
            if self.peek() == "|>":
                raise ParseError(
                    "|> is non-associative, parenthesize the chain", self.here()
                )
            return Rhd(left, right)
        return left

    # andor := unary (("/\" | "\/") unary)*   equal binding, left-assoc
    def andor(self):
        out = self.unary()
        seen = set()
        while self.peek() in ("/\\", "\\/"):
            op, pos = self.take()[:2]
            seen.add(op)
            rhs = self.unary()
            out = And(out, rhs) if op == "/\\" else Or(out, rhs)
            if len(seen) == 2:
                warnings.warn(
                    f"mixed /\\ and \\/ chain without parentheses (at position {pos})",
                    MixedChainWarning,
                    stacklevel=4,
                )
                seen = {op}
        return out

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Neg(self.unary())
        if self.peek() == "[]":
            self.take()
            return Box(self.unary())
        if self.peek() == "<>":
            self.take()
            return Diamond(self.unary())
        return self.atom()

    def atom(self):
        kind = self.peek()
        if kind == "(":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if kind == "ident":
            tok = self.take()
            if tok[2] == "bot":
                return BOT
            return Var(tok[2])
        raise ParseError(f"expected a formula, found {kind!r}", self.here())


def parse(text: str) -> Formula:
    """Parse ASCII surface syntax into the five-constructor AST."""
    return _Parser(text).formula()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

# Sugar recognizers.  Order matters: Iff before And, Diamond before Neg.

def _match_iff(f):
    if (
        is_neg(f)
        and isinstance(f.left, Implies)
        and is_neg(f.left.right)
        and isinstance(f.left.left, Implies)
        and isinstance(f.left.right.left, Implies)
    ):
        ab, ba = f.left.left, f.left.right.left
        if ab.left == ba.right and ab.right == ba.left:
            return ab.left, ab.right
    return None


def _match_and(f):
    if is_neg(f) and isinstance(f.left, Implies) and is_neg(f.left.right):
        return f.left.left, f.left.right.left
    return None


def _match_or(f):
    if isinstance(f, Implies) and f.right != BOT and is_neg(f.left):
        return f.left.left, f.right
    return None


def _match_diamond(f):
    if is_neg(f) and isinstance(f.left, Box) and is_neg(f.left.inner):
        return f.left.inner.left
    return None


# Precedence levels used for minimal bracketing.
_LVL_IFF, _LVL_IMP, _LVL_RHD, _LVL_ANDOR, _LVL_UNARY, _LVL_ATOM = range(6)


def _level(f):
    if isinstance(f, (Bot, Var)):
        return _LVL_ATOM
    if _match_iff(f) is not None:
        return _LVL_IFF
    if _match_and(f) is not None or _match_or(f) is not None:
        return _LVL_ANDOR
    if _match_diamond(f) is not None or is_neg(f):
        return _LVL_UNARY
    if isinstance(f, Box):
        return _LVL_UNARY
    if isinstance(f, Rhd):
        return _LVL_RHD
    if isinstance(f, Implies):
        return _LVL_IMP
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, minimum):
    s = print_formula(f)
    if _level(f) < minimum:
        return f"({s})"
    return s


def print_formula(f: Formula) -> str:
    """Minimal-parentheses rendering; parse(print_formula(f)) == f."""
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Var):
        return f.name
    m = _match_iff(f)
    if m is not None:
        return f"{_wrap(m[0], _LVL_IMP)} <-> {_wrap(m[1], _LVL_IMP)}"
    m = _match_and(f)
    if m is not None:
        return f"{_wrap(m[0], _LVL_ANDOR)} /\\ {_wrap(m[1], _LVL_UNARY)}"
    m = _match_or(f)
    if m is not None:
        return f"{_wrap(m[0], _LVL_ANDOR)} \\/ {_wrap(m[1], _LVL_UNARY)}"
    m = _match_diamond(f)
    if m is not None:
        return f"<>{_wrap(m, _LVL_UNARY)}"
    if is_neg(f):
        return f"~{_wrap(f.left, _LVL_UNARY)}"
    if isinstance(f, Box):
        return f"[]{_wrap(f.inner, _LVL_UNARY)}"
    if isinstance(f, Rhd):
        return f"{_wrap(f.left, _LVL_ANDOR)} |> {_wrap(f.right, _LVL_ANDOR)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _LVL_RHD)} -> {_wrap(f.right, _LVL_IMP)}"
    raise TypeError(f"not a formula: {f!r}")


def formula_key(f: Formula) -> str:
    """Stable sort key for deterministic iteration over formula sets."""
    return print_formula(f)


# ---------------------------------------------------------------------------
# Schemata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Schema:
    """A formula over placeholder variables together with their names."""

    body: Formula
    placeholders: tuple

    def instantiate(self, assignment) -> Formula:
        missing = [p for p in self.placeholders if p not in assignment]
        if missing:
            raise KeyError(f"missing placeholder binding(s): {missing}")
        return substitute(self.body, assignment)


def substitute(f: Formula, assignment) -> Formula:
    """Homomorphic substitution of formulas for variable names."""
    if isinstance(f, Var):
        return assignment.get(f.name, f)
    if isinstance(f, Implies):
        return Implies(substitute(f.left, assignment), substitute(f.right, assignment))
    if isinstance(f, Box):
        return Box(substitute(f.inner, assignment))
    if isinstance(f, Rhd):
        return Rhd(substitute(f.left, assignment), substitute(f.right, assignment))
    return f


def _schema(text):
    body = parse(text)
    names = tuple(sorted(variables(body)))
    return Schema(body, names)


SCHEMAS = {
    "L1": _schema("[](A -> B) -> ([]A -> []B)"),
    "L2": _schema("[]A -> [][]A"),
    "L3": _schema("[]([]A -> A) -> []A"),
    "J1": _schema("[](A -> B) -> (A |> B)"),
    "J2": _schema("(A |> B) /\\ (B |> C) -> (A |> C)"),
    "J3": _schema("(A |> C) /\\ (B |> C) -> (A \\/ B |> C)"),
    "J4": _schema("A |> B -> (<>A -> <>B)"),
    "J5": _schema("<>A |> A"),
    "M": _schema("A |> B -> A /\\ []C |> B /\\ []C"),
    "P": _schema("A |> B -> [](A |> B)"),
    "M0": _schema("A |> B -> <>A /\\ []C |> B /\\ []C"),
    "W": _schema("A |> B -> A |> B /\\ []~A"),
    "W*": _schema("A |> B -> B /\\ []C |> B /\\ []C /\\ []~A"),
    "P0": _schema("A |> <>B -> [](A |> B)"),
    "R": _schema("A |> B -> ~(A |> ~C) |> B /\\ []C"),
    "M0*": _schema("A |> B -> <>A /\\ []C |> B /\\ []C /\\ []~A"),
}


def instantiate(schema, assignment) -> Formula:
    """Instantiate a Schema (or a name from the built-in table)."""
    if isinstance(schema, str):
        schema = SCHEMAS[schema]
    return schema.instantiate(assignment)
