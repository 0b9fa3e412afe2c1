"""Line-oriented ECNF text format.

::

    theory tsp3
    int x [0,5]
    atom p q r
    clause p | -q
    equiv r <=> p & -q
    sum r <=> 2 x + 3 q >= 4
    csum r <=> [p] x + [-q] 2 x != 3
    define {
      r <- p | q.
    }
    minimize 2 x + p + 1

Statements end at a newline except inside ``define { ... }``.  ``#`` starts a
comment.  A rule body may be ``true`` or ``false``; a sum may be ``0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..model import (
    Clause, Comparator, ConditionalReifiedSum, Connective, Definition, Equivalence,
    GuardedTerm, IntVar, LinearTerm, Literal, Objective, ReifiedSum, Rule, Theory,
)


class EcnfSyntaxError(ValueError):
    def __init__(self, line, col, expected, got):
        self.line, self.col, self.expected, self.got = line, col, expected, got
        super().__init__(f"line {line}, column {col}: expected {expected}, got {got!r}")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)"
    r"|(?P<id>[A-Za-z_][\w']*(?:\([\w,']*\))?)|(?P<int>\d+)"
    r"|(?P<op><=>|<-|<=|>=|!=|[<>=|&+\-\[\]{}.,])"
)

_CMPS = {c.value: c for c in Comparator}
_KEYWORDS = ("theory", "int", "atom", "clause", "equiv", "sum", "csum", "define", "minimize")


def _tokenize(text):
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise EcnfSyntaxError(line, col, "a token", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            out.append(_Tok("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.depth = 0  # inside define braces newlines are skipped

    # token helpers
    def peek(self):
        while self.depth and self.toks[self.i].kind == "nl":
            self.i += 1
        return self.toks[self.i]

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        raise EcnfSyntaxError(tok.line, tok.col, expected, tok.text or tok.kind)

    def at(self, text):
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def expect_op(self, text):
        if not self.at(text):
            self.fail(repr(text))
        return self.next()

    def expect_id(self, what="identifier"):
        if self.peek().kind != "id":
            self.fail(what)
        return self.next().text

    def expect_int(self):
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        if self.peek().kind != "int":
            self.fail("integer")
        return sign * int(self.next().text)

    def end_of_statement(self):
        tok = self.peek()
        if tok.kind not in ("nl", "eof"):
            self.fail("end of line")
        if tok.kind == "nl":
            self.next()

    # grammar pieces
    def literal(self):
        positive = True
        if self.at("-"):
            self.next()
            positive = False
        return Literal(self.expect_id("literal"), positive)

    def comparator(self):
        """Returns ``(cmp, sign)``; ``<-`` is ``<`` followed by a minus sign."""
        tok = self.peek()
        if tok.kind == "op" and tok.text == "<-":
            self.next()
            return Comparator.LT, -1
        if tok.kind == "op" and tok.text in _CMPS:
            self.next()
            return _CMPS[tok.text], 1
        self.fail("comparator")

    def rhs(self, sign):
        if sign < 0:
            if self.peek().kind != "int":
                self.fail("integer")
            return -int(self.next().text)
        return self.expect_int()

    def linear(self, allow_constant=False):
        """``[sign] [INT] ID`` joined by +/-; a lone ``0`` is the empty sum."""
        terms, constant = [], 0
        first = True
        while True:
            sign = 1
            if self.at("+") and not first:
                self.next()
            elif self.at("-"):
                self.next()
                sign = -1
            elif not first:
                break
            coef = None
            if self.peek().kind == "int":
                coef = int(self.next().text)
            if self.peek().kind == "id":
                terms.append(LinearTerm(sign * (1 if coef is None else coef), self.next().text))
            elif coef is None:
                self.fail("term")
            elif allow_constant:
                constant += sign * coef
            elif coef == 0 and first and sign == 1:
                return terms, constant
            else:
                self.fail("variable")
            first = False
        return terms, constant

    def body(self, stop):
        """Literals joined by a single connective."""
        if self.peek().kind == "id" and self.peek().text in ("true", "false"):
            word = self.next().text
            return (Connective.AND if word == "true" else Connective.OR), []
        lits = [self.literal()]
        connective = None
        while not self.at(stop) and self.peek().kind not in ("nl", "eof"):
            tok = self.peek()
            if tok.kind != "op" or tok.text not in ("&", "|"):
                self.fail("'&' or '|'")
            this = Connective.AND if tok.text == "&" else Connective.OR
            if connective is not None and this is not connective:
                self.fail("the same connective throughout")
            connective = this
            self.next()
            lits.append(self.literal())
        return connective or Connective.AND, lits

    def parse(self) -> Theory:
        name = "theory"
        int_vars, atoms, constraints, definitions = [], [], [], []
        objective = None
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "nl":
                self.next()
                continue
            if tok.kind != "id" or tok.text not in _KEYWORDS:
                self.fail("statement keyword")
            kw = self.next().text
            if kw == "theory":
                name = self.expect_id("theory name")
            elif kw == "int":
                ident = self.expect_id()
                lo = hi = None
                if self.at("["):
                    self.next()
                    lo = self.expect_int()
                    self.expect_op(",")
                    hi = self.expect_int()
                    self.expect_op("]")
                int_vars.append(IntVar(ident, lo, hi))
            elif kw == "atom":
                atoms.append(self.expect_id("atom name"))
                while self.peek().kind == "id":
                    atoms.append(self.next().text)
            elif kw == "clause":
                lits = []
                if self.peek().kind not in ("nl", "eof"):
                    lits.append(self.literal())
                    while self.at("|"):
                        self.next()
                        lits.append(self.literal())
                constraints.append(Clause(lits))
            elif kw == "equiv":
                head = self.expect_id("atom")
                self.expect_op("<=>")
                connective, lits = self.body(stop="\n")
                if not lits:
                    self.fail("literal")
                constraints.append(Equivalence(head, connective, lits))
            elif kw == "sum":
                head = self.literal()
                self.expect_op("<=>")
                terms, _ = self.linear()
                cmp, sign = self.comparator()
                constraints.append(ReifiedSum(head, terms, cmp, self.rhs(sign)))
            elif kw == "csum":
                head = self.literal()
                self.expect_op("<=>")
                guarded = []
                if self.peek().kind == "int" and self.peek().text == "0":
                    self.next()
                else:
                    while True:
                        sign = 1
                        if self.at("+") and guarded:
                            self.next()
                        elif self.at("-") and guarded:
                            self.next()
                            sign = -1
                        if not self.at("["):
                            if guarded:
                                break
                            self.fail("'['")
                        self.next()
                        guard = self.literal()
                        self.expect_op("]")
                        (term,), _ = self._single_term()
                        guarded.append(GuardedTerm(guard, LinearTerm(sign * term.coefficient, term.variable)))
                cmp, sign = self.comparator()
                constraints.append(ConditionalReifiedSum(head, guarded, cmp, self.rhs(sign)))
            elif kw == "define":
                self.expect_op("{")
                self.depth += 1
                rules = []
                while not self.at("}"):
                    if self.peek().kind == "eof":
                        self.fail("'}'")
                    head = self.expect_id("rule head")
                    self.expect_op("<-")
                    connective, lits = self.body(stop=".")
                    self.expect_op(".")
                    rules.append(Rule(head, connective, lits))
                self.depth -= 1
                self.expect_op("}")
                definitions.append(Definition(f"d{len(definitions) + 1}", rules))
            elif kw == "minimize":
                if objective is not None:
                    self.fail("a single minimize statement")
                terms, constant = self.linear(allow_constant=True)
                objective = Objective(terms, constant)
            self.end_of_statement()
        return Theory(name, int_vars, atoms, constraints, definitions, objective)

    def _single_term(self):
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        coef = 1
        if self.peek().kind == "int":
            coef = int(self.next().text)
        return [LinearTerm(sign * coef, self.expect_id("variable"))], 0


def parse_ecnf_text(text: str) -> Theory:
    return _Parser(text).parse()


# -- printing --------------------------------------------------------------

def _term(coef, var, first):
    sign = "-" if coef < 0 else "+"
    mag = abs(coef)
    body = var if mag == 1 else f"{mag} {var}"
    if first:
        return body if sign == "+" else f"- {body}"
    return f" {sign} {body}"


def _linear(terms, constant=0):
    parts = [_term(t.coefficient, t.variable, i == 0) for i, t in enumerate(terms)]
    if constant or not parts:
        if parts:
            parts.append(f" {'-' if constant < 0 else '+'} {abs(constant)}")
        else:
            parts.append(str(constant))
    return "".join(parts)


def _body(connective, lits):
    if not lits:
        return "true" if connective is Connective.AND else "false"
    return f" {connective.value} ".join(str(l) for l in lits)


def print_ecnf_text(t: Theory) -> str:
    out = [f"theory {t.name}"]
    for v in t.int_vars:
        out.append(f"int {v.id} [{v.lower},{v.upper}]" if v.bounded else f"int {v.id}")
    if t.atoms:
        out.append("atom " + " ".join(t.atoms))
    for c in t.constraints:
        if isinstance(c, Clause):
            out.append(("clause " + " | ".join(str(l) for l in c.literals)).rstrip())
        elif isinstance(c, Equivalence):
            out.append(f"equiv {c.head} <=> {_body(c.connective, c.body)}")
        elif isinstance(c, ReifiedSum):
            out.append(f"sum {c.head} <=> {_linear(c.terms)} {c.cmp.value} {c.rhs}")
        elif isinstance(c, ConditionalReifiedSum):
            if c.terms:
                parts = []
                for i, g in enumerate(c.terms):
                    coef = g.term.coefficient
                    sep = "" if i == 0 else (" - " if coef < 0 else " + ")
                    mag = abs(coef) if i else coef
                    parts.append(f"{sep}[{g.guard}] {mag} {g.term.variable}")
                body = "".join(parts)
            else:
                body = "0"
            out.append(f"csum {c.head} <=> {body} {c.cmp.value} {c.rhs}")
    for d in t.definitions:
        out.append("define {")
        for r in d.rules:
            out.append(f"  {r.head} <- {_body(r.connective, r.body)}.")
        out.append("}")
    if t.objective is not None:
        out.append(f"minimize {_linear(t.objective.terms, t.objective.constant)}")
    return "\n".join(out) + "\n"
