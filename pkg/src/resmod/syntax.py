"""Text formats: problem files, propositions, sequents and proof trees.

Problem files::

    # comment
    theory P* | Q.          one-way clause, `*` marks the selected literal
    clause -Q.              ordinary clause
    rule- P -> Q.           explicit polarized rewrite rule
    rule+ P -> ~Q.

Propositions use ``false``, ``~A``, ``(A \\/ B)`` and ``forall X. A``.
Identifiers starting with an upper-case letter are variables when they occur
as terms; ``X_3`` is variable ``X`` with index 3.

Proof trees are s-expressions::

    (neg-right at=0 (wit main {~Q} (trace))
      (axiom (wit left {Q} (trace)) (wit right {Q} (trace))))

with rewrite traces written ``(trace (step pos=[0,1] rule=2 sub={X:=a}) ...)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .logic import Atom, Clause, Fn, Literal, Substitution, Term, Var
from .rewrite import (
    Falsum,
    Forall,
    Not,
    Or,
    PAtom,
    PolarizedRule,
    Prop,
    RewriteStep,
    RewriteTrace,
    Sign,
    clause_to_rule,
)
from .sequent import RULES, ProofTree, Sequent, Witness


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
    |(?P<op>\\/|\|-|->|:=|[()\[\]{},.|*~+\-=:])
    |(?P<ident>[A-Za-z0-9_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_VAR_INDEX = re.compile(r"^([A-Z][A-Za-z0-9_']*?)_(\d+)$")


@dataclass
class Token:
    kind: str
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def is_var_name(name: str) -> bool:
    return name[:1].isupper()


def make_var(name: str) -> Var:
    m = _VAR_INDEX.match(name)
    if m:
        return Var(m.group(1), int(m.group(2)))
    return Var(name)


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        line, col = _line_col(self.text, tok.start)
        return ParseError(message, line, col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text: str | None = None) -> Token:
        t = self.tok
        if text is not None and (t.text != text or t.kind == "eof"):
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise self.error(f"expected {text!r}, found {found}")
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {what}, found {found}")
        return self.take()

    def int_(self) -> int:
        t = self.ident("integer")
        if not t.text.isdigit():
            raise self.error(f"expected integer, found {t.text!r}", t)
        return int(t.text)

    def eof(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # -- terms and atoms
    def term(self) -> Term:
        t = self.ident("term")
        if is_var_name(t.text):
            if self.at("("):
                raise self.error(f"variable {t.text} cannot take arguments", t)
            return make_var(t.text)
        return Fn(t.text, self.args())

    def args(self) -> tuple[Term, ...]:
        if not self.at("("):
            return ()
        self.take("(")
        out = [self.term()]
        while self.at(","):
            self.take(",")
            out.append(self.term())
        self.take(")")
        return tuple(out)

    def atom(self) -> Atom:
        t = self.ident("predicate")
        if t.text in ("false", "forall"):
            raise self.error(f"{t.text!r} is reserved", t)
        return Atom(t.text, self.args())

    # -- propositions
    def prop(self) -> Prop:
        if self.at("~"):
            self.take("~")
            return Not(self.prop())
        if self.at("("):
            self.take("(")
            left = self.prop()
            if self.at(")"):
                self.take(")")
                return left
            self.take("\\/")
            right = self.prop()
            self.take(")")
            return Or(left, right)
        if self.at("false"):
            self.take()
            return Falsum()
        if self.at("forall"):
            self.take()
            v = self.ident("variable")
            if not is_var_name(v.text):
                raise self.error(f"bound variable must be upper-case, found {v.text!r}", v)
            self.take(".")
            return Forall(make_var(v.text), self.prop())
        return PAtom(self.atom())

    def sign(self) -> Sign:
        if self.at("+"):
            self.take()
            return Sign.POS
        if self.at("-"):
            self.take()
            return Sign.NEG
        raise self.error("expected '+' or '-'")

    # -- problem files
    def literal(self) -> tuple[Literal, bool, Token]:
        start = self.tok
        positive = True
        if self.at("-"):
            self.take()
            positive = False
        lit = Literal(positive, self.atom())
        starred = False
        if self.at("*"):
            self.take()
            starred = True
        return lit, starred, start

    def clause_body(self) -> tuple[list[Literal], list[tuple[int, Token]]]:
        lits, stars = [], []
        while True:
            lit, starred, tok = self.literal()
            if starred:
                stars.append((len(lits), tok))
            lits.append(lit)
            if self.at("|"):
                self.take()
            elif self.at("|-"):
                # "P |-Q" tokenizes the bar and the minus together
                self.toks[self.i] = Token("op", "-", self.tok.start + 1, self.tok.end)
            else:
                break
        return lits, stars

    def statement(self, problem: Problem) -> None:
        head = self.ident("'theory', 'clause' or 'rule'")
        if head.text == "rule":
            sign = self.sign()
            lhs = self.atom()
            self.take("->")
            rhs = self.prop()
            self.take(".")
            try:
                rule = PolarizedRule(sign, lhs, rhs, len(problem.rules) + 1)
            except ValueError as e:
                raise self.error(str(e), head) from None
            problem.rules.append(rule)
            return
        if head.text not in ("theory", "clause"):
            raise self.error(f"unknown statement {head.text!r}", head)
        lits, stars = self.clause_body()
        self.take(".")
        if head.text == "clause" and stars:
            raise self.error("selected literal '*' on a non-theory line", stars[0][1])
        if len(stars) > 1:
            raise self.error("more than one selected literal in a clause", stars[1][1])
        if head.text == "theory" and not stars:
            raise self.error("theory clause lacks selected literal", head)
        selected = stars[0][0] if stars else None
        problem.clauses.append(Clause(tuple(lits), selected, len(problem.clauses) + 1))

    def problem(self, name: str) -> Problem:
        problem = Problem(name)
        while self.tok.kind != "eof":
            self.statement(problem)
        problem.check_arities()
        return problem

    # -- sequents and proofs
    def prop_list(self, stop: str) -> tuple[Prop, ...]:
        out = []
        if self.at(stop) or self.tok.kind == "eof":
            return ()
        out.append(self.prop())
        while self.at(","):
            self.take(",")
            out.append(self.prop())
        return tuple(out)

    def sequent(self) -> Sequent:
        left = self.prop_list("|-")
        self.take("|-")
        right = self.prop_list("")
        return Sequent(left, right)

    def braced(self, inner):
        self.take("{")
        out = inner()
        self.take("}")
        return out

    def substitution(self) -> Substitution:
        self.take("{")
        binds = {}
        while not self.at("}"):
            v = self.ident("variable")
            if not is_var_name(v.text):
                raise self.error(f"expected variable, found {v.text!r}", v)
            self.take(":=")
            binds[make_var(v.text)] = self.term()
            if not self.at(","):
                break
            self.take(",")
        self.take("}")
        return Substitution(binds)

    def path(self) -> tuple[int, ...]:
        self.take("[")
        out = []
        while not self.at("]"):
            out.append(self.int_())
            if not self.at(","):
                break
            self.take(",")
        self.take("]")
        return tuple(out)

    def keyword(self, word: str) -> None:
        t = self.ident(word)
        if t.text != word:
            raise self.error(f"expected {word!r}, found {t.text!r}", t)
        self.take("=")

    def trace(self) -> RewriteTrace:
        self.take("(")
        t = self.ident("'trace'")
        if t.text != "trace":
            raise self.error(f"expected 'trace', found {t.text!r}", t)
        steps = []
        while self.at("("):
            self.take("(")
            s = self.ident("'step'")
            if s.text != "step":
                raise self.error(f"expected 'step', found {s.text!r}", s)
            self.keyword("pos")
            path = self.path()
            self.keyword("rule")
            rule = self.int_()
            self.keyword("sub")
            sub = self.substitution()
            self.take(")")
            steps.append(RewriteStep(path, rule, sub))
        self.take(")")
        return RewriteTrace(tuple(steps))

    def rule_name(self) -> str:
        t = self.ident("rule name")
        name = t.text
        while self.at("-") and self.tok.start == t.end and self.peek().kind == "ident" and self.peek().start == self.tok.end:
            self.take("-")
            t = self.take()
            name += "-" + t.text
        if name not in RULES:
            raise self.error(f"unknown rule {name!r}")
        return name

    def proof(self) -> ProofTree:
        self.take("(")
        rule = self.rule_name()
        attrs: dict = {}
        witnesses: dict[str, Witness] = {}
        kids = []
        while not self.at(")"):
            if self.tok.kind == "ident" and self.peek().text == "=":
                key = self.take().text
                self.take("=")
                if key == "at":
                    attrs["principal"] = self.int_()
                elif key in ("cut", "body"):
                    attrs[key] = self.braced(self.prop)
                elif key == "var":
                    v = self.ident("variable")
                    attrs["var"] = make_var(v.text)
                elif key == "term":
                    attrs["term"] = self.braced(self.term)
                else:
                    raise self.error(f"unknown attribute {key!r}")
            elif self.at("(") and self.peek().text == "wit":
                self.take("(")
                self.take("wit")
                name = self.ident("witness name").text
                target = self.braced(self.prop)
                witnesses[name] = Witness(target, self.trace())
                self.take(")")
            elif self.at("("):
                kids.append(self.proof())
            else:
                raise self.error(f"unexpected {self.tok.text!r} in proof node")
        self.take(")")
        return ProofTree(rule, witnesses=witnesses, children=tuple(kids), **attrs)


@dataclass
class Problem:
    name: str
    clauses: list[Clause] = field(default_factory=list)
    rules: list[PolarizedRule] = field(default_factory=list)

    @property
    def theory(self) -> list[Clause]:
        return [c for c in self.clauses if c.is_one_way]

    @property
    def theory_ids(self) -> frozenset[int]:
        return frozenset(c.id for c in self.theory)

    def system(self) -> list[PolarizedRule]:
        """Translated theory rules (id = clause id) followed by the explicit rules."""
        out = [clause_to_rule(c) for c in self.theory]
        base = max((c.id for c in self.clauses), default=0)
        out += [PolarizedRule(r.sign, r.lhs, r.rhs, base + r.id) for r in self.rules]
        return out

    def check_arities(self) -> None:
        seen: dict[tuple[str, str], int] = {}

        def note(kind: str, name: str, n: int):
            if seen.setdefault((kind, name), n) != n:
                raise ParseError(f"{kind} {name!r} used with arities {seen[(kind, name)]} and {n}")

        def term(t: Term):
            if isinstance(t, Fn):
                note("function", t.symbol, len(t.args))
                for a in t.args:
                    term(a)

        def atom(a: Atom):
            note("predicate", a.pred, len(a.args))
            for t in a.args:
                term(t)

        def prop(p: Prop):
            if isinstance(p, PAtom):
                atom(p.atom)
            elif isinstance(p, Not):
                prop(p.body)
            elif isinstance(p, Or):
                prop(p.left)
                prop(p.right)
            elif isinstance(p, Forall):
                prop(p.body)

        for c in self.clauses:
            for lit in c.literals:
                atom(lit.atom)
        for r in self.rules:
            atom(r.lhs)
            prop(r.rhs)


def parse_problem(text: str, name: str = "problem") -> Problem:
    return Parser(text).problem(name)


def parse_prop(text: str) -> Prop:
    p = Parser(text)
    out = p.prop()
    p.eof()
    return out


def parse_term(text: str) -> Term:
    p = Parser(text)
    out = p.term()
    p.eof()
    return out


def parse_terms(text: str) -> list[Term]:
    """Comma separated terms, e.g. ``"a, f(a)"``; empty text gives no terms."""
    p = Parser(text)
    out = []
    if p.tok.kind == "eof":
        return out
    out.append(p.term())
    while p.at(","):
        p.take(",")
        out.append(p.term())
    p.eof()
    return out


def parse_sequent(text: str) -> Sequent:
    p = Parser(text)
    out = p.sequent()
    p.eof()
    return out


def parse_proof(text: str) -> ProofTree:
    p = Parser(text)
    out = p.proof()
    p.eof()
    return out


def parse_clause(text: str, theory: bool = False) -> Clause:
    """A single clause without keyword or final dot, e.g. ``"P(X)* | -Q"``."""
    kw = "theory" if theory else "clause"
    return parse_problem(f"{kw} {text}.").clauses[0]


def format_clause(c: Clause) -> str:
    kw = "theory" if c.is_one_way else "clause"
    return f"{kw} {c}."


def format_rule(r: PolarizedRule) -> str:
    return f"rule{r.sign} {r.lhs} -> {r.rhs}."


def format_problem(problem: Problem) -> str:
    lines = [format_clause(c) for c in problem.clauses]
    lines += [format_rule(r) for r in problem.rules]
    return "\n".join(lines) + "\n"


def format_trace(trace: RewriteTrace) -> str:
    steps = "".join(
        f" (step pos=[{','.join(map(str, s.path))}] rule={s.rule} sub={s.subst})" for s in trace.steps
    )
    return f"(trace{steps})"


def format_proof(proof: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    head = [proof.rule]
    if proof.principal is not None:
        head.append(f"at={proof.principal}")
    if proof.cut is not None:
        head.append(f"cut={{{proof.cut}}}")
    if proof.var is not None:
        head.append(f"var={proof.var}")
    if proof.body is not None:
        head.append(f"body={{{proof.body}}}")
    if proof.term is not None:
        head.append(f"term={{{proof.term}}}")
    for name, w in proof.witnesses.items():
        head.append(f"(wit {name} {{{w.target}}} {format_trace(w.trace)})")
    text = pad + "(" + " ".join(head)
    if not proof.children:
        return text + ")"
    kids = "\n".join(format_proof(k, indent + 1) for k in proof.children)
    return text + "\n" + kids + ")"
