"""Propositions, polarized rewrite rules and polarity-aware rewriting.

A rule ``P ->- A`` may only fire on an atomic occurrence of negative
polarity and ``P ->+ A`` only on a positive one.  Polarity starts at the
sign given for the root and flips under every negation; disjunction and
universal quantification keep it.
"""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

from .logic import (
    Atom,
    Clause,
    Literal,
    Substitution,
    Term,
    Var,
    apply_substitution,
    match,
    term_vars,
    try_unify,
    variables,
)


class Sign(enum.Enum):
    POS = "+"
    NEG = "-"

    def flip(self) -> Sign:
        return Sign.NEG if self is Sign.POS else Sign.POS

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PAtom:
    atom: Atom

    def __str__(self) -> str:
        return str(self.atom)


@dataclass(frozen=True)
class Falsum:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Not:
    body: Prop

    def __str__(self) -> str:
        return f"~{self.body}"


@dataclass(frozen=True)
class Or:
    left: Prop
    right: Prop

    def __str__(self) -> str:
        return f"({self.left} \\/ {self.right})"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: Prop

    def __str__(self) -> str:
        return f"forall {self.var}. {self.body}"


Prop = Union[PAtom, Falsum, Not, Or, Forall]
Path = tuple[int, ...]


class RewriteError(Exception):
    pass


def atom(pred: str, *args: Term) -> PAtom:
    return PAtom(Atom(pred, tuple(args)))


def disjunction(parts: Sequence[Prop]) -> Prop:
    """Right-nested disjunction; the empty disjunction is falsum."""
    if not parts:
        return Falsum()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def free_vars(p: Prop) -> list[Var]:
    """Free variables in first-occurrence order."""
    out: dict[Var, None] = {}

    def visit(q: Prop, bound: frozenset):
        if isinstance(q, PAtom):
            for v in variables(q.atom):
                if v not in bound:
                    out.setdefault(v)
        elif isinstance(q, Not):
            visit(q.body, bound)
        elif isinstance(q, Or):
            visit(q.left, bound)
            visit(q.right, bound)
        elif isinstance(q, Forall):
            visit(q.body, bound | {q.var})

    visit(p, frozenset())
    return list(out)


def children(p: Prop) -> tuple[Prop, ...]:
    if isinstance(p, Not):
        return (p.body,)
    if isinstance(p, Or):
        return (p.left, p.right)
    if isinstance(p, Forall):
        return (p.body,)
    return ()


def subformula(p: Prop, path: Path) -> Prop:
    for i in path:
        kids = children(p)
        if not 0 <= i < len(kids):
            raise RewriteError(f"invalid path {list(path)}")
        p = kids[i]
    return p


def replace_at(p: Prop, path: Path, new: Prop) -> Prop:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(p, Not) and i == 0:
        return Not(replace_at(p.body, rest, new))
    if isinstance(p, Or) and i in (0, 1):
        if i == 0:
            return Or(replace_at(p.left, rest, new), p.right)
        return Or(p.left, replace_at(p.right, rest, new))
    if isinstance(p, Forall) and i == 0:
        return Forall(p.var, replace_at(p.body, rest, new))
    raise RewriteError(f"invalid path {list(path)}")


def occurrence_polarity(p: Prop, path: Path, start: Sign) -> Sign:
    sign = start
    for i in path:
        kids = children(p)
        if not 0 <= i < len(kids):
            raise RewriteError(f"invalid path {list(path)}")
        if isinstance(p, Not):
            sign = sign.flip()
        p = kids[i]
    return sign


def atomic_positions(p: Prop, start: Sign, path: Path = ()) -> Iterator[tuple[Path, Atom, Sign]]:
    """Every atomic occurrence with its polarity, left to right."""
    if isinstance(p, PAtom):
        yield path, p.atom, start
    elif isinstance(p, Not):
        yield from atomic_positions(p.body, start.flip(), path + (0,))
    elif isinstance(p, Or):
        yield from atomic_positions(p.left, start, path + (0,))
        yield from atomic_positions(p.right, start, path + (1,))
    elif isinstance(p, Forall):
        yield from atomic_positions(p.body, start, path + (0,))


def fresh_var(v: Var, avoid: set[Var]) -> Var:
    i = 1
    while Var(v.name, i) in avoid:
        i += 1
    return Var(v.name, i)


def subst_prop(s: Mapping[Var, Term], p: Prop) -> Prop:
    """Capture-avoiding substitution of free variables."""
    if not s:
        return p
    if isinstance(p, PAtom):
        return PAtom(apply_substitution(s, p.atom))
    if isinstance(p, Falsum):
        return p
    if isinstance(p, Not):
        return Not(subst_prop(s, p.body))
    if isinstance(p, Or):
        return Or(subst_prop(s, p.left), subst_prop(s, p.right))
    body_free = set(free_vars(p.body))
    inner = {v: t for v, t in s.items() if v != p.var and v in body_free}
    if not inner:
        return p
    range_vars = {x for t in inner.values() for x in term_vars(t)}
    var, body = p.var, p.body
    if var in range_vars:
        var = fresh_var(var, range_vars | body_free | set(inner))
        body = subst_prop({p.var: var}, body)
    return Forall(var, subst_prop(inner, body))


def _canon(p: Prop, env: dict, depth: int) -> Prop:
    if isinstance(p, PAtom):
        return PAtom(apply_substitution(env, p.atom))
    if isinstance(p, Falsum):
        return p
    if isinstance(p, Not):
        return Not(_canon(p.body, env, depth))
    if isinstance(p, Or):
        return Or(_canon(p.left, env, depth), _canon(p.right, env, depth))
    b = Var("%", depth)
    return Forall(b, _canon(p.body, {**env, p.var: b}, depth + 1))


def canonical(p: Prop) -> Prop:
    """Representative of p's alpha-equivalence class (bound variables renumbered)."""
    return _canon(p, {}, 0)


def alpha_eq(p: Prop, q: Prop) -> bool:
    return p == q or canonical(p) == canonical(q)


@dataclass(frozen=True)
class PolarizedRule:
    sign: Sign
    lhs: Atom
    rhs: Prop
    id: int = 0

    def __post_init__(self):
        extra = set(free_vars(self.rhs)) - set(variables(self.lhs))
        if extra:
            names = ", ".join(sorted(map(str, extra)))
            raise ValueError(f"rule {self.lhs} ->{self.sign} {self.rhs}: right side has free {names}")

    def __str__(self) -> str:
        return f"{self.lhs} ->{self.sign} {self.rhs}"


def literal_prop(lit: Literal) -> Prop:
    return PAtom(lit.atom) if lit.positive else Not(PAtom(lit.atom))


def clause_to_rule(c: Clause, rule_id: int | None = None) -> PolarizedRule:
    """Rewrite rule of a one-way clause, keyed on its selected literal.

    With selected literal L on atom P and remaining literals C1..Cp, the rule
    rewrites P to the universal closure (over variables not in P) of
    C1 \\/ ... \\/ Cp; negatively if L is negative, positively and under an
    extra negation if L is positive.
    """
    if c.selected is None:
        raise ValueError(f"clause {c.id} is not one-way")
    sel = c.literals[c.selected]
    rest = [lit for i, lit in enumerate(c.literals) if i != c.selected]
    head_vars = set(variables(sel.atom))
    extra = [v for lit in rest for v in variables(lit) if v not in head_vars]
    body = disjunction([literal_prop(lit) for lit in rest])
    for v in reversed(list(dict.fromkeys(extra))):
        body = Forall(v, body)
    rid = c.id if rule_id is None else rule_id
    if sel.positive:
        return PolarizedRule(Sign.POS, sel.atom, Not(body), rid)
    return PolarizedRule(Sign.NEG, sel.atom, body, rid)


@dataclass(frozen=True)
class RewriteStep:
    path: Path
    rule: int
    subst: Substitution


@dataclass(frozen=True)
class RewriteTrace:
    steps: tuple[RewriteStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[RewriteStep]:
        return iter(self.steps)


def rule_table(rules: Iterable[PolarizedRule]) -> dict[int, PolarizedRule]:
    table: dict[int, PolarizedRule] = {}
    for r in rules:
        if r.id in table:
            raise ValueError(f"duplicate rule id {r.id}")
        table[r.id] = r
    return table


def rewrite_step(
    p: Prop,
    start: Sign,
    rule: PolarizedRule,
    path: Path,
    subst: Mapping[Var, Term] | None = None,
) -> Prop:
    """Rewrite the atom at ``path`` with ``rule``.

    When ``subst`` is given it must be exactly the matching substitution of the
    rule's left side onto the atom.  Raises :class:`RewriteError` on a bad path,
    a non-atomic target, a polarity mismatch or a failed match.
    """
    target = subformula(p, path)
    if not isinstance(target, PAtom):
        raise RewriteError(f"position {list(path)} is not atomic")
    pol = occurrence_polarity(p, path, start)
    if pol is not rule.sign:
        raise RewriteError(f"polarity mismatch: rule {rule.id} is {rule.sign}, occurrence is {pol}")
    sigma = match(rule.lhs, target.atom)
    if sigma is None:
        raise RewriteError(f"rule {rule.id} does not match {target.atom}")
    if subst is not None and Substitution(subst) != sigma:
        raise RewriteError(f"substitution {Substitution(subst)} is not the match {sigma}")
    return replace_at(p, path, subst_prop(sigma, rule.rhs))


def replay(trace: RewriteTrace, source: Prop, start: Sign, rules: Mapping[int, PolarizedRule]) -> Prop:
    p = source
    for n, step in enumerate(trace.steps):
        rule = rules.get(step.rule)
        if rule is None:
            raise RewriteError(f"step {n}: unknown rule {step.rule}")
        try:
            p = rewrite_step(p, start, rule, step.path, step.subst)
        except RewriteError as e:
            raise RewriteError(f"step {n}: {e}") from None
    return p


def successors(p: Prop, start: Sign, rules: Iterable[PolarizedRule]) -> Iterator[tuple[RewriteStep, Prop]]:
    rules = list(rules)
    for path, at, pol in atomic_positions(p, start):
        for rule in rules:
            if rule.sign is not pol:
                continue
            sigma = match(rule.lhs, at)
            if sigma is not None:
                yield RewriteStep(path, rule.id, sigma), replace_at(p, path, subst_prop(sigma, rule.rhs))


def reachable(a: Prop, start: Sign, rules: Iterable[PolarizedRule], fuel: int) -> list[tuple[Prop, RewriteTrace]]:
    """Everything reachable from ``a`` within ``fuel`` steps, breadth first, modulo alpha."""
    rules = list(rules)
    seen = {canonical(a)}
    out = [(a, RewriteTrace())]
    frontier = deque(out)
    for _ in range(fuel):
        nxt = deque()
        for p, tr in frontier:
            for step, q in successors(p, start, rules):
                key = canonical(q)
                if key in seen:
                    continue
                seen.add(key)
                item = (q, RewriteTrace(tr.steps + (step,)))
                out.append(item)
                nxt.append(item)
        if not nxt:
            break
        frontier = nxt
    return out


def rewrites_to(a: Prop, start: Sign, b: Prop, rules: Iterable[PolarizedRule], fuel: int) -> RewriteTrace | None:
    """A shortest trace rewriting ``a`` into ``b`` (up to bound names) within ``fuel`` steps."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    goal = canonical(b)
    rules = list(rules)
    if canonical(a) == goal:
        return RewriteTrace()
    seen = {canonical(a)}
    frontier = [(a, ())]
    for _ in range(fuel):
        nxt = []
        for p, steps in frontier:
            for step, q in successors(p, start, rules):
                key = canonical(q)
                if key == goal:
                    return RewriteTrace(steps + (step,))
                if key not in seen:
                    seen.add(key)
                    nxt.append((q, steps + (step,)))
        frontier = nxt
        if not frontier:
            break
    return None


def _renamed_atom(a: Atom, avoid: set[Var]) -> Atom:
    ren = {}
    for v in variables(a):
        if v in avoid:
            ren[v] = fresh_var(v, avoid | set(ren.values()) | set(variables(a)))
    return apply_substitution(Substitution(ren), a)


def check_disjoint_criterion(rules: Iterable[PolarizedRule]) -> bool:
    """True iff no negative rule's left side unifies with a positive rule's left side."""
    rules = list(rules)
    neg = [r.lhs for r in rules if r.sign is Sign.NEG]
    pos = [r.lhs for r in rules if r.sign is Sign.POS]
    for n in neg:
        for p in pos:
            if try_unify(n, _renamed_atom(p, set(variables(n)))) is not None:
                return False
    return True
