"""Terms, atoms, literals, clauses, substitutions and syntactic unification.

Everything here is immutable.  Clauses are multisets of literals kept as
tuples so that literal positions are stable and duplicates survive until an
explicit factoring step removes them.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True, order=True)
class Var:
    name: str
    index: int = 0

    def __str__(self) -> str:
        return self.name if self.index == 0 else f"{self.name}_{self.index}"


@dataclass(frozen=True)
class Fn:
    """Application of a function symbol; constants have no arguments."""

    symbol: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(map(str, self.args))})"


Term = Union[Var, Fn]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Atom

    def __neg__(self) -> Literal:
        return Literal(not self.positive, self.atom)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"-{self.atom}"


class Substitution(Mapping):
    """A finite map from variables to terms.  Trivial bindings x := x are dropped."""

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping[Var, Term] | Iterable[tuple[Var, Term]] = ()):
        self._map = {v: t for v, t in dict(bindings).items() if v != t}

    def __getitem__(self, v: Var) -> Term:
        return self._map[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        return f"Substitution({self._map!r})"

    def __str__(self) -> str:
        items = sorted(self._map.items(), key=lambda kv: (kv[0].name, kv[0].index))
        return "{" + ", ".join(f"{v}:={t}" for v, t in items) + "}"

    def compose(self, after: Substitution) -> Substitution:
        """The substitution that applies ``self`` and then ``after``."""
        out = {v: apply_substitution(after, t) for v, t in self._map.items()}
        for v, t in after.items():
            out.setdefault(v, t)
        return Substitution(out)


EMPTY = Substitution()


@dataclass(frozen=True)
class Input:
    def __str__(self) -> str:
        return "input"


@dataclass(frozen=True)
class Resolvent:
    """Binary resolution of ``parents[0]`` at ``positions[0]`` with ``parents[1]``.

    The second parent was renamed by ``renaming`` before unification.
    """

    parents: tuple[int, int]
    positions: tuple[int, int]
    unifier: Substitution
    renaming: Substitution = EMPTY

    def __str__(self) -> str:
        (a, b), (i, j) = self.parents, self.positions
        return f"resolve({a}.{i}, {b}.{j}) mgu={self.unifier}"


@dataclass(frozen=True)
class Factor:
    parent: int
    positions: tuple[int, int]
    unifier: Substitution

    def __str__(self) -> str:
        i, j = self.positions
        return f"factor({self.parent}.{i}, {self.parent}.{j}) mgu={self.unifier}"


Origin = Union[Input, Resolvent, Factor]


@dataclass(frozen=True)
class Clause:
    """A multiset of literals.

    ``selected`` is the index of the selected literal of a one-way clause and
    ``None`` for an ordinary clause.
    """

    literals: tuple[Literal, ...]
    selected: int | None = None
    id: int = 0
    origin: Origin = field(default_factory=Input)

    def __post_init__(self):
        if not isinstance(self.literals, tuple):
            object.__setattr__(self, "literals", tuple(self.literals))
        if self.selected is not None and not 0 <= self.selected < len(self.literals):
            raise ValueError(f"selected index {self.selected} out of range")

    @property
    def is_one_way(self) -> bool:
        return self.selected is not None

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "false"
        return " | ".join(
            f"{lit}*" if i == self.selected else str(lit) for i, lit in enumerate(self.literals)
        )


class UnificationError(Exception):
    """Raised when two atoms or terms have no unifier.

    ``kind`` is ``"clash"`` for a symbol mismatch and ``"occurs"`` when the
    occurs-check fails.
    """

    def __init__(self, kind: str, left, right):
        super().__init__(f"{kind}: {left} vs {right}")
        self.kind = kind
        self.left = left
        self.right = right


_fresh = itertools.count(1)


def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from term_vars(a)


def variables(x) -> list[Var]:
    """Variables of a term, atom, literal or clause in first-occurrence order."""
    if isinstance(x, (Var, Fn)):
        found = term_vars(x)
    elif isinstance(x, Atom):
        found = (v for a in x.args for v in term_vars(a))
    elif isinstance(x, Literal):
        found = variables(x.atom)
    elif isinstance(x, Clause):
        found = (v for lit in x.literals for v in variables(lit))
    else:
        raise TypeError(f"no variables for {type(x).__name__}")
    return list(dict.fromkeys(found))


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def apply_substitution(s: Mapping[Var, Term], x):
    """Simultaneously replace the variables bound by ``s`` inside ``x``."""
    if not s:
        return x
    if isinstance(x, Var):
        return s.get(x, x)
    if isinstance(x, Fn):
        if not x.args:
            return x
        return Fn(x.symbol, tuple(apply_substitution(s, a) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(apply_substitution(s, a) for a in x.args))
    if isinstance(x, Literal):
        return Literal(x.positive, apply_substitution(s, x.atom))
    if isinstance(x, Clause):
        return Clause(
            tuple(apply_substitution(s, lit) for lit in x.literals),
            x.selected,
            x.id,
            x.origin,
        )
    raise TypeError(f"cannot substitute into {type(x).__name__}")


def _walk(t: Term, b: dict[Var, Term]) -> Term:
    while isinstance(t, Var) and t in b:
        t = b[t]
    return t


def _occurs(v: Var, t: Term, b: dict[Var, Term]) -> bool:
    t = _walk(t, b)
    if t == v:
        return True
    if isinstance(t, Fn):
        return any(_occurs(v, a, b) for a in t.args)
    return False


def _resolve(t: Term, b: dict[Var, Term]) -> Term:
    t = _walk(t, b)
    if isinstance(t, Fn) and t.args:
        return Fn(t.symbol, tuple(_resolve(a, b) for a in t.args))
    return t


def _unify_pairs(pairs: list[tuple[Term, Term]]) -> Substitution:
    b: dict[Var, Term] = {}
    stack = list(reversed(pairs))
    while stack:
        s, t = stack.pop()
        s, t = _walk(s, b), _walk(t, b)
        if s == t:
            continue
        if isinstance(s, Var):
            if _occurs(s, t, b):
                raise UnificationError("occurs", s, _resolve(t, b))
            b[s] = t
        elif isinstance(t, Var):
            if _occurs(t, s, b):
                raise UnificationError("occurs", t, _resolve(s, b))
            b[t] = s
        elif s.symbol != t.symbol or len(s.args) != len(t.args):
            raise UnificationError("clash", s, t)
        else:
            stack.extend(reversed(list(zip(s.args, t.args))))
    return Substitution({v: _resolve(v, b) for v in b})


def unify(a: Atom, b: Atom) -> Substitution:
    """Most general unifier of two atoms (occurs-check always on).

    The result is idempotent.  Raises :class:`UnificationError` on failure.
    """
    if a.pred != b.pred or len(a.args) != len(b.args):
        raise UnificationError("clash", a, b)
    return _unify_pairs(list(zip(a.args, b.args)))


def unify_terms(s: Term, t: Term) -> Substitution:
    return _unify_pairs([(s, t)])


def try_unify(a: Atom, b: Atom) -> Substitution | None:
    try:
        return unify(a, b)
    except UnificationError:
        return None


def _match_term(p: Term, t: Term, b: dict[Var, Term]) -> bool:
    if isinstance(p, Var):
        bound = b.get(p)
        if bound is None:
            b[p] = t
            return True
        return bound == t
    if not isinstance(t, Fn) or p.symbol != t.symbol or len(p.args) != len(t.args):
        return False
    return all(_match_term(x, y, b) for x, y in zip(p.args, t.args))


def match(pattern: Atom, target: Atom, start: Mapping[Var, Term] | None = None) -> Substitution | None:
    """One-way matching: a substitution σ over the pattern's variables with σ(pattern) = target."""
    if pattern.pred != target.pred or len(pattern.args) != len(target.args):
        return None
    b = dict(start or {})
    for p, t in zip(pattern.args, target.args):
        if not _match_term(p, t, b):
            return None
    return Substitution(b)


def renaming_apart(c: Clause, reserved: Iterable[Var], counter: Iterator[int] | None = None) -> Substitution:
    """A renaming of the variables of ``c`` that collide with ``reserved``."""
    counter = _fresh if counter is None else counter
    reserved = set(reserved)
    own = variables(c)
    taken = reserved | set(own)
    ren = {}
    for v in own:
        if v in reserved:
            while True:
                fresh = Var(v.name, next(counter))
                if fresh not in taken:
                    break
            taken.add(fresh)
            ren[v] = fresh
    return Substitution(ren)


def rename_apart(c: Clause, reserved: Iterable[Var], counter: Iterator[int] | None = None) -> Clause:
    return apply_substitution(renaming_apart(c, reserved, counter), c)


def _rename_term(s: Term, t: Term, fwd: dict, bwd: dict) -> bool:
    if isinstance(s, Var):
        if not isinstance(t, Var):
            return False
        if fwd.get(s, t) != t or bwd.get(t, s) != s:
            return False
        fwd[s] = t
        bwd[t] = s
        return True
    if not isinstance(t, Fn) or s.symbol != t.symbol or len(s.args) != len(t.args):
        return False
    return all(_rename_term(x, y, fwd, bwd) for x, y in zip(s.args, t.args))


def _rename_literal(a: Literal, b: Literal, fwd: dict, bwd: dict):
    if a.positive != b.positive or a.atom.pred != b.atom.pred or len(a.atom.args) != len(b.atom.args):
        return None
    fwd, bwd = dict(fwd), dict(bwd)
    for x, y in zip(a.atom.args, b.atom.args):
        if not _rename_term(x, y, fwd, bwd):
            return None
    return fwd, bwd


def _biject(xs: list[Literal], ys: list[Literal], fwd: dict, bwd: dict) -> bool:
    if not xs:
        return True
    head, rest = xs[0], xs[1:]
    for j, y in enumerate(ys):
        ext = _rename_literal(head, y, fwd, bwd)
        if ext is not None and _biject(rest, ys[:j] + ys[j + 1:], *ext):
            return True
    return False


def skeleton(x) -> tuple:
    """Shape of a term/literal with every variable replaced by the same marker."""
    if isinstance(x, Var):
        return ("?",)
    if isinstance(x, Fn):
        return (x.symbol,) + tuple(skeleton(a) for a in x.args)
    if isinstance(x, Literal):
        return (x.positive, x.atom.pred) + tuple(skeleton(a) for a in x.atom.args)
    raise TypeError(type(x).__name__)


def clause_key(c: Clause) -> tuple:
    """A variant-invariant key: variants always share it."""
    return tuple(sorted((skeleton(lit) for lit in c.literals), key=repr))


def is_variant(c1: Clause, c2: Clause) -> bool:
    """True iff a bijective variable renaming maps c1's literal multiset onto c2's."""
    if len(c1.literals) != len(c2.literals):
        return False
    if clause_key(c1) != clause_key(c2):
        return False
    return _biject(list(c1.literals), list(c2.literals), {}, {})


def _subsume(xs: list[Literal], ys: list[Literal], b: dict) -> bool:
    if not xs:
        return True
    head, rest = xs[0], xs[1:]
    for j, y in enumerate(ys):
        if y.positive != head.positive:
            continue
        s = match(head.atom, y.atom, b)
        if s is not None and _subsume(rest, ys[:j] + ys[j + 1:], dict(s)):
            return True
    return False


def subsumes(c: Clause, d: Clause) -> bool:
    """Multiset subsumption: some σ maps c's literals injectively into d's."""
    if len(c.literals) > len(d.literals):
        return False
    return _subsume(list(c.literals), list(d.literals), {})


def signature(clauses: Iterable[Clause]) -> dict[tuple[str, str], int]:
    """Map (kind, name) -> arity for every symbol used; kind is 'pred' or 'fn'."""
    sig: dict[tuple[str, str], int] = {}

    def visit(t: Term):
        if isinstance(t, Fn):
            sig.setdefault(("fn", t.symbol), len(t.args))
            for a in t.args:
                visit(a)

    for c in clauses:
        for lit in c.literals:
            sig.setdefault(("pred", lit.atom.pred), len(lit.atom.args))
            for a in lit.atom.args:
                visit(a)
    return sig
