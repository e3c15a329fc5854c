"""Atom ordering and literal selection for ordered resolution.

The ordering is a Knuth-Bendix style comparison with every symbol and every
variable weighing 1: total weight first, then symbol precedence, then the
arguments left to right.  A strict decision is only reported when it holds
under every substitution, which is what the variable-count condition
guarantees; otherwise the pair is ``INCOMPARABLE``.
"""

from __future__ import annotations

import enum
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .logic import Atom, Clause, Fn, Term, Var, apply_substitution, term_vars


class Cmp(enum.Enum):
    LT = "<"
    GT = ">"
    EQ = "="
    INCOMPARABLE = "?"


class OrderingError(ValueError):
    pass


@dataclass(frozen=True)
class Precedence:
    """Ranked symbol lists, lowest first."""

    predicates: tuple[str, ...] = ()
    functions: tuple[str, ...] = ()
    _pred_rank: dict = field(init=False, repr=False, compare=False)
    _fn_rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for kind, names in (("predicate", self.predicates), ("function", self.functions)):
            dup = [n for n, k in Counter(names).items() if k > 1]
            if dup:
                raise OrderingError(f"{kind} symbol listed twice: {dup[0]}")
        object.__setattr__(self, "_pred_rank", {n: i for i, n in enumerate(self.predicates)})
        object.__setattr__(self, "_fn_rank", {n: i for i, n in enumerate(self.functions)})

    def pred_rank(self, name: str) -> int:
        try:
            return self._pred_rank[name]
        except KeyError:
            raise OrderingError(f"unknown predicate symbol {name!r}") from None

    def fn_rank(self, name: str) -> int:
        try:
            return self._fn_rank[name]
        except KeyError:
            raise OrderingError(f"unknown function symbol {name!r}") from None

    @classmethod
    def parse(cls, text: str, sig: Mapping[tuple[str, str], int]) -> Precedence:
        """Read ``"Q<P<f<a"``; each name is placed by its kind in ``sig``.

        Symbols of the signature not mentioned are an error, so the ranking
        always covers the problem.
        """
        names = [n.strip() for n in text.split("<") if n.strip()]
        preds = tuple(n for n in names if ("pred", n) in sig)
        fns = tuple(n for n in names if ("fn", n) in sig)
        stray = [n for n in names if ("pred", n) not in sig and ("fn", n) not in sig]
        if stray:
            raise OrderingError(f"unknown symbol {stray[0]!r} in precedence")
        prec = cls(preds, fns)
        prec.check_covers(sig)
        return prec

    @classmethod
    def default(cls, sig: Mapping[tuple[str, str], int]) -> Precedence:
        """Alphabetical precedence over the signature."""
        return cls(
            tuple(sorted(n for k, n in sig if k == "pred")),
            tuple(sorted(n for k, n in sig if k == "fn")),
        )

    def check_covers(self, sig: Mapping[tuple[str, str], int]) -> None:
        for kind, name in sig:
            rank = self._pred_rank if kind == "pred" else self._fn_rank
            if name not in rank:
                raise OrderingError(f"precedence does not rank {kind} symbol {name!r}")

    def __str__(self) -> str:
        return "<".join(self.predicates + self.functions)


def _weight(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(_weight(a) for a in t.args)


def _var_counts(ts: Iterable[Term]) -> Counter:
    return Counter(v for t in ts for v in term_vars(t))


def _dominates(big: Counter, small: Counter) -> bool:
    return all(big[v] >= n for v, n in small.items())


def _greater(s_rank: int, s_args: tuple, t_rank: int, t_args: tuple, prec: Precedence) -> bool:
    # shared body for atoms and function applications once heads are ranked
    if not _dominates(_var_counts(s_args), _var_counts(t_args)):
        return False
    ws = 1 + sum(_weight(a) for a in s_args)
    wt = 1 + sum(_weight(a) for a in t_args)
    if ws != wt:
        return ws > wt
    if s_rank != t_rank:
        return s_rank > t_rank
    for x, y in zip(s_args, t_args):
        if x != y:
            return term_greater(x, y, prec)
    return False


def term_greater(s: Term, t: Term, prec: Precedence) -> bool:
    if isinstance(s, Var):
        return False
    if isinstance(t, Var):
        # unit weights: s > x iff x occurs in s and s is not x itself
        return t in set(term_vars(s))
    return _greater(prec.fn_rank(s.symbol), s.args, prec.fn_rank(t.symbol), t.args, prec)


def compare_terms(prec: Precedence, s: Term, t: Term) -> Cmp:
    if s == t:
        return Cmp.EQ
    if term_greater(s, t, prec):
        return Cmp.GT
    if term_greater(t, s, prec):
        return Cmp.LT
    return Cmp.INCOMPARABLE


def compare_atoms(prec: Precedence, a: Atom, b: Atom) -> Cmp:
    """Compare atoms; ``EQ`` only for identical atoms.

    Raises :class:`OrderingError` for symbols missing from ``prec``.
    """
    ra, rb = prec.pred_rank(a.pred), prec.pred_rank(b.pred)
    # touch every symbol so unknown ones are reported even for equal atoms
    for t in a.args + b.args:
        _check_symbols(t, prec)
    if a == b:
        return Cmp.EQ
    if _greater(ra, a.args, rb, b.args, prec):
        return Cmp.GT
    if _greater(rb, b.args, ra, a.args, prec):
        return Cmp.LT
    return Cmp.INCOMPARABLE


def _check_symbols(t: Term, prec: Precedence) -> None:
    if isinstance(t, Fn):
        prec.fn_rank(t.symbol)
        for a in t.args:
            _check_symbols(a, prec)


def is_maximal(pos: int, c: Clause, prec: Precedence) -> bool:
    """No other literal of ``c`` has an atom greater than the one at ``pos``."""
    atom = c.literals[pos].atom
    return all(
        compare_atoms(prec, other.atom, atom) is not Cmp.GT
        for i, other in enumerate(c.literals)
        if i != pos
    )


def is_strictly_maximal(pos: int, c: Clause, prec: Precedence) -> bool:
    """No other literal of ``c`` has an atom greater than or equal to the one at ``pos``."""
    atom = c.literals[pos].atom
    return all(
        compare_atoms(prec, other.atom, atom) not in (Cmp.GT, Cmp.EQ)
        for i, other in enumerate(c.literals)
        if i != pos
    )


def maximal_after(pos: int, c: Clause, sigma, prec: Precedence, strict: bool = False) -> bool:
    inst = apply_substitution(sigma, c)
    return (is_strictly_maximal if strict else is_maximal)(pos, inst, prec)


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class SelectNone:
    def __str__(self) -> str:
        return "none"


@dataclass(frozen=True)
class SelectAllNegative:
    def __str__(self) -> str:
        return "all-neg"


@dataclass(frozen=True)
class ExplicitSelection:
    """Selected negative-literal positions per clause id; unlisted clauses select nothing."""

    table: Mapping[int, frozenset[int]]

    def __hash__(self) -> int:
        return hash(frozenset(self.table.items()))

    def __str__(self) -> str:
        return "table"

    @classmethod
    def parse(cls, text: str) -> ExplicitSelection:
        """One ``clause-id: pos, pos`` entry per line; ``#`` starts a comment."""
        table = {}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, sep, rest = line.partition(":")
            if not sep:
                raise SelectionError(f"line {n}: expected 'id: positions'")
            try:
                cid = int(head)
                positions = frozenset(int(p) for p in rest.replace(",", " ").split())
            except ValueError:
                raise SelectionError(f"line {n}: expected integers") from None
            table[cid] = positions
        return cls(table)


SelectionFn = SelectNone | SelectAllNegative | ExplicitSelection


def selected_positions(sel: SelectionFn, c: Clause) -> frozenset[int]:
    if isinstance(sel, SelectNone):
        return frozenset()
    if isinstance(sel, SelectAllNegative):
        return frozenset(i for i, lit in enumerate(c.literals) if not lit.positive)
    positions = frozenset(sel.table.get(c.id, ()))
    for i in positions:
        if not 0 <= i < len(c.literals):
            raise SelectionError(f"clause {c.id}: position {i} out of range")
        if c.literals[i].positive:
            raise SelectionError(f"clause {c.id}: position {i} holds a positive literal")
    return positions
