"""Given-clause saturation under the four resolution restrictions.

Policies
--------
``Plain``            every complementary unifiable pair.
``SetOfSupport``     no inference between two theory clauses.
``OrderedSelection`` ordered resolution with negative literal selection.
``PRM``              polarized resolution modulo: at most one one-way parent,
                     resolved on its selected literal; one-way clauses are
                     never factored.

The loop is FIFO over the passive queue, so runs are deterministic.  Only
variants are deleted unless subsumption is switched on explicitly.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Union

from .logic import (
    EMPTY,
    Clause,
    Factor,
    Input,
    Literal,
    Resolvent,
    Substitution,
    UnificationError,
    Var,
    apply_substitution,
    clause_key,
    is_variant,
    renaming_apart,
    signature,
    subsumes,
    try_unify,
    unify,
    variables,
)
from .orders import Precedence, SelectionFn, SelectNone, maximal_after, selected_positions


@dataclass(frozen=True)
class Plain:
    name = "plain"


@dataclass(frozen=True)
class SetOfSupport:
    theory: frozenset[int]
    name = "sos"


@dataclass(frozen=True)
class OrderedSelection:
    precedence: Precedence
    selection: SelectionFn = SelectNone()
    name = "ordered"


@dataclass(frozen=True)
class PRM:
    name = "prm"


Policy = Union[Plain, SetOfSupport, OrderedSelection, PRM]


class ConfigError(ValueError):
    """A policy that does not fit the problem it is run on."""


def check_policy(clauses: Sequence[Clause], pol: Policy) -> None:
    ids = {c.id for c in clauses}
    if isinstance(pol, SetOfSupport):
        missing = sorted(pol.theory - ids)
        if missing:
            raise ConfigError(f"theory clause id {missing[0]} not in problem")
    elif isinstance(pol, OrderedSelection):
        pol.precedence.check_covers(signature(clauses))
        for c in clauses:
            selected_positions(pol.selection, c)


def _restricted(c: Clause, pol: Policy) -> bool:
    # clauses whose inferences the policy limits; derived clauses never are
    if isinstance(pol, PRM):
        return c.is_one_way
    if isinstance(pol, SetOfSupport):
        return c.id in pol.theory
    return False


def _admissible(pol: Policy, c1: Clause, i: int, c2: Clause, j: int, sigma: Substitution) -> bool:
    if isinstance(pol, Plain):
        return True
    if isinstance(pol, SetOfSupport):
        return not (c1.id in pol.theory and c2.id in pol.theory)
    if isinstance(pol, PRM):
        if c1.is_one_way and c2.is_one_way:
            return False
        if c1.is_one_way and i != c1.selected:
            return False
        if c2.is_one_way and j != c2.selected:
            return False
        return True
    (cp, ip), (cn, jn) = ((c1, i), (c2, j)) if c1.literals[i].positive else ((c2, j), (c1, i))
    prec, sel = pol.precedence, pol.selection
    if selected_positions(sel, cp):
        return False
    if not maximal_after(ip, cp, sigma, prec, strict=True):
        return False
    chosen = selected_positions(sel, cn)
    if chosen:
        return jn in chosen
    return maximal_after(jn, cn, sigma, prec)


def resolvents(c1: Clause, c2: Clause, pol: Policy = Plain(), renaming: Substitution = EMPTY) -> list[Clause]:
    """All binary resolvents of two clauses admitted by ``pol``.

    The clauses must not share variables.  ``renaming`` is only recorded in the
    provenance: it is what turned the stored second parent into ``c2``.
    """
    out = []
    for i, l1 in enumerate(c1.literals):
        for j, l2 in enumerate(c2.literals):
            if l1.positive == l2.positive or l1.atom.pred != l2.atom.pred:
                continue
            sigma = try_unify(l1.atom, l2.atom)
            if sigma is None or not _admissible(pol, c1, i, c2, j, sigma):
                continue
            lits = [lit for k, lit in enumerate(c1.literals) if k != i]
            lits += [lit for k, lit in enumerate(c2.literals) if k != j]
            out.append(Clause(
                tuple(apply_substitution(sigma, lit) for lit in lits),
                origin=Resolvent((c1.id, c2.id), (i, j), sigma, renaming),
            ))
    return out


def factors(c: Clause, pol: Policy = Plain()) -> list[Clause]:
    """Binary factors of ``c`` admitted by ``pol``."""
    if isinstance(pol, PRM) and c.is_one_way:
        return []
    if isinstance(pol, SetOfSupport) and c.id in pol.theory:
        return []
    out = []
    lits = c.literals
    for i, j in itertools.combinations(range(len(lits)), 2):
        a, b = lits[i], lits[j]
        if a.positive != b.positive or a.atom.pred != b.atom.pred:
            continue
        if isinstance(pol, OrderedSelection) and not a.positive:
            continue
        sigma = try_unify(a.atom, b.atom)
        if sigma is None:
            continue
        if isinstance(pol, OrderedSelection) and not maximal_after(i, c, sigma, pol.precedence):
            continue
        kept = [lit for k, lit in enumerate(lits) if k != j]
        out.append(Clause(
            tuple(apply_substitution(sigma, lit) for lit in kept),
            origin=Factor(c.id, (i, j), sigma),
        ))
    return out


class Status(enum.Enum):
    REFUTED = "REFUTED"
    SATURATED = "SATURATED"
    BUDGET = "BUDGET"


@dataclass(frozen=True)
class TraceEntry:
    step: int
    clause: Clause
    kept: bool


@dataclass
class Outcome:
    status: Status
    clauses: dict[int, Clause]
    active: list[int]
    passive: list[int]
    generated: int
    kept: int
    trace: list[TraceEntry] = field(default_factory=list)
    empty: int | None = None

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def derivation(self) -> list[Clause]:
        """Ancestors of the empty clause (inclusive), oldest first."""
        if self.empty is None:
            return []
        return ancestors(self.empty, self.clauses)


def parent_ids(c: Clause) -> tuple[int, ...]:
    o = c.origin
    if isinstance(o, Resolvent):
        return o.parents
    if isinstance(o, Factor):
        return (o.parent,)
    return ()


def ancestors(cid: int, clauses: dict[int, Clause]) -> list[Clause]:
    seen: set[int] = set()
    todo = [cid]
    while todo:
        n = todo.pop()
        if n in seen:
            continue
        seen.add(n)
        todo.extend(parent_ids(clauses[n]))
    return [clauses[n] for n in sorted(seen)]


class _Store:
    """Kept clauses with a variant index over the unrestricted ones."""

    def __init__(self, pol: Policy, subsumption: bool):
        self.pol = pol
        self.subsumption = subsumption
        self.clauses: dict[int, Clause] = {}
        self.index: dict[tuple, list[Clause]] = defaultdict(list)

    def add(self, c: Clause) -> None:
        self.clauses[c.id] = c
        if not _restricted(c, self.pol):
            self.index[clause_key(c)].append(c)

    def redundant(self, c: Clause) -> bool:
        if any(is_variant(c, d) for d in self.index.get(clause_key(c), ())):
            return True
        if self.subsumption:
            return any(subsumes(d, c) for d in self.clauses.values() if not _restricted(d, self.pol))
        return False


def _number(problem: Sequence[Clause]) -> list[Clause]:
    ids = [c.id for c in problem]
    if all(i > 0 for i in ids) and len(set(ids)) == len(ids):
        return list(problem)
    return [dataclasses.replace(c, id=k) for k, c in enumerate(problem, 1)]


def inferences(given: Clause, active: Iterable[Clause], pol: Policy, counter: Iterator[int]) -> list[Clause]:
    """Resolvents of ``given`` with every active clause (itself included), then its factors."""
    reserved = set(variables(given))
    out = []
    for other in active:
        ren = renaming_apart(other, reserved, counter)
        out.extend(resolvents(given, apply_substitution(ren, other), pol, ren))
    out.extend(factors(given, pol))
    return out


def saturate(problem: Sequence[Clause], pol: Policy = Plain(), budget: int = 1000, subsumption: bool = False) -> Outcome:
    """Run the given-clause loop until refutation, saturation or budget exhaustion.

    ``budget`` bounds the number of generated clauses; the run stops as soon as
    one more would be generated.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    problem = _number(problem)
    check_policy(problem, pol)
    counter = itertools.count(1)
    store = _Store(pol, subsumption)
    passive: deque[int] = deque()
    active: list[int] = []
    trace: list[TraceEntry] = []
    generated = kept = 0
    next_id = max((c.id for c in problem), default=0) + 1

    def finish(status: Status, empty: int | None = None) -> Outcome:
        return Outcome(status, store.clauses, list(active), list(passive), generated, kept, trace, empty)

    for c in problem:
        store.add(c)
        if c.is_empty:
            return finish(Status.REFUTED, c.id)
        passive.append(c.id)

    while passive:
        given = store.clauses[passive.popleft()]
        active.append(given.id)
        for new in inferences(given, (store.clauses[i] for i in active), pol, counter):
            generated += 1
            if generated > budget:
                generated -= 1
                return finish(Status.BUDGET)
            if not new.is_empty and store.redundant(new):
                trace.append(TraceEntry(generated, new, False))
                continue
            new = dataclasses.replace(new, id=next_id)
            next_id += 1
            kept += 1
            store.add(new)
            trace.append(TraceEntry(generated, new, True))
            if new.is_empty:
                return finish(Status.REFUTED, new.id)
            passive.append(new.id)
    return finish(Status.SATURATED)


class ReplayError(Exception):
    pass


def replay_clause(c: Clause, clauses: dict[int, Clause]) -> None:
    """Recompute ``c`` from its parents; raise :class:`ReplayError` if it differs."""
    o = c.origin
    if isinstance(o, Input):
        return
    try:
        if isinstance(o, Resolvent):
            p1 = clauses[o.parents[0]]
            raw2 = clauses[o.parents[1]]
            if not all(isinstance(t, Var) for t in o.renaming.values()):
                raise ReplayError(f"clause {c.id}: renaming is not a variable renaming")
            if len(set(o.renaming.values())) != len(o.renaming):
                raise ReplayError(f"clause {c.id}: renaming is not injective")
            p2 = apply_substitution(o.renaming, raw2)
            if set(variables(p1)) & set(variables(p2)):
                raise ReplayError(f"clause {c.id}: parents share variables")
            i, j = o.positions
            l1, l2 = p1.literals[i], p2.literals[j]
            if l1.positive == l2.positive:
                raise ReplayError(f"clause {c.id}: resolved literals are not complementary")
            sigma = unify(l1.atom, l2.atom)
            lits = [x for k, x in enumerate(p1.literals) if k != i]
            lits += [x for k, x in enumerate(p2.literals) if k != j]
        else:
            p = clauses[o.parent]
            i, j = o.positions
            a, b = p.literals[i], p.literals[j]
            if i == j or a.positive != b.positive:
                raise ReplayError(f"clause {c.id}: factored literals differ in sign")
            sigma = unify(a.atom, b.atom)
            lits = [x for k, x in enumerate(p.literals) if k != j]
    except (KeyError, IndexError) as e:
        raise ReplayError(f"clause {c.id}: dangling reference {e}") from None
    except UnificationError as e:
        raise ReplayError(f"clause {c.id}: {e}") from None
    if sigma != o.unifier:
        raise ReplayError(f"clause {c.id}: recorded unifier {o.unifier} differs from {sigma}")
    if tuple(apply_substitution(sigma, x) for x in lits) != c.literals:
        raise ReplayError(f"clause {c.id}: conclusion does not match")


def replay_derivation(steps: Sequence[Clause], clauses: dict[int, Clause] | None = None) -> None:
    """Replay every step of a derivation; it must end in the empty clause."""
    table = dict(clauses or {})
    table.update({c.id: c for c in steps})
    for c in steps:
        replay_clause(c, table)
    if not steps or not steps[-1].is_empty:
        raise ReplayError("derivation does not end in the empty clause")


@dataclass(frozen=True)
class Refutation:
    """One refutation DAG: the input leaves and every derived node, oldest first."""

    clauses: tuple[Clause, ...]

    @property
    def steps(self) -> frozenset:
        return frozenset(
            (parent_ids(c), c.origin.positions) for c in self.clauses if not isinstance(c.origin, Input)
        )

    @property
    def empty(self) -> Clause:
        return self.clauses[-1]


def enumerate_refutations(
    problem: Sequence[Clause], limit: int, max_depth: int = 5, max_nodes: int = 5000
) -> list[Refutation]:
    """Breadth-first enumeration of distinct Plain refutations.

    No variant merging happens here: every inference is its own node, so two
    routes to the same clause count as different derivations.  Depth ``d``
    nodes have at least one parent of depth ``d - 1``.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    nodes = {c.id: c for c in _number(problem)}
    depth = {cid: 0 for cid in nodes}
    counter = itertools.count(1)
    next_id = max(nodes, default=0) + 1
    found: list[Refutation] = []
    seen_steps: set[frozenset] = set()

    def record(c: Clause) -> bool:
        ref = Refutation(tuple(ancestors(c.id, nodes)))
        if ref.steps not in seen_steps:
            seen_steps.add(ref.steps)
            found.append(ref)
        return len(found) >= limit

    for d in range(1, max_depth + 1):
        pool = sorted(i for i in nodes if not nodes[i].is_empty)
        fresh = [i for i in pool if depth[i] == d - 1]
        new: list[Clause] = []
        for a in fresh:
            for b in pool:
                if depth[b] == d - 1 and b < a:
                    continue  # pair already taken with the roles swapped
                ca, cb = nodes[a], nodes[b]
                ren = renaming_apart(cb, set(variables(ca)), counter)
                for r in resolvents(ca, apply_substitution(ren, cb), Plain(), ren):
                    if a == b and r.origin.positions[0] > r.origin.positions[1]:
                        continue
                    new.append(r)
            new.extend(factors(nodes[a], Plain()))
        if not new:
            break
        for r in new:
            r = dataclasses.replace(r, id=next_id)
            nodes[r.id] = r
            depth[r.id] = d
            next_id += 1
            if r.is_empty and record(r):
                return found
            if len(nodes) >= max_nodes:
                return found
    return found
