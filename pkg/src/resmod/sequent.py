"""Polarized sequent calculus modulo: proof objects, checking and cut-free search.

Every side condition ``A ->*_s B`` of a rule is carried in the proof as a
:class:`Witness` (the target ``B`` plus a rewrite trace), so checking a proof
only replays traces and never searches.

Principal formulas are addressed by index: into the left side for ``*-left``
rules, into the right side for ``*-right`` rules.  Premises put new left
formulas at the end of the left side and new right formulas at the front of
the right side, and the checker rebuilds them the same way.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from .logic import Term, Var
from .rewrite import (
    Falsum,
    Forall,
    Not,
    Or,
    PAtom,
    PolarizedRule,
    Prop,
    RewriteError,
    RewriteTrace,
    Sign,
    fresh_var,
    alpha_eq,
    canonical,
    free_vars,
    reachable,
    replay,
    rule_table,
    subst_prop,
)

RULES = (
    "axiom",
    "cut",
    "contr-left",
    "contr-right",
    "weak-left",
    "weak-right",
    "bot-left",
    "neg-left",
    "neg-right",
    "or-left",
    "or-right",
    "forall-left",
    "forall-right",
)

PREMISES = {
    "axiom": 0,
    "bot-left": 0,
    "cut": 2,
    "or-left": 2,
}

# witness names each rule must carry
WITNESSES = {
    "axiom": ("left", "right"),
    "cut": ("neg", "pos"),
    "contr-left": ("first", "second"),
    "contr-right": ("first", "second"),
    "weak-left": (),
    "weak-right": (),
    "bot-left": ("main",),
    "neg-left": ("main",),
    "neg-right": ("main",),
    "or-left": ("main",),
    "or-right": ("main",),
    "forall-left": ("main", "inst"),
    "forall-right": ("main",),
}


@dataclass(frozen=True)
class Sequent:
    left: tuple[Prop, ...] = ()
    right: tuple[Prop, ...] = ()

    def key(self) -> tuple:
        """Canonical multiset key, insensitive to order and bound names."""
        return (
            tuple(sorted(str(canonical(p)) for p in self.left)),
            tuple(sorted(str(canonical(p)) for p in self.right)),
        )

    def free_vars(self) -> set[Var]:
        return {v for p in self.left + self.right for v in free_vars(p)}

    def __str__(self) -> str:
        left = ", ".join(map(str, self.left))
        right = ", ".join(map(str, self.right))
        return f"{left} |- {right}".strip()


@dataclass(frozen=True)
class Witness:
    target: Prop
    trace: RewriteTrace = RewriteTrace()


@dataclass(frozen=True)
class ProofTree:
    rule: str
    principal: int | None = None
    witnesses: Mapping[str, Witness] = field(default_factory=dict)
    children: tuple[ProofTree, ...] = ()
    cut: Prop | None = None
    var: Var | None = None
    body: Prop | None = None
    term: Term | None = None

    def __hash__(self) -> int:
        return hash((self.rule, self.principal, self.children))

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


class ProofError(Exception):
    def __init__(self, path: tuple[int, ...], reason: str):
        super().__init__(f"at {list(path)}: {reason}")
        self.path = path
        self.reason = reason


def has_cut(proof: ProofTree) -> bool:
    return proof.rule == "cut" or any(has_cut(c) for c in proof.children)


def _without(xs: tuple, i: int) -> tuple:
    return xs[:i] + xs[i + 1:]


def premises(rule: str, s: Sequent, i: int | None, *new: Prop) -> list[Sequent]:
    """Premises of ``rule`` applied to ``s`` at principal ``i`` with the residues ``new``."""
    if rule == "cut":
        b, c = new
        return [Sequent(s.left + (b,), s.right), Sequent(s.left, (c,) + s.right)]
    if rule in ("axiom", "bot-left"):
        return []
    if rule.endswith("-left"):
        rest = Sequent(_without(s.left, i), s.right)
        if rule == "weak-left":
            return [rest]
        if rule == "neg-left":
            return [Sequent(rest.left, new + rest.right)]
        if rule == "or-left":
            return [Sequent(rest.left + (n,), rest.right) for n in new]
        return [Sequent(rest.left + new, rest.right)]
    rest = Sequent(s.left, _without(s.right, i))
    if rule == "weak-right":
        return [rest]
    if rule == "neg-right":
        return [Sequent(rest.left + new, rest.right)]
    return [Sequent(rest.left, new + rest.right)]


def _arrow(sign: Sign) -> str:
    return f"->{sign}*"


class _Checker:
    def __init__(self, rules: Iterable[PolarizedRule]):
        self.rules = rule_table(rules)

    def witness(self, path, node: ProofTree, name: str, source: Prop, sign: Sign, what: str) -> Prop:
        w = node.witnesses.get(name)
        if w is None:
            raise ProofError(path, f"{what} {_arrow(sign)} ... not witnessed ({name})")
        try:
            got = replay(w.trace, source, sign, self.rules)
        except RewriteError as e:
            raise ProofError(path, f"witness {name}: {e}") from None
        if not alpha_eq(got, w.target):
            raise ProofError(path, f"witness {name}: trace ends in {got}, not {w.target}")
        return w.target

    def check(self, s: Sequent, node: ProofTree, path: tuple[int, ...]) -> None:
        rule = node.rule
        if rule not in RULES:
            raise ProofError(path, f"unknown rule {rule!r}")
        extra = set(node.witnesses) - set(WITNESSES[rule])
        if extra:
            raise ProofError(path, f"unexpected witness {sorted(extra)[0]!r} for {rule}")
        want = PREMISES.get(rule, 1)
        if len(node.children) != want:
            raise ProofError(path, f"{rule} needs {want} premises, got {len(node.children)}")
        new = self.residues(s, node, path)
        subgoals = premises(rule, s, node.principal, *new)
        for k, (goal, child) in enumerate(zip(subgoals, node.children)):
            self.check(goal, child, path + (k,))

    def principal(self, s: Sequent, node: ProofTree, path) -> Prop:
        side = s.left if node.rule.endswith("-left") else s.right
        i = node.principal
        if i is None or not 0 <= i < len(side):
            raise ProofError(path, f"{node.rule}: principal index {i} out of range")
        return side[i]

    def residues(self, s: Sequent, node: ProofTree, path) -> tuple[Prop, ...]:
        rule = node.rule
        if rule == "axiom":
            if len(s.left) != 1 or len(s.right) != 1:
                raise ProofError(path, "axiom needs exactly one formula on each side")
            p = self.witness(path, node, "left", s.left[0], Sign.NEG, "A")
            q = self.witness(path, node, "right", s.right[0], Sign.POS, "B")
            if not isinstance(p, PAtom):
                raise ProofError(path, f"axiom: {p} is not atomic")
            if p != q:
                raise ProofError(path, f"axiom: {p} and {q} differ")
            return ()
        if rule == "cut":
            if node.cut is None:
                raise ProofError(path, "cut formula missing")
            b = self.witness(path, node, "neg", node.cut, Sign.NEG, "A")
            c = self.witness(path, node, "pos", node.cut, Sign.POS, "A")
            return (b, c)
        a = self.principal(s, node, path)
        if rule in ("weak-left", "weak-right"):
            return ()
        sign = Sign.NEG if rule.endswith("-left") else Sign.POS
        if rule.startswith("contr"):
            b = self.witness(path, node, "first", a, sign, "A")
            c = self.witness(path, node, "second", a, sign, "A")
            return (b, c)
        target = self.witness(path, node, "main", a, sign, "A")
        if rule == "bot-left":
            if not isinstance(target, Falsum):
                raise ProofError(path, f"bot-left: {target} is not false")
            return ()
        if rule in ("neg-left", "neg-right"):
            if not isinstance(target, Not):
                raise ProofError(path, f"{rule}: {target} is not a negation")
            return (target.body,)
        if rule in ("or-left", "or-right"):
            if not isinstance(target, Or):
                raise ProofError(path, f"{rule}: {target} is not a disjunction")
            return (target.left, target.right)
        if node.var is None or node.body is None:
            raise ProofError(path, f"{rule}: variable and body must be declared")
        if target != Forall(node.var, node.body):
            raise ProofError(path, f"{rule}: {target} is not forall {node.var}. {node.body}")
        if rule == "forall-right":
            rest = Sequent(s.left, _without(s.right, node.principal))
            if node.var in rest.free_vars():
                raise ProofError(path, f"forall-right: eigenvariable {node.var} is free in the context")
            return (node.body,)
        if node.term is None:
            raise ProofError(path, "forall-left: instance term missing")
        inst = subst_prop({node.var: node.term}, node.body)
        return (self.witness(path, node, "inst", inst, Sign.NEG, "(t/x)B"),)


def check_proof(rules: Iterable[PolarizedRule], goal: Sequent, proof: ProofTree) -> None:
    """Check ``proof`` of ``goal`` modulo ``rules``.

    Returns quietly when the proof is correct; raises :class:`ProofError`
    carrying the tree path of the first failing node otherwise.
    """
    _Checker(rules).check(goal, proof, ())


def is_valid_proof(rules: Iterable[PolarizedRule], goal: Sequent, proof: ProofTree) -> bool:
    try:
        check_proof(rules, goal, proof)
    except ProofError:
        return False
    return True


class _Search:
    def __init__(self, rules: Sequence[PolarizedRule], terms: Sequence[Term], fuel: int):
        self.rules = list(rules)
        self.terms = list(terms)
        self.fuel = fuel
        self._reach: dict = {}
        self.failed: dict[tuple, int] = {}
        self.on_path: set[tuple] = set()

    def reach(self, p: Prop, sign: Sign) -> list[tuple[Prop, RewriteTrace]]:
        key = (canonical(p), sign)
        if key not in self._reach:
            self._reach[key] = reachable(p, sign, self.rules, self.fuel)
        return self._reach[key]

    def prove(self, s: Sequent, depth: int) -> tuple[ProofTree | None, bool]:
        """Returns the proof (or None) and whether a failure is independent of the branch."""
        if depth <= 0:
            return None, True
        key = s.key()
        if key in self.on_path:
            return None, False
        if self.failed.get(key, 0) >= depth:
            return None, True
        self.on_path.add(key)
        clean = True
        try:
            for node, subgoals in self.candidates(s):
                kids = []
                for g in subgoals:
                    sub, ok = self.prove(g, depth - 1)
                    clean = clean and ok
                    if sub is None:
                        break
                    kids.append(sub)
                else:
                    return dataclasses.replace(node, children=tuple(kids)), True
        finally:
            self.on_path.discard(key)
        if clean:
            self.failed[key] = max(self.failed.get(key, 0), depth)
        return None, clean

    def candidates(self, s: Sequent) -> Iterator[tuple[ProofTree, list[Sequent]]]:
        if len(s.left) == 1 and len(s.right) == 1:
            for p, tp in self.reach(s.left[0], Sign.NEG):
                if not isinstance(p, PAtom):
                    continue
                for q, tq in self.reach(s.right[0], Sign.POS):
                    if q == p:
                        yield ProofTree("axiom", witnesses={"left": Witness(p, tp), "right": Witness(q, tq)}), []
        for i, a in enumerate(s.left):
            for p, tr in self.reach(a, Sign.NEG):
                if isinstance(p, Falsum):
                    yield ProofTree("bot-left", i, {"main": Witness(p, tr)}), []
        for rule, side, sign, kind in (
            ("neg-left", s.left, Sign.NEG, Not),
            ("neg-right", s.right, Sign.POS, Not),
            ("or-right", s.right, Sign.POS, Or),
            ("or-left", s.left, Sign.NEG, Or),
        ):
            for i, a in enumerate(side):
                for p, tr in self.reach(a, sign):
                    if isinstance(p, kind):
                        new = (p.body,) if kind is Not else (p.left, p.right)
                        yield ProofTree(rule, i, {"main": Witness(p, tr)}), premises(rule, s, i, *new)
        for i, a in enumerate(s.right):
            rest = Sequent(s.left, _without(s.right, i))
            for p, tr in self.reach(a, Sign.POS):
                if isinstance(p, Forall):
                    x, body = p.var, p.body
                    if x in rest.free_vars():
                        x = fresh_var(x, rest.free_vars() | set(free_vars(body)))
                        body = subst_prop({p.var: x}, body)
                    node = ProofTree("forall-right", i, {"main": Witness(Forall(x, body), tr)}, var=x, body=body)
                    yield node, premises("forall-right", s, i, body)
        for i, a in enumerate(s.left):
            for p, tr in self.reach(a, Sign.NEG):
                if not isinstance(p, Forall):
                    continue
                for t in self.terms:
                    inst = subst_prop({p.var: t}, p.body)
                    for c, tc in self.reach(inst, Sign.NEG):
                        node = ProofTree("forall-left", i, {"main": Witness(p, tr), "inst": Witness(c, tc)},
                                         var=p.var, body=p.body, term=t)
                        yield node, premises("forall-left", s, i, c)
        for rule, side, sign in (("contr-left", s.left, Sign.NEG), ("contr-right", s.right, Sign.POS)):
            for i, a in enumerate(side):
                reach = self.reach(a, sign)
                for m, (b, tb) in enumerate(reach):
                    for c, tc in reach[m:]:
                        if b == a and c == a:
                            continue
                        node = ProofTree(rule, i, {"first": Witness(b, tb), "second": Witness(c, tc)})
                        yield node, premises(rule, s, i, b, c)
        for rule, side in (("weak-left", s.left), ("weak-right", s.right)):
            done = set()
            for i, a in enumerate(side):
                if a in done:
                    continue
                done.add(a)
                yield ProofTree(rule, i), premises(rule, s, i)


def cutfree_search(
    rules: Iterable[PolarizedRule],
    goal: Sequent,
    depth: int,
    terms: Sequence[Term] = (),
    fuel: int = 3,
) -> ProofTree | None:
    """Backward search for a cut-free proof of ``goal``.

    ``depth`` bounds the height of the proof tree, ``fuel`` the length of each
    rewrite trace and ``terms`` the instances tried by forall-left.  ``None``
    means no proof exists within those bounds.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    proof, _ = _Search(list(rules), list(terms), fuel).prove(goal, depth)
    return proof
