"""Built-in problems, loadable by name from the command line.

The higher-order example encodes application ``x y`` as ``app(X, Y)`` and
the constants of the type-theory presentation as ordinary function symbols:
``eps`` (truth of a proposition), ``disj`` and ``neg`` (object-level
disjunction and negation), ``all_T`` and ``h_T`` (object-level quantifier and
its Skolem function), and ``null``, ``s``, ``0``.
"""

from __future__ import annotations

from .syntax import Problem, parse_problem

PROBLEMS = {
    "intro": """\
# two redundant refutations: through Q or through -P
clause P.
clause -P | Q.
clause -Q.
""",
    "example1": """\
# consistent theory, order Q < P, yet the combined restriction is incomplete
theory P* | Q.
theory -P* | Q.
clause -Q.
""",
    "example_aaa": """\
theory P* | Q.
theory P* | -Q.
""",
    "example_aaa_goal": """\
theory P* | Q.
theory P* | -Q.
clause -P.
""",
    "example_bbb": """\
theory -eps(disj(X,Y))* | eps(X) | eps(Y).
theory eps(disj(X,Y))* | -eps(X).
theory eps(disj(X,Y))* | -eps(Y).
theory -eps(neg(X))* | -eps(X).
theory eps(neg(X))* | eps(X).
theory -eps(all_T(X))* | eps(app(X,Y)).
theory eps(all_T(X))* | -eps(app(X,h_T(X))).
theory -eps(null(s(X)))*.
theory eps(null(0))*.
""",
    "loop": """\
# finite failure with a selection function, an infinite run without one
theory P(f(X))* | -P(X).
clause P(a).
""",
    "cut_system": """\
# Q has a proof with a cut on P and none without
rule- P -> Q.
rule+ P -> ~Q.
""",
}

# proof of |- Q modulo cut_system, cutting on P
CUT_PROOF = """\
(cut cut={P}
  (wit neg {Q} (trace (step pos=[] rule=1 sub={})))
  (wit pos {~Q} (trace (step pos=[] rule=2 sub={})))
  (axiom (wit left {Q} (trace)) (wit right {Q} (trace)))
  (neg-right at=0 (wit main {~Q} (trace))
    (axiom (wit left {Q} (trace)) (wit right {Q} (trace)))))
"""


def load(name: str) -> Problem:
    try:
        text = PROBLEMS[name]
    except KeyError:
        raise KeyError(f"no built-in problem {name!r}; choose from {', '.join(PROBLEMS)}") from None
    return parse_problem(text, name)


def names() -> list[str]:
    return list(PROBLEMS)
