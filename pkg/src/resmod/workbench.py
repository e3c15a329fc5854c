"""Running methods on problems and rendering reports."""

from __future__ import annotations

import re
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from . import corpus
from .logic import Input, signature
from .orders import ExplicitSelection, Precedence, SelectAllNegative, SelectNone
from .rewrite import check_disjoint_criterion
from .saturation import PRM, ConfigError, OrderedSelection, Outcome, Plain, Policy, SetOfSupport, saturate
from .syntax import Problem, format_rule, parse_problem

MACHINE_LINE = re.compile(r"^OUTCOME: (REFUTED|SATURATED|BUDGET) generated=(\d+) kept=(\d+)$", re.MULTILINE)
RESULT_LINE = re.compile(
    r"^RESULT method=(\S+) outcome=(REFUTED|SATURATED|BUDGET) generated=(\d+) kept=(\d+)$", re.MULTILINE
)

METHODS = ("plain", "sos", "ordered", "prm")


def load_problem(source: str) -> Problem:
    """A problem file path, or the name of a built-in problem."""
    path = Path(source)
    if path.is_file():
        return parse_problem(path.read_text(), path.stem)
    return corpus.load(source)


def make_policy(
    problem: Problem,
    method: str,
    precedence: str | None = None,
    selection: str | None = None,
    theory: str | None = None,
) -> Policy:
    if method == "plain":
        return Plain()
    if method == "prm":
        return PRM()
    if method == "sos":
        if theory:
            try:
                ids = frozenset(int(x) for x in theory.split(",") if x.strip())
            except ValueError:
                raise ConfigError(f"bad theory id list {theory!r}") from None
        else:
            ids = problem.theory_ids
        if not ids:
            raise ConfigError("sos needs theory clauses (mark them 'theory' or pass --theory)")
        return SetOfSupport(ids)
    if method == "ordered":
        sig = signature(problem.clauses)
        prec = Precedence.parse(precedence, sig) if precedence else Precedence.default(sig)
        return OrderedSelection(prec, parse_selection(selection))
    raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def parse_selection(text: str | None):
    if not text or text == "none":
        return SelectNone()
    if text == "all-neg":
        return SelectAllNegative()
    if text.startswith("table="):
        return ExplicitSelection.parse(Path(text[len("table="):]).read_text())
    raise ConfigError(f"unknown selection {text!r}; use none, all-neg or table=FILE")


@dataclass
class RunReport:
    problem: str
    method: str
    budget: int
    outcome: Outcome
    seconds: float

    @property
    def status(self) -> str:
        return self.outcome.status.value

    @property
    def machine_line(self) -> str:
        o = self.outcome
        return f"OUTCOME: {o.status.value} generated={o.generated} kept={o.kept}"

    def render(self, timing: bool = False) -> str:
        o = self.outcome
        lines = [f"problem: {self.problem}  method: {self.method}  budget: {self.budget}"]
        for c in o.clauses.values():
            if isinstance(c.origin, Input):
                lines.append(f"  {c.id:>4}  {c}  [input]")
        for t in o.trace:
            if t.kept:
                lines.append(f"  {t.clause.id:>4}  {t.clause}  <- {t.clause.origin}  (step {t.step})")
            else:
                lines.append(f"     -  {t.clause}  <- {t.clause.origin}  (step {t.step}, variant deleted)")
        if o.refuted:
            lines.append("refutation: " + " ".join(str(c.id) for c in o.derivation()))
        if timing:
            lines.append(f"time: {self.seconds:.4f}s")
        lines.append(self.machine_line)
        return "\n".join(lines)


def run(
    problem: Problem,
    method: str,
    budget: int = 1000,
    precedence: str | None = None,
    selection: str | None = None,
    theory: str | None = None,
    subsumption: bool = False,
) -> RunReport:
    pol = make_policy(problem, method, precedence, selection, theory)
    t0 = time.perf_counter()
    outcome = saturate(problem.clauses, pol, budget, subsumption)
    return RunReport(problem.name, method, budget, outcome, time.perf_counter() - t0)


def compare(problem: Problem, methods: Sequence[str], budget: int = 1000, **options) -> list[RunReport]:
    return [run(problem, m, budget, **options) for m in methods]


def format_table(reports: Sequence[RunReport]) -> str:
    if not reports:
        return ""
    rows = [("method", "outcome", "generated", "kept")]
    rows += [(r.method, r.status, str(r.outcome.generated), str(r.outcome.kept)) for r in reports]
    widths = [max(len(row[k]) for row in rows) for k in range(4)]
    table = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    machine = [
        f"RESULT method={r.method} outcome={r.status} generated={r.outcome.generated} kept={r.outcome.kept}"
        for r in reports
    ]
    return "\n".join(table + machine)


def emit_rules(problem: Problem) -> str:
    """The rewrite system of the problem and the verdict of the disjointness criterion."""
    system = problem.system()
    lines = [format_rule(r) for r in system]
    verdict = "PASSES" if check_disjoint_criterion(system) else "FAILS"
    lines.append(f"criterion: {verdict}")
    return "\n".join(lines)
