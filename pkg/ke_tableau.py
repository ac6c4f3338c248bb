"""
KE-tableau over a ground expansion.

Saturation is depth-first and deterministic: the leftmost open branch is
processed first. On each branch the E-rule is applied to every clause it
fits until none is left; PB then splits on the lowest-index missing
complement of the first unfulfilled clause (in the canonical clause order),
with the complement branch on the left. With first_open set, saturation
stops at the first open leaf, which is enough to decide consistency.

Open saturated branches are then normalized: each literal x = y with distinct
sides is eliminated by substituting the larger variable under the order <_θ
with the smaller one, and the branch is checked for closure once more.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from error_logger import InputError, ReasonerError
from grounder import ExpansionResult
from logging_setup import TRACE_LOGGER
from resource_guard import BranchBudget
from setcalc import (
    Clause,
    Eq,
    Formula,
    GroundLiteral,
    Interpretation,
    Mem1,
    Mem3,
    SetVariable,
    VarKind,
)

logger = logging.getLogger(__name__)
trace_log = logging.getLogger(TRACE_LOGGER)


class VariableOrder:
    """
    Total order <_θ on level-0 variables: explicitly ranked names first, then
    individuals, constants, witnesses and anything else, lexical within a group.
    """

    GROUPS = {VarKind.INDIVIDUAL: 0, VarKind.CONSTANT: 1, VarKind.WITNESS: 2}

    def __init__(self, ranked: Sequence[str] = ()):
        self.ranked = {name: i for i, name in enumerate(ranked)}

    @classmethod
    def from_file(cls, path: Path) -> "VariableOrder":
        try:
            names = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]
        except OSError as e:
            raise InputError(f"cannot read order file {path}: {e}") from e
        return cls([n for n in names if n and not n.startswith("#")])

    def key(self, v: SetVariable) -> tuple:
        if v.name in self.ranked:
            return (0, self.ranked[v.name], "")
        return (1, self.GROUPS.get(v.kind, 3), v.name)

    def least(self, a: SetVariable, b: SetVariable) -> SetVariable:
        return a if self.key(a) <= self.key(b) else b


LEXICAL = VariableOrder()


def _closes(literal: GroundLiteral, present: Set[GroundLiteral]) -> bool:
    if not literal.positive and isinstance(literal.atom, Eq) and literal.atom.reflexive:
        return True
    return literal.complement() in present


@dataclass
class Branch:
    id: str
    literals: List[GroundLiteral] = field(default_factory=list)
    closed: bool = False
    pending: Tuple[int, ...] = ()
    agenda: List[GroundLiteral] = field(default_factory=list, repr=False)
    sigma: Dict[SetVariable, SetVariable] = field(default_factory=dict)
    pb_counts: Counter = field(default_factory=Counter)
    _present: Set[GroundLiteral] = field(default_factory=set, repr=False)

    def __contains__(self, literal: GroundLiteral) -> bool:
        return literal in self._present

    def add(self, literal: GroundLiteral) -> bool:
        """Append unless already present; returns True when the branch closes."""
        if literal in self._present:
            return self.closed
        if _closes(literal, self._present):
            self.closed = True
        self.literals.append(literal)
        self._present.add(literal)
        self.agenda.append(literal)
        return self.closed

    def fork(self, suffix: str) -> "Branch":
        child = Branch(f"{self.id}.{suffix}", list(self.literals), self.closed, self.pending,
                       list(self.agenda), dict(self.sigma), Counter(self.pb_counts))
        child._present = set(self._present)
        return child

    def fulfils(self, clause: Clause) -> bool:
        return any(l in self._present for l in clause.literals)

    @property
    def complete(self) -> bool:
        return self.closed or not any(
            l.positive and isinstance(l.atom, Eq) and not l.atom.reflexive for l in self.literals)

    def level0(self) -> Set[SetVariable]:
        return {v for l in self.literals for v in l.variables() if v.level == 0}


@dataclass
class Tableau:
    ground: Tuple[GroundLiteral, ...]
    clauses: Tuple[Clause, ...]
    branches: List[Branch] = field(default_factory=list)
    trace: List[str] = field(default_factory=list)
    normalized: bool = False
    exhaustive: bool = True
    _pools: Optional[Dict[int, Tuple[SetVariable, ...]]] = field(default=None, repr=False)
    _occurs: Optional[Dict[GroundLiteral, Tuple[int, ...]]] = field(default=None, repr=False)

    def open_branches(self) -> List[Branch]:
        return [b for b in self.branches if not b.closed]

    @property
    def closed(self) -> bool:
        return not self.open_branches()

    @property
    def leaves(self) -> int:
        return len(self.branches)

    def max_pb_per_clause(self) -> int:
        return max((n for b in self.branches for n in b.pb_counts.values()), default=0)

    def pb_overruns(self) -> Dict[Tuple[str, int], int]:
        """(branch, clause index) pairs where PB fired more often than the clause has literals minus one."""
        return {(b.id, index): n for b in self.branches for index, n in b.pb_counts.items()
                if n > len(self.clauses[index]) - 1}

    def pools(self) -> Dict[int, Tuple[SetVariable, ...]]:
        """Non-placeholder variables of the expansion, per level."""
        if self._pools is None:
            found: Dict[int, Set[SetVariable]] = {0: set(), 1: set(), 3: set()}
            for literal in itertools.chain(self.ground, *(c.literals for c in self.clauses)):
                for v in literal.variables():
                    if not v.is_placeholder:
                        found[v.level].add(v)
            self._pools = {level: tuple(sorted(vs)) for level, vs in found.items()}
        return self._pools

    def occurrences(self) -> Dict[GroundLiteral, Tuple[int, ...]]:
        """Literal to the indices of the clauses it occurs in."""
        if self._occurs is None:
            found: Dict[GroundLiteral, List[int]] = {}
            for index, clause in enumerate(self.clauses):
                for literal in clause.literals:
                    found.setdefault(literal, []).append(index)
            self._occurs = {l: tuple(ix) for l, ix in found.items()}
        return self._occurs

    def _emit(self, line: str) -> None:
        self.trace.append(line)
        trace_log.info(line)


def apply_E(branch: Branch, clause: Clause, j: int) -> Branch:
    """Append the j-th disjunct, given the complements of all the others are on the branch."""
    others = [l.complement() for i, l in enumerate(clause.literals) if i != j]
    missing = [l for l in others if l not in branch]
    if missing:
        raise ReasonerError(f"E-rule premises missing on branch {branch.id}: "
                            f"{', '.join(l.render() for l in missing)}")
    branch.add(clause.literals[j])
    return branch


def apply_PB(branch: Branch, literal: GroundLiteral) -> Tuple[Branch, Branch]:
    """Split on literal: the left child receives its complement, the right child the literal."""
    left, right = branch.fork("0"), branch.fork("1")
    left.add(literal.complement())
    right.add(literal)
    return left, right


def saturate(expansion: ExpansionResult, budget: Optional[BranchBudget] = None, *,
             first_open: bool = False) -> Tableau:
    return _saturate(expansion.ground, expansion.clauses, budget, first_open)


def saturate_literals(ground: Iterable[GroundLiteral], clauses: Iterable[Clause],
                      budget: Optional[BranchBudget] = None, *, first_open: bool = False) -> Tableau:
    return _saturate(tuple(ground), tuple(sorted(set(clauses))), budget, first_open)


def _try_E(branch: Branch, tableau: Tableau, index: int) -> None:
    clause = tableau.clauses[index]
    if branch.fulfils(clause):
        return
    missing = [i for i, l in enumerate(clause.literals) if l.complement() not in branch]
    if len(missing) > 1:
        return
    j = missing[0] if missing else 0
    apply_E(branch, clause, j)
    tableau._emit(f"E {j + 1} clause#{index} [{branch.id}] {clause.literals[j].render()}")


def propagate(branch: Branch, tableau: Tableau) -> None:
    """
    Apply the E-rule until it no longer fits any clause. Only clauses holding
    the complement of a newly added literal can gain a premise, so the
    branch's agenda of new literals drives the search.
    """
    occurs = tableau.occurrences()
    while branch.agenda and not branch.closed:
        literal = branch.agenda.pop()
        for index in occurs.get(literal.complement(), ()):
            _try_E(branch, tableau, index)
            if branch.closed:
                return


def _next_unfulfilled(branch: Branch, clauses: Sequence[Clause]) -> Optional[int]:
    """First unfulfilled pending clause; fulfilled ones ahead of it are dropped for good."""
    for k, index in enumerate(branch.pending):
        if not branch.fulfils(clauses[index]):
            branch.pending = branch.pending[k:]
            return index
    branch.pending = ()
    return None


def _saturate(ground: Tuple[GroundLiteral, ...], clauses: Tuple[Clause, ...],
              budget: Optional[BranchBudget], first_open: bool = False) -> Tableau:
    budget = budget or BranchBudget()
    tableau = Tableau(ground, clauses, exhaustive=not first_open)
    root = Branch("0", pending=tuple(range(len(clauses))))
    budget.charge(1)
    for literal in ground:
        root.add(literal)
    # clauses already down to one missing disjunct, unit clauses included
    for index in range(len(clauses)):
        if root.closed:
            break
        _try_E(root, tableau, index)

    stack = [root]
    while stack:
        branch = stack.pop()
        while not branch.closed:
            propagate(branch, tableau)
            if branch.closed:
                break
            index = _next_unfulfilled(branch, clauses)
            if index is None:
                break
            clause = clauses[index]
            h = next(i for i, l in enumerate(clause.literals) if l.complement() not in branch)
            budget.charge(1)
            branch.pb_counts[index] += 1
            literal = clause.literals[h]
            left, right = apply_PB(branch, literal)
            tableau._emit(f"PB {h + 1} lit {literal.render()} clause#{index} [{branch.id}]")
            # right first so that the left child is popped next
            stack.append(right)
            branch = left
        tableau.branches.append(branch)
        if first_open and not branch.closed:
            logger.debug("first open branch %s; %d pending branch(es) dropped", branch.id, len(stack))
            break

    tableau.branches.sort(key=lambda b: [int(p) for p in b.id.split(".")])
    logger.info("saturation: %d leaf branch(es), %d open", tableau.leaves, len(tableau.open_branches()))
    return tableau


def normalize_equalities(branch: Branch, order: VariableOrder = LEXICAL,
                         tableau: Optional[Tableau] = None) -> Tuple[Branch, Dict[SetVariable, SetVariable]]:
    if branch.closed:
        return branch, dict(branch.sigma)
    sigma = dict(branch.sigma)
    literals = list(branch.literals)
    while True:
        eq = next((l.atom for l in literals
                   if l.positive and isinstance(l.atom, Eq) and not l.atom.reflexive), None)
        if eq is None:
            break
        keep = order.least(eq.left, eq.right)
        drop = eq.right if keep == eq.left else eq.left
        step = {drop: keep}
        sigma = {v: (keep if t == drop else t) for v, t in sigma.items()}
        sigma[drop] = keep
        literals = [l.rename(step) for l in literals]
        line = f"SUBST {drop} -> {keep} [{branch.id}]"
        if tableau is not None:
            tableau._emit(line)
        else:
            trace_log.info(line)

    out = Branch(branch.id, pending=branch.pending, sigma=sigma, pb_counts=Counter(branch.pb_counts))
    for literal in literals:
        out.add(literal)
    if out.closed:
        logger.debug("branch %s closes after equality normalization", branch.id)
    return out, sigma


def normalize(tableau: Tableau, order: VariableOrder = LEXICAL) -> Tableau:
    """Normalize every open branch in place; branches closed by the substitution stay in the tableau."""
    tableau.branches = [normalize_equalities(b, order, tableau)[0] for b in tableau.branches]
    tableau.normalized = True
    return tableau


def representative(branch: Branch, v: SetVariable) -> SetVariable:
    return branch.sigma.get(v, v)


def branch_model(branch: Branch, phi: Optional[Formula] = None) -> Interpretation:
    """
    The canonical model of an open complete branch: level-0 variables denote
    their representatives, level-1 and level-3 variables the members recorded
    by positive literals. With phi given, every variable of phi is assigned too.
    """
    if branch.closed:
        raise InputError(f"branch {branch.id} is closed and has no model")
    if not branch.complete:
        raise InputError(f"branch {branch.id} still contains equalities between distinct variables")

    variables = {v for l in branch.literals for v in l.variables()}
    variables |= set(branch.sigma)
    if phi is not None:
        variables |= set(phi.variables())

    level0 = {v for v in variables if v.level == 0}
    domain = frozenset(representative(branch, v) for v in level0)
    assignment: Dict[SetVariable, object] = {v: representative(branch, v) for v in level0}
    sets: Dict[SetVariable, set] = {v: set() for v in variables if v.level in (1, 3)}
    for literal in branch.literals:
        if not literal.positive:
            continue
        atom = literal.atom
        if isinstance(atom, Mem1):
            sets.setdefault(atom.collection, set()).add(atom.element)
        elif isinstance(atom, Mem3):
            sets.setdefault(atom.relation, set()).add((atom.first, atom.second))
    assignment.update({v: frozenset(members) for v, members in sets.items()})
    return Interpretation(domain, assignment)
