"""
Brute-force reference reasoner.

Grounds a formula on its own, then searches assignments to the atoms that
occur in it (unit propagation plus case splits). Equality is respected by a
congruence check on every partial assignment: true equalities are merged
with a union-find, and no false equality or pair of membership atoms may
disagree inside a merged class.

Kept separate from the tableau and the query engine; only the set-calculus
types are shared.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from resource_guard import check_bound
from setcalc import (
    Clause,
    Eq,
    Formula,
    GroundLiteral,
    Interpretation,
    Mem1,
    Mem3,
    SetVariable,
    instantiate,
)

logger = logging.getLogger(__name__)

Atom = object
Assignment = Dict[Atom, bool]


class UnionFind:
    def __init__(self):
        self.parent: Dict[SetVariable, SetVariable] = {}

    def find(self, x: SetVariable) -> SetVariable:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: SetVariable, b: SetVariable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller representative wins, for stable models
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def ground(phi: Formula) -> Tuple[Tuple[GroundLiteral, ...], Tuple[Clause, ...]]:
    """Instantiate every universal over the level-0 variables of phi."""
    var0 = sorted(phi.level0())
    clauses = set()
    for s in phi.universals:
        if not var0:
            continue
        for values in itertools.product(var0, repeat=len(s.bound)):
            clauses.update(instantiate(s, values))
    return tuple(phi.ground), tuple(sorted(clauses))


def _classes(assign: Assignment) -> Optional[UnionFind]:
    uf = UnionFind()
    for atom, value in assign.items():
        if value and isinstance(atom, Eq):
            uf.union(atom.left, atom.right)
    for atom, value in assign.items():
        if not value and isinstance(atom, Eq) and uf.find(atom.left) == uf.find(atom.right):
            return None
    seen: Dict[tuple, bool] = {}
    for atom, value in assign.items():
        if isinstance(atom, Mem1):
            key = (1, uf.find(atom.element), atom.collection)
        elif isinstance(atom, Mem3):
            key = (3, uf.find(atom.first), uf.find(atom.second), atom.relation)
        else:
            continue
        if seen.setdefault(key, value) != value:
            return None
    return uf


def _propagate(clauses: Sequence[Tuple[Tuple[Atom, bool], ...]], assign: Assignment) -> bool:
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            free = None
            n_free = 0
            satisfied = False
            for atom, polarity in clause:
                value = assign.get(atom)
                if value is None:
                    n_free += 1
                    free = (atom, polarity)
                elif value == polarity:
                    satisfied = True
                    break
            if satisfied:
                continue
            if n_free == 0:
                return False
            if n_free == 1:
                assign[free[0]] = free[1]
                changed = True
    return True


def _complete(atoms: Iterable[Atom], assign: Assignment, uf: UnionFind) -> Assignment:
    out = dict(assign)
    known: Dict[tuple, bool] = {}
    for atom, value in assign.items():
        if isinstance(atom, Mem1):
            known[(1, uf.find(atom.element), atom.collection)] = value
        elif isinstance(atom, Mem3):
            known[(3, uf.find(atom.first), uf.find(atom.second), atom.relation)] = value
    for atom in atoms:
        if atom in out:
            continue
        if isinstance(atom, Eq):
            out[atom] = uf.find(atom.left) == uf.find(atom.right)
        elif isinstance(atom, Mem1):
            out[atom] = known.get((1, uf.find(atom.element), atom.collection), False)
        else:
            out[atom] = known.get((3, uf.find(atom.first), uf.find(atom.second), atom.relation), False)
    return out


@dataclass(frozen=True)
class OracleResult:
    sat: bool
    model: Optional[Dict[Atom, bool]] = None

    def __bool__(self) -> bool:
        return self.sat


def satisfiable(literals: Iterable[GroundLiteral], clauses: Iterable[Clause] = (),
                atom_bound: int = 24) -> OracleResult:
    encoded = [((l.atom, l.positive),) for l in literals]
    encoded += [tuple((l.atom, l.positive) for l in c.literals) for c in clauses]
    atoms = sorted({a for c in encoded for a, _ in c}, key=lambda a: (type(a).__name__, a.sort_key()))
    check_bound("oracle atoms", len(atoms), atom_bound)

    stack: List[Assignment] = [{}]
    while stack:
        assign = stack.pop()
        if not _propagate(encoded, assign):
            continue
        uf = _classes(assign)
        if uf is None:
            continue
        pending = next((c for c in encoded if not any(assign.get(a) == p for a, p in c)), None)
        if pending is None:
            return OracleResult(True, _complete(atoms, assign, uf))
        atom, polarity = next((a, p) for a, p in pending if a not in assign)
        stack.append({**assign, atom: not polarity})
        stack.append({**assign, atom: polarity})
    return OracleResult(False)


def satisfiable_formula(phi: Formula, atom_bound: int = 24) -> OracleResult:
    literals, clauses = ground(phi)
    return satisfiable(literals, clauses, atom_bound)


def model_to_interpretation(model: Dict[Atom, bool], phi: Optional[Formula] = None) -> Interpretation:
    """Quotient the atom model by its true equalities."""
    uf = UnionFind()
    variables = set()
    for atom, value in model.items():
        variables.update(atom.variables())
        if value and isinstance(atom, Eq):
            uf.union(atom.left, atom.right)
    if phi is not None:
        variables |= set(phi.variables())
    assignment: Dict[SetVariable, object] = {v: uf.find(v) for v in variables if v.level == 0}
    sets: Dict[SetVariable, set] = {v: set() for v in variables if v.level in (1, 3)}
    for atom, value in model.items():
        if not value:
            continue
        if isinstance(atom, Mem1):
            sets[atom.collection].add(uf.find(atom.element))
        elif isinstance(atom, Mem3):
            sets[atom.relation].add((uf.find(atom.first), uf.find(atom.second)))
    assignment.update({v: frozenset(s) for v, s in sets.items()})
    return Interpretation(frozenset(v for k, v in assignment.items() if k.level == 0), assignment)


def candidates(phi: Formula, templates: Sequence[GroundLiteral]) -> Tuple[List[SetVariable], List[List[SetVariable]]]:
    """Placeholders of the query and, per placeholder, the variables of phi of its level."""
    placeholders = sorted({v for t in templates for v in t.variables() if v.is_placeholder})
    pool = {level: sorted(v for v in phi.variables() if v.level == level and not v.is_placeholder)
            for level in (0, 1, 3)}
    return placeholders, [pool[p.level] for p in placeholders]


def brute_answer_set(phi: Formula, templates: Sequence[GroundLiteral], *,
                     atom_bound: int = 24, candidate_bound: int = 4096
                     ) -> List[Tuple[Tuple[SetVariable, SetVariable], ...]]:
    """Every level-respecting σ′ with phi ∧ ψσ′ satisfiable, as sorted (placeholder, target) pairs."""
    literals, clauses = ground(phi)
    placeholders, pools = candidates(phi, templates)
    total = 1
    for pool in pools:
        total *= len(pool)
    check_bound("oracle candidates", total, candidate_bound)

    if not satisfiable(literals, clauses, atom_bound):
        return []
    found = []
    for values in itertools.product(*pools):
        rho = dict(zip(placeholders, values))
        extra = [t.rename(rho) for t in templates]
        if satisfiable(list(literals) + extra, clauses, atom_bound):
            found.append(tuple(sorted(rho.items())))
    logger.info("oracle: %d of %d candidate substitution(s) satisfiable", len(found), total)
    return found
