"""
Higher-order query answering over a saturated, normalized tableau.

For every open branch a decision tree is walked depth first: level i consumes
the i-th query conjunct (after the branch substitution σ_θ has been applied)
by matching it against the literals on the branch, and every leaf at depth d
contributes σ_θ together with the accumulated bindings. Branches are seeded
with x = x for each of their level-0 variables so positive equality atoms can
match.

Before a membership conjunct is matched, every instantiation of it that the
branch leaves undecided is cut on (PB with that literal). The child holding
the literal stays open because saturation already fulfilled every clause
without it, so each branch decides every candidate conjunct and the union over
branches covers every model. Equality conjuncts are not cut on; they match
literally, or against the branch model with semantic_eq.

Raw answers are kept at the set-variable level and decoded to DL names only
at the end, expanding every representative to its whole equality class.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from error_logger import NamingError, ReasonerError
from kb_model import ConceptName, ConcreteRoleName, RoleName
from ke_tableau import Branch, Tableau, branch_model
from naming import NamingMap
from query_model import DLSubstitution, HOQuery, QueryVariable, VariableSort, data_positions, variables
from setcalc import Eq, GroundLiteral, Mem1, SetVariable, evaluate, pos

logger = logging.getLogger(__name__)

Binding = Tuple[Tuple[SetVariable, SetVariable], ...]


def _freeze(mapping: Dict[SetVariable, SetVariable]) -> Binding:
    return tuple(sorted(mapping.items()))


def _unify(template: Sequence[SetVariable], target: Sequence[SetVariable],
           rho: Dict[SetVariable, SetVariable]) -> Optional[Dict[SetVariable, SetVariable]]:
    out = dict(rho)
    for q, t in zip(template, target):
        if q.is_placeholder:
            if out.setdefault(q, t) != t:
                return None
        elif q != t:
            return None
    return out


def _positions(literal: GroundLiteral) -> Tuple[SetVariable, ...]:
    atom = literal.atom
    if isinstance(atom, Eq):
        return (atom.left, atom.right)
    if isinstance(atom, Mem1):
        return (atom.element, atom.collection)
    return (atom.first, atom.second, atom.relation)


def seeded_literals(branch: Branch) -> List[GroundLiteral]:
    """Branch literals plus x = x for every level-0 variable on the branch."""
    seen = set(branch.literals)
    out = list(branch.literals)
    for v in sorted(branch.level0()):
        reflexive = pos(Eq(v, v))
        if reflexive not in seen:
            seen.add(reflexive)
            out.append(reflexive)
    return out


def match_literal(q: GroundLiteral, literals: Iterable[GroundLiteral]) -> List[Binding]:
    """Every ρ over the placeholders of q such that qρ is one of the literals."""
    shape = _positions(q)
    found: Set[Binding] = set()
    for t in literals:
        if t.positive != q.positive or type(t.atom) is not type(q.atom):
            continue
        target = _positions(t)
        candidates = [target]
        if isinstance(t.atom, Eq):
            candidates.append(target[::-1])
        for candidate in candidates:
            rho = _unify(shape, candidate, {})
            if rho is not None:
                found.add(_freeze(rho))
    return sorted(found)


@dataclass(frozen=True)
class RawAnswer:
    branch_id: str
    sigma: Binding      # σ_θ of the branch
    binding: Binding    # σ′ accumulated along the decision tree
    leaf: int
    cuts: Tuple[GroundLiteral, ...] = ()    # literals added by cuts on the way to the leaf

    def as_dict(self) -> Dict[SetVariable, SetVariable]:
        return dict(self.sigma + self.binding)


@dataclass
class BranchAnswers:
    answers: List[RawAnswer] = field(default_factory=list)
    nodes: int = 0
    max_matches: int = 0


def _semantic_matches(q: GroundLiteral, branch: Branch) -> List[Binding]:
    """Equality atoms evaluated in the branch model; placeholders range over representatives."""
    model = branch_model(branch)
    open_vars = sorted({v for v in q.variables() if v.is_placeholder})
    found = []
    for values in itertools.product(sorted(model.domain), repeat=len(open_vars)):
        rho = dict(zip(open_vars, values))
        if evaluate(model, q.rename(rho)):
            found.append(_freeze(rho))
    return found


def instantiations(q: GroundLiteral, pools: Dict[int, Sequence[SetVariable]]) -> List[Binding]:
    """Every level-respecting ρ over the placeholders of q, drawn from pools."""
    open_vars = sorted({v for v in q.variables() if v.is_placeholder})
    choices = [pools.get(v.level, ()) for v in open_vars]
    return [_freeze(dict(zip(open_vars, values))) for values in itertools.product(*choices)]


def decide(q: GroundLiteral, branch: Branch, assumed: FrozenSet[GroundLiteral],
           pools: Dict[int, Sequence[SetVariable]]) -> List[Tuple[Binding, Optional[GroundLiteral]]]:
    """
    Instantiations of a membership template that the branch leaves undecided,
    each paired with the literal the cut adds. Instances already on the branch
    are left to match_literal.
    """
    out = []
    for rho in instantiations(q, pools):
        literal = q.rename(dict(rho))
        if literal in branch or literal.complement() in branch:
            continue
        if literal.complement() in assumed:
            continue
        out.append((rho, None if literal in assumed else literal))
    return out


def _pools_for(branch: Branch, pools: Dict[int, Sequence[SetVariable]]) -> Dict[int, Tuple[SetVariable, ...]]:
    return {level: tuple(sorted({branch.sigma.get(v, v) for v in vs})) for level, vs in pools.items()}


def answer_branch(branch: Branch, templates: Sequence[GroundLiteral], *, semantic_eq: bool = False,
                  pools: Optional[Dict[int, Sequence[SetVariable]]] = None) -> BranchAnswers:
    """
    Walk the decision tree of one open branch. Without pools a conjunct only
    matches literals on the branch. With pools, membership conjuncts the
    branch leaves undecided are cut on as well: the child holding the
    instantiated conjunct is open, so the conjunct matches there, and the
    literals added along a path must not contradict each other.
    """
    result = BranchAnswers()
    if branch.closed:
        return result
    literals = seeded_literals(branch)
    query = [q.rename(branch.sigma) for q in templates]
    sigma = _freeze(branch.sigma)
    depth = len(query)
    local = _pools_for(branch, pools) if pools is not None else None

    stack: List[Tuple[int, Dict[SetVariable, SetVariable], FrozenSet[GroundLiteral]]] = [(0, {}, frozenset())]
    while stack:
        level, rho, assumed = stack.pop()
        result.nodes += 1
        if level == depth:
            result.answers.append(RawAnswer(branch.id, sigma, _freeze(rho), len(result.answers),
                                            tuple(sorted(assumed))))
            continue
        q = query[level].rename(rho)
        if semantic_eq and q.is_equality:
            matches = [(m, None) for m in _semantic_matches(q, branch)]
        else:
            matches = [(m, None) for m in match_literal(q, literals)]
            if local is not None and not q.is_equality:
                matches += decide(q, branch, assumed, local)
        result.max_matches = max(result.max_matches, len(matches))
        for m, cut in reversed(sorted(matches, key=lambda x: x[0])):
            stack.append((level + 1, {**rho, **dict(m)}, assumed | {cut} if cut is not None else assumed))
    return result


@dataclass(frozen=True)
class AnswerSet:
    consistent: bool
    raw: Tuple[RawAnswer, ...]
    decoded: Tuple[DLSubstitution, ...]
    classes: Tuple[Tuple[DLSubstitution, Tuple[Tuple[str, Tuple[str, ...]], ...]], ...] = ()
    provenance: Tuple[Tuple[str, int], ...] = ()
    decision_nodes: int = 0
    max_matches: int = 0

    def __len__(self) -> int:
        return len(self.decoded)

    def records(self) -> List[Dict[str, str]]:
        return [{v.name: _spell(e) for v, e in s.pairs} for s in self.decoded]


def _spell(entity: object) -> str:
    if isinstance(entity, (ConceptName, RoleName, ConcreteRoleName)):
        return entity.name
    return str(entity)


def answer_set(tableau: Tableau, templates: Sequence[GroundLiteral], nm: NamingMap, query: HOQuery, *,
               include_internal: bool = False, semantic_eq: bool = False, cut: bool = True) -> AnswerSet:
    if tableau.closed:
        logger.info("closed tableau: every query has the empty answer set")
        return AnswerSet(False, (), ())
    if not tableau.exhaustive:
        raise ReasonerError("query answering needs an exhaustively saturated tableau")
    pools = tableau.pools() if cut else None
    raw: List[RawAnswer] = []
    nodes = 0
    s = 0
    for branch in tableau.open_branches():
        found = answer_branch(branch, templates, semantic_eq=semantic_eq, pools=pools)
        raw.extend(found.answers)
        nodes += found.nodes
        s = max(s, found.max_matches)
    decoded, classes, provenance = decode(raw, nm, query, include_internal=include_internal)
    logger.info("answers: %d raw, %d decoded over %d open branch(es)",
                len(raw), len(decoded), len(tableau.open_branches()))
    return AnswerSet(True, tuple(raw), decoded, classes, provenance, nodes, s)


_CONCEPT_INTERNAL = ("reserved", "nominal", "concept")


def _admissible(variable: QueryVariable, key: tuple, internal: bool, data: FrozenSet[QueryVariable],
                ind: FrozenSet[QueryVariable], include_internal: bool) -> bool:
    category = key[0]
    if internal and not include_internal:
        return False
    if variable.sort is VariableSort.INDIVIDUAL:
        if variable in data:
            return category == "constant"
        if variable in ind:
            return category == "individual"
        return category in ("individual", "constant")
    if variable.sort is VariableSort.CONCEPT:
        return category in _CONCEPT_INTERNAL
    if variable.sort is VariableSort.ABSTRACT_ROLE:
        return category == "role"
    return category == "concrete_role"


def _entity(variable: QueryVariable, key: tuple, nm: NamingMap, target: SetVariable) -> object:
    category = key[0]
    if category in ("individual", "constant"):
        return key[1]
    if variable.sort is VariableSort.CONCEPT:
        return ConceptName(key[1] if category == "concept" else nm.user_name(target))
    if variable.sort is VariableSort.ABSTRACT_ROLE:
        return RoleName(key[1])
    return ConcreteRoleName(key[1])


def decode(raw: Iterable[RawAnswer], nm: NamingMap, q: HOQuery, *, include_internal: bool = False):
    """
    Project raw answers on the query's variables and map them back to DL names.
    Returns (sorted substitutions, per-substitution equality classes,
    per-substitution (branch id, leaf) of the first raw answer that produced it).
    """
    qvars = sorted(variables(q).all())
    ind, data = data_positions(q)
    out: Dict[DLSubstitution, Tuple[Tuple[str, Tuple[str, ...]], ...]] = {}
    origin: Dict[DLSubstitution, Tuple[str, int]] = {}

    for answer in raw:
        sigma = dict(answer.sigma)
        binding = dict(answer.binding)
        options = []
        classes = []
        for v in qvars:
            placeholder = nm.query_variable(v)
            target = binding.get(placeholder)
            if target is None:
                raise NamingError(f"query variable {v.name} left unbound on branch {answer.branch_id}")
            if target.level == 0:
                members = sorted({x for x in nm.variables() if x.level == 0
                                  and not x.is_placeholder and sigma.get(x, x) == target} | {target})
            else:
                members = [target]
            names = []
            for member in members:
                key = nm.entity_of(member)
                if _admissible(v, key, nm.is_internal(member), data, ind, include_internal):
                    names.append(_entity(v, key, nm, member))
            options.append([(v, e) for e in names])
            classes.append((v.name, tuple(sorted(_spell(e) for e in names))))
        for combo in itertools.product(*options):
            s = DLSubstitution(tuple(combo))
            out.setdefault(s, tuple(classes))
            origin.setdefault(s, (answer.branch_id, answer.leaf))

    ordered = sorted(out, key=lambda s: [(v.name, type(e).__name__, _spell(e)) for v, e in s.pairs])
    return tuple(ordered), tuple((s, out[s]) for s in ordered), tuple(origin[s] for s in ordered)
