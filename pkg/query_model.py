"""
Higher-order conjunctive queries: typed query variables, HO literals, DL-level
substitutions and their application.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple, Union

from error_logger import InputError
from kb_model import (
    ConceptName,
    ConceptTerm,
    ConcreteRoleName,
    ConcreteRoleTerm,
    Constant,
    Individual,
    RoleName,
    RoleTerm,
)


class VariableSort(str, Enum):
    INDIVIDUAL = "individual"       # individuals and data values
    CONCEPT = "concept"
    ABSTRACT_ROLE = "abstract_role"
    CONCRETE_ROLE = "concrete_role"


@dataclass(frozen=True, order=True)
class QueryVariable:
    name: str
    sort: VariableSort

    def __str__(self) -> str:
        return self.name


Argument = Union[Individual, Constant, QueryVariable]
Entity = Union[Individual, Constant, ConceptName, RoleName, ConcreteRoleName]


@dataclass(frozen=True)
class ConceptAtom:
    concept: Union[ConceptTerm, QueryVariable]
    arg: Argument


@dataclass(frozen=True)
class RoleAtom:
    role: Union[RoleTerm, ConcreteRoleTerm, QueryVariable]
    first: Argument
    second: Argument


@dataclass(frozen=True)
class EqualityAtom:
    left: Argument
    right: Argument


QueryAtom = Union[ConceptAtom, RoleAtom, EqualityAtom]


@dataclass(frozen=True)
class HOLiteral:
    atom: QueryAtom
    positive: bool = True


@dataclass(frozen=True)
class HOQuery:
    """Ordered conjunction; the empty query is λ."""
    literals: Tuple[HOLiteral, ...] = ()

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @classmethod
    def of(cls, *literals: Union[HOLiteral, QueryAtom]) -> "HOQuery":
        return cls(tuple(l if isinstance(l, HOLiteral) else HOLiteral(l) for l in literals))

    def permuted(self, order: Iterable[int]) -> "HOQuery":
        return HOQuery(tuple(self.literals[i] for i in order))


EMPTY_QUERY = HOQuery()


def _accepts(sort: VariableSort, entity: object) -> bool:
    if sort is VariableSort.INDIVIDUAL:
        return isinstance(entity, (str, Constant))
    if sort is VariableSort.CONCEPT:
        return isinstance(entity, ConceptName)
    if sort is VariableSort.ABSTRACT_ROLE:
        return isinstance(entity, RoleName)
    return isinstance(entity, ConcreteRoleName)


@dataclass(frozen=True)
class DLSubstitution:
    """Sort-preserving finite map from query variables to KB entities."""
    pairs: Tuple[Tuple[QueryVariable, Entity], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for variable, entity in self.pairs:
            if variable in seen:
                raise InputError(f"variable {variable.name} bound twice")
            seen.add(variable)
            if not _accepts(variable.sort, entity):
                raise InputError(f"{variable.name} ({variable.sort.value}) cannot be bound to {entity!r}")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=lambda p: p[0])))

    @classmethod
    def of(cls, mapping: Optional[Mapping[QueryVariable, Entity]] = None) -> "DLSubstitution":
        return cls(tuple((mapping or {}).items()))

    def get(self, variable: QueryVariable) -> Optional[Entity]:
        return next((e for v, e in self.pairs if v == variable), None)

    def domain(self) -> FrozenSet[QueryVariable]:
        return frozenset(v for v, _ in self.pairs)

    def as_dict(self) -> Dict[QueryVariable, Entity]:
        return dict(self.pairs)

    def compose(self, other: "DLSubstitution") -> "DLSubstitution":
        """self first, then other; ground targets make this the union of disjoint maps."""
        merged = self.as_dict()
        for variable, entity in other.pairs:
            merged.setdefault(variable, entity)
        return DLSubstitution.of(merged)

    def __len__(self) -> int:
        return len(self.pairs)


EPSILON = DLSubstitution()


def _arg(arg: Argument, sigma: Dict[QueryVariable, Entity]) -> Argument:
    if isinstance(arg, QueryVariable) and arg in sigma:
        return sigma[arg]
    return arg


def apply(sigma: DLSubstitution, q: HOQuery) -> HOQuery:
    mapping = sigma.as_dict()
    sorts = {v.name: v.sort for v in variables(q).all()}
    for v in mapping:
        if v.name in sorts and sorts[v.name] is not v.sort:
            raise InputError(f"{v.name} is a {sorts[v.name].value} variable in the query, "
                             f"not {v.sort.value}")
    out = []
    for literal in q.literals:
        atom = literal.atom
        if isinstance(atom, ConceptAtom):
            concept = mapping.get(atom.concept, atom.concept) if isinstance(atom.concept, QueryVariable) else atom.concept
            atom = ConceptAtom(concept, _arg(atom.arg, mapping))
        elif isinstance(atom, RoleAtom):
            role = mapping.get(atom.role, atom.role) if isinstance(atom.role, QueryVariable) else atom.role
            atom = RoleAtom(role, _arg(atom.first, mapping), _arg(atom.second, mapping))
        else:
            atom = EqualityAtom(_arg(atom.left, mapping), _arg(atom.right, mapping))
        out.append(HOLiteral(atom, literal.positive))
    return HOQuery(tuple(out))


@dataclass(frozen=True)
class QueryVariables:
    individual: FrozenSet[QueryVariable] = frozenset()
    concept: FrozenSet[QueryVariable] = frozenset()
    abstract_role: FrozenSet[QueryVariable] = frozenset()
    concrete_role: FrozenSet[QueryVariable] = frozenset()

    def all(self) -> FrozenSet[QueryVariable]:
        return self.individual | self.concept | self.abstract_role | self.concrete_role


def _atom_variables(atom: QueryAtom) -> Iterable[QueryVariable]:
    if isinstance(atom, ConceptAtom):
        parts = (atom.concept, atom.arg)
    elif isinstance(atom, RoleAtom):
        parts = (atom.role, atom.first, atom.second)
    else:
        parts = (atom.left, atom.right)
    return (p for p in parts if isinstance(p, QueryVariable))


def variables(q: HOQuery) -> QueryVariables:
    found = {sort: set() for sort in VariableSort}
    for literal in q.literals:
        for v in _atom_variables(literal.atom):
            found[v.sort].add(v)
    return QueryVariables(*(frozenset(found[s]) for s in VariableSort))


def data_positions(q: HOQuery) -> Tuple[FrozenSet[QueryVariable], FrozenSet[QueryVariable]]:
    """Split individual-sort variables into (individual positions, data-value positions)."""
    ind, data = set(), set()
    for literal in q.literals:
        atom = literal.atom
        if isinstance(atom, ConceptAtom) and isinstance(atom.arg, QueryVariable):
            ind.add(atom.arg)
        elif isinstance(atom, RoleAtom):
            concrete = isinstance(atom.role, ConcreteRoleTerm) or (
                isinstance(atom.role, QueryVariable) and atom.role.sort is VariableSort.CONCRETE_ROLE)
            if isinstance(atom.first, QueryVariable):
                ind.add(atom.first)
            if isinstance(atom.second, QueryVariable):
                (data if concrete else ind).add(atom.second)
        elif isinstance(atom, EqualityAtom):
            for side, other in ((atom.left, atom.right), (atom.right, atom.left)):
                if isinstance(side, QueryVariable) and isinstance(other, Constant):
                    data.add(side)
                elif isinstance(side, QueryVariable) and isinstance(other, str):
                    ind.add(side)
    return frozenset(ind), frozenset(data)


def check_positions(q: HOQuery) -> None:
    """Reject a variable used both as an individual and as a data value."""
    ind, data = data_positions(q)
    clash = sorted(v.name for v in ind & data)
    if clash:
        raise InputError(f"variable(s) {', '.join(clash)} used in both individual and data-value positions")
