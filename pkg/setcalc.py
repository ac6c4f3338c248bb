"""
Set-theoretic target language: tagged set variables of levels 0, 1 and 3,
ground literals over them, clauses, purely universal formulae with
quantification over level-0 variables only, and finite interpretations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple, Union

from error_logger import InputError


class VarKind(str, Enum):
    # level 0
    INDIVIDUAL = "individual"
    CONSTANT = "constant"
    WITNESS = "witness"
    BOUND = "bound"
    # level 1
    CONCEPT = "concept"
    DATATYPE = "datatype"
    FACET = "facet"
    FACET_EXPRESSION = "facet_expression"
    NOMINAL = "nominal"
    ENUMERATION = "enumeration"
    RESERVED = "reserved"
    # level 3
    ROLE = "role"
    CONCRETE_ROLE = "concrete_role"
    UNIVERSAL = "universal"
    # any level
    DEFINED = "defined"
    QUERY = "query"


LEVELS = (0, 1, 3)


@dataclass(frozen=True, order=True)
class SetVariable:
    level: int
    kind: VarKind
    name: str

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise InputError(f"set variables live on levels 0, 1 or 3, not {self.level}")

    def __str__(self) -> str:
        return self.name

    @property
    def is_placeholder(self) -> bool:
        return self.kind is VarKind.QUERY


def var0(kind: VarKind, name: str) -> SetVariable:
    return SetVariable(0, kind, name)


def var1(kind: VarKind, name: str) -> SetVariable:
    return SetVariable(1, kind, name)


def var3(kind: VarKind, name: str) -> SetVariable:
    return SetVariable(3, kind, name)


def bound(index: int) -> SetVariable:
    return SetVariable(0, VarKind.BOUND, f"z{index}")


Substitution = Mapping[SetVariable, SetVariable]


def _level_check(variable: SetVariable, level: int, where: str) -> None:
    if variable.level != level:
        raise InputError(f"{where} expects a level-{level} variable, got {variable.name} (level {variable.level})")


@dataclass(frozen=True)
class Eq:
    """x = y over level-0 variables; arguments kept in canonical order."""
    left: SetVariable
    right: SetVariable

    def __post_init__(self) -> None:
        _level_check(self.left, 0, "equality")
        _level_check(self.right, 0, "equality")
        if self.right < self.left:
            left, right = self.right, self.left
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)

    def variables(self) -> Tuple[SetVariable, ...]:
        return (self.left, self.right)

    def sort_key(self) -> tuple:
        return (0, self.left, self.right)

    def rename(self, sigma: Substitution) -> "Eq":
        return Eq(sigma.get(self.left, self.left), sigma.get(self.right, self.right))

    def render(self) -> str:
        return f"{self.left} = {self.right}"

    @property
    def reflexive(self) -> bool:
        return self.left == self.right


@dataclass(frozen=True)
class Mem1:
    element: SetVariable
    collection: SetVariable

    def __post_init__(self) -> None:
        _level_check(self.element, 0, "membership")
        _level_check(self.collection, 1, "membership")

    def variables(self) -> Tuple[SetVariable, ...]:
        return (self.element, self.collection)

    def sort_key(self) -> tuple:
        return (1, self.collection, self.element)

    def rename(self, sigma: Substitution) -> "Mem1":
        return Mem1(sigma.get(self.element, self.element), sigma.get(self.collection, self.collection))

    def render(self) -> str:
        return f"{self.element} in {self.collection}"


@dataclass(frozen=True)
class Mem3:
    first: SetVariable
    second: SetVariable
    relation: SetVariable

    def __post_init__(self) -> None:
        _level_check(self.first, 0, "pair membership")
        _level_check(self.second, 0, "pair membership")
        _level_check(self.relation, 3, "pair membership")

    def variables(self) -> Tuple[SetVariable, ...]:
        return (self.first, self.second, self.relation)

    def sort_key(self) -> tuple:
        return (2, self.relation, self.first, self.second)

    def rename(self, sigma: Substitution) -> "Mem3":
        return Mem3(sigma.get(self.first, self.first), sigma.get(self.second, self.second),
                    sigma.get(self.relation, self.relation))

    def render(self) -> str:
        return f"<{self.first},{self.second}> in {self.relation}"


Atom = Union[Eq, Mem1, Mem3]


@dataclass(frozen=True)
class GroundLiteral:
    positive: bool
    atom: Atom

    def complement(self) -> "GroundLiteral":
        return GroundLiteral(not self.positive, self.atom)

    def variables(self) -> Tuple[SetVariable, ...]:
        return self.atom.variables()

    def sort_key(self) -> tuple:
        return (self.atom.sort_key(), not self.positive)

    def rename(self, sigma: Substitution) -> "GroundLiteral":
        return GroundLiteral(self.positive, self.atom.rename(sigma))

    def render(self) -> str:
        return self.atom.render() if self.positive else f"~ ({self.atom.render()})"

    def __lt__(self, other: "GroundLiteral") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def is_equality(self) -> bool:
        return isinstance(self.atom, Eq)


def pos(atom: Atom) -> GroundLiteral:
    return GroundLiteral(True, atom)


def neg(atom: Atom) -> GroundLiteral:
    return GroundLiteral(False, atom)


def complement(literal: GroundLiteral) -> GroundLiteral:
    return literal.complement()


@dataclass(frozen=True)
class Clause:
    """Disjunction of ground literals, sorted and without duplicates."""
    literals: Tuple[GroundLiteral, ...]

    def __post_init__(self) -> None:
        if not self.literals:
            raise InputError("a clause needs at least one disjunct")

    @classmethod
    def of(cls, *literals: GroundLiteral) -> "Clause":
        return cls(tuple(sorted(set(literals))))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[GroundLiteral]:
        return iter(self.literals)

    def __lt__(self, other: "Clause") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (len(self.literals), tuple(l.sort_key() for l in self.literals))

    def variables(self) -> FrozenSet[SetVariable]:
        return frozenset(v for l in self.literals for v in l.variables())

    def rename(self, sigma: Substitution) -> "Clause":
        return Clause.of(*(l.rename(sigma) for l in self.literals))

    @property
    def is_tautology(self) -> bool:
        present = set(self.literals)
        return any(l.complement() in present for l in self.literals) or any(
            l.positive and isinstance(l.atom, Eq) and l.atom.reflexive for l in self.literals)

    def render(self) -> str:
        return " | ".join(l.render() for l in self.literals)


@dataclass(frozen=True)
class PurelyUniversal:
    bound: Tuple[SetVariable, ...]
    matrix: Tuple[Clause, ...]
    origin: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(set(self.bound)) != len(self.bound):
            raise InputError(f"quantified variables must be pairwise distinct: {[str(b) for b in self.bound]}")
        for b in self.bound:
            _level_check(b, 0, "quantifier")
        if not self.matrix:
            raise InputError("a purely universal formula needs a nonempty matrix")

    def free_variables(self) -> FrozenSet[SetVariable]:
        inner = frozenset(v for c in self.matrix for v in c.variables())
        return inner - frozenset(self.bound)

    def split(self) -> Tuple["PurelyUniversal", ...]:
        """One universal per matrix clause, quantifying only the bound variables it uses."""
        parts = []
        for clause in self.matrix:
            used = clause.variables()
            parts.append(PurelyUniversal(tuple(b for b in self.bound if b in used), (clause,), self.origin))
        return tuple(parts)

    def render(self) -> str:
        body = " & ".join(f"({c.render()})" for c in self.matrix)
        if not self.bound:
            return body
        return f"forall {' '.join(str(b) for b in self.bound)} . {body}"


@dataclass(frozen=True)
class Formula:
    universals: Tuple[PurelyUniversal, ...] = ()
    ground: Tuple[GroundLiteral, ...] = ()

    def __add__(self, other: "Formula") -> "Formula":
        return Formula(self.universals + other.universals, self.ground + other.ground)

    def variables(self) -> FrozenSet[SetVariable]:
        out = set(v for l in self.ground for v in l.variables())
        for s in self.universals:
            out |= s.free_variables()
        return frozenset(out)

    def level0(self) -> FrozenSet[SetVariable]:
        return frozenset(v for v in self.variables() if v.level == 0)

    def render(self) -> str:
        lines = [l.render() for l in self.ground]
        lines.extend(s.render() for s in self.universals)
        return "\n".join(lines)


Formulaic = Union[GroundLiteral, Clause, PurelyUniversal, Formula]


@dataclass(frozen=True)
class Interpretation:
    """
    Finite model: level-0 variables map to domain elements, level-1 variables to
    subsets of the domain, level-3 variables to sets of ordered pairs.
    """
    domain: FrozenSet[Any]
    assignment: Mapping[SetVariable, Any]

    def value(self, variable: SetVariable) -> Any:
        try:
            return self.assignment[variable]
        except KeyError:
            raise InputError(f"interpretation does not assign {variable.name}") from None

    def extend(self, extra: Dict[SetVariable, Any]) -> "Interpretation":
        merged = dict(self.assignment)
        merged.update(extra)
        return Interpretation(self.domain, merged)


def _eval_atom(m: Interpretation, atom: Atom) -> bool:
    if isinstance(atom, Eq):
        return m.value(atom.left) == m.value(atom.right)
    if isinstance(atom, Mem1):
        return m.value(atom.element) in m.value(atom.collection)
    return (m.value(atom.first), m.value(atom.second)) in m.value(atom.relation)


def evaluate(m: Interpretation, f: Formulaic) -> bool:
    if isinstance(f, GroundLiteral):
        return _eval_atom(m, f.atom) == f.positive
    if isinstance(f, Clause):
        return any(evaluate(m, l) for l in f.literals)
    if isinstance(f, PurelyUniversal):
        elements = sorted(m.domain, key=repr)
        for values in itertools.product(elements, repeat=len(f.bound)):
            inner = m.extend(dict(zip(f.bound, values)))
            if not all(evaluate(inner, c) for c in f.matrix):
                return False
        return True
    if isinstance(f, Formula):
        return all(evaluate(m, l) for l in f.ground) and all(evaluate(m, s) for s in f.universals)
    raise InputError(f"cannot evaluate {type(f).__name__}")


def substitute(sigma: Substitution, f: Formulaic) -> Formulaic:
    """Replace free occurrences only; a target that a quantifier would capture is rejected."""
    for source, target in sigma.items():
        if source.level != target.level:
            raise InputError(f"substitution {source.name}/{target.name} does not respect levels")
    if isinstance(f, (GroundLiteral, Clause)):
        return f.rename(sigma)
    if isinstance(f, PurelyUniversal):
        free = f.free_variables()
        inner = {s: t for s, t in sigma.items() if s not in f.bound}
        captured = [t for s, t in inner.items() if s in free and t in f.bound]
        if captured:
            raise InputError(f"substitution would capture {', '.join(t.name for t in captured)}")
        return PurelyUniversal(f.bound, tuple(c.rename(inner) for c in f.matrix), f.origin)
    if isinstance(f, Formula):
        return Formula(tuple(substitute(sigma, s) for s in f.universals),
                       tuple(l.rename(sigma) for l in f.ground))
    raise InputError(f"cannot substitute into {type(f).__name__}")


def instantiate(s: PurelyUniversal, values: Tuple[SetVariable, ...]) -> Tuple[Clause, ...]:
    mapping = dict(zip(s.bound, values))
    return tuple(c.rename(mapping) for c in s.matrix)


def render(f: Union[Formulaic, Iterable[GroundLiteral]]) -> str:
    if hasattr(f, "render"):
        return f.render()
    return " & ".join(l.render() for l in f)
