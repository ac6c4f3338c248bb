"""
Injective naming of DL entities as set variables, with reverse lookup.

Every variable emitted by the translator is created here, so the map is also
the housing check: anything not in it is a naming bug.
"""

from __future__ import annotations

from typing import Dict, Iterator, Optional, Tuple

from error_logger import NamingError
from kb_model import (
    BOTTOM_FACET,
    Constant,
    DataEnumeration,
    FacetExpression,
    FacetLiteral,
    Nominal,
    TOP_FACET,
    UNIVERSAL_ROLE,
)
from query_model import QueryVariable, VariableSort
from setcalc import SetVariable, VarKind

INTERNAL_PREFIX = "$"

# entity keys are (category, payload...) tuples
EntityKey = Tuple


def _facet_text(expr: FacetExpression) -> str:
    def lit(l: FacetLiteral) -> str:
        return l.facet if l.positive else f"~{l.facet}"
    return " & ".join("(" + " | ".join(lit(l) for l in c) + ")" for c in expr.clauses)


class NamingMap:
    def __init__(self) -> None:
        self._forward: Dict[EntityKey, SetVariable] = {}
        self._reverse: Dict[SetVariable, EntityKey] = {}

    def _intern(self, key: EntityKey, variable: SetVariable) -> SetVariable:
        existing = self._forward.get(key)
        if existing is not None:
            return existing
        if variable in self._reverse:
            raise NamingError(f"variable {variable.name} already names {self._reverse[variable]}")
        self._forward[key] = variable
        self._reverse[variable] = key
        return variable

    # level 0
    def individual(self, name: str) -> SetVariable:
        return self._intern(("individual", name), SetVariable(0, VarKind.INDIVIDUAL, f"x_{name}"))

    def constant(self, c: Constant) -> SetVariable:
        return self._intern(("constant", c), SetVariable(0, VarKind.CONSTANT, f"x_{c}"))

    def witness(self, label: str) -> SetVariable:
        return self._intern(("witness", label), SetVariable(0, VarKind.WITNESS, f"w_{label}"))

    # level 1
    def reserved(self, label: str) -> SetVariable:
        """Internal level-1 sets: I, D, Top, Bot."""
        return self._intern(("reserved", label), SetVariable(1, VarKind.RESERVED, f"{INTERNAL_PREFIX}{label}"))

    def concept(self, name: str) -> SetVariable:
        kind = VarKind.DEFINED if name.startswith(INTERNAL_PREFIX) else VarKind.CONCEPT
        return self._intern(("concept", name), SetVariable(1, kind, name))

    def datatype(self, name: str) -> SetVariable:
        return self._intern(("datatype", name), SetVariable(1, VarKind.DATATYPE, name))

    def facet(self, datatype: str, name: str) -> SetVariable:
        if name == TOP_FACET:
            return self._intern(("facet", datatype, name),
                                SetVariable(1, VarKind.RESERVED, f"{INTERNAL_PREFIX}Top:{datatype}"))
        if name == BOTTOM_FACET:
            return self._intern(("facet", datatype, name),
                                SetVariable(1, VarKind.RESERVED, f"{INTERNAL_PREFIX}Bot:{datatype}"))
        return self._intern(("facet", datatype, name), SetVariable(1, VarKind.FACET, f"{datatype}.{name}"))

    def facet_expression(self, expr: FacetExpression) -> SetVariable:
        if expr.base_facet is not None:
            return self.facet(expr.datatype, expr.base_facet)
        return self._intern(("facet_expression", expr),
                            SetVariable(1, VarKind.FACET_EXPRESSION,
                                        f"{INTERNAL_PREFIX}[{expr.datatype}: {_facet_text(expr)}]"))

    def nominal(self, nominal: Nominal) -> SetVariable:
        return self._intern(("nominal", nominal),
                            SetVariable(1, VarKind.NOMINAL, "{" + ",".join(nominal.individuals) + "}"))

    def enumeration(self, enum: DataEnumeration) -> SetVariable:
        return self._intern(("enumeration", enum),
                            SetVariable(1, VarKind.ENUMERATION, "{" + ",".join(str(c) for c in enum.constants) + "}"))

    def data_term(self, name: str) -> SetVariable:
        return self._intern(("data_term", name), SetVariable(1, VarKind.DEFINED, name))

    # level 3
    def role(self, name: str) -> SetVariable:
        if name == UNIVERSAL_ROLE:
            kind = VarKind.UNIVERSAL
        elif name.startswith(INTERNAL_PREFIX):
            kind = VarKind.DEFINED
        else:
            kind = VarKind.ROLE
        return self._intern(("role", name), SetVariable(3, kind, name))

    def concrete_role(self, name: str) -> SetVariable:
        kind = VarKind.DEFINED if name.startswith(INTERNAL_PREFIX) else VarKind.CONCRETE_ROLE
        return self._intern(("concrete_role", name), SetVariable(3, kind, name))

    # query placeholders
    def query_variable(self, v: QueryVariable) -> SetVariable:
        if v.sort is VariableSort.INDIVIDUAL:
            target = SetVariable(0, VarKind.QUERY, f"x_{v.name}")
        elif v.sort is VariableSort.CONCEPT:
            target = SetVariable(1, VarKind.QUERY, v.name)
        else:
            target = SetVariable(3, VarKind.QUERY, v.name)
        return self._intern(("query", v), target)

    # reverse direction
    def entity_of(self, variable: SetVariable) -> EntityKey:
        try:
            return self._reverse[variable]
        except KeyError:
            raise NamingError(f"no entity is named by {variable.name}") from None

    def lookup(self, key: EntityKey) -> Optional[SetVariable]:
        return self._forward.get(key)

    def __contains__(self, variable: SetVariable) -> bool:
        return variable in self._reverse

    def __len__(self) -> int:
        return len(self._reverse)

    def variables(self) -> Iterator[SetVariable]:
        return iter(sorted(self._reverse))

    def is_internal(self, variable: SetVariable) -> bool:
        """Witnesses, reserved sets, fresh definitions and other non-user names."""
        return variable.kind in (VarKind.WITNESS, VarKind.RESERVED, VarKind.DEFINED,
                                 VarKind.FACET_EXPRESSION, VarKind.NOMINAL, VarKind.ENUMERATION,
                                 VarKind.DATATYPE, VarKind.FACET)

    def user_name(self, variable: SetVariable) -> str:
        """The DL-level spelling of the entity a variable names."""
        key = self.entity_of(variable)
        category = key[0]
        if category in ("individual", "concept", "role", "concrete_role", "datatype", "data_term"):
            return key[1]
        if category == "constant":
            return str(key[1])
        if category == "query":
            return key[1].name
        return variable.name
