"""
ABox reasoning services expressed as query shapes over the answering engine.

Each request kind fixes a query: instance checking C(a), instance retrieval
C(?x), role-filler retrieval R(a, ?y), concept retrieval ?c(a), role-instance
retrieval ?r(a, b); plain conjunctive queries pass through.

`run` answers with possibility semantics (some model of KB ∧ Q exists);
`entails` is the classical reading: the KB with the complement asserted has
no model.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from error_logger import InputError
from kb_model import (
    ConceptAssertion,
    ConceptNot,
    ConceptTerm,
    ConcreteRoleAssertion,
    ConcreteRoleTerm,
    Constant,
    KnowledgeBase,
    RoleAssertion,
    RoleTerm,
)
from pipeline import ReasoningPipeline
from query_model import (
    ConceptAtom,
    DLSubstitution,
    HOQuery,
    QueryVariable,
    RoleAtom,
    VariableSort,
)

logger = logging.getLogger(__name__)


class ServiceKind(str, Enum):
    INSTANCE_CHECK = "instance_check"
    INSTANCE_RETRIEVAL = "instance_retrieval"
    ROLE_FILLER_RETRIEVAL = "role_filler_retrieval"
    CONCEPT_RETRIEVAL = "concept_retrieval"
    ROLE_INSTANCE_RETRIEVAL = "role_instance_retrieval"
    CQA = "cqa"


# parameters each kind needs
_REQUIRED = {
    ServiceKind.INSTANCE_CHECK: ("individual", "concept"),
    ServiceKind.INSTANCE_RETRIEVAL: ("concept",),
    ServiceKind.ROLE_FILLER_RETRIEVAL: ("individual", "role"),
    ServiceKind.CONCEPT_RETRIEVAL: ("individual",),
    ServiceKind.ROLE_INSTANCE_RETRIEVAL: ("individual", "second"),
    ServiceKind.CQA: ("query",),
}

_PARAMETERS = ("individual", "second", "concept", "role", "query")


class ServiceRequest(BaseModel):
    model_config = ConfigDict(validate_assignment=True, extra="forbid", arbitrary_types_allowed=True)

    kind: ServiceKind
    individual: Optional[str] = None
    second: Optional[Union[str, Constant]] = None
    concept: Optional[Any] = None
    role: Optional[Any] = None
    query: Optional[HOQuery] = None

    @model_validator(mode="after")
    def _arity(self) -> "ServiceRequest":
        needed = _REQUIRED[self.kind]
        missing = [p for p in needed if getattr(self, p) is None]
        extra = [p for p in _PARAMETERS if p not in needed and getattr(self, p) is not None]
        if missing or extra:
            raise ValueError(f"{self.kind.value} takes {', '.join(needed)}"
                             + (f"; missing {', '.join(missing)}" if missing else "")
                             + (f"; unexpected {', '.join(extra)}" if extra else ""))
        if self.concept is not None and not isinstance(self.concept, ConceptTerm):
            raise ValueError("concept must be a concept term")
        if self.role is not None and not isinstance(self.role, (RoleTerm, ConcreteRoleTerm)):
            raise ValueError("role must be an abstract or concrete role term")
        return self


X = QueryVariable("?x", VariableSort.INDIVIDUAL)
Y = QueryVariable("?y", VariableSort.INDIVIDUAL)
C = QueryVariable("?c", VariableSort.CONCEPT)


def to_query(req: ServiceRequest) -> HOQuery:
    kind = req.kind
    if kind is ServiceKind.INSTANCE_CHECK:
        return HOQuery.of(ConceptAtom(req.concept, req.individual))
    if kind is ServiceKind.INSTANCE_RETRIEVAL:
        return HOQuery.of(ConceptAtom(req.concept, X))
    if kind is ServiceKind.ROLE_FILLER_RETRIEVAL:
        return HOQuery.of(RoleAtom(req.role, req.individual, Y))
    if kind is ServiceKind.CONCEPT_RETRIEVAL:
        return HOQuery.of(ConceptAtom(C, req.individual))
    if kind is ServiceKind.ROLE_INSTANCE_RETRIEVAL:
        sort = VariableSort.CONCRETE_ROLE if isinstance(req.second, Constant) else VariableSort.ABSTRACT_ROLE
        return HOQuery.of(RoleAtom(QueryVariable("?r", sort), req.individual, req.second))
    return req.query


@dataclass(frozen=True)
class ServiceResult:
    kind: ServiceKind
    consistent: bool
    answers: Tuple[DLSubstitution, ...] = ()

    @property
    def holds(self) -> bool:
        """Nonempty answer set; for ground queries this means the answer is {ε}."""
        return bool(self.answers)

    @property
    def message(self) -> str:
        if not self.consistent:
            return "KB inconsistent: closed tableau"
        if not self.answers:
            return "no answers"
        return f"{len(self.answers)} answer(s)"


def run(req: ServiceRequest, kb: KnowledgeBase, pipeline: Optional[ReasoningPipeline] = None) -> ServiceResult:
    pipeline = pipeline or ReasoningPipeline()
    query = to_query(req)
    result = pipeline.answer(kb, query)
    logger.info("%s: %s", req.kind.value, "inconsistent KB" if not result.consistent else f"{len(result)} answer(s)")
    return ServiceResult(req.kind, result.consistent, tuple(result.decoded))


def entails(req: ServiceRequest, kb: KnowledgeBase, pipeline: Optional[ReasoningPipeline] = None) -> bool:
    """Classical instance checking: KB ⊨ C(a) iff KB ∪ {a : ¬C} is inconsistent."""
    pipeline = pipeline or ReasoningPipeline()
    if req.kind is not ServiceKind.INSTANCE_CHECK:
        raise InputError(f"entailment is defined for instance checks, not {req.kind.value}")
    extended = kb.extend(ConceptAssertion(req.individual, ConceptNot(req.concept)))
    return not pipeline.consistency(extended).consistent


def entails_role(kb: KnowledgeBase, subject: str, other: Union[str, Constant], role,
                 pipeline: Optional[ReasoningPipeline] = None) -> bool:
    """KB ⊨ R(a, b) iff KB ∪ {¬R(a, b)} is inconsistent."""
    pipeline = pipeline or ReasoningPipeline()
    if isinstance(other, Constant):
        negated = ConcreteRoleAssertion(subject, other, role, negated=True)
    else:
        negated = RoleAssertion(subject, other, role, negated=True)
    return not pipeline.consistency(kb.extend(negated)).consistent
