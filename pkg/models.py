"""
Result records emitted by the pipeline and the CLI.
Every command normalizes its output to one of these before printing.
"""

from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

SchemaVersion = Literal["1.0"]

Value = Union[str, List[str]]


class StrictRecord(BaseModel):
    model_config = ConfigDict(validate_assignment=True, extra="forbid")


class ComplexityRecord(StrictRecord):
    """Measured sizes next to their worst-case bounds"""
    m: int = Field(ge=0)
    k: int = Field(ge=0)
    r: int = Field(ge=0)
    ell: int = Field(ge=0)
    disjunctions: int = Field(ge=0)
    disjunction_bound: int = Field(ge=0)
    leaves: int = Field(ge=0)
    branch_bound_log2: int = Field(ge=0)
    decision_nodes: int = Field(0, ge=0)
    decision_node_bound: int = Field(0, ge=0)
    stage_seconds: Dict[str, float] = Field(default_factory=dict)


class ConsistencyRecord(StrictRecord):
    consistent: bool
    open_branches: int = Field(ge=0)
    closed_branches: int = Field(ge=0)
    message: str
    complexity: Optional[ComplexityRecord] = None
    schema_version: SchemaVersion = "1.0"


class AnswerRecord(StrictRecord):
    """
    One decoded answer substitution: query variable name to entity name,
    or to the sorted equality class when explain mode asks for it.
    """
    bindings: Dict[str, Value]
    branch: Optional[str] = None
    leaf: Optional[int] = Field(None, ge=0)

    def flat(self) -> Dict[str, Union[Value, int]]:
        out: Dict[str, Union[Value, int]] = dict(sorted(self.bindings.items()))
        if self.branch is not None:
            out["branch"] = self.branch
            out["leaf"] = self.leaf
        return out


class ServiceResultRecord(StrictRecord):
    service: str
    consistent: bool
    holds: Optional[bool] = None
    answers: List[Dict[str, Value]] = Field(default_factory=list)
    message: str = ""


def answer_records(records: List[Dict[str, str]],
                   classes: Optional[List[Dict[str, List[str]]]] = None,
                   provenance: Optional[List[Tuple[str, int]]] = None) -> List[AnswerRecord]:
    """Attach equality classes wider than one name, and the (branch, leaf) an answer came from"""
    out = []
    for i, bindings in enumerate(records):
        values: Dict[str, Value] = dict(bindings)
        if classes is not None:
            for name, members in classes[i].items():
                if len(members) > 1:
                    values[name] = list(members)
        branch, leaf = provenance[i] if provenance is not None else (None, None)
        out.append(AnswerRecord(bindings=values, branch=branch, leaf=leaf))
    return out
