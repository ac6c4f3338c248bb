from collections import defaultdict
from typing import Any, Dict, List

from error_logger import Diagnostic, Severity
from kb_model import (
    AtLeastInclusion,
    AtMostInclusion,
    BOTTOM_FACET,
    ConceptName,
    ConcreteRoleName,
    ConcreteRoleTerm,
    Constant,
    DataEnumeration,
    DataTerm,
    DatatypeRef,
    ExistsInclusion,
    FacetExpression,
    ForAllInclusion,
    KnowledgeBase,
    Nominal,
    RoleChain,
    RoleName,
    RoleTerm,
    TOP_FACET,
    UNIVERSAL_ROLE,
    walk,
)


class KnowledgeBaseValidator:
    """Well-formedness checks for a knowledge base and its datatype map"""

    def validate(self, kb: KnowledgeBase) -> List[Diagnostic]:
        diagnostics: List[Diagnostic] = []
        diagnostics += self._check_datatype_map(kb)
        diagnostics += self._check_statements(kb)
        diagnostics += self._check_name_sorts(kb)
        return diagnostics

    def validate_kb(self, kb: KnowledgeBase) -> Dict[str, Any]:
        """
        Validation summary for CLI and pipeline callers
        Returns: {'valid', 'errors', 'warnings', 'message'}
        """
        diagnostics = self.validate(kb)
        errors = [d for d in diagnostics if d.severity is Severity.ERROR]
        warnings = [d for d in diagnostics if d.severity is Severity.WARNING]
        if errors:
            message = f"{len(errors)} error(s); first: {errors[0].message}"
        else:
            message = f"{len(kb.statements)} statement(s) ok"
        return {
            'valid': not errors,
            'errors': errors,
            'warnings': warnings,
            'message': message,
        }

    def _check_datatype_map(self, kb: KnowledgeBase) -> List[Diagnostic]:
        out = []
        owners = defaultdict(set)
        for spec in kb.dmap.specs:
            if not spec.constants:
                out.append(_error("DMAP_EMPTY", f"datatype {spec.name} has no constants"))
            for value in spec.constants:
                owners[value].add(spec.name)
            for facet_name, ext in spec.facets:
                stray = sorted(set(ext) - set(spec.constants))
                if stray:
                    out.append(_error("DMAP_FACET", f"facet {facet_name} of {spec.name} mentions "
                                                    f"undeclared constants {stray}"))
        for value, datatypes in sorted(owners.items()):
            if len(datatypes) > 1:
                out.append(_error("DMAP_OVERLAP", f"constant sets not disjoint: \"{value}\" in "
                                                  f"{', '.join(sorted(datatypes))}"))
        return out

    def _check_statements(self, kb: KnowledgeBase) -> List[Diagnostic]:
        out = []
        declared = kb.dmap.datatypes
        constants = {c for cs in kb.dmap.constants.values() for c in cs}
        facets = kb.dmap.facets

        for statement in kb.statements:
            if isinstance(statement, (AtLeastInclusion, AtMostInclusion)) and statement.n < 1:
                out.append(_error("CARDINALITY", f"cardinality must be ≥ 1, got {statement.n}"))
            if isinstance(statement, RoleChain) and RoleName(UNIVERSAL_ROLE) in statement.chain:
                out.append(_error("CHAIN_U", "U may not appear on the left of a role chain"))
            if isinstance(statement, (ForAllInclusion, ExistsInclusion, AtLeastInclusion, AtMostInclusion)):
                if isinstance(statement.role, RoleTerm) == isinstance(statement.filler, DataTerm):
                    out.append(_error("FILLER_SORT", f"{type(statement).__name__}: abstract roles take "
                                                     "concept fillers, concrete roles take data terms"))
                if not isinstance(statement.role, (RoleTerm, ConcreteRoleTerm)):
                    out.append(_error("ROLE_SORT", f"{type(statement).__name__} needs a role"))

            for node in walk(statement):
                if isinstance(node, Constant):
                    if node.datatype not in declared:
                        out.append(_error("UNDECLARED_DATATYPE", f"constant {node} uses undeclared datatype"))
                    elif node not in constants:
                        out.append(_error("UNDECLARED_CONSTANT", f"constant {node} not declared in "
                                                                 f"datatype {node.datatype}"))
                elif isinstance(node, DatatypeRef) and node.name not in declared:
                    out.append(_error("UNDECLARED_DATATYPE", f"datatype {node.name} not declared"))
                elif isinstance(node, FacetExpression):
                    if node.datatype not in declared:
                        out.append(_error("UNDECLARED_DATATYPE", f"datatype {node.datatype} not declared"))
                        continue
                    known = set(facets.get(node.datatype, ())) | {TOP_FACET, BOTTOM_FACET}
                    for f in sorted(node.facets() - known):
                        out.append(_error("UNDECLARED_FACET", f"facet {f} not declared for {node.datatype}"))
                    if not node.clauses or any(not c for c in node.clauses):
                        out.append(_error("FACET_CNF", "facet expression with an empty clause"))
                elif isinstance(node, Nominal) and not node.individuals:
                    out.append(_error("EMPTY_NOMINAL", "nominal sets must be nonempty"))
                elif isinstance(node, DataEnumeration) and not node.constants:
                    out.append(_error("EMPTY_NOMINAL", "data enumerations must be nonempty"))
        return out

    def _check_name_sorts(self, kb: KnowledgeBase) -> List[Diagnostic]:
        sorts = defaultdict(set)
        for statement in kb.statements:
            for node in walk(statement):
                if isinstance(node, ConceptName):
                    sorts[node.name].add("concept")
                elif isinstance(node, RoleName):
                    sorts[node.name].add("abstract role")
                elif isinstance(node, ConcreteRoleName):
                    sorts[node.name].add("concrete role")
        for d in kb.dmap.datatypes:
            sorts[d].add("datatype")
        return [_error("NAME_SORT", f"name {name} used as {' and '.join(sorted(kinds))}")
                for name, kinds in sorted(sorts.items()) if len(kinds) > 1]


def _error(code: str, message: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message)


def validate(kb: KnowledgeBase) -> List[Diagnostic]:
    return KnowledgeBaseValidator().validate(kb)
