# Reasoning pipeline: validate -> flatten -> translate -> expand -> saturate -> normalize -> answer.

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import logging

from error_logger import InputError, log_input_error
from grounder import ExpansionResult, build_expansion
from hocqa_engine import AnswerSet, RawAnswer, answer_set, decode
from kb_model import KnowledgeBase
from ke_tableau import LEXICAL, Tableau, VariableOrder, normalize, saturate
from naming import NamingMap
from normalizer import flatten
from oracle import OracleResult, brute_answer_set, satisfiable_formula
from query_model import DLSubstitution, HOQuery
from resource_guard import BranchBudget, ComplexityReport
from settings import ReasonerSettings
from setcalc import Formula, GroundLiteral
from traced import traced
from translator import build_phi_kb, theta_query
from validators import KnowledgeBaseValidator

logger = logging.getLogger(__name__)


@dataclass
class PreparedKB:
    kb: KnowledgeBase
    flat_kb: KnowledgeBase
    query: Optional[HOQuery]
    phi: Formula
    nm: NamingMap
    templates: Tuple[GroundLiteral, ...]
    expansion: ExpansionResult
    tableau: Tableau
    report: ComplexityReport = field(default_factory=ComplexityReport)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    open_branches: int
    closed_branches: int
    complexity: ComplexityReport
    violations: Dict[str, str] = field(default_factory=dict)

    @property
    def message(self) -> str:
        if self.consistent:
            return f"consistent: {self.open_branches} open branch(es)"
        return f"inconsistent: closed tableau ({self.closed_branches} closed branch(es))"


class ReasoningPipeline:
    def __init__(self, settings: Optional[ReasonerSettings] = None):
        self.settings = settings or ReasonerSettings()
        self.validator = KnowledgeBaseValidator()
        self._cache: Dict[Tuple[KnowledgeBase, Optional[HOQuery], bool], PreparedKB] = {}

    def order(self) -> VariableOrder:
        if self.settings.order == "lexical":
            return LEXICAL
        return VariableOrder.from_file(self.settings.order)

    def _validate(self, kb: KnowledgeBase) -> None:
        result = self.validator.validate_kb(kb)
        for warning in result['warnings']:
            log_input_error(str(warning), {"code": warning.code})
        if not result['valid']:
            first = result['errors'][0]
            raise InputError(result['message'], span=first.span,
                             context={"codes": [d.code for d in result['errors']]})

    def prepare(self, kb: KnowledgeBase, query: Optional[HOQuery] = None, *,
                first_open: bool = False) -> PreparedKB:
        """Run every stage up to normalization; first_open stops saturation at the first open leaf."""
        # an exhaustive tableau serves first-open callers too
        key = (kb, query, first_open)
        cached = self._cache.get((kb, query, False)) or self._cache.get(key)
        if cached is not None:
            return cached

        report = ComplexityReport()
        s = self.settings

        def stage(name: str, t: traced) -> None:
            report.stage_seconds[name] = round(t.elapsed, 6)

        with traced("validate") as t:
            self._validate(kb)
        stage("validate", t)
        with traced("flatten") as t:
            flat_kb, flat_query = flatten(kb, query)
        stage("flatten", t)
        with traced("translate") as t:
            phi, nm = build_phi_kb(flat_kb, flat_query, verbatim_theta=s.verbatim_theta,
                                   close_datatypes=s.close_datatypes)
            templates = theta_query(flat_query, nm) if flat_query is not None else ()
        stage("translate", t)
        with traced("expand") as t:
            expansion = build_expansion(phi)
        stage("expand", t)
        with traced("saturate") as t:
            tableau = saturate(expansion, BranchBudget(s.max_branches), first_open=first_open)
        stage("saturate", t)
        with traced("normalize") as t:
            normalize(tableau, self.order())
        stage("normalize", t)

        report.m, report.k, report.r, report.ell = expansion.m, expansion.k, expansion.r, expansion.ell
        report.disjunctions = expansion.disjunctions
        report.leaves = tableau.leaves
        prepared = PreparedKB(kb, flat_kb, flat_query, phi, nm, templates, expansion, tableau, report)
        self._cache[key] = prepared
        return prepared

    def consistency(self, kb: KnowledgeBase) -> ConsistencyReport:
        prepared = self.prepare(kb, first_open=not self.settings.all_branches)
        tableau = prepared.tableau
        open_count = len(tableau.open_branches())
        logger.info("consistency: %d open of %d leaves", open_count, tableau.leaves)
        return ConsistencyReport(open_count > 0, open_count, tableau.leaves - open_count, prepared.report,
                                 prepared.report.violations())

    def answer(self, kb: KnowledgeBase, query: HOQuery) -> AnswerSet:
        prepared = self.prepare(kb, query)
        with traced("answer") as t:
            result = answer_set(prepared.tableau, prepared.templates, prepared.nm, prepared.query,
                                include_internal=self.settings.include_internal,
                                semantic_eq=self.settings.semantic_eq)
        report = prepared.report
        report.stage_seconds["answer"] = round(t.elapsed, 6)
        report.decision_nodes = result.decision_nodes
        report.s = result.max_matches
        report.h = len(prepared.templates)
        return result

    def oracle_consistency(self, kb: KnowledgeBase) -> OracleResult:
        prepared = self.prepare(kb, first_open=True)
        with traced("oracle"):
            return satisfiable_formula(prepared.phi, self.settings.oracle_atom_bound)

    def oracle_answers(self, kb: KnowledgeBase, query: HOQuery) -> Tuple[DLSubstitution, ...]:
        """Brute-force answer set, decoded the same way as the engine's."""
        prepared = self.prepare(kb, query, first_open=True)
        with traced("oracle"):
            found = brute_answer_set(prepared.phi, prepared.templates,
                                     atom_bound=self.settings.oracle_atom_bound,
                                     candidate_bound=self.settings.oracle_candidate_bound)
        raw: List[RawAnswer] = [RawAnswer("oracle", (), binding, i) for i, binding in enumerate(found)]
        decoded, _, _ = decode(raw, prepared.nm, prepared.query,
                            include_internal=self.settings.include_internal)
        return decoded
