"""Command-line driver: `reason <command> --kb FILE ...`."""

from __future__ import annotations

import json
import logging
import random
import re
import sys
import traceback
from pathlib import Path
from typing import Dict, List, Optional

import click
import pandas as pd

from abox_services import ServiceKind, ServiceRequest, entails, run
from corpus import random_kb, random_query
from error_logger import EXIT_INCONSISTENT, EXIT_INPUT, InputError, ReasonerError, error_logger
from frontend import parse_kb, parse_query, print_kb, print_query
from kb_model import Constant, KnowledgeBase
from logging_setup import configure_logging, critical, enable_trace
from models import ConsistencyRecord, ComplexityRecord, ServiceResultRecord, answer_records
from pipeline import ReasoningPipeline
from query_model import ConceptAtom, HOQuery, RoleAtom
from settings import OutputFormat, ReasonerSettings, load_settings
from translator import render_formula

logger = logging.getLogger(__name__)

_CONSTANT = re.compile(r'^"([^"\n]*)"\^([A-Za-z_$][A-Za-z0-9_$]*)$')


def handle_error(error: Exception, debug: bool) -> None:
    """Report an error on stderr and exit with its status."""
    if debug:
        traceback.print_exc()
    if isinstance(error, ReasonerError):
        error_id = error_logger.log_exception(error)
        click.echo(f"Error [{error_id}]: {error}", err=True)
        sys.exit(error.exit_code)
    if isinstance(error, click.ClickException):
        raise error
    critical("unexpected failure: %s", error)
    click.echo(f"Error: {error}", err=True)
    sys.exit(EXIT_INPUT)


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def _load_kb(path: Path) -> KnowledgeBase:
    return parse_kb(_read(path))


def _load_query(kb: KnowledgeBase, path: Optional[Path], text: Optional[str]) -> HOQuery:
    if (path is None) == (text is None):
        raise click.UsageError("give exactly one of --query FILE or --q TEXT")
    return parse_query(_read(path) if path is not None else text, kb)


def _concept(text: str, kb: KnowledgeBase):
    atom = parse_query(f"[{text}](?term)", kb).literals[0].atom
    assert isinstance(atom, ConceptAtom)
    return atom.concept


def _role(text: str, kb: KnowledgeBase, second: str = "?term_o"):
    atom = parse_query(f"[{text}](?term_s, {second})", kb).literals[0].atom
    assert isinstance(atom, RoleAtom)
    return atom.role


def _argument(text: str):
    match = _CONSTANT.match(text.strip())
    if match:
        return Constant(match.group(1), match.group(2))
    return text.strip()


def _emit(records: List[Dict[str, object]], fmt: OutputFormat) -> None:
    if fmt is OutputFormat.TABLE:
        if not records:
            click.echo("(no answers)")
            return
        frame = pd.DataFrame(records)
        frame = frame[sorted(frame.columns)]
        click.echo(frame.to_string(index=False))
        return
    for record in records:
        click.echo(json.dumps(record, sort_keys=True, ensure_ascii=False))


def _pipeline(ctx: click.Context) -> ReasoningPipeline:
    return ctx.obj['pipeline']


def _settings(ctx: click.Context) -> ReasonerSettings:
    return ctx.obj['pipeline'].settings


@click.group()
@click.option('--log-level', default=None, help='Logging level (default WARNING)')
@click.option('--format', 'output_format', type=click.Choice(['jsonl', 'table']), default=None,
              help='Result format')
@click.option('--max-branches', type=int, default=None, help='Tableau branch budget')
@click.option('--order', default=None, help='"lexical" or a file ranking variable names for <_θ')
@click.option('--include-internal', is_flag=True, default=None, help='Decode to internal names too')
@click.option('--semantic-eq', is_flag=True, default=None, help='Evaluate equality atoms in branch models')
@click.option('--verbatim-theta', is_flag=True, default=None, help='Unguarded complement clauses')
@click.option('--all-branches', is_flag=True, default=None,
              help='Saturate every branch when deciding consistency')
@click.option('--trace', is_flag=True, help='Print tableau rule applications on stderr')
@click.option('--debug', is_flag=True, help='Show full tracebacks')
@click.pass_context
def cli(ctx: click.Context, log_level, output_format, max_branches, order, include_internal,
        semantic_eq, verbatim_theta, all_branches, trace, debug):
    """HOCQA reasoner for description-logic knowledge bases."""
    ctx.ensure_object(dict)
    ctx.obj['debug'] = debug
    try:
        settings = load_settings(log_level=log_level, output_format=output_format,
                                 max_branches=max_branches, order=order,
                                 include_internal=include_internal, semantic_eq=semantic_eq,
                                 verbatim_theta=verbatim_theta, all_branches=all_branches)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e
    configure_logging(settings.log_level)
    if trace:
        enable_trace()
    ctx.obj['pipeline'] = ReasoningPipeline(settings)


kb_option = click.option('--kb', 'kb_path', required=True, type=click.Path(exists=True, path_type=Path),
                         help='Knowledge base (.dl4)')


@cli.command()
@kb_option
@click.option('--emit-4lqs', is_flag=True, help='Print the translated formula first')
@click.option('--emit-expansion', is_flag=True, help='Print the ground expansion first')
@click.pass_context
def consistency(ctx: click.Context, kb_path: Path, emit_4lqs: bool, emit_expansion: bool):
    """Decide whether the KB has a model."""
    try:
        pipeline = _pipeline(ctx)
        kb = _load_kb(kb_path)
        prepared = pipeline.prepare(kb, first_open=not pipeline.settings.all_branches)
        if emit_4lqs:
            click.echo(render_formula(prepared.phi))
        if emit_expansion:
            click.echo(prepared.expansion.render())
        report = pipeline.consistency(kb)
        c = report.complexity
        record = ConsistencyRecord(
            consistent=report.consistent, open_branches=report.open_branches,
            closed_branches=report.closed_branches, message=report.message,
            complexity=ComplexityRecord(m=c.m, k=c.k, r=c.r, ell=c.ell, disjunctions=c.disjunctions,
                                        disjunction_bound=c.disjunction_bound, leaves=c.leaves,
                                        branch_bound_log2=c.branch_bound_log2,
                                        stage_seconds=dict(c.stage_seconds)))
    except Exception as e:
        handle_error(e, ctx.obj['debug'])
        return
    _emit([record.model_dump(mode="json", exclude={"complexity": {"stage_seconds"}})], _settings(ctx).output_format)
    if not report.consistent:
        click.echo("closed tableau", err=True)
        sys.exit(EXIT_INCONSISTENT)


@cli.command()
@kb_option
@click.option('--query', 'query_path', type=click.Path(exists=True, path_type=Path), help='Query file (.hq)')
@click.option('--q', 'query_text', help='Inline query text')
@click.option('--explain', is_flag=True, help='Show equality classes and the branch and leaf of every answer')
@click.option('--emit-4lqs', is_flag=True, help='Print the translated formula and query first')
@click.option('--emit-expansion', is_flag=True, help='Print the ground expansion first')
@click.pass_context
def query(ctx: click.Context, kb_path: Path, query_path: Optional[Path], query_text: Optional[str],
          explain: bool, emit_4lqs: bool, emit_expansion: bool):
    """Compute the HO answer set of a query."""
    try:
        pipeline = _pipeline(ctx)
        kb = _load_kb(kb_path)
        q = _load_query(kb, query_path, query_text)
        if emit_4lqs or emit_expansion:
            prepared = pipeline.prepare(kb, q)
            if emit_4lqs:
                click.echo(render_formula(prepared.phi))
                click.echo("# query: " + " & ".join(t.render() for t in prepared.templates))
            if emit_expansion:
                click.echo(prepared.expansion.render())
        result = pipeline.answer(kb, q)
    except Exception as e:
        handle_error(e, ctx.obj['debug'])
        return
    if not result.consistent:
        click.echo("KB inconsistent: closed tableau", err=True)
        sys.exit(EXIT_INCONSISTENT)
    classes = [{name: list(members) for name, members in c} for _, c in result.classes] if explain else None
    provenance = list(result.provenance) if explain else None
    records = [r.flat() for r in answer_records(result.records(), classes, provenance)]
    _emit(records, _settings(ctx).output_format)


def _service(ctx: click.Context, build) -> None:
    try:
        pipeline = _pipeline(ctx)
        kb, request = build()
        result = run(request, kb, pipeline)
    except Exception as e:
        handle_error(e, ctx.obj['debug'])
        return
    if not result.consistent:
        click.echo(result.message, err=True)
        sys.exit(EXIT_INCONSISTENT)
    if request.kind is ServiceKind.INSTANCE_CHECK:
        click.echo("true" if result.holds else "false")
        return
    records = [{v.name: (e.name if hasattr(e, "name") else str(e)) for v, e in s.pairs} for s in result.answers]
    _emit(records, _settings(ctx).output_format)


@cli.command()
@kb_option
@click.option('--ind', required=True, help='Individual name')
@click.option('--concept', required=True, help='Concept term')
@click.pass_context
def check(ctx: click.Context, kb_path: Path, ind: str, concept: str):
    """Instance check, possibility reading: some model has the individual in the concept."""
    def build():
        kb = _load_kb(kb_path)
        return kb, ServiceRequest(kind=ServiceKind.INSTANCE_CHECK, individual=ind, concept=_concept(concept, kb))
    _service(ctx, build)


@cli.command(name='entails')
@kb_option
@click.option('--ind', required=True, help='Individual name')
@click.option('--concept', required=True, help='Concept term')
@click.pass_context
def entails_command(ctx: click.Context, kb_path: Path, ind: str, concept: str):
    """Instance check, classical reading: every model has the individual in the concept."""
    try:
        kb = _load_kb(kb_path)
        request = ServiceRequest(kind=ServiceKind.INSTANCE_CHECK, individual=ind, concept=_concept(concept, kb))
        verdict = entails(request, kb, _pipeline(ctx))
    except Exception as e:
        handle_error(e, ctx.obj['debug'])
        return
    click.echo("true" if verdict else "false")


@cli.command(name='retrieve-instances')
@kb_option
@click.option('--concept', required=True, help='Concept term')
@click.pass_context
def retrieve_instances(ctx: click.Context, kb_path: Path, concept: str):
    """Individuals that may belong to a concept."""
    def build():
        kb = _load_kb(kb_path)
        return kb, ServiceRequest(kind=ServiceKind.INSTANCE_RETRIEVAL, concept=_concept(concept, kb))
    _service(ctx, build)


@cli.command(name='retrieve-fillers')
@kb_option
@click.option('--ind', required=True, help='Individual name')
@click.option('--role', required=True, help='Role or concrete role term')
@click.pass_context
def retrieve_fillers(ctx: click.Context, kb_path: Path, ind: str, role: str):
    """Role fillers of an individual."""
    def build():
        kb = _load_kb(kb_path)
        return kb, ServiceRequest(kind=ServiceKind.ROLE_FILLER_RETRIEVAL, individual=ind, role=_role(role, kb))
    _service(ctx, build)


@cli.command(name='retrieve-concepts')
@kb_option
@click.option('--ind', required=True, help='Individual name')
@click.pass_context
def retrieve_concepts(ctx: click.Context, kb_path: Path, ind: str):
    """Concept names an individual may belong to."""
    def build():
        return _load_kb(kb_path), ServiceRequest(kind=ServiceKind.CONCEPT_RETRIEVAL, individual=ind)
    _service(ctx, build)


@cli.command(name='retrieve-roles')
@kb_option
@click.option('--ind', required=True, help='First individual')
@click.option('--other', required=True, help='Second individual or a constant "v"^d')
@click.pass_context
def retrieve_roles(ctx: click.Context, kb_path: Path, ind: str, other: str):
    """Role names that may relate two individuals (or an individual and a value)."""
    def build():
        return _load_kb(kb_path), ServiceRequest(kind=ServiceKind.ROLE_INSTANCE_RETRIEVAL,
                                                 individual=ind, second=_argument(other))
    _service(ctx, build)


@cli.command()
@kb_option
@click.option('--query', 'query_path', type=click.Path(exists=True, path_type=Path), help='Query file (.hq)')
@click.option('--q', 'query_text', help='Inline query text')
@click.option('--atom-bound', type=int, default=None, help='Largest atom universe to search')
@click.option('--compare', is_flag=True, help='Also run the tableau and report disagreement')
@click.pass_context
def oracle(ctx: click.Context, kb_path: Path, query_path: Optional[Path], query_text: Optional[str],
           atom_bound: Optional[int], compare: bool):
    """Brute-force cross-check: satisfiability, or the answer set with a query."""
    try:
        pipeline = _pipeline(ctx)
        if atom_bound is not None:
            pipeline.settings.oracle_atom_bound = atom_bound
        kb = _load_kb(kb_path)
        if query_path is None and query_text is None:
            verdict = pipeline.oracle_consistency(kb)
            record = ServiceResultRecord(service="oracle", consistent=verdict.sat,
                                         message="satisfiable" if verdict.sat else "unsatisfiable")
            if compare:
                tableau = pipeline.consistency(kb)
                record.holds = tableau.consistent == verdict.sat
            _emit([record.model_dump(mode="json", exclude_none=True)], _settings(ctx).output_format)
            if not verdict.sat:
                sys.exit(EXIT_INCONSISTENT)
            return
        q = _load_query(kb, query_path, query_text)
        answers = pipeline.oracle_answers(kb, q)
        records = [{v.name: (e.name if hasattr(e, "name") else str(e)) for v, e in s.pairs} for s in answers]
        if compare:
            engine = pipeline.answer(kb, q)
            missing = set(engine.decoded) - set(answers)
            extra = set(answers) - set(engine.decoded)
            click.echo(f"# engine={len(engine)} oracle={len(answers)} "
                       f"engine-only={len(missing)} oracle-only={len(extra)}", err=True)
    except Exception as e:
        handle_error(e, ctx.obj['debug'])
        return
    _emit(records, _settings(ctx).output_format)


@cli.command()
@click.option('--seed', type=int, required=True, help='Random seed')
@click.option('--with-query', is_flag=True, help='Append a random query as a comment line')
def generate(seed: int, with_query: bool):
    """Print a random corpus KB in the DSL."""
    rng = random.Random(seed)
    kb = random_kb(rng)
    click.echo(print_kb(kb), nl=False)
    if with_query:
        click.echo("# query: " + print_query(random_query(rng, kb)))


if __name__ == '__main__':
    cli()
