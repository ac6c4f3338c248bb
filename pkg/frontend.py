"""
Parser and printer for the knowledge-base and query DSL.

Terms are parsed untyped; a sort-inference pass then decides for every name
whether it denotes a concept, an abstract role, a concrete role or a data
term (declarations, datatype blocks, statement shapes and role/filler pairs
all constrain it) before typed kb_model nodes are built.

Reserved words: Thing Nothing Self exists forall atleast atmost inv id prod
dom ran restr top bot facets chain Sym Asym Ref Irref Tra Fun Dis concept
role concrete data individual datatype constants.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Set, Tuple

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from error_logger import InputError, SourceSpan
from kb_model import (
    BOTTOM_FACET,
    TOP_FACET,
    UNIVERSAL_ROLE,
    AtLeastInclusion,
    AtMostInclusion,
    Bottom,
    ConceptAnd,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    ConceptName,
    ConceptNot,
    ConceptOr,
    ConcreteAnd,
    ConcreteDomainRestriction,
    ConcreteFunctional,
    ConcreteNot,
    ConcreteOr,
    ConcreteRangeRestriction,
    ConcreteRestriction,
    ConcreteRoleAssertion,
    ConcreteRoleDisjointness,
    ConcreteRoleEquivalence,
    ConcreteRoleInclusion,
    ConcreteRoleName,
    Constant,
    DataAnd,
    DataAssertion,
    DataEnumeration,
    DataHasValue,
    DataNot,
    DataOr,
    DataTermEquivalence,
    DataTermInclusion,
    DataTermName,
    DatatypeMap,
    DatatypeRef,
    DatatypeSpec,
    DomainRestriction,
    EqualityAssertion,
    ExistsInclusion,
    FacetExpression,
    FacetLiteral,
    ForAllInclusion,
    HasValue,
    Identity,
    Inverse,
    KnowledgeBase,
    Nominal,
    Product,
    RangeRestriction,
    Restriction,
    RoleAnd,
    RoleAssertion,
    RoleChain,
    RoleCharacteristic,
    RoleDisjointness,
    RoleEquivalence,
    RoleInclusion,
    RoleName,
    RoleNot,
    RoleOr,
    RoleProperty,
    SelfRestriction,
    Statement,
    Top,
    signature,
)
from query_model import (
    ConceptAtom,
    EqualityAtom,
    HOLiteral,
    HOQuery,
    QueryVariable,
    RoleAtom,
    VariableSort,
    check_positions,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
kb: (_statement _SEMI*)*
query: [qliteral ("&" qliteral)*]

_statement: declaration | datatype_block | member | same | differ
           | inclusion | equivalence | chain | property | disjoint

declaration: "concept" _names   -> decl_concept
           | "role" _names      -> decl_role
           | "concrete" _names  -> decl_concrete
           | "data" _names      -> decl_data
           | "individual" _names -> decl_individual
_names: NAME ("," NAME)*

datatype_block: "datatype" NAME "{" (dt_constants | dt_facets)* "}"
dt_constants: "constants" ":" [STRING ("," STRING)*] _SEMI
dt_facets: "facets" ":" facet_def ("," facet_def)* _SEMI
facet_def: NAME "=" "{" [STRING ("," STRING)*] "}"

member: NAME ":" term                               -> member_individual
      | constant ":" term                           -> member_constant
      | "(" NAME "," NAME ")" ":" term              -> member_pair
      | "(" NAME "," constant ")" ":" term          -> member_data_pair
same: NAME "=" NAME
differ: NAME "!=" NAME
inclusion: term "<=" term
equivalence: term "==" term
chain: "chain" "(" term ("," term)+ ")" "<=" term
property: prop_kind "(" term ")"
!prop_kind: "Sym" | "Asym" | "Ref" | "Irref" | "Tra" | "Fun"
disjoint: "Dis" "(" term "," term ")"

constant: STRING "^" NAME

?term: and_term | term "|" and_term              -> t_or
?and_term: not_term | and_term "&" not_term      -> t_and
?not_term: primary | "~" not_term                -> t_not
?primary: NAME                                   -> t_name
        | "Thing"                                -> t_top
        | "Nothing"                              -> t_bottom
        | "{" [set_item ("," set_item)*] "}"     -> t_set
        | "exists" primary "." "Self"            -> t_self
        | "exists" primary "." primary           -> t_exists
        | "forall" primary "." primary           -> t_forall
        | "atleast" "(" INT "," term "," term ")" -> t_atleast
        | "atmost" "(" INT "," term "," term ")"  -> t_atmost
        | "inv" "(" term ")"                     -> t_inv
        | "id" "(" term ")"                      -> t_id
        | "prod" "(" term "," term ")"           -> t_prod
        | "dom" "(" term "," term ")"            -> t_dom
        | "ran" "(" term "," term ")"            -> t_ran
        | "restr" "(" term "," term "," term ")" -> t_restr
        | "top" "(" NAME ")"                     -> t_dtop
        | "bot" "(" NAME ")"                     -> t_dbot
        | "facets" "(" NAME ":" fexpr ")"        -> t_facets
        | "(" term ")"
?set_item: NAME | constant
fexpr: fclause ("&" fclause)*
fclause: fliteral | "(" fliteral ("|" fliteral)* ")"
fliteral: NAME        -> f_pos
        | "~" NAME    -> f_neg
        | "top"       -> f_top
        | "bot"       -> f_bot

?qliteral: qatom | "!" qatom                     -> q_not
?qatom: pred "(" qarg ")"                        -> q_unary
      | pred "(" qarg "," qarg ")"               -> q_binary
      | qarg "=" qarg                            -> q_eq
      | qarg "!=" qarg                           -> q_neq
pred: NAME | QVAR | "[" term "]"
qarg: NAME | QVAR | constant

QVAR: /\?[A-Za-z_][A-Za-z0-9_]*/
NAME: /[A-Za-z_$][A-Za-z0-9_$]*/
STRING: /"[^"\n]*"/
COMMENT: /#[^\n]*/
_SEMI: ";"
%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, start=["kb", "query"], parser="earley", lexer="basic",
               propagate_positions=True, maybe_placeholders=False)

CONCEPT, DATA, ROLE, CONCRETE = "concept", "data", "abstract role", "concrete role"
ALL_SORTS = frozenset({CONCEPT, DATA, ROLE, CONCRETE})
ROLE_SORTS = frozenset({ROLE, CONCRETE})
DEFAULT_ORDER = (CONCEPT, ROLE, DATA, CONCRETE)


def _span(node) -> Optional[SourceSpan]:
    if isinstance(node, Token):
        return SourceSpan(node.line, node.column, node.end_line, node.end_column)
    meta = getattr(node, "meta", None)
    if meta is None or getattr(meta, "empty", True):
        return None
    return SourceSpan(meta.line, meta.column, meta.end_line, meta.end_column)


def _terminal_text(name: str) -> str:
    try:
        pattern = _parser.get_terminal(name).pattern
        return repr(pattern.value) if pattern.type == "str" else name
    except KeyError:
        return name


def _syntax_error(e: UnexpectedInput) -> InputError:
    expected = getattr(e, "expected", None) or getattr(e, "allowed", None) or ()
    token = getattr(e, "token", None)
    if token is not None and getattr(token, "type", "") == "$END":
        what = "unexpected end of input"
    elif token is not None:
        what = f"unexpected {str(token)!r}"
    else:
        char = getattr(e, "char", None)
        what = f"unexpected character {char!r}" if char else "syntax error"
    span = SourceSpan(getattr(e, "line", 0) or 0, getattr(e, "column", 0) or 0)
    return InputError(what, span=span, expected=[_terminal_text(t) for t in expected])


# ---------------------------------------------------------------- untyped terms

class Raw:
    """Untyped term node; `slot` is its sort-inference variable."""
    __slots__ = ("kind", "args", "value", "span", "slot")

    def __init__(self, kind: str, args: Iterable["Raw"] = (), value=None, span=None):
        self.kind = kind
        self.args = list(args)
        self.value = value
        self.span = span
        self.slot: Optional[int] = None


def _constant(tree: Tree) -> Constant:
    string, name = tree.children
    return Constant(str(string)[1:-1], str(name))


def _raw(node) -> Raw:
    if isinstance(node, Token):
        return Raw("name", value=str(node), span=_span(node))
    kind = node.data if isinstance(node.data, str) else node.data.value
    span = _span(node)
    kids = node.children
    if kind == "constant":
        return Raw("const", value=_constant(node), span=span)
    if kind == "t_name":
        return Raw("name", value=str(kids[0]), span=span)
    if kind in ("t_top", "t_bottom"):
        return Raw(kind[2:], span=span)
    if kind == "t_set":
        return Raw("set", [_raw(k) for k in kids], span=span)
    if kind in ("t_atleast", "t_atmost"):
        return Raw(kind[2:], [_raw(kids[1]), _raw(kids[2])], value=int(kids[0]), span=span)
    if kind in ("t_dtop", "t_dbot"):
        return Raw(kind[2:], value=str(kids[0]), span=span)
    if kind == "t_facets":
        return Raw("facets", value=(str(kids[0]), _fexpr(kids[1])), span=span)
    if kind.startswith("t_"):
        return Raw(kind[2:], [_raw(k) for k in kids], span=span)
    raise InputError(f"unexpected construct {kind}", span=span)


def _fexpr(tree: Tree) -> Tuple[Tuple[FacetLiteral, ...], ...]:
    clauses = []
    for clause in tree.children:
        lits = []
        for lit in clause.children:
            kind = lit.data if isinstance(lit.data, str) else lit.data.value
            if kind == "f_pos":
                lits.append(FacetLiteral(str(lit.children[0])))
            elif kind == "f_neg":
                lits.append(FacetLiteral(str(lit.children[0]), False))
            elif kind == "f_top":
                lits.append(FacetLiteral(TOP_FACET))
            else:
                lits.append(FacetLiteral(BOTTOM_FACET))
        clauses.append(tuple(lits))
    return tuple(clauses)


# ---------------------------------------------------------------- sort inference

class SortInference:
    def __init__(self, datatypes: Iterable[str] = ()):
        self.parent: List[int] = []
        self.allowed: Dict[int, frozenset] = {}
        self.names: Dict[str, int] = {}
        self.links: List[Tuple[int, int, Optional[SourceSpan]]] = []
        self.datatypes = set(datatypes)

    def new(self, allowed=ALL_SORTS) -> int:
        slot = len(self.parent)
        self.parent.append(slot)
        self.allowed[slot] = frozenset(allowed)
        return slot

    def find(self, s: int) -> int:
        while self.parent[s] != s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def restrict(self, s: int, allowed, span=None, what: str = "") -> None:
        root = self.find(s)
        narrowed = self.allowed[root] & frozenset(allowed)
        if not narrowed:
            raise InputError(f"sort clash{': ' + what if what else ''} "
                             f"(can be {', '.join(sorted(self.allowed[root]))}; "
                             f"needs {', '.join(sorted(allowed))})", span=span)
        self.allowed[root] = narrowed

    def unify(self, a: int, b: int, span=None) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        self.restrict(ra, self.allowed[rb], span, "both sides must have the same sort")
        self.parent[rb] = ra
        return ra

    def name(self, name: str) -> int:
        if name not in self.names:
            slot = self.new()
            self.names[name] = slot
            if name == UNIVERSAL_ROLE:
                self.allowed[slot] = frozenset({ROLE})
            elif name in self.datatypes:
                self.allowed[slot] = frozenset({DATA})
        return self.names[name]

    def link(self, role: int, filler: int, span=None) -> None:
        self.restrict(role, ROLE_SORTS, span, "expected a role")
        self.links.append((role, filler, span))

    def sort_of(self, s: int) -> str:
        allowed = self.allowed[self.find(s)]
        if len(allowed) != 1:
            raise InputError(f"ambiguous sort {sorted(allowed)}")
        return next(iter(allowed))

    def _propagate(self) -> None:
        changed = True
        while changed:
            changed = False
            for role, filler, span in self.links:
                before = (self.allowed[self.find(role)], self.allowed[self.find(filler)])
                r = self.allowed[self.find(role)]
                f = self.allowed[self.find(filler)]
                if r == {ROLE}:
                    self.restrict(filler, {CONCEPT}, span, "abstract roles take concept fillers")
                elif r == {CONCRETE}:
                    self.restrict(filler, {DATA}, span, "concrete roles take data fillers")
                if f <= {CONCEPT}:
                    self.restrict(role, {ROLE}, span, "concept fillers need an abstract role")
                elif f <= {DATA}:
                    self.restrict(role, {CONCRETE}, span, "data fillers need a concrete role")
                elif not (f & {CONCEPT, DATA}):
                    self.restrict(filler, {CONCEPT, DATA}, span, "fillers are concepts or data terms")
                after = (self.allowed[self.find(role)], self.allowed[self.find(filler)])
                changed |= before != after

    def solve(self) -> None:
        self._propagate()
        for s in range(len(self.parent)):
            root = self.find(s)
            if len(self.allowed[root]) > 1:
                choice = next(x for x in DEFAULT_ORDER if x in self.allowed[root])
                self.allowed[root] = frozenset({choice})
                self._propagate()

    # constraint generation over untyped terms
    def constrain(self, t: Raw) -> int:
        k = t.kind
        if k == "name":
            t.slot = self.name(t.value)
        elif k in ("top", "bottom"):
            t.slot = self.new({CONCEPT})
        elif k == "set":
            if not t.args:
                raise InputError("empty set", span=t.span)
            consts = [a.kind == "const" for a in t.args]
            if all(consts):
                t.slot = self.new({DATA})
            elif not any(consts):
                t.slot = self.new({CONCEPT})
            else:
                raise InputError("a set mixes individuals and constants", span=t.span)
        elif k == "not":
            t.slot = self.constrain(t.args[0])
        elif k in ("and", "or"):
            t.slot = self.unify(self.constrain(t.args[0]), self.constrain(t.args[1]), t.span)
        elif k == "self":
            self.restrict(self.constrain(t.args[0]), {ROLE}, t.span, "Self needs an abstract role")
            t.slot = self.new({CONCEPT})
        elif k in ("exists", "forall", "atleast", "atmost"):
            self.link(self.constrain(t.args[0]), self.constrain(t.args[1]), t.span)
            t.slot = self.new({CONCEPT})
        elif k == "inv":
            self.restrict(self.constrain(t.args[0]), {ROLE}, t.span, "inv needs an abstract role")
            t.slot = self.new({ROLE})
        elif k == "id":
            self.restrict(self.constrain(t.args[0]), {CONCEPT}, t.span, "id needs a concept")
            t.slot = self.new({ROLE})
        elif k == "prod":
            for a in t.args:
                self.restrict(self.constrain(a), {CONCEPT}, t.span, "prod needs concepts")
            t.slot = self.new({ROLE})
        elif k == "dom":
            t.slot = self.constrain(t.args[0])
            self.restrict(t.slot, ROLE_SORTS, t.span, "dom needs a role")
            self.restrict(self.constrain(t.args[1]), {CONCEPT}, t.span, "dom needs a concept")
        elif k == "ran":
            t.slot = self.constrain(t.args[0])
            self.link(t.slot, self.constrain(t.args[1]), t.span)
        elif k == "restr":
            t.slot = self.constrain(t.args[0])
            self.restrict(self.constrain(t.args[1]), {CONCEPT}, t.span, "restr needs a concept domain")
            self.link(t.slot, self.constrain(t.args[2]), t.span)
        elif k in ("dtop", "dbot", "facets"):
            d = t.value if k != "facets" else t.value[0]
            if d not in self.datatypes:
                raise InputError(f"datatype {d} is not declared", span=t.span)
            t.slot = self.new({DATA})
        else:
            raise InputError(f"{k} is not a term", span=t.span)
        return t.slot


# ---------------------------------------------------------------- typed terms

_QUANTIFIERS = ("exists", "forall", "atleast", "atmost")


class TermBuilder:
    def __init__(self, sorts: SortInference):
        self.sorts = sorts

    def sort(self, t: Raw) -> str:
        return self.sorts.sort_of(t.slot)

    def term(self, t: Raw):
        sort = self.sort(t)
        k, args = t.kind, t.args
        b = self.term
        if k in _QUANTIFIERS:
            filler = args[1] if len(args) > 1 else None
            if k == "exists" and filler is not None and filler.kind == "set" and len(filler.args) == 1:
                item = filler.args[0]
                if item.kind == "const":
                    return DataHasValue(b(args[0]), item.value)
                return HasValue(b(args[0]), item.value)
            side = "left" if k in ("exists", "atleast") else "right"
            raise InputError(f"{k} is only allowed as the whole {side} side of <=", span=t.span)
        if k == "name":
            return {CONCEPT: ConceptName, ROLE: RoleName, CONCRETE: ConcreteRoleName,
                    DATA: DatatypeRef if t.value in self.sorts.datatypes else DataTermName}[sort](t.value)
        if k == "top":
            return Top()
        if k == "bottom":
            return Bottom()
        if k == "set":
            if sort == CONCEPT:
                return Nominal(tuple(a.value for a in args))
            return DataEnumeration(tuple(a.value for a in args))
        if k == "not":
            return {CONCEPT: ConceptNot, ROLE: RoleNot, CONCRETE: ConcreteNot, DATA: DataNot}[sort](b(args[0]))
        if k == "and":
            return {CONCEPT: ConceptAnd, ROLE: RoleAnd, CONCRETE: ConcreteAnd, DATA: DataAnd}[sort](
                b(args[0]), b(args[1]))
        if k == "or":
            return {CONCEPT: ConceptOr, ROLE: RoleOr, CONCRETE: ConcreteOr, DATA: DataOr}[sort](
                b(args[0]), b(args[1]))
        if k == "self":
            return SelfRestriction(b(args[0]))
        if k == "inv":
            return Inverse(b(args[0]))
        if k == "id":
            return Identity(b(args[0]))
        if k == "prod":
            return Product(b(args[0]), b(args[1]))
        if k == "dom":
            cls = DomainRestriction if sort == ROLE else ConcreteDomainRestriction
            return cls(b(args[0]), b(args[1]))
        if k == "ran":
            cls = RangeRestriction if sort == ROLE else ConcreteRangeRestriction
            return cls(b(args[0]), b(args[1]))
        if k == "restr":
            cls = Restriction if sort == ROLE else ConcreteRestriction
            return cls(b(args[0]), b(args[1]), b(args[2]))
        if k == "dtop":
            return FacetExpression(t.value, ((FacetLiteral(TOP_FACET),),))
        if k == "dbot":
            return FacetExpression(t.value, ((FacetLiteral(BOTTOM_FACET),),))
        if k == "facets":
            d, clauses = t.value
            return FacetExpression(d, clauses)
        raise InputError(f"{k} is not a term", span=t.span)


# ---------------------------------------------------------------- knowledge bases

def _kind(tree: Tree) -> str:
    return tree.data if isinstance(tree.data, str) else tree.data.value


def _datatype_map(blocks: List[Tree]) -> DatatypeMap:
    specs = []
    seen = set()
    for block in blocks:
        name = str(block.children[0])
        if name in seen:
            raise InputError(f"datatype {name} declared twice", span=_span(block))
        seen.add(name)
        constants: List[str] = []
        facets: List[Tuple[str, Tuple[str, ...]]] = []
        for item in block.children[1:]:
            if _kind(item) == "dt_constants":
                constants += [str(s)[1:-1] for s in item.children]
            else:
                for fdef in item.children:
                    facets.append((str(fdef.children[0]), tuple(str(s)[1:-1] for s in fdef.children[1:])))
        specs.append(DatatypeSpec(name, tuple(constants), tuple(facets)))
    return DatatypeMap(tuple(specs))


_DECLARED = {"decl_concept": {CONCEPT}, "decl_role": {ROLE}, "decl_concrete": {CONCRETE}, "decl_data": {DATA}}


def parse_kb(text: str) -> KnowledgeBase:
    try:
        tree = _parser.parse(text, start="kb")
    except UnexpectedInput as e:
        raise _syntax_error(e) from None

    statements = list(tree.children)
    dmap = _datatype_map([s for s in statements if _kind(s) == "datatype_block"])
    sorts = SortInference(dmap.datatypes)
    pending = []

    for s in statements:
        kind = _kind(s)
        span = _span(s)
        kids = s.children
        if kind in _DECLARED:
            for name in kids:
                sorts.restrict(sorts.name(str(name)), _DECLARED[kind], _span(name), f"declared name {name}")
        elif kind in ("decl_individual", "datatype_block"):
            continue
        elif kind == "member_individual":
            t = _raw(kids[1])
            sorts.restrict(sorts.constrain(t), {CONCEPT}, span, "individuals belong to concepts")
            pending.append((kind, span, (str(kids[0]), t)))
        elif kind == "member_constant":
            t = _raw(kids[1])
            sorts.restrict(sorts.constrain(t), {DATA}, span, "constants belong to data terms")
            pending.append((kind, span, (_constant(kids[0]), t)))
        elif kind == "member_pair":
            t = _raw(kids[2])
            sorts.restrict(sorts.constrain(t), {ROLE}, span, "pairs of individuals belong to abstract roles")
            pending.append((kind, span, (str(kids[0]), str(kids[1]), t)))
        elif kind == "member_data_pair":
            t = _raw(kids[2])
            sorts.restrict(sorts.constrain(t), {CONCRETE}, span, "individual/constant pairs belong to concrete roles")
            pending.append((kind, span, (str(kids[0]), _constant(kids[1]), t)))
        elif kind in ("same", "differ"):
            pending.append((kind, span, (str(kids[0]), str(kids[1]))))
        elif kind in ("inclusion", "equivalence"):
            left, right = _raw(kids[0]), _raw(kids[1])
            ls, rs = sorts.constrain(left), sorts.constrain(right)
            if kind == "equivalence" or not (left.kind in _QUANTIFIERS or right.kind in _QUANTIFIERS):
                sorts.unify(ls, rs, span)
            else:
                sorts.restrict(ls, {CONCEPT}, span)
                sorts.restrict(rs, {CONCEPT}, span)
            pending.append((kind, span, (left, right)))
        elif kind == "chain":
            terms = [_raw(k) for k in kids]
            for t in terms:
                sorts.restrict(sorts.constrain(t), {ROLE}, span, "role chains use abstract roles")
            pending.append((kind, span, terms))
        elif kind == "property":
            label = str(kids[0].children[0])
            t = _raw(kids[1])
            allowed = ROLE_SORTS if label == "Fun" else {ROLE}
            sorts.restrict(sorts.constrain(t), allowed, span, f"{label} needs a role")
            pending.append((kind, span, (label, t)))
        elif kind == "disjoint":
            left, right = _raw(kids[0]), _raw(kids[1])
            slot = sorts.unify(sorts.constrain(left), sorts.constrain(right), span)
            sorts.restrict(slot, ROLE_SORTS, span, "Dis needs roles")
            pending.append((kind, span, (left, right)))
        else:
            raise InputError(f"unknown statement {kind}", span=span)

    sorts.solve()
    builder = TermBuilder(sorts)
    out: List[Statement] = [_statement(builder, kind, span, payload) for kind, span, payload in pending]
    logger.debug("parsed %d statement(s), %d datatype(s)", len(out), len(dmap.specs))
    return KnowledgeBase.of(*out, dmap=dmap)


def _statement(b: TermBuilder, kind: str, span, payload) -> Statement:
    t = b.term
    if kind == "member_individual":
        a, term = payload
        return ConceptAssertion(a, t(term))
    if kind == "member_constant":
        c, term = payload
        return DataAssertion(c, t(term))
    if kind in ("member_pair", "member_data_pair"):
        a, other, term = payload
        negated = term.kind == "not"
        role = t(term.args[0]) if negated else t(term)
        if kind == "member_pair":
            return RoleAssertion(a, other, role, negated)
        return ConcreteRoleAssertion(a, other, role, negated)
    if kind == "same":
        return EqualityAssertion(*payload)
    if kind == "differ":
        return EqualityAssertion(*payload, negated=True)
    if kind == "chain":
        *chain, sup = payload
        return RoleChain(tuple(t(r) for r in chain), t(sup))
    if kind == "property":
        label, role = payload
        typed = t(role)
        if label == "Fun" and b.sort(role) == CONCRETE:
            return ConcreteFunctional(typed)
        return RoleProperty(RoleCharacteristic(label), typed)
    if kind == "disjoint":
        left, right = payload
        cls = RoleDisjointness if b.sort(left) == ROLE else ConcreteRoleDisjointness
        return cls(t(left), t(right))

    left, right = payload
    if kind == "inclusion":
        if left.kind == "exists" and not _is_value(left):
            return ExistsInclusion(t(left.args[0]), t(left.args[1]), t(right))
        if left.kind == "atleast":
            return AtLeastInclusion(left.value, t(left.args[0]), t(left.args[1]), t(right))
        if right.kind == "forall":
            return ForAllInclusion(t(left), t(right.args[0]), t(right.args[1]))
        if right.kind == "atmost":
            return AtMostInclusion(t(left), right.value, t(right.args[0]), t(right.args[1]))
        cls = {CONCEPT: ConceptInclusion, ROLE: RoleInclusion, CONCRETE: ConcreteRoleInclusion,
               DATA: DataTermInclusion}[b.sort(left)]
        return cls(t(left), t(right))
    cls = {CONCEPT: ConceptEquivalence, ROLE: RoleEquivalence, CONCRETE: ConcreteRoleEquivalence,
           DATA: DataTermEquivalence}[b.sort(left)]
    return cls(t(left), t(right))


def _is_value(t: Raw) -> bool:
    filler = t.args[1]
    return filler.kind == "set" and len(filler.args) == 1


# ---------------------------------------------------------------- queries

def parse_query(text: str, kb: Optional[KnowledgeBase] = None) -> HOQuery:
    """Parse a conjunction of HO literals; KB names fix the sorts of predicates where known."""
    try:
        tree = _parser.parse(text, start="query")
    except UnexpectedInput as e:
        raise _syntax_error(e) from None

    sig = signature(kb) if kb is not None else None
    dmap = kb.dmap if kb is not None else DatatypeMap()
    sorts = SortInference(dmap.datatypes)
    if sig is not None:
        for n in sig.concepts:
            sorts.restrict(sorts.name(n), {CONCEPT})
        for n in sig.abstract_roles:
            sorts.restrict(sorts.name(n), {ROLE})
        for n in sig.concrete_roles:
            sorts.restrict(sorts.name(n), {CONCRETE})
        for n in sig.data_terms:
            sorts.restrict(sorts.name(n), {DATA})

    positions: Dict[str, Set[str]] = {}
    items = []
    for literal in tree.children:
        positive = _kind(literal) != "q_not"
        atom = literal.children[0] if not positive else literal
        kind = _kind(atom)
        args = [_qarg(a, positions) for a in atom.children if _kind(a) == "qarg"]
        pred = next((p for p in atom.children if _kind(p) == "pred"), None)
        items.append((positive, kind, _span(atom), pred, args))

    built = []
    for positive, kind, span, pred, args in items:
        if kind in ("q_eq", "q_neq"):
            built.append(HOLiteral(EqualityAtom(args[0], args[1]), positive == (kind == "q_eq")))
            continue
        head = pred.children[0]
        if isinstance(head, Token) and head.type == "QVAR":
            name = str(head)
            if kind == "q_unary":
                positions.setdefault(name, set()).add(VariableSort.CONCEPT.value)
                variable = QueryVariable(name, VariableSort.CONCEPT)
                built.append(HOLiteral(ConceptAtom(variable, args[0]), positive))
            else:
                concrete = isinstance(args[1], Constant)
                sort = VariableSort.CONCRETE_ROLE if concrete else VariableSort.ABSTRACT_ROLE
                positions.setdefault(name, set()).add(sort.value)
                built.append(HOLiteral(RoleAtom(QueryVariable(name, sort), args[0], args[1]), positive))
            continue
        raw = _raw(head)
        slot = sorts.constrain(raw)
        if kind == "q_unary":
            sorts.restrict(slot, {CONCEPT}, span, "unary predicates are concepts")
        elif isinstance(args[1], Constant):
            sorts.restrict(slot, {CONCRETE}, span, "pairs with a constant need a concrete role")
        else:
            sorts.restrict(slot, ROLE_SORTS, span, "binary predicates are roles")
        built.append((positive, kind, raw, args))

    sorts.solve()
    builder = TermBuilder(sorts)
    literals = []
    for item in built:
        if isinstance(item, HOLiteral):
            literals.append(item)
            continue
        positive, kind, raw, args = item
        term = builder.term(raw)
        atom = ConceptAtom(term, args[0]) if kind == "q_unary" else RoleAtom(term, args[0], args[1])
        literals.append(HOLiteral(atom, positive))

    clash = sorted(n for n, where in positions.items() if len(where) > 1)
    if clash:
        raise InputError(f"variable(s) {', '.join(clash)} used in conflicting positions")
    query = HOQuery(tuple(literals))
    check_positions(query)
    return query


def _qarg(tree: Tree, positions: Dict[str, Set[str]]):
    child = tree.children[0]
    if isinstance(child, Tree):
        return _constant(child)
    if child.type == "QVAR":
        positions.setdefault(str(child), set()).add(VariableSort.INDIVIDUAL.value)
        return QueryVariable(str(child), VariableSort.INDIVIDUAL)
    return str(child)


# ---------------------------------------------------------------- printing

_BINARY = (ConceptAnd, ConceptOr, RoleAnd, RoleOr, ConcreteAnd, ConcreteOr, DataAnd, DataOr)
_NEGATIONS = (ConceptNot, RoleNot, ConcreteNot, DataNot)


def _wrap(term) -> str:
    text = print_term(term)
    return f"({text})" if isinstance(term, _BINARY + _NEGATIONS) else text


def _operand(term) -> str:
    text = print_term(term)
    return f"({text})" if isinstance(term, _BINARY) else text


def _facet_literal(l: FacetLiteral) -> str:
    name = {TOP_FACET: "top", BOTTOM_FACET: "bot"}.get(l.facet, l.facet)
    return name if l.positive else f"~{name}"


def print_term(term) -> str:
    if isinstance(term, (ConceptName, RoleName, ConcreteRoleName, DataTermName, DatatypeRef)):
        return term.name
    if isinstance(term, Top):
        return "Thing"
    if isinstance(term, Bottom):
        return "Nothing"
    if isinstance(term, _NEGATIONS):
        inner = term.operand if hasattr(term, "operand") else term.role
        return f"~{_operand(inner)}"
    if isinstance(term, (ConceptAnd, RoleAnd, ConcreteAnd, DataAnd)):
        return f"{_operand(term.left)} & {_operand(term.right)}"
    if isinstance(term, (ConceptOr, RoleOr, ConcreteOr, DataOr)):
        return f"{_operand(term.left)} | {_operand(term.right)}"
    if isinstance(term, Nominal):
        return "{" + ", ".join(term.individuals) + "}"
    if isinstance(term, DataEnumeration):
        return "{" + ", ".join(str(c) for c in term.constants) + "}"
    if isinstance(term, SelfRestriction):
        return f"exists {_wrap(term.role)} . Self"
    if isinstance(term, HasValue):
        return f"exists {_wrap(term.role)} . {{{term.individual}}}"
    if isinstance(term, DataHasValue):
        return f"exists {_wrap(term.role)} . {{{term.constant}}}"
    if isinstance(term, Inverse):
        return f"inv({print_term(term.role)})"
    if isinstance(term, Identity):
        return f"id({print_term(term.concept)})"
    if isinstance(term, Product):
        return f"prod({print_term(term.left)}, {print_term(term.right)})"
    if isinstance(term, (DomainRestriction, ConcreteDomainRestriction)):
        return f"dom({print_term(term.role)}, {print_term(term.concept)})"
    if isinstance(term, RangeRestriction):
        return f"ran({print_term(term.role)}, {print_term(term.concept)})"
    if isinstance(term, ConcreteRangeRestriction):
        return f"ran({print_term(term.role)}, {print_term(term.data)})"
    if isinstance(term, Restriction):
        return f"restr({print_term(term.role)}, {print_term(term.domain)}, {print_term(term.range)})"
    if isinstance(term, ConcreteRestriction):
        return f"restr({print_term(term.role)}, {print_term(term.concept)}, {print_term(term.data)})"
    if isinstance(term, FacetExpression):
        base = term.base_facet
        if base == TOP_FACET:
            return f"top({term.datatype})"
        if base == BOTTOM_FACET:
            return f"bot({term.datatype})"
        parts = []
        for clause in term.clauses:
            lits = [_facet_literal(l) for l in clause]
            parts.append(lits[0] if len(lits) == 1 else "(" + " | ".join(lits) + ")")
        return f"facets({term.datatype}: {' & '.join(parts)})"
    raise InputError(f"cannot print {type(term).__name__}")


def print_statement(s: Statement) -> str:
    p = print_term
    if isinstance(s, (ConceptInclusion, RoleInclusion, ConcreteRoleInclusion, DataTermInclusion)):
        return f"{p(s.sub)} <= {p(s.sup)}"
    if isinstance(s, (ConceptEquivalence, RoleEquivalence, ConcreteRoleEquivalence, DataTermEquivalence)):
        return f"{p(s.left)} == {p(s.right)}"
    if isinstance(s, ForAllInclusion):
        return f"{p(s.sub)} <= forall {_wrap(s.role)} . {_wrap(s.filler)}"
    if isinstance(s, ExistsInclusion):
        return f"exists {_wrap(s.role)} . {_wrap(s.filler)} <= {p(s.sup)}"
    if isinstance(s, AtLeastInclusion):
        return f"atleast({s.n}, {p(s.role)}, {p(s.filler)}) <= {p(s.sup)}"
    if isinstance(s, AtMostInclusion):
        return f"{p(s.sub)} <= atmost({s.n}, {p(s.role)}, {p(s.filler)})"
    if isinstance(s, RoleChain):
        return f"chain({', '.join(p(r) for r in s.chain)}) <= {p(s.sup)}"
    if isinstance(s, RoleProperty):
        return f"{s.kind.value}({p(s.role)})"
    if isinstance(s, ConcreteFunctional):
        return f"Fun({p(s.role)})"
    if isinstance(s, (RoleDisjointness, ConcreteRoleDisjointness)):
        return f"Dis({p(s.left)}, {p(s.right)})"
    if isinstance(s, ConceptAssertion):
        return f"{s.individual} : {p(s.concept)}"
    if isinstance(s, RoleAssertion):
        return f"({s.subject}, {s.object}) : {'~' if s.negated else ''}{_operand(s.role)}"
    if isinstance(s, ConcreteRoleAssertion):
        return f"({s.subject}, {s.constant}) : {'~' if s.negated else ''}{_operand(s.role)}"
    if isinstance(s, EqualityAssertion):
        return f"{s.left} {'!=' if s.negated else '='} {s.right}"
    if isinstance(s, DataAssertion):
        return f"{s.constant} : {p(s.term)}"
    raise InputError(f"cannot print {type(s).__name__}")


def print_kb(kb: KnowledgeBase) -> str:
    sig = signature(kb)
    lines = []
    declared = (("role", sorted(sig.abstract_roles - {UNIVERSAL_ROLE})),
                ("concrete", sorted(sig.concrete_roles)),
                ("concept", sorted(sig.concepts)),
                ("data", sorted(sig.data_terms)),
                ("individual", sorted(sig.individuals)))
    for keyword, names in declared:
        if names:
            lines.append(f"{keyword} {', '.join(names)};")
    for spec in kb.dmap.specs:
        body = [f"constants: {', '.join(repr_string(v) for v in spec.constants)};"]
        if spec.facets:
            defs = [f"{f} = {{{', '.join(repr_string(v) for v in ext)}}}" for f, ext in spec.facets]
            body.append(f"facets: {', '.join(defs)};")
        lines.append(f"datatype {spec.name} {{ {' '.join(body)} }}")
    lines += [print_statement(s) + ";" for s in kb.statements]
    return "\n".join(lines) + "\n"


def repr_string(value: str) -> str:
    return f'"{value}"'


def _print_arg(arg) -> str:
    return arg.name if isinstance(arg, QueryVariable) else str(arg)


def print_query(q: HOQuery) -> str:
    parts = []
    for literal in q.literals:
        atom = literal.atom
        if isinstance(atom, EqualityAtom):
            op = "=" if literal.positive else "!="
            parts.append(f"{_print_arg(atom.left)} {op} {_print_arg(atom.right)}")
            continue
        pred = atom.concept if isinstance(atom, ConceptAtom) else atom.role
        if isinstance(pred, QueryVariable):
            head = pred.name
        elif isinstance(pred, (ConceptName, RoleName, ConcreteRoleName)):
            head = pred.name
        else:
            head = f"[{print_term(pred)}]"
        args = [atom.arg] if isinstance(atom, ConceptAtom) else [atom.first, atom.second]
        text = f"{head}({', '.join(_print_arg(a) for a in args)})"
        parts.append(text if literal.positive else f"!{text}")
    return " & ".join(parts)
