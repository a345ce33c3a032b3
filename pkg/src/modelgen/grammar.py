"""Grammar synthesis: lower a validated model to the CFG of its concrete syntax.

Lowering rules:

* a composite element produces one production concatenating its members, with
  element-level delimiters wrapping its own right-hand side (as the worked
  figures do: ``<ParenthesizedExpression> ::= "(" <Expression> ")"``);
* an element with subtypes produces one unit production per direct subtype;
* a repeatable member produces a right-recursive list pair
  ``L ::= E sep L | E`` (plus an ``Optional... ::= L | ε`` wrapper for min=0,
  with the member's delimiters staying outside the wrapper);
* an @Optional member produces ``Opt ::= delims E delims | ε`` with the
  delimiters inside, so a missing element drops its delimiters too.

Element-level delimiters of *basic* elements attach at reference sites (once
per list for repeatable members); composites and abstracts carry their own.
Each distinct delimiter regex becomes one shared terminal. Synthesis is
deterministic; production order is breadth-first discovery from the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Optional

from .errors import SynthesisError
from .model import (
    Cardinality,
    ElementDecl,
    ElementId,
    Kind,
    LanguageModel,
    MemberDecl,
    SCALAR,
    TypeHierarchy,
    resolve_hierarchy,
)
from .patterns import compile_pattern

SymbolKind = Literal["nt", "token", "lit"]


@dataclass(frozen=True)
class Symbol:
    kind: SymbolKind
    text: str

    @property
    def terminal(self) -> bool:
        return self.kind != "nt"

    def token_type_id(self) -> str:
        if self.kind == "token":
            return self.text
        if self.kind == "lit":
            return f"lit:{self.text}"
        raise ValueError(f"{self} is not a terminal")

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text}"


def nt(name: str) -> Symbol:
    return Symbol("nt", name)


def token_sym(element_id: str) -> Symbol:
    return Symbol("token", element_id)


def lit(regex: str) -> Symbol:
    return Symbol("lit", regex)


MemberMode = Literal["scalar", "list", "min0_list", "opt", "opt_list"]


@dataclass(frozen=True)
class Role:
    """What an rhs position contributes to the instance being built."""

    kind: Literal["delim", "member", "sub", "item", "tail", "content"]
    member: str | None = None
    mode: MemberMode | None = None


DELIM = Role("delim")


@dataclass(frozen=True)
class Origin:
    construct: Literal["composite", "selection", "list", "list_opt", "optional"]
    element: ElementId  # owning element: the composite / supertype / list element / member owner
    member: str | None = None
    detail: str | None = None  # selection: the subtype


@dataclass(frozen=True)
class Production:
    lhs: Symbol
    rhs: tuple[Symbol, ...]
    roles: tuple[Role, ...]
    origin: Origin
    index: int = -1
    list_bounds: tuple[int, int | None] | None = None  # (min_count, max_count) hooks

    def __post_init__(self) -> None:
        assert len(self.rhs) == len(self.roles)

    @property
    def is_epsilon(self) -> bool:
        return not self.rhs


@dataclass(frozen=True)
class Grammar:
    nonterminals: frozenset[Symbol]
    terminals: frozenset[Symbol]
    productions: tuple[Production, ...]
    start: Symbol
    model: LanguageModel
    hierarchy: TypeHierarchy

    def by_lhs(self, symbol: Symbol) -> tuple[Production, ...]:
        return self._lhs_index.get(symbol, ())

    @property
    def _lhs_index(self) -> dict[Symbol, tuple[Production, ...]]:
        cached = self.__dict__.get("_lhs_cache")
        if cached is None:
            index: dict[Symbol, list[Production]] = {}
            for p in self.productions:
                index.setdefault(p.lhs, []).append(p)
            cached = {k: tuple(v) for k, v in index.items()}
            object.__setattr__(self, "_lhs_cache", cached)
        return cached


# --------------------------------------------------------------------------
# Synthesis


class _Names:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)

    def fresh(self, base: str) -> str:
        if base not in self.taken:
            self.taken.add(base)
            return base
        n = 2
        while f"{base}_g{n}" in self.taken:
            n += 1
        name = f"{base}_g{n}"
        self.taken.add(name)
        return name


def _capitalize(name: str) -> str:
    return name[0].upper() + name[1:] if name else name


class _Synthesizer:
    def __init__(self, model: LanguageModel, hierarchy: TypeHierarchy):
        self.model = model
        self.hierarchy = hierarchy
        self.names = _Names(model.elements)
        self.productions_of: dict[str, list[Production]] = {}
        self.pending: dict[str, list[Production]] = {}  # fresh symbols planned, not yet ordered
        self.list_symbols: dict[tuple, Symbol] = {}
        self.optlist_symbols: dict[str, Symbol] = {}
        self.counter = 0

    # -- symbol helpers

    def element_symbol(self, eid: ElementId) -> Symbol:
        elem = self.model.elements.get(eid)
        if elem is None:
            return nt(eid)  # standalone lowering without a full model
        return token_sym(eid) if elem.kind is Kind.BASIC else nt(eid)

    def _delims(self, regexes: Iterable[str]) -> list[tuple[Symbol, Role]]:
        return [(lit(r), DELIM) for r in regexes]

    def _basic_element_delims(self, eid: ElementId) -> tuple[list, list]:
        elem = self.model.elements.get(eid)
        if elem is not None and elem.kind is Kind.BASIC:
            return self._delims(elem.prefixes), self._delims(elem.suffixes)
        return [], []

    # -- lowering

    def composite_production(self, elem: ElementDecl) -> Production:
        parts: list[tuple[Symbol, Role]] = []
        parts += self._delims(elem.prefixes)
        for m in elem.members:
            parts += self.member_site(elem, m)
        parts += self._delims(elem.suffixes)
        rhs = tuple(s for s, _ in parts)
        roles = tuple(r for _, r in parts)
        return Production(nt(elem.id), rhs, roles, Origin("composite", elem.id))

    def member_site(self, owner: ElementDecl, m: MemberDecl) -> list[tuple[Symbol, Role]]:
        card = m.cardinality
        epre, esuf = self._basic_element_delims(m.element)
        mpre = self._delims(m.prefixes)
        msuf = self._delims(m.suffixes)
        if card.optional:
            opt = self.optional_symbol(owner, m)
            return [(opt, Role("member", m.name, "opt_list" if card.is_list else "opt"))]
        if card.is_list:
            inner, mode = self.list_site(owner, m)
            return mpre + epre + [(inner, Role("member", m.name, mode))] + esuf + msuf
        sym = self.element_symbol(m.element)
        return mpre + epre + [(sym, Role("member", m.name, "scalar"))] + esuf + msuf

    def list_site(self, owner: ElementDecl, m: MemberDecl) -> tuple[Symbol, MemberMode]:
        lsym = self.list_symbol(owner, m)
        if m.cardinality.min == 0:
            return self.optional_list_symbol(lsym), "min0_list"
        return lsym, "list"

    def effective_separators(self, m: MemberDecl) -> tuple[str, ...]:
        if m.separators is not None:
            return m.separators
        elem = self.model.elements.get(m.element)
        return elem.default_separators if elem is not None else ()

    def list_symbol(self, owner: ElementDecl, m: MemberDecl) -> Symbol:
        card = m.cardinality
        seps = self.effective_separators(m)
        min_hook = card.min if card.min >= 2 else 1
        max_hook = card.max if card.max is not None and card.max > 1 else None
        adhoc = m.separators is not None
        key: tuple
        if adhoc:
            key = (m.element, seps, min_hook, max_hook, owner.id, m.name)
        else:
            key = (m.element, seps, min_hook, max_hook)
        sym = self.list_symbols.get(key)
        if sym is not None:
            return sym
        base = f"{owner.id}{m.element}List" if adhoc else f"{m.element}List"
        sym = nt(self.names.fresh(base))
        self.list_symbols[key] = sym
        item = self.element_symbol(m.element)
        sep_parts = self._delims(seps)
        bounds = (min_hook, max_hook) if (min_hook > 1 or max_hook is not None) else None
        rec = Production(
            sym,
            (item,) + tuple(s for s, _ in sep_parts) + (sym,),
            (Role("item"),) + tuple(r for _, r in sep_parts) + (Role("tail"),),
            Origin("list", m.element, m.name),
            list_bounds=bounds,
        )
        base_p = Production(sym, (item,), (Role("item"),), Origin("list", m.element, m.name),
                            list_bounds=bounds)
        self.pending[sym.text] = [rec, base_p]
        return sym

    def optional_list_symbol(self, lsym: Symbol) -> Symbol:
        sym = self.optlist_symbols.get(lsym.text)
        if sym is not None:
            return sym
        sym = nt(self.names.fresh(f"Optional{lsym.text}"))
        self.optlist_symbols[lsym.text] = sym
        origin = Origin("list_opt", lsym.text)
        self.pending[sym.text] = [
            Production(sym, (lsym,), (Role("content"),), origin),
            Production(sym, (), (), origin),
        ]
        return sym

    def optional_symbol(self, owner: ElementDecl, m: MemberDecl) -> Symbol:
        name = self.names.fresh(f"Optional{_capitalize(m.name)}")
        sym = nt(name)
        mpre = self._delims(m.prefixes)
        msuf = self._delims(m.suffixes)
        epre, esuf = self._basic_element_delims(m.element)
        if m.cardinality.is_list:
            inner, _mode = self.list_site(owner, m)
            content_role = Role("content")
        else:
            inner = self.element_symbol(m.element)
            content_role = Role("content")
        parts = mpre + epre + [(inner, content_role)] + esuf + msuf
        origin = Origin("optional", owner.id, m.name)
        self.pending[name] = [
            Production(sym, tuple(s for s, _ in parts), tuple(r for _, r in parts), origin),
            Production(sym, (), (), origin),
        ]
        return sym

    def selection_productions(self, elem: ElementDecl) -> list[Production]:
        out = []
        pre = self._delims(elem.prefixes)
        suf = self._delims(elem.suffixes)
        for sub in self.hierarchy.direct_subtypes(elem.id):
            parts = pre + [(self.element_symbol(sub), Role("sub"))] + suf
            out.append(Production(nt(elem.id), tuple(s for s, _ in parts),
                                  tuple(r for _, r in parts),
                                  Origin("selection", elem.id, detail=sub)))
        return out

    def expand(self, name: str) -> list[Production]:
        if name in self.pending:
            return self.pending.pop(name)
        elem = self.model.elements.get(name)
        if elem is None:
            raise SynthesisError(f"no productions for symbol {name!r}")
        prods: list[Production] = []
        subs = self.hierarchy.direct_subtypes(name)
        if elem.kind is Kind.ABSTRACT and not subs:
            raise SynthesisError(f"abstract element {name!r} reachable from the root has no subtypes")
        if subs:
            prods += self.selection_productions(elem)
        if elem.kind is Kind.COMPOSITE:
            prods.append(self.composite_production(elem))
        return prods

    def run(self) -> Grammar:
        root = self.model.elements.get(self.model.root)
        if root is None:
            raise SynthesisError(f"root element {self.model.root!r} is not declared")
        if root.kind is Kind.BASIC:
            raise SynthesisError("the root element must be composite or abstract")
        start = nt(root.id)
        ordered: list[Production] = []
        seen_nts = {start.text}
        queue = [start.text]
        terminals: set[Symbol] = set()
        while queue:
            name = queue.pop(0)
            prods = self.expand(name)
            self.productions_of[name] = prods
            for p in prods:
                ordered.append(p)
                for sym in p.rhs:
                    if sym.kind == "nt":
                        if sym.text not in seen_nts:
                            seen_nts.add(sym.text)
                            queue.append(sym.text)
                    else:
                        terminals.add(sym)
        numbered = tuple(replace(p, index=i) for i, p in enumerate(ordered))
        nonterminals = frozenset(nt(n) for n in seen_nts)
        return Grammar(nonterminals, frozenset(terminals), numbered, start,
                       self.model, self.hierarchy)


def synthesize_grammar(model: LanguageModel, hierarchy: TypeHierarchy | None = None) -> Grammar:
    """Lower a validated model to its concrete-syntax grammar.

    Raises SynthesisError when a reachable abstract element has no subtypes or
    the root is unusable. Deterministic: equal models produce equal grammars.
    """
    if hierarchy is None:
        hierarchy = resolve_hierarchy(model)
    return _Synthesizer(model, hierarchy).run()


# --------------------------------------------------------------------------
# Standalone lowering operations (single-construct views of the same rules)


def _mini(model: LanguageModel | None, extra: Iterable[ElementDecl] = ()) -> _Synthesizer:
    if model is None:
        model = LanguageModel("__none__", {e.id: e for e in extra})
    hierarchy = TypeHierarchy(
        {eid: () for eid in model.elements}, {eid: frozenset() for eid in model.elements},
        {eid: () for eid in model.elements})
    return _Synthesizer(model, hierarchy)


def lower_composite(element: ElementDecl, model: LanguageModel | None = None) -> Production:
    """The single production of a composite element."""
    synth = _mini(model, (element,))
    return synth.composite_production(element)


def lower_selection(element: ElementDecl, hierarchy: TypeHierarchy,
                    model: LanguageModel | None = None) -> list[Production]:
    """One unit production per direct subtype of a selection point."""
    synth = _mini(model, (element,))
    synth.hierarchy = hierarchy
    return synth.selection_productions(element)


def lower_repetition(member_decl: MemberDecl, context: ElementId,
                     model: LanguageModel | None = None) -> list[Production]:
    """List productions (and the min=0 wrapper, when needed) for a repeatable member."""
    owner = (model.elements.get(context) if model else None) or ElementDecl(context, Kind.COMPOSITE)
    synth = _mini(model, (owner,))
    lsym = synth.list_symbol(owner, member_decl)
    prods = list(synth.pending.pop(lsym.text))
    if member_decl.cardinality.min == 0:
        osym = synth.optional_list_symbol(lsym)
        prods = list(synth.pending.pop(osym.text)) + prods
    return prods


def lower_optional(member_decl: MemberDecl, context: ElementId = "Owner",
                   model: LanguageModel | None = None) -> list[Production]:
    """The two ancillary productions of an @Optional member."""
    owner = (model.elements.get(context) if model else None) or ElementDecl(context, Kind.COMPOSITE)
    synth = _mini(model, (owner,))
    sym = synth.optional_symbol(owner, member_decl)
    prods = list(synth.pending.pop(sym.text))
    for extra in list(synth.pending):
        prods += synth.pending.pop(extra)
    return prods


# --------------------------------------------------------------------------
# BNF emission


def _display_terminal(sym: Symbol) -> str:
    if sym.kind == "token":
        return f"<{sym.text}>"
    literal = compile_pattern(sym.text).literal_text()
    return f'"{literal}"' if literal is not None else f'"{sym.text}"'


def _display(sym: Symbol) -> str:
    if sym.kind == "nt":
        return f"<{sym.text}>"
    return _display_terminal(sym)


def production_text(p: Production) -> str:
    rhs = " ".join(_display(s) for s in p.rhs) if p.rhs else "ε"
    return f"<{p.lhs.text}> ::= {rhs}"


def emit_bnf(grammar: Grammar) -> str:
    """Deterministic BNF text: one lhs per block, alternatives joined with |,
    terminals quoted, ε for epsilon; root first, then breadth-first discovery order."""
    groups: list[tuple[Symbol, list[Production]]] = []
    index: dict[Symbol, int] = {}
    for p in grammar.productions:
        if p.lhs not in index:
            index[p.lhs] = len(groups)
            groups.append((p.lhs, []))
        groups[index[p.lhs]][1].append(p)
    lines = []
    for lhs, prods in groups:
        alts = [" ".join(_display(s) for s in p.rhs) if p.rhs else "ε" for p in prods]
        lines.append(f"<{lhs.text}> ::= " + " | ".join(alts))
    return "\n".join(lines) + "\n"
