"""Earley chart parsing over token graphs, with constraint enforcement.

The recognizer is a standard Earley loop generalized to a token DAG: the scan
step advances an item over every candidate starting at the item's position
whose type matches the expected terminal, landing on the post-skip offset of
the candidate's end. Epsilon productions are handled with nullable-symbol
bookkeeping so same-position completions reach items predicted later.

The packed forest is built from the completed chart; alternatives of one
(symbol, span) node share subtrees. Constraint enforcement:

* associativity and operator priority are local legality patterns on
  recursive-operand edges (a looser-binding operator may not appear directly
  inside a tighter-binding one's operand; a same-production, same-level
  neighbor on the associative side is vetoed). Enforced exactly by rebuilding
  the forest with context-restricted node copies.
* list multiplicity: max bounds cut off any over-long completion; min bounds
  veto underfull lists where a non-list parent consumes them.
* composition (EAGER/LAZY/EXPLICIT) and precedes-edge priority are packed-node
  filters that only ever remove alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .errors import AmbiguityError, ExplicitViolationError, NoParseError
from .grammar import Grammar, Production, Symbol
from .lexer import TokenCandidate, TokenGraph
from .model import Associativity, Composition, ElementId, Kind, LanguageModel

Child = Union["ForestNode", TokenCandidate]


class ForestNode:
    """A packed node: all ways to derive `symbol` over [start, end)."""

    __slots__ = ("symbol", "start", "end", "alts")

    def __init__(self, symbol: Symbol, start: int, end: int,
                 alts: tuple[tuple[Production, tuple[Child, ...]], ...] = ()):
        self.symbol = symbol
        self.start = start
        self.end = end
        self.alts = alts

    def __repr__(self) -> str:
        return f"ForestNode({self.symbol}, {self.start}, {self.end}, {len(self.alts)} alts)"


@dataclass(frozen=True)
class ParseForest:
    root: ForestNode | None
    grammar: Grammar
    graph: TokenGraph
    explicit_marks: tuple[tuple[ElementId, int, int], ...] = ()

    @property
    def empty(self) -> bool:
        return self.root is None


@dataclass(frozen=True)
class ParseTree:
    production: Production
    start: int
    end: int
    children: tuple[Union["ParseTree", TokenCandidate], ...]


@dataclass(frozen=True)
class EnumerationResult:
    trees: tuple[ParseTree, ...]
    total: int | None  # None when the forest is cyclic and the count diverges
    overflow: bool


# --------------------------------------------------------------------------
# Constraint tables


@dataclass(frozen=True)
class _Anchor:
    pos: int | None  # operator member position; None = anchored on the element itself
    fallback_level: int
    fallback_assoc: Associativity


def _blocks(assoc: Associativity, following: bool, preceding: bool) -> bool:
    if assoc is Associativity.LEFT_TO_RIGHT:
        return following
    if assoc is Associativity.RIGHT_TO_LEFT:
        return preceding
    if assoc is Associativity.NON_ASSOCIATIVE:
        return following or preceding
    return False


class ConstraintTables:
    """Per-grammar lookup tables for evaluation-order constraints."""

    def __init__(self, grammar: Grammar):
        model = grammar.model
        hier = grammar.hierarchy
        self.grammar = grammar
        self.eff_value: dict[str, int | None] = {}
        self.eff_assoc: dict[str, Associativity] = {}
        self.composition: dict[str, Composition] = {}
        for eid in model.elements:
            value: int | None = None
            assoc = Associativity.UNDEFINED
            comp = Composition.UNDEFINED
            cur: str | None = eid
            while cur is not None:
                cs = model.elements[cur].constraints
                if value is None:
                    value = cs.priority_value
                if assoc is Associativity.UNDEFINED:
                    assoc = cs.associativity
                if comp is Composition.UNDEFINED:
                    comp = cs.composition
                cur = model.elements[cur].supertype
            self.eff_value[eid] = value
            self.eff_assoc[eid] = assoc
            self.composition[eid] = comp

        # Transitive closure of precedes edges.
        direct = {eid: set(model.elements[eid].constraints.precedes) & set(model.elements)
                  for eid in model.elements}
        self.precedes: dict[str, frozenset[str]] = {}
        for eid in model.elements:
            seen: set[str] = set()
            frontier = list(direct[eid])
            while frontier:
                t = frontier.pop()
                if t not in seen:
                    seen.add(t)
                    frontier.extend(direct[t])
            self.precedes[eid] = frozenset(seen)

        self.anchors: dict[int, _Anchor | None] = {}
        self.rec_positions: dict[int, tuple[int, ...]] = {}
        self.side_following: dict[int, frozenset[int]] = {}
        self.side_preceding: dict[int, frozenset[int]] = {}
        for p in grammar.productions:
            self._prepare(p, model, hier)

    def _prepare(self, p: Production, model: LanguageModel, hier) -> None:
        idx = p.index
        if p.origin.construct != "composite":
            self.anchors[idx] = None
            self.rec_positions[idx] = ()
            self.side_following[idx] = frozenset()
            self.side_preceding[idx] = frozenset()
            return
        owner = p.origin.element
        chain = {owner} | set(hier.supertypes(owner))
        recs = tuple(
            i for i, (sym, role) in enumerate(zip(p.rhs, p.roles))
            if role.kind == "member" and role.mode == "scalar"
            and sym.kind == "nt" and sym.text in chain
        )
        self.rec_positions[idx] = recs
        members = {m.name: m for m in model.elements[owner].members}
        anchor_pos: int | None = None
        for i, (sym, role) in enumerate(zip(p.rhs, p.roles)):
            if role.kind != "member" or role.mode != "scalar" or i in recs:
                continue
            m = members[role.member]
            family = hier.concrete_family(m.element)
            kinds = {model.elements[f].kind for f in family if f in model.elements}
            if Kind.COMPOSITE not in kinds and Kind.BASIC in kinds:
                anchor_pos = i
                break
        fallback_level = self.eff_value.get(owner)
        fallback_assoc = self.eff_assoc.get(owner, Associativity.UNDEFINED)
        if anchor_pos is not None:
            self.anchors[idx] = _Anchor(anchor_pos,
                                        fallback_level if fallback_level is not None else 0,
                                        fallback_assoc)
            self.side_following[idx] = frozenset(i for i in recs if i > anchor_pos)
            self.side_preceding[idx] = frozenset(i for i in recs if i < anchor_pos)
        elif fallback_level is not None or fallback_assoc is not Associativity.UNDEFINED:
            self.anchors[idx] = _Anchor(None,
                                        fallback_level if fallback_level is not None else 0,
                                        fallback_assoc)
            following = frozenset({recs[-1]} if recs else set())
            preceding = frozenset({recs[0]} if recs else set())
            self.side_following[idx] = following
            self.side_preceding[idx] = preceding
        else:
            self.anchors[idx] = None
            self.side_following[idx] = frozenset()
            self.side_preceding[idx] = frozenset()

    def level_of(self, element: ElementId, owner: ElementId) -> int:
        v = self.eff_value.get(element)
        if v is not None:
            return v
        v = self.eff_value.get(owner)
        return v if v is not None else 0

    def assoc_of(self, element: ElementId, owner: ElementId) -> Associativity:
        a = self.eff_assoc.get(element, Associativity.UNDEFINED)
        if a is not Associativity.UNDEFINED:
            return a
        return self.eff_assoc.get(owner, Associativity.UNDEFINED)


def _tables(grammar: Grammar) -> ConstraintTables:
    cached = getattr(grammar, "_constraint_tables", None)
    if cached is None:
        cached = ConstraintTables(grammar)
        object.__setattr__(grammar, "_constraint_tables", cached)
    return cached


# --------------------------------------------------------------------------
# Public constraint predicates (the spec's per-completion views)


def inhibit_associativity(grammar: Grammar, completing: Production,
                          anchor_element: ElementId | None, side: str,
                          adjacent: Production, adjacent_anchor: ElementId | None) -> bool:
    """Would this completion be vetoed by an associativity constraint?

    `side` is "following" or "preceding": where the adjacent same-production
    reduction sits relative to the associative element. The veto is suspended
    when the two anchor elements are priority-related (distinct levels), which
    is then the priority pattern's job.
    """
    t = _tables(grammar)
    if completing.index != adjacent.index:
        return False
    owner = completing.origin.element
    elem = anchor_element or owner
    adj = adjacent_anchor or adjacent.origin.element
    if t.level_of(elem, owner) != t.level_of(adj, adjacent.origin.element):
        return False
    assoc = t.assoc_of(elem, owner)
    return _blocks(assoc, following=(side == "following"), preceding=(side == "preceding"))


def check_counts(production: Production, count: int, top_level: bool) -> bool:
    """True = keep; False = inhibit. Max bounds cut any completion, min bounds
    only a top-level one (a list consumed by a non-list parent)."""
    bounds = production.list_bounds
    if bounds is None:
        return True
    mn, mx = bounds
    if mx is not None and count > mx:
        return False
    if top_level and count < mn:
        return False
    return True


# --------------------------------------------------------------------------
# Recognition

_Item = tuple[int, int, int]  # (production index, dot, origin offset)


class _Chart:
    def __init__(self) -> None:
        self.sets: dict[int, set[_Item]] = {}
        self.completed: dict[tuple[str, int], set[int]] = {}  # (nt, start) -> ends

    def has(self, offset: int, item: _Item) -> bool:
        s = self.sets.get(offset)
        return s is not None and item in s


def _recognize(grammar: Grammar, graph: TokenGraph) -> _Chart:
    prods = grammar.productions
    by_lhs: dict[str, list[int]] = {}
    for p in prods:
        by_lhs.setdefault(p.lhs.text, []).append(p.index)

    chart = _Chart()
    p0 = graph.start_offset
    wanters: dict[int, dict[str, list[_Item]]] = {}
    null_done: dict[int, set[str]] = {}
    predicted: dict[int, set[str]] = {}
    offsets = sorted({p0, graph.length} | set(graph.skip_after.values()))
    worklists: dict[int, list[_Item]] = {o: [] for o in offsets}

    def add(offset: int, item: _Item) -> None:
        s = chart.sets.setdefault(offset, set())
        if item not in s:
            s.add(item)
            worklists[offset].append(item)

    for pi in by_lhs.get(grammar.start.text, ()):
        add(p0, (pi, 0, p0))

    for offset in offsets:
        work = worklists[offset]
        i = 0
        while i < len(work):
            pi, dot, origin = work[i]
            i += 1
            p = prods[pi]
            if dot == len(p.rhs):
                lhs = p.lhs.text
                chart.completed.setdefault((lhs, origin), set()).add(offset)
                if origin == offset:
                    null_done.setdefault(offset, set()).add(lhs)
                for (qi, qd, qo) in wanters.get(origin, {}).get(lhs, ()):
                    add(offset, (qi, qd + 1, qo))
                continue
            sym = p.rhs[dot]
            if sym.terminal:
                tid = sym.token_type_id()
                c = graph.candidate_at(offset, tid)
                if c is not None:
                    add(graph.skip_after[c.end], (pi, dot + 1, origin))
            else:
                wanters.setdefault(offset, {}).setdefault(sym.text, []).append((pi, dot, origin))
                if sym.text not in predicted.setdefault(offset, set()):
                    predicted[offset].add(sym.text)
                    for qi in by_lhs.get(sym.text, ()):
                        add(offset, (qi, 0, offset))
                if sym.text in null_done.get(offset, ()):
                    # nullable already completed here; late wanters advance now
                    add(offset, (pi, dot + 1, origin))
    return chart


def _diagnose(grammar: Grammar, chart: _Chart, graph: TokenGraph) -> NoParseError:
    prods = grammar.productions
    if chart.sets:
        rightmost = max(o for o, s in chart.sets.items() if s)
    else:
        rightmost = graph.start_offset
    from .grammar import _display_terminal

    expected: set[str] = set()
    for (pi, dot, _origin) in chart.sets.get(rightmost, ()):
        p = prods[pi]
        if dot < len(p.rhs) and p.rhs[dot].terminal:
            expected.add(_display_terminal(p.rhs[dot]).strip("<>"))
    return NoParseError(rightmost, tuple(sorted(expected)), "syntax")


# --------------------------------------------------------------------------
# Forest construction from the chart


def _build_forest(grammar: Grammar, graph: TokenGraph, chart: _Chart) -> ForestNode:
    prods = grammar.productions
    by_lhs: dict[str, list[int]] = {}
    for p in prods:
        by_lhs.setdefault(p.lhs.text, []).append(p.index)
    nodes: dict[tuple[str, int, int], ForestNode] = {}

    def child_key(c: Child) -> tuple:
        if isinstance(c, TokenCandidate):
            return (c.start, c.end, c.type)
        return (c.start, c.end, c.symbol.text)

    def node(text: str, i: int, j: int) -> ForestNode:
        key = (text, i, j)
        existing = nodes.get(key)
        if existing is not None:
            return existing
        n = ForestNode(Symbol("nt", text), i, j)
        nodes[key] = n
        alts: list[tuple[Production, tuple[Child, ...]]] = []
        for pi in by_lhs.get(text, ()):
            p = prods[pi]
            if not chart.has(i, (pi, 0, i)):
                continue
            for children in _tilings(p, i, j):
                alts.append((p, children))
        alts.sort(key=lambda a: (a[0].index, tuple(child_key(c) for c in a[1])))
        n.alts = tuple(alts)
        return n

    def _tilings(p: Production, i: int, j: int) -> list[tuple[Child, ...]]:
        rhs = p.rhs
        out: list[tuple[Child, ...]] = []

        def step(m: int, pos: int, acc: list[Child]) -> None:
            if m == len(rhs):
                if pos == j:
                    out.append(tuple(acc))
                return
            sym = rhs[m]
            nxt_item = (p.index, m + 1, i)
            if sym.terminal:
                c = graph.candidate_at(pos, sym.token_type_id())
                if c is not None:
                    nxt = graph.skip_after[c.end]
                    if nxt <= j and chart.has(nxt, nxt_item):
                        acc.append(c)
                        step(m + 1, nxt, acc)
                        acc.pop()
            else:
                for e in sorted(chart.completed.get((sym.text, pos), ())):
                    if e > j:
                        break
                    if chart.has(e, nxt_item):
                        acc.append(node(sym.text, pos, e))
                        step(m + 1, e, acc)
                        acc.pop()

        step(0, i, [])
        return out

    return node(grammar.start.text, graph.start_offset, graph.length)


# --------------------------------------------------------------------------
# Structural constraints: associativity/priority legality and list counts


@dataclass(frozen=True)
class _Legal:
    parent_prod: int
    level: int
    blocks: bool  # associativity vetoes same-production, same-level neighbors here


@dataclass(frozen=True)
class _Count:
    need: int
    budget: int | None


_Ctx = Union[_Legal, _Count, None]


class _Constrainer:
    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.tables = _tables(grammar)
        self.memo: dict[tuple[int, _Ctx], ForestNode | None] = {}
        self.collapse_memo: dict[int, tuple[tuple[ElementId, ForestNode], ...]] = {}

    # -- collapse a node into per-concrete-element variants (unit chains only)

    def collapse_variants(self, node: ForestNode) -> tuple[tuple[ElementId, ForestNode], ...]:
        cached = self.collapse_memo.get(id(node))
        if cached is not None:
            return cached
        groups: dict[ElementId, list[tuple[Production, tuple[Child, ...]]]] = {}
        for p, children in node.alts:
            if p.origin.construct == "selection":
                sub_pos = next(k for k, r in enumerate(p.roles) if r.kind == "sub")
                child = children[sub_pos]
                if isinstance(child, TokenCandidate):
                    groups.setdefault(child.type, []).append((p, children))
                else:
                    for elem, restricted in self.collapse_variants(child):
                        repl = children[:sub_pos] + (restricted,) + children[sub_pos + 1:]
                        groups.setdefault(elem, []).append((p, repl))
            else:
                groups.setdefault(p.origin.element, []).append((p, children))
        result = tuple(
            (elem, ForestNode(node.symbol, node.start, node.end, tuple(alts)))
            for elem, alts in groups.items()
        )
        self.collapse_memo[id(node)] = result
        return result

    # -- main rebuild

    def list_bounds_of(self, sym: Symbol) -> tuple[int, int | None] | None:
        prods = self.grammar.by_lhs(sym)
        if prods and prods[0].origin.construct == "list":
            return prods[0].list_bounds
        return None

    def edge_ctx(self, p: Production, position: int, variant_level: int | None,
                 variant_assoc: Associativity, child: Child) -> _Ctx:
        if isinstance(child, TokenCandidate):
            return None
        t = self.tables
        if variant_level is not None and position in t.rec_positions[p.index]:
            blocks = _blocks(
                variant_assoc,
                following=position in t.side_following[p.index],
                preceding=position in t.side_preceding[p.index],
            )
            return _Legal(p.index, variant_level, blocks)
        if p.roles[position].kind != "tail":
            bounds = self.list_bounds_of(child.symbol)
            if bounds is not None:
                return _Count(bounds[0], bounds[1])
        return None

    def excluded(self, ctx: _Legal, p: Production, level: int) -> bool:
        if level > ctx.level:
            return True  # looser binder directly inside a tighter operand
        return p.index == ctx.parent_prod and level == ctx.level and ctx.blocks

    def rebuild(self, node: ForestNode, ctx: _Ctx) -> ForestNode | None:
        key = (id(node), ctx)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None  # cycle guard: re-entry during rebuild sees "pruned"
        t = self.tables
        new_alts: list[tuple[Production, tuple[Child, ...]]] = []

        for p, children in node.alts:
            if isinstance(ctx, _Legal) and p.origin.construct == "selection":
                sub_pos = next(k for k, r in enumerate(p.roles) if r.kind == "sub")
                child = children[sub_pos]
                if isinstance(child, TokenCandidate):
                    new_alts.append((p, children))
                else:
                    rebuilt = self.rebuild(child, ctx)
                    if rebuilt is not None:
                        new_alts.append((p, children[:sub_pos] + (rebuilt,) + children[sub_pos + 1:]))
                continue

            if isinstance(ctx, _Count):
                if p.origin.construct != "list":
                    # non-list under a count edge: counts do not apply
                    pass
                else:
                    tail_pos = next((k for k, r in enumerate(p.roles) if r.kind == "tail"), None)
                    if tail_pos is None:
                        if ctx.need > 1 or (ctx.budget is not None and ctx.budget < 1):
                            continue
                    else:
                        if ctx.budget is not None and ctx.budget < 2:
                            continue
                    new_children = []
                    ok = True
                    for k, child in enumerate(children):
                        if isinstance(child, TokenCandidate):
                            new_children.append(child)
                            continue
                        if k == tail_pos:
                            sub_ctx: _Ctx = _Count(max(ctx.need - 1, 0),
                                                   None if ctx.budget is None else ctx.budget - 1)
                        else:
                            sub_ctx = self.edge_ctx(p, k, None, Associativity.UNDEFINED, child)
                        rebuilt = self.rebuild(child, sub_ctx)
                        if rebuilt is None:
                            ok = False
                            break
                        new_children.append(rebuilt)
                    if ok:
                        new_alts.append((p, tuple(new_children)))
                    continue

            # anchored-variant expansion for composite alternatives
            anchor = t.anchors[p.index] if p.origin.construct == "composite" else None
            variants: list[tuple[int | None, Associativity, tuple[Child, ...]]]
            if anchor is None:
                variants = [(None, Associativity.UNDEFINED, children)]
            elif anchor.pos is None:
                variants = [(anchor.fallback_level, anchor.fallback_assoc, children)]
            else:
                child = children[anchor.pos]
                owner = p.origin.element
                if isinstance(child, TokenCandidate):
                    variants = [(t.level_of(child.type, owner), t.assoc_of(child.type, owner),
                                 children)]
                else:
                    variants = []
                    for elem, restricted in self.collapse_variants(child):
                        repl = children[:anchor.pos] + (restricted,) + children[anchor.pos + 1:]
                        variants.append((t.level_of(elem, owner), t.assoc_of(elem, owner), repl))

            for level, assoc, var_children in variants:
                if isinstance(ctx, _Legal) and level is not None and self.excluded(ctx, p, level):
                    continue
                new_children = []
                ok = True
                for k, child in enumerate(var_children):
                    if isinstance(child, TokenCandidate):
                        new_children.append(child)
                        continue
                    rebuilt = self.rebuild(child, self.edge_ctx(p, k, level, assoc, child))
                    if rebuilt is None:
                        ok = False
                        break
                    new_children.append(rebuilt)
                if ok:
                    new_alts.append((p, tuple(new_children)))

        deduped: list[tuple[Production, tuple[Child, ...]]] = []
        seen: set[tuple] = set()
        for p, children in new_alts:
            sig = (p.index, tuple(id(c) for c in children))
            if sig not in seen:
                seen.add(sig)
                deduped.append((p, children))
        result = ForestNode(node.symbol, node.start, node.end, tuple(deduped)) if deduped else None
        self.memo[key] = result
        return result


# --------------------------------------------------------------------------
# parse


def parse(grammar: Grammar, tokens: TokenGraph) -> ParseForest:
    """Parse the token graph; the forest holds exactly the derivations that
    survive associativity, operator-priority, and multiplicity enforcement.

    Raises NoParseError with the rightmost reached position and expected
    terminals (reason "syntax"), or with reason "constraints" when derivations
    existed but every one was inhibited.
    """
    chart = _recognize(grammar, tokens)
    accepted = any(
        chart.has(tokens.length, (p.index, len(p.rhs), tokens.start_offset))
        for p in grammar.by_lhs(grammar.start)
    )
    if not accepted:
        raise _diagnose(grammar, chart, tokens)
    raw = _build_forest(grammar, tokens, chart)
    constrained = _Constrainer(grammar).rebuild(raw, None)
    if constrained is None:
        raise NoParseError(tokens.length, (), "constraints")
    return ParseForest(constrained, grammar, tokens)


# --------------------------------------------------------------------------
# Forest passes: composition disambiguation and precedes-edge priority


def _walk_rewrite(forest: ParseForest, rewrite) -> tuple[ForestNode | None, list]:
    """Rebuild every reachable node once (shared nodes stay shared), applying
    `rewrite(node, new_alts, marks)` to produce each node's alternatives."""
    memo: dict[int, ForestNode] = {}
    marks: list = []

    def go(node: ForestNode) -> ForestNode:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        fresh = ForestNode(node.symbol, node.start, node.end)
        memo[id(node)] = fresh  # pre-register: unit cycles resolve to the new node
        new_alts = []
        for p, children in node.alts:
            new_alts.append((p, tuple(go(c) if isinstance(c, ForestNode) else c
                                      for c in children)))
        fresh.alts = rewrite(node, tuple(new_alts), marks)
        return fresh

    if forest.root is None:
        return None, marks
    return go(forest.root), marks


def disambiguate_composition(forest: ParseForest, model: LanguageModel) -> ParseForest:
    """Resolve trailing-constituent attachment between nested instances of a
    composition-constrained element (dangling else and friends)."""
    tables = _tables(forest.grammar)

    def rewrite(node: ForestNode, alts, marks):
        groups: dict[tuple, list[int]] = {}
        for i, (p, children) in enumerate(alts):
            if p.origin.construct != "composite":
                continue
            mode = tables.composition.get(p.origin.element, Composition.UNDEFINED)
            if mode is Composition.UNDEFINED:
                continue
            trailing = [k for k, r in enumerate(p.roles)
                        if r.kind == "member" and r.mode in ("opt", "opt_list", "list", "min0_list")]
            if not trailing:
                continue
            tpos = trailing[-1]
            volatile = set(tables.rec_positions[p.index]) | {tpos}
            key = (p.index, tpos,
                   tuple((c.start, c.end) for k, c in enumerate(children) if k not in volatile))
            groups.setdefault(key, []).append(i)
        drop: set[int] = set()
        for (pidx, tpos, _), members in groups.items():
            if len(members) < 2:
                continue
            p = alts[members[0]][0]
            mode = tables.composition[p.origin.element]
            metrics = {i: (alts[i][1][tpos].end - alts[i][1][tpos].start) for i in members}
            if mode is Composition.EXPLICIT:
                marks.append((p.origin.element, node.start, node.end))
                continue
            best = min(metrics.values()) if mode is Composition.EAGER else max(metrics.values())
            for i in members:
                if metrics[i] != best:
                    drop.add(i)
        if not drop:
            return alts
        return tuple(a for i, a in enumerate(alts) if i not in drop)

    root, marks = _walk_rewrite(forest, rewrite)
    return ParseForest(root, forest.grammar, forest.graph,
                       forest.explicit_marks + tuple(marks))


def filter_priority(forest: ParseForest, model: LanguageModel) -> ParseForest:
    """Remove same-span alternatives dominated through precedes edges: when two
    alternatives of one packed node derive (through unit chains) elements A and
    B with A precedes B, the B alternative is removed."""
    tables = _tables(forest.grammar)

    def alt_element(p: Production) -> ElementId | None:
        if p.origin.construct == "selection":
            return p.origin.detail
        if p.origin.construct == "composite":
            return p.origin.element
        return None

    def rewrite(node: ForestNode, alts, marks):
        elems = [alt_element(p) for p, _ in alts]
        drop: set[int] = set()
        for i, ei in enumerate(elems):
            if ei is None:
                continue
            for j, ej in enumerate(elems):
                if i == j or ej is None or ei == ej:
                    continue
                if ej in tables.precedes.get(ei, frozenset()):
                    drop.add(j)
        if not drop:
            return alts
        return tuple(a for i, a in enumerate(alts) if i not in drop)

    root, _ = _walk_rewrite(forest, rewrite)
    return ParseForest(root, forest.grammar, forest.graph, forest.explicit_marks)


# --------------------------------------------------------------------------
# Enumeration


def enumerate_parses(forest: ParseForest, limit: int) -> EnumerationResult:
    """Up to `limit` trees in deterministic order (span, then alternative
    index), plus the exact total (None + overflow for cyclic forests)."""
    if limit < 1:
        raise ValueError("limit must be positive")
    if forest.root is None:
        return EnumerationResult((), 0, False)

    def trees(node: ForestNode, active: frozenset[int]) -> Iterator[ParseTree]:
        if id(node) in active:
            return  # cut unit/epsilon cycles: only cycle-free derivations enumerate
        inner = active | {id(node)}
        for p, children in node.alts:
            yield from combos(p, node, children, 0, (), inner)

    def combos(p: Production, node: ForestNode, children: tuple[Child, ...], k: int,
               acc: tuple, active: frozenset[int]) -> Iterator[ParseTree]:
        if k == len(children):
            yield ParseTree(p, node.start, node.end, acc)
            return
        child = children[k]
        if isinstance(child, TokenCandidate):
            yield from combos(p, node, children, k + 1, acc + (child,), active)
        else:
            for sub in trees(child, active):
                yield from combos(p, node, children, k + 1, acc + (sub,), active)

    out: list[ParseTree] = []
    overflow = False
    for tree in trees(forest.root, frozenset()):
        if len(out) == limit:
            overflow = True
            break
        out.append(tree)

    total: int | None
    counts: dict[int, int | None] = {}
    on_stack: set[int] = set()
    cyclic = False

    def count(node: ForestNode) -> int:
        nonlocal cyclic
        if id(node) in counts:
            cached = counts[id(node)]
            return 0 if cached is None else cached
        if id(node) in on_stack:
            cyclic = True
            return 0
        on_stack.add(id(node))
        total_here = 0
        for _p, children in node.alts:
            prod = 1
            for c in children:
                if isinstance(c, ForestNode):
                    prod *= count(c)
            total_here += prod
        on_stack.discard(id(node))
        counts[id(node)] = total_here
        return total_here

    n = count(forest.root)
    if cyclic:
        total = None
        overflow = True
    else:
        total = n
        overflow = n > limit
    return EnumerationResult(tuple(out), total, overflow)


def require_unique(forest: ParseForest) -> ParseTree:
    """The single surviving tree, or the appropriate error.

    EXPLICIT-composition marks surface here as ExplicitViolationError; two or
    more trees raise AmbiguityError listing up to three differing spans.
    """
    if forest.explicit_marks:
        elem, s, e = forest.explicit_marks[0]
        raise ExplicitViolationError(elem, s, e)
    result = enumerate_parses(forest, 2)
    if not result.trees:
        raise NoParseError(forest.graph.length, (), "constraints")
    if len(result.trees) > 1 or result.overflow:
        spans: list[tuple[str, int, int]] = []
        seen: set[int] = set()

        def find(node: ForestNode) -> None:
            if id(node) in seen or len(spans) >= 3:
                return
            seen.add(id(node))
            if len(node.alts) > 1:
                spans.append((node.symbol.text, node.start, node.end))
                if len(spans) >= 3:
                    return
            for _p, children in node.alts:
                for c in children:
                    if isinstance(c, ForestNode):
                        find(c)

        assert forest.root is not None
        find(forest.root)
        raise AmbiguityError(result.total, tuple(spans))
    return result.trees[0]
