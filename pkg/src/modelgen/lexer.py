"""Ambiguity-tolerant scanning.

Token types come from the model's basic elements (explicit patterns, or
implicit numeric/boolean patterns) plus one type per distinct delimiter regex
in the synthesized grammar. Scanning keeps, for every reachable offset and
every token type, the longest match of that type at that offset, producing a
DAG of possibly overlapping candidates instead of a single token chain.
Same-span candidates are thinned by declared lexical precedence afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import ScanError
from .grammar import Grammar
from .model import ElementId, Kind, LanguageModel, SemanticType
from .patterns import CompiledPattern, MatcherRegistry, compile_pattern

IMPLICIT_PATTERNS = {
    SemanticType.INTEGER: r"[0-9]+",
    SemanticType.REAL: r"[0-9]+\.[0-9]*",
    SemanticType.BOOLEAN: r"true|false",
}


@dataclass(frozen=True)
class TokenType:
    """A compiled token definition.

    ``id`` is the element id for basic elements and ``lit:<regex>`` for
    delimiter terminals. Exactly one of ``pattern`` / ``matcher`` is set.
    """

    id: str
    source: str  # "basic" | "delimiter" | "implicit-value"
    element: ElementId | None
    pattern: CompiledPattern | None
    matcher: tuple[str, str] | None  # (registry name, args)
    priority_value: int | None = None
    precedes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TokenCandidate:
    type: str
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class TokenGraph:
    """DAG of token candidates: c1 -> c2 iff c2.start == skip(c1.end)."""

    candidates: tuple[TokenCandidate, ...]
    start_offset: int  # skip(0)
    length: int
    by_start: dict[int, tuple[TokenCandidate, ...]]
    skip_after: dict[int, int]  # candidate end -> next anchor offset
    starts: tuple[TokenCandidate, ...]
    accepting: frozenset[TokenCandidate]

    def candidate_at(self, offset: int, type_id: str) -> TokenCandidate | None:
        for c in self.by_start.get(offset, ()):
            if c.type == type_id:
                return c
        return None

    def successors(self, c: TokenCandidate) -> tuple[TokenCandidate, ...]:
        return self.by_start.get(self.skip_after.get(c.end, -1), ())

    def edges(self) -> Iterable[tuple[TokenCandidate, TokenCandidate]]:
        for c in self.candidates:
            for d in self.successors(c):
                yield c, d


def compile_token_types(model: LanguageModel, grammar: Grammar,
                        registry: MatcherRegistry | None = None) -> list[TokenType]:
    """One TokenType per basic element plus one per distinct delimiter regex.

    Implicit patterns cover numeric/boolean value fields with no @Pattern.
    Custom matcher names are resolved against the registry here (raising
    UnknownMatcherError), though matching itself happens during scan.
    """
    registry = registry or MatcherRegistry()
    out: list[TokenType] = []
    basic_ids = {eid for eid, e in model.elements.items() if e.kind is Kind.BASIC}
    for eid, elem in model.elements.items():
        if elem.kind is not Kind.BASIC:
            continue
        precedes = frozenset(t for t in elem.constraints.precedes if t in basic_ids)
        prio = elem.constraints.priority_value
        if elem.pattern is not None and elem.pattern.matcher is not None:
            registry.get(elem.pattern.matcher)  # fail fast on unknown names
            out.append(TokenType(eid, "basic", eid, None,
                                 (elem.pattern.matcher, elem.pattern.args), prio, precedes))
            continue
        if elem.pattern is not None:
            source = "basic"
            regex = elem.pattern.regex
        else:
            assert elem.value is not None
            source = "implicit-value"
            regex = IMPLICIT_PATTERNS[elem.value.type]
        out.append(TokenType(eid, source, eid, compile_pattern(regex), None, prio, precedes))
    seen: set[str] = set()
    for p in grammar.productions:
        for sym in p.rhs:
            if sym.kind == "lit" and sym.text not in seen:
                seen.add(sym.text)
                out.append(TokenType(f"lit:{sym.text}", "delimiter", None,
                                     compile_pattern(sym.text), None, None, frozenset()))
    return out


def longest_match(token_type: TokenType, text: str, position: int,
                  registry: MatcherRegistry | None = None) -> int | None:
    """Greatest match length of the type's pattern anchored at position."""
    if token_type.matcher is not None:
        name, args = token_type.matcher
        fn = (registry or MatcherRegistry()).get(name)
        length = fn(text, position, args)
        if length is not None and (length <= 0 or position + length > len(text)):
            raise ValueError(f"matcher {name!r} returned invalid length {length}")
        return length
    assert token_type.pattern is not None
    return token_type.pattern.longest_match(text, position)


def scan(text: str, types: list[TokenType], skip: str = r"[ \t\r\n]+",
         registry: MatcherRegistry | None = None) -> TokenGraph:
    """Scan into a token graph.

    Raises ScanError only when no tokenization path spans the input; a branch
    of the DAG may die without error as long as some path reaches the end.
    Fully skippable input yields an empty graph (nullable grammars may still
    parse it downstream).
    """
    skip_pattern = compile_pattern(skip)

    def skip_at(pos: int) -> int:
        length = skip_pattern.longest_match(text, pos)
        return pos + length if length else pos

    n = len(text)
    p0 = skip_at(0)
    by_start: dict[int, tuple[TokenCandidate, ...]] = {}
    skip_after: dict[int, int] = {}
    candidates: list[TokenCandidate] = []
    dead: list[int] = []
    queue = [p0] if p0 < n else []
    visited: set[int] = set(queue)
    while queue:
        offset = queue.pop(0)
        found: list[TokenCandidate] = []
        for t in types:
            length = longest_match(t, text, offset, registry)
            if length:
                found.append(TokenCandidate(t.id, offset, offset + length, text[offset:offset + length]))
        if not found:
            dead.append(offset)
            continue
        by_start[offset] = tuple(found)
        candidates.extend(found)
        for c in found:
            nxt = skip_after.get(c.end)
            if nxt is None:
                nxt = skip_at(c.end)
                skip_after[c.end] = nxt
            if nxt < n and nxt not in visited:
                visited.add(nxt)
                queue.append(nxt)
    accepting = frozenset(c for c in candidates if skip_after[c.end] == n)
    if p0 < n and not accepting:
        at = max(dead) if dead else max(visited)
        raise ScanError(at, text[at:at + 20])
    starts = by_start.get(p0, ())
    return TokenGraph(tuple(candidates), p0, n, by_start, skip_after, tuple(starts), accepting)


def apply_lexical_precedence(graph: TokenGraph, types: list[TokenType]) -> TokenGraph:
    """Remove same-span candidates dominated by lexical precedence.

    Type A dominates B when B is in A's precedes set or both carry priority
    values and A's is strictly smaller. Only removes candidates; spans never
    change. Precedes edges apply among basic elements only (enforced at
    compile time); absent priority values never compare.
    """
    by_id = {t.id: t for t in types}

    def beats(a: str, b: str) -> bool:
        ta, tb = by_id.get(a), by_id.get(b)
        if ta is None or tb is None:
            return False
        if tb.id in ta.precedes:
            return True
        return (ta.priority_value is not None and tb.priority_value is not None
                and ta.priority_value < tb.priority_value)

    spans: dict[tuple[int, int], list[TokenCandidate]] = {}
    for c in graph.candidates:
        spans.setdefault((c.start, c.end), []).append(c)
    removed: set[TokenCandidate] = set()
    for group in spans.values():
        for c in group:
            for d in group:
                if c is not d and beats(c.type, d.type):
                    removed.add(d)
    if not removed:
        return graph
    kept = tuple(c for c in graph.candidates if c not in removed)
    by_start = {}
    for c in kept:
        by_start.setdefault(c.start, []).append(c)
    accepting = frozenset(c for c in kept if graph.skip_after[c.end] == graph.length)
    return TokenGraph(
        kept, graph.start_offset, graph.length,
        {k: tuple(v) for k, v in by_start.items()}, dict(graph.skip_after),
        tuple(by_start.get(graph.start_offset, ())), accepting)
