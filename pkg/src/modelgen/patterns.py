"""Pattern matching for token definitions.

Implements the supported regex subset: literals, escapes, character classes
with ranges and negation, ``.``, alternation, grouping, ``*``, ``+``, ``?``,
and bounded repetition ``{m,n}``. Matching is always anchored at a position
and longest-match: `longest_match` returns the greatest length such that the
prefix starting at the position matches the whole pattern. No backreferences,
no lookaround.

Compilation goes pattern text -> small AST -> Thompson NFA; matching simulates
the NFA over the input, remembering the last offset at which an accepting
state was live. This keeps "longest match per type" exact even for patterns
like ``a|ab`` where backtracking engines stop early.

Custom matchers (black-box token recognizers) are resolved through a
`MatcherRegistry`; they must be deterministic and return positive lengths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

from .errors import RegexCompileError, UnknownMatcherError

# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Lit:
    ch: str


@dataclass(frozen=True)
class Dot:
    pass


@dataclass(frozen=True)
class Cls:
    ranges: tuple[tuple[int, int], ...]  # inclusive codepoint ranges, sorted
    negated: bool

    def test(self, ch: str) -> bool:
        cp = ord(ch)
        hit = any(lo <= cp <= hi for lo, hi in self.ranges)
        return hit != self.negated


@dataclass(frozen=True)
class Seq:
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Alt:
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Rep:
    node: "Node"
    min: int
    max: int | None  # None = unbounded


Node = Union[Lit, Dot, Cls, Seq, Alt, Rep]

_ESCAPE_CONTROL = {"n": "\n", "t": "\t", "r": "\r", "f": "\f", "v": "\v", "0": "\0", "a": "\a"}
_ESCAPE_CLASSES = {
    "d": Cls(((48, 57),), False),
    "D": Cls(((48, 57),), True),
    "w": Cls(((48, 57), (65, 90), (95, 95), (97, 122)), False),
    "W": Cls(((48, 57), (65, 90), (95, 95), (97, 122)), True),
    "s": Cls(((9, 13), (32, 32)), False),
    "S": Cls(((9, 13), (32, 32)), True),
}


class _Parser:
    def __init__(self, pattern: str):
        self.pattern = pattern
        self.pos = 0

    def error(self, reason: str) -> RegexCompileError:
        return RegexCompileError(self.pattern, self.pos, reason)

    def peek(self) -> str | None:
        return self.pattern[self.pos] if self.pos < len(self.pattern) else None

    def take(self) -> str:
        ch = self.pattern[self.pos]
        self.pos += 1
        return ch

    def parse(self) -> Node:
        node = self.alternation()
        if self.pos != len(self.pattern):
            raise self.error(f"unexpected {self.pattern[self.pos]!r}")
        return node

    def alternation(self) -> Node:
        parts = [self.sequence()]
        while self.peek() == "|":
            self.take()
            parts.append(self.sequence())
        return parts[0] if len(parts) == 1 else Alt(tuple(parts))

    def sequence(self) -> Node:
        parts: list[Node] = []
        while True:
            ch = self.peek()
            if ch is None or ch in "|)":
                break
            parts.append(self.repeatable())
        if len(parts) == 1:
            return parts[0]
        return Seq(tuple(parts))

    def repeatable(self) -> Node:
        node = self.atom()
        while True:
            ch = self.peek()
            if ch == "*":
                self.take()
                node = Rep(node, 0, None)
            elif ch == "+":
                self.take()
                node = Rep(node, 1, None)
            elif ch == "?":
                self.take()
                node = Rep(node, 0, 1)
            elif ch == "{":
                bounds = self._try_bounds()
                if bounds is None:
                    break  # literal '{' handled by atom on the next loop
                node = Rep(node, bounds[0], bounds[1])
            else:
                break
        return node

    def _try_bounds(self) -> tuple[int, int | None] | None:
        # "{m}", "{m,}", "{m,n}"; anything else leaves '{' as a literal.
        save = self.pos
        self.take()
        digits = ""
        while self.peek() is not None and self.peek().isdigit():
            digits += self.take()
        if not digits:
            self.pos = save
            return None
        lo = int(digits)
        hi: int | None
        if self.peek() == "}":
            self.take()
            hi = lo
        elif self.peek() == ",":
            self.take()
            digits2 = ""
            while self.peek() is not None and self.peek().isdigit():
                digits2 += self.take()
            if self.peek() != "}":
                self.pos = save
                return None
            self.take()
            hi = int(digits2) if digits2 else None
        else:
            self.pos = save
            return None
        if hi is not None and hi < lo:
            self.pos = save
            raise self.error(f"bad repetition bounds {{{lo},{hi}}}")
        return lo, hi

    def atom(self) -> Node:
        ch = self.peek()
        if ch is None:
            raise self.error("pattern ended unexpectedly")
        if ch == "(":
            self.take()
            node = self.alternation()
            if self.peek() != ")":
                raise self.error("unclosed group")
            self.take()
            return node
        if ch == "[":
            return self.char_class()
        if ch == ".":
            self.take()
            return Dot()
        if ch == "\\":
            return self.escape()
        if ch in "*+?":
            raise self.error(f"quantifier {ch!r} with nothing to repeat")
        if ch == ")":
            raise self.error("unmatched ')'")
        self.take()
        return Lit(ch)

    def escape(self) -> Node:
        self.take()
        ch = self.peek()
        if ch is None:
            raise self.error("dangling backslash")
        self.take()
        if ch in _ESCAPE_CONTROL:
            return Lit(_ESCAPE_CONTROL[ch])
        if ch in _ESCAPE_CLASSES:
            return _ESCAPE_CLASSES[ch]
        if ch.isalnum():
            raise self.error(f"unsupported escape \\{ch}")
        return Lit(ch)

    def char_class(self) -> Node:
        self.take()  # '['
        negated = False
        if self.peek() == "^":
            negated = True
            self.take()
        items: list[tuple[int, int]] = []
        first = True
        while True:
            ch = self.peek()
            if ch is None:
                raise self.error("unclosed character class")
            if ch == "]" and not first:
                self.take()
                break
            first = False
            lo = self._class_char()
            if self.peek() == "-" and self.pos + 1 < len(self.pattern) and self.pattern[self.pos + 1] != "]":
                self.take()
                hi = self._class_char()
                if hi < lo:
                    raise self.error("reversed range in character class")
                items.append((lo, hi))
            else:
                items.append((lo, lo))
        if not items:
            raise self.error("empty character class")
        return Cls(tuple(sorted(items)), negated)

    def _class_char(self) -> int:
        ch = self.take()
        if ch != "\\":
            return ord(ch)
        nxt = self.peek()
        if nxt is None:
            raise self.error("dangling backslash in character class")
        self.take()
        if nxt in _ESCAPE_CONTROL:
            return ord(_ESCAPE_CONTROL[nxt])
        if nxt.isalnum():
            raise self.error(f"unsupported escape \\{nxt} in character class")
        return ord(nxt)


# --------------------------------------------------------------------------
# NFA


class _Nfa:
    """Thompson NFA; state 0 is the start, `accept` the single final state."""

    def __init__(self) -> None:
        self.eps: list[list[int]] = []
        self.chars: list[list[tuple[object, int]]] = []  # (test, target)
        self.accept = -1

    def new_state(self) -> int:
        self.eps.append([])
        self.chars.append([])
        return len(self.eps) - 1

    def closure(self, states: set[int]) -> frozenset[int]:
        stack = list(states)
        seen = set(states)
        while stack:
            s = stack.pop()
            for t in self.eps[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


def _test_of(node: Node) -> Callable[[str], bool]:
    if isinstance(node, Lit):
        c = node.ch
        return lambda ch: ch == c
    if isinstance(node, Dot):
        return lambda ch: ch != "\n"
    if isinstance(node, Cls):
        return node.test
    raise AssertionError(node)


def _build(nfa: _Nfa, node: Node, entry: int) -> int:
    if isinstance(node, (Lit, Dot, Cls)):
        out = nfa.new_state()
        nfa.chars[entry].append((_test_of(node), out))
        return out
    if isinstance(node, Seq):
        cur = entry
        for part in node.parts:
            cur = _build(nfa, part, cur)
        return cur
    if isinstance(node, Alt):
        out = nfa.new_state()
        for part in node.parts:
            branch = nfa.new_state()
            nfa.eps[entry].append(branch)
            end = _build(nfa, part, branch)
            nfa.eps[end].append(out)
        return out
    if isinstance(node, Rep):
        cur = entry
        for _ in range(node.min):
            cur = _build(nfa, node.node, cur)
        if node.max is None:
            hub = nfa.new_state()
            nfa.eps[cur].append(hub)
            end = _build(nfa, node.node, hub)
            nfa.eps[end].append(hub)
            return hub
        for _ in range(node.max - node.min):
            nxt = _build(nfa, node.node, cur)
            nfa.eps[cur].append(nxt)
            cur = nxt
        return cur
    raise AssertionError(node)


class CompiledPattern:
    """A compiled regex-subset pattern with anchored longest-match semantics."""

    def __init__(self, source: str, ast: Node):
        self.source = source
        self.ast = ast
        self._nfa = _Nfa()
        start = self._nfa.new_state()
        self._nfa.accept = _build(self._nfa, ast, start)
        self._start_closure = self._nfa.closure({start})
        self._step_cache: dict[tuple[frozenset[int], str], frozenset[int]] = {}

    def longest_match(self, text: str, pos: int) -> int | None:
        """Greatest length such that text[pos:pos+length] matches; None if no match."""
        nfa = self._nfa
        current = self._start_closure
        best = 0 if nfa.accept in current else None
        i = pos
        n = len(text)
        cache = self._step_cache
        while i < n and current:
            ch = text[i]
            key = (current, ch)
            nxt = cache.get(key)
            if nxt is None:
                targets: set[int] = set()
                for s in current:
                    for test, t in nfa.chars[s]:
                        if test(ch):
                            targets.add(t)
                nxt = nfa.closure(targets) if targets else frozenset()
                cache[key] = nxt
            current = nxt
            i += 1
            if nfa.accept in current:
                best = i - pos
        return best

    def matches_empty(self) -> bool:
        return self._nfa.accept in self._start_closure

    def literal_text(self) -> str | None:
        """The exact string this pattern matches, when it is a pure literal."""

        def walk(node: Node) -> str | None:
            if isinstance(node, Lit):
                return node.ch
            if isinstance(node, Seq):
                parts = [walk(p) for p in node.parts]
                if any(p is None for p in parts):
                    return None
                return "".join(parts)  # type: ignore[arg-type]
            return None

        return walk(self.ast)

    def boundary_literals(self) -> tuple[str | None, str | None]:
        """First and last literal characters, when statically known (for quote stripping)."""

        def first(node: Node) -> str | None:
            if isinstance(node, Lit):
                return node.ch
            if isinstance(node, Seq):
                return first(node.parts[0]) if node.parts else None
            if isinstance(node, Rep) and node.min >= 1:
                return first(node.node)
            return None

        def last(node: Node) -> str | None:
            if isinstance(node, Lit):
                return node.ch
            if isinstance(node, Seq):
                return last(node.parts[-1]) if node.parts else None
            if isinstance(node, Rep) and node.min >= 1:
                return last(node.node)
            return None

        return first(self.ast), last(self.ast)

    def __repr__(self) -> str:
        return f"CompiledPattern({self.source!r})"


@lru_cache(maxsize=None)
def compile_pattern(pattern: str) -> CompiledPattern:
    """Compile a pattern, raising RegexCompileError outside the supported subset."""
    return CompiledPattern(pattern, _Parser(pattern).parse())


# --------------------------------------------------------------------------
# Custom matchers

MatcherFn = Callable[[str, int, str], Optional[int]]


class MatcherRegistry:
    """Named black-box token recognizers.

    A matcher is called as ``fn(text, position, args)`` and returns a match
    length (> 0) or None. Matchers must be deterministic and stateless (or
    internally synchronized); they are shared across concurrent scans.
    """

    def __init__(self) -> None:
        self._matchers: dict[str, MatcherFn] = {}

    def register(self, name: str, fn: MatcherFn) -> None:
        self._matchers[name] = fn

    def get(self, name: str) -> MatcherFn:
        try:
            return self._matchers[name]
        except KeyError:
            raise UnknownMatcherError(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._matchers


def default_registry() -> MatcherRegistry:
    """The registry the CLI runs with: empty, so documents cannot name arbitrary code."""
    return MatcherRegistry()
