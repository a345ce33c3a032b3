"""Independent test oracles.

Nothing here shares code with the implementation:

* `re_longest_match` checks the NFA engine against Python's `re.fullmatch`
  over every prefix length;
* `cyk_trees` enumerates all parse trees of a grammar over a token chain via
  binarization plus a bottom-up CYK derivability table;
* `ref_eval` is a precedence-climbing evaluator for the calculator language.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


# --------------------------------------------------------------------------
# Regex oracle


def re_longest_match(pattern: str, text: str, pos: int) -> int | None:
    """Longest anchored match by brute force over all prefix lengths."""
    compiled = re.compile(pattern)
    best = None
    for length in range(0, len(text) - pos + 1):
        if compiled.fullmatch(text, pos, pos + length):
            best = length
    return best


# --------------------------------------------------------------------------
# CYK oracle

# Grammar view: productions as (tag, lhs, rhs) where rhs entries are
# ("nt", name) or ("t", token_type). `tag` identifies the original production.

Sym = tuple[str, str]


@dataclass(frozen=True)
class OracleTree:
    tag: object  # original production tag; None for token leaves
    token: tuple[int, str] | None  # (chain index, token type) for leaves
    children: tuple["OracleTree", ...] = ()


def _binarize(productions):
    """Split long right-hand sides with synthetic continuation symbols."""
    out = []
    fresh = 0
    for tag, lhs, rhs in productions:
        if len(rhs) <= 2:
            out.append((tag, lhs, tuple(rhs), True))
            continue
        prev = lhs
        first = True
        rest = list(rhs)
        while len(rest) > 2:
            fresh += 1
            cont = f"__bin{fresh}"
            out.append((tag if first else None, prev, (rest[0], ("nt", cont)), first))
            prev = cont
            rest = rest[1:]
            first = False
        out.append((None, prev, tuple(rest), False))
    return out


def cyk_trees(productions, start: str, tokens: list[str], max_trees: int = 100000):
    """All parse trees of the chain `tokens`, as OracleTree values.

    Bottom-up derivability (CYK over spans with unit/epsilon closure), then
    exhaustive top-down expansion of the table. Grammars are assumed free of
    unit/epsilon cycles.
    """
    binarized = _binarize(productions)
    n = len(tokens)
    by_lhs: dict[str, list] = {}
    for entry in binarized:
        by_lhs.setdefault(entry[1], []).append(entry)

    derivable: set[tuple[str, int, int]] = set()

    def terminal_at(sym: Sym, i: int, j: int) -> bool:
        return sym[0] == "t" and j == i + 1 and 0 <= i < n and tokens[i] == sym[1]

    def sym_derives(sym: Sym, i: int, j: int) -> bool:
        if sym[0] == "t":
            return terminal_at(sym, i, j)
        return (sym[1], i, j) in derivable

    for span in range(0, n + 1):
        for i in range(0, n - span + 1):
            j = i + span
            changed = True
            while changed:
                changed = False
                for _tag, lhs, rhs, _top in binarized:
                    if (lhs, i, j) in derivable:
                        continue
                    ok = False
                    if len(rhs) == 0:
                        ok = i == j
                    elif len(rhs) == 1:
                        ok = sym_derives(rhs[0], i, j)
                    else:
                        ok = any(
                            sym_derives(rhs[0], i, k) and sym_derives(rhs[1], k, j)
                            for k in range(i, j + 1)
                        )
                    if ok:
                        derivable.add((lhs, i, j))
                        changed = True

    def expand_sym(sym: Sym, i: int, j: int, active) -> list:
        if sym[0] == "t":
            if terminal_at(sym, i, j):
                return [OracleTree(None, (i, sym[1]))]
            return []
        return expand_nt(sym[1], i, j, active)

    def expand_nt(name: str, i: int, j: int, active) -> list:
        if (name, i, j) not in derivable or (name, i, j) in active:
            return []
        active = active | {(name, i, j)}
        results = []
        for tag, lhs, rhs, top in by_lhs.get(name, ()):
            if len(rhs) == 0:
                if i == j:
                    results.append((tag, top, ()))
                continue
            if len(rhs) == 1:
                for sub in expand_sym(rhs[0], i, j, active):
                    results.append((tag, top, (sub,)))
                continue
            for k in range(i, j + 1):
                for left in expand_sym(rhs[0], i, k, active):
                    for right in expand_sym(rhs[1], k, j, active):
                        results.append((tag, top, (left, right)))
        out = []
        for tag, top, children in results:
            # splice synthetic continuation nodes back into a flat child list
            flat: list[OracleTree] = []
            queue = list(children)
            while queue:
                c = queue.pop(0)
                if c.tag is None and c.token is None:
                    queue = list(c.children) + queue
                else:
                    flat.append(c)
            if top:
                out.append(OracleTree(tag, None, tuple(flat)))
            else:
                out.append(OracleTree(None, None, tuple(flat)))  # continuation
            if len(out) > max_trees:
                raise RuntimeError("oracle tree explosion")
        return out

    return expand_nt(start, 0, n, frozenset())


def oracle_normal_form(tree: OracleTree):
    if tree.token is not None:
        return ("tok", tree.token[0], tree.token[1])
    return ("prod", tree.tag, tuple(oracle_normal_form(c) for c in tree.children))


# --------------------------------------------------------------------------
# Reference infix arithmetic (precedence climbing)


class RefSyntaxError(Exception):
    pass


def _ref_tokens(text: str):
    i, n = 0, len(text)
    out = []
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                out.append(("real", text[i:j]))
            else:
                out.append(("int", text[i:j]))
            i = j
            continue
        if ch in "+-*/()":
            out.append((ch, ch))
            i += 1
            continue
        raise RefSyntaxError(f"bad character {ch!r}")
    return out


def ref_eval(text: str) -> float:
    """Standard infix semantics: unary +/- bind tightest, then * /, then + -;
    binary operators associate left to right."""
    tokens = _ref_tokens(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def atom() -> float:
        kind = peek()
        if kind == "int":
            return float(int(take()[1]))
        if kind == "real":
            return float(take()[1])
        if kind == "(":
            take()
            v = expr()
            if peek() != ")":
                raise RefSyntaxError("missing )")
            take()
            return v
        raise RefSyntaxError(f"unexpected {kind}")

    def unary() -> float:
        if peek() == "+":
            take()
            return unary()
        if peek() == "-":
            take()
            return -unary()
        return atom()

    def term() -> float:
        v = unary()
        while peek() in ("*", "/"):
            op = take()[0]
            rhs = unary()
            v = v * rhs if op == "*" else v / rhs
        return v

    def expr() -> float:
        v = term()
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    v = expr()
    if pos != len(tokens):
        raise RefSyntaxError("trailing input")
    return v


def ref_is_integer_only(text: str) -> bool:
    return not any(kind == "real" for kind, _ in _ref_tokens(text))
