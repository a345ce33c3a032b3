"""Typed model instances from constraint-surviving parse trees.

`instantiate` performs structural recursion over a parse tree: selection unit
chains collapse to the concrete subtype, composite productions bind rhs
constituents to named members by position, list nonterminals flatten to
ordered lists, delimiter terminals are dropped, and basic-element leaves get
their token text converted into the declared value field.

Instances are immutable; evaluation and other semantics live outside the
model, in visitors (`visit`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Union

from .errors import (
    InternalConsistencyError,
    MissingCallbackError,
    ValueRangeError,
)
from .lexer import TokenCandidate
from .model import ElementId, LanguageModel, SemanticType
from .parser import ParseTree
from .patterns import compile_pattern

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


@dataclass(frozen=True)
class TypedValue:
    type: SemanticType
    value: Any


ChildValue = Union["InstanceNode", tuple["InstanceNode", ...]]


@dataclass(frozen=True)
class InstanceNode:
    """An instance of a concrete (never abstract) model element.

    ``children`` maps member names to a node or an ordered tuple of nodes;
    optional members that are absent are simply missing from the map, which is
    distinguishable from an empty list.
    """

    element: ElementId
    start: int
    end: int
    values: dict[str, TypedValue] = field(default_factory=dict)
    children: dict[str, ChildValue] = field(default_factory=dict)

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def convert_value(text: str, sem_type: SemanticType, pattern: str | None = None) -> TypedValue:
    """Convert matched token text into a typed value.

    Strings and characters strip one outermost quote pair when the pattern
    both begins and ends with a literal quote (the lex ``yytext+1`` idiom).
    Integers are 64-bit signed; reals are binary64; a trailing-dot real like
    ``5.`` parses as 5.0.
    """
    if sem_type is SemanticType.INTEGER:
        n = int(text, 10)
        if not INT64_MIN <= n <= INT64_MAX:
            raise ValueRangeError(f"integer literal {text} exceeds 64-bit range")
        return TypedValue(sem_type, n)
    if sem_type is SemanticType.REAL:
        return TypedValue(sem_type, float(text))
    if sem_type is SemanticType.BOOLEAN:
        return TypedValue(sem_type, text == "true")
    stripped = text
    if pattern is not None:
        first, last = compile_pattern(pattern).boundary_literals()
        if first is not None and first == last and first in ("\"", "'") and len(text) >= 2:
            stripped = text[1:-1]
    if sem_type is SemanticType.CHARACTER:
        if len(stripped) != 1:
            raise InternalConsistencyError(
                f"character value {stripped!r} is not a single code point")
        return TypedValue(sem_type, stripped)
    return TypedValue(sem_type, stripped)


def _basic_leaf(c: TokenCandidate, model: LanguageModel) -> InstanceNode:
    elem = model.elements.get(c.type)
    if elem is None:
        raise InternalConsistencyError(f"token type {c.type!r} is not a model element")
    values: dict[str, TypedValue] = {}
    if elem.value is not None:
        pattern = elem.pattern.regex if elem.pattern is not None else None
        values[elem.value.field] = convert_value(c.text, elem.value.type, pattern)
    return InstanceNode(c.type, c.start, c.end, values, {})


def instantiate(tree: ParseTree, model: LanguageModel) -> InstanceNode:
    """Build the typed instance for a parse tree derived from this model's grammar."""

    def value_node(child: Union[ParseTree, TokenCandidate]) -> InstanceNode:
        if isinstance(child, TokenCandidate):
            return _basic_leaf(child, model)
        return build(child)

    def flatten(child: Union[ParseTree, TokenCandidate]) -> list[InstanceNode]:
        if isinstance(child, TokenCandidate):
            raise InternalConsistencyError("list position holds a bare token")
        origin = child.production.origin
        if origin.construct == "list_opt":
            if child.production.is_epsilon:
                return []
            inner = _role_child(child, "content")
            return flatten(inner)
        if origin.construct != "list":
            raise InternalConsistencyError(f"expected a list derivation, got {origin.construct}")
        out: list[InstanceNode] = []
        node: Union[ParseTree, TokenCandidate] = child
        while True:
            assert isinstance(node, ParseTree)
            tail: Union[ParseTree, TokenCandidate, None] = None
            for role, sub in zip(node.production.roles, node.children):
                if role.kind == "item":
                    out.append(value_node(sub))
                elif role.kind == "tail":
                    tail = sub
            if tail is None:
                return out
            node = tail

    def _role_child(t: ParseTree, kind: str) -> Union[ParseTree, TokenCandidate]:
        for role, sub in zip(t.production.roles, t.children):
            if role.kind == kind:
                return sub
        raise InternalConsistencyError(f"production {t.production.lhs.text} lacks a {kind} role")

    def build(t: ParseTree) -> InstanceNode:
        origin = t.production.origin
        if origin.construct == "selection":
            return value_node(_role_child(t, "sub"))
        if origin.construct != "composite":
            raise InternalConsistencyError(
                f"cannot instantiate a {origin.construct} derivation directly")
        children: dict[str, ChildValue] = {}
        for role, sub in zip(t.production.roles, t.children):
            if role.kind != "member":
                continue
            assert role.member is not None
            if role.mode == "scalar":
                children[role.member] = value_node(sub)
            elif role.mode == "list":
                children[role.member] = tuple(flatten(sub))
            elif role.mode == "min0_list":
                children[role.member] = tuple(flatten(sub))
            elif role.mode in ("opt", "opt_list"):
                assert isinstance(sub, ParseTree)
                if sub.production.is_epsilon:
                    continue  # absent, distinguishable from an empty list
                content = _role_child(sub, "content")
                if role.mode == "opt":
                    children[role.member] = value_node(content)
                else:
                    children[role.member] = tuple(flatten(content))
        return InstanceNode(origin.element, t.start, t.end, {}, children)

    return build(tree)


# --------------------------------------------------------------------------
# Visitors

Callback = Callable[[InstanceNode, dict[str, Any]], Any]


def visit(node: InstanceNode, callbacks: Mapping[ElementId, Callback]) -> Any:
    """Post-order traversal delivering children results (member order; lists as
    tuples) to each element's callback.

    Coverage is checked up front: an incomplete table raises
    MissingCallbackError before any callback runs.
    """

    def check(n: InstanceNode) -> None:
        if n.element not in callbacks:
            raise MissingCallbackError(n.element)
        for child in n.children.values():
            if isinstance(child, tuple):
                for c in child:
                    check(c)
            else:
                check(child)

    check(node)

    def go(n: InstanceNode) -> Any:
        results: dict[str, Any] = {}
        for name, child in n.children.items():
            if isinstance(child, tuple):
                results[name] = tuple(go(c) for c in child)
            else:
                results[name] = go(child)
        return callbacks[n.element](n, results)

    return go(node)


# --------------------------------------------------------------------------
# Serialization


def instance_to_dict(node: InstanceNode) -> dict[str, Any]:
    """JSON-ready dict with deterministic key order: element, span, values, children."""
    values = {name: tv.value for name, tv in node.values.items()}
    children: dict[str, Any] = {}
    for name, child in node.children.items():
        if isinstance(child, tuple):
            children[name] = [instance_to_dict(c) for c in child]
        else:
            children[name] = instance_to_dict(child)
    return {"element": node.element, "span": [node.start, node.end],
            "values": values, "children": children}
