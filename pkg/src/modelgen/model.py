"""Abstract syntax models and their concrete-syntax constraint annotations.

A `LanguageModel` is the single source of truth: element declarations, subtype
links, members, and the declarative constraints (patterns, delimiters,
cardinalities, evaluation order) that define the mapping onto a concrete
grammar. Models come from a JSON document (`load_model`) or from the builder
helpers (`basic`, `composite`, `abstract`, `member`, `language_model`).

All model types are immutable after construction and safe to share across
concurrent tasks; `validate_model` and `resolve_hierarchy` are pure.
"""

from __future__ import annotations

import json
import re as _id_re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Mapping, Optional

from .errors import DocumentSyntaxError, HierarchyError, RegexCompileError, SchemaError
from .patterns import compile_pattern

ElementId = str

IDENTIFIER_RE = _id_re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

DEFAULT_SKIP = r"[ \t\r\n]+"

UNBOUNDED: Optional[int] = None


class SemanticType(Enum):
    INTEGER = "integer"
    REAL = "real"
    BOOLEAN = "boolean"
    STRING = "string"
    CHARACTER = "character"


class Associativity(Enum):
    UNDEFINED = "UNDEFINED"
    LEFT_TO_RIGHT = "LEFT_TO_RIGHT"
    RIGHT_TO_LEFT = "RIGHT_TO_LEFT"
    NON_ASSOCIATIVE = "NON_ASSOCIATIVE"


class Composition(Enum):
    UNDEFINED = "UNDEFINED"
    EAGER = "EAGER"
    LAZY = "LAZY"
    EXPLICIT = "EXPLICIT"


class Kind(Enum):
    BASIC = "basic"
    COMPOSITE = "composite"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class PatternSpec:
    """Token pattern: a regex in the supported subset, or a named custom matcher."""

    regex: str | None = None
    matcher: str | None = None
    args: str = ""

    def __post_init__(self) -> None:
        if (self.regex is None) == (self.matcher is None):
            raise ValueError("PatternSpec needs exactly one of regex / matcher")


@dataclass(frozen=True)
class ValueSpec:
    field: str
    type: SemanticType


@dataclass(frozen=True)
class Cardinality:
    """min/max multiplicity plus the @Optional flag.

    Scalar member: min=1, max=1, optional=False. max=None means unbounded.
    """

    min: int = 1
    max: int | None = 1
    optional: bool = False

    @property
    def is_list(self) -> bool:
        return self.max is None or self.max > 1


SCALAR = Cardinality()


@dataclass(frozen=True)
class ConstraintSet:
    associativity: Associativity = Associativity.UNDEFINED
    composition: Composition = Composition.UNDEFINED
    priority_value: int | None = None
    precedes: tuple[ElementId, ...] = ()


@dataclass(frozen=True)
class MemberDecl:
    """A named, ordered constituent of a composite element.

    ``separators=None`` inherits the element's default separators; an empty
    tuple explicitly disables separators for this repetition.
    """

    name: str
    element: ElementId
    cardinality: Cardinality = SCALAR
    prefixes: tuple[str, ...] = ()
    suffixes: tuple[str, ...] = ()
    separators: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ElementDecl:
    id: ElementId
    kind: Kind
    supertype: ElementId | None = None
    pattern: PatternSpec | None = None
    value: ValueSpec | None = None
    members: tuple[MemberDecl, ...] = ()
    constraints: ConstraintSet = ConstraintSet()
    prefixes: tuple[str, ...] = ()
    suffixes: tuple[str, ...] = ()
    default_separators: tuple[str, ...] = ()


@dataclass(frozen=True)
class LanguageModel:
    root: ElementId
    elements: dict[ElementId, ElementDecl]
    skip: str = DEFAULT_SKIP


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class TypeHierarchy:
    """Resolved subtype structure: direct subtypes, transitive closure, supertype chains."""

    direct: dict[ElementId, tuple[ElementId, ...]]
    transitive: dict[ElementId, frozenset[ElementId]]
    chains: dict[ElementId, tuple[ElementId, ...]]  # nearest supertype first

    def supertypes(self, element: ElementId) -> tuple[ElementId, ...]:
        return self.chains.get(element, ())

    def direct_subtypes(self, element: ElementId) -> tuple[ElementId, ...]:
        return self.direct.get(element, ())

    def concrete_family(self, element: ElementId) -> frozenset[ElementId]:
        return self.transitive.get(element, frozenset()) | {element}


# --------------------------------------------------------------------------
# Builder helpers


def member(
    name: str,
    element: ElementId,
    *,
    min: int = 1,
    max: int | None = 1,
    optional: bool = False,
    prefixes: Iterable[str] = (),
    suffixes: Iterable[str] = (),
    separators: Iterable[str] | None = None,
) -> MemberDecl:
    seps = None if separators is None else tuple(separators)
    return MemberDecl(name, element, Cardinality(min, max, optional),
                      tuple(prefixes), tuple(suffixes), seps)


def basic(
    id: ElementId,
    *,
    extends: ElementId | None = None,
    pattern: str | None = None,
    matcher: tuple[str, str] | None = None,
    value: tuple[str, SemanticType] | None = None,
    constraints: ConstraintSet = ConstraintSet(),
    prefixes: Iterable[str] = (),
    suffixes: Iterable[str] = (),
    default_separators: Iterable[str] = (),
) -> ElementDecl:
    spec: PatternSpec | None = None
    if pattern is not None:
        spec = PatternSpec(regex=pattern)
    elif matcher is not None:
        spec = PatternSpec(matcher=matcher[0], args=matcher[1])
    val = ValueSpec(value[0], value[1]) if value else None
    return ElementDecl(id, Kind.BASIC, extends, spec, val, (), constraints,
                       tuple(prefixes), tuple(suffixes), tuple(default_separators))


def composite(
    id: ElementId,
    members: Iterable[MemberDecl],
    *,
    extends: ElementId | None = None,
    constraints: ConstraintSet = ConstraintSet(),
    prefixes: Iterable[str] = (),
    suffixes: Iterable[str] = (),
    default_separators: Iterable[str] = (),
) -> ElementDecl:
    return ElementDecl(id, Kind.COMPOSITE, extends, None, None, tuple(members),
                       constraints, tuple(prefixes), tuple(suffixes), tuple(default_separators))


def abstract(
    id: ElementId,
    *,
    extends: ElementId | None = None,
    constraints: ConstraintSet = ConstraintSet(),
    prefixes: Iterable[str] = (),
    suffixes: Iterable[str] = (),
    default_separators: Iterable[str] = (),
) -> ElementDecl:
    return ElementDecl(id, Kind.ABSTRACT, extends, None, None, (), constraints,
                       tuple(prefixes), tuple(suffixes), tuple(default_separators))


def language_model(root: ElementId, elements: Iterable[ElementDecl], *,
                   skip: str = DEFAULT_SKIP) -> LanguageModel:
    return LanguageModel(root, {e.id: e for e in elements}, skip)


# --------------------------------------------------------------------------
# Document loading

_ELEMENT_KEYS = {"extends", "kind", "pattern", "value", "members", "prefix",
                 "suffix", "separator", "associativity", "composition", "priority"}
_MEMBER_KEYS = {"name", "element", "min", "max", "optional", "prefix", "suffix", "separator"}
_TOP_KEYS = {"root", "elements", "skip"}


def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise SchemaError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _expect(obj: Any, kind: type, path: str, what: str) -> Any:
    if not isinstance(obj, kind):
        raise SchemaError(f"expected {what}, got {type(obj).__name__}", path)
    return obj


def _check_keys(obj: Mapping[str, Any], allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"unknown key(s): {', '.join(sorted(unknown))}", path)


def _string_list(obj: Any, path: str) -> tuple[str, ...]:
    _expect(obj, list, path, "an array of strings")
    for i, item in enumerate(obj):
        _expect(item, str, f"{path}[{i}]", "a string")
    return tuple(obj)


def _parse_pattern(obj: Any, path: str) -> PatternSpec:
    _expect(obj, dict, path, "an object")
    if "regex" in obj:
        _check_keys(obj, {"regex"}, path)
        return PatternSpec(regex=_expect(obj["regex"], str, f"{path}.regex", "a string"))
    if "matcher" in obj:
        _check_keys(obj, {"matcher", "args"}, path)
        name = _expect(obj["matcher"], str, f"{path}.matcher", "a string")
        args = _expect(obj.get("args", ""), str, f"{path}.args", "a string")
        return PatternSpec(matcher=name, args=args)
    raise SchemaError("pattern needs 'regex' or 'matcher'", path)


def _parse_value(obj: Any, path: str) -> ValueSpec:
    _expect(obj, dict, path, "an object")
    _check_keys(obj, {"field", "type"}, path)
    if "field" not in obj or "type" not in obj:
        raise SchemaError("value needs 'field' and 'type'", path)
    fieldname = _expect(obj["field"], str, f"{path}.field", "a string")
    typename = _expect(obj["type"], str, f"{path}.type", "a string")
    try:
        sem = SemanticType(typename)
    except ValueError:
        raise SchemaError(f"unknown semantic type {typename!r}", f"{path}.type") from None
    return ValueSpec(fieldname, sem)


def _parse_enum(obj: Any, enum_cls: type[Enum], path: str) -> Enum:
    name = _expect(obj, str, path, "a string")
    try:
        return enum_cls(name)
    except ValueError:
        options = ", ".join(e.value for e in enum_cls)  # type: ignore[attr-defined]
        raise SchemaError(f"expected one of {options}; got {name!r}", path) from None


def _parse_member(obj: Any, path: str) -> MemberDecl:
    _expect(obj, dict, path, "an object")
    _check_keys(obj, _MEMBER_KEYS, path)
    if "name" not in obj or "element" not in obj:
        raise SchemaError("member needs 'name' and 'element'", path)
    name = _expect(obj["name"], str, f"{path}.name", "a string")
    element = _expect(obj["element"], str, f"{path}.element", "a string")
    has_bounds = "min" in obj or "max" in obj
    mn = obj.get("min", 1)
    _expect(mn, int, f"{path}.min", "an integer")
    if "max" in obj:
        raw = obj["max"]
        if raw == "unbounded":
            mx: int | None = None
        else:
            mx = _expect(raw, int, f"{path}.max", 'an integer or "unbounded"')
    else:
        mx = None if has_bounds else 1
    optional = obj.get("optional", False)
    _expect(optional, bool, f"{path}.optional", "a boolean")
    prefixes = _string_list(obj.get("prefix", []), f"{path}.prefix")
    suffixes = _string_list(obj.get("suffix", []), f"{path}.suffix")
    separators = _string_list(obj["separator"], f"{path}.separator") if "separator" in obj else None
    return MemberDecl(name, element, Cardinality(mn, mx, optional), prefixes, suffixes, separators)


def _parse_element(eid: str, obj: Any) -> ElementDecl:
    path = f"elements.{eid}"
    _expect(obj, dict, path, "an object")
    _check_keys(obj, _ELEMENT_KEYS, path)
    if "kind" not in obj:
        raise SchemaError("element needs 'kind'", path)
    kind = _parse_enum(obj["kind"], Kind, f"{path}.kind")
    extends = obj.get("extends")
    if extends is not None:
        _expect(extends, str, f"{path}.extends", "a string")
    pattern = _parse_pattern(obj["pattern"], f"{path}.pattern") if "pattern" in obj else None
    value = _parse_value(obj["value"], f"{path}.value") if "value" in obj else None
    members = []
    if "members" in obj:
        arr = _expect(obj["members"], list, f"{path}.members", "an array")
        members = [_parse_member(m, f"{path}.members[{i}]") for i, m in enumerate(arr)]
    assoc = Associativity.UNDEFINED
    if "associativity" in obj:
        assoc = _parse_enum(obj["associativity"], Associativity, f"{path}.associativity")
    comp = Composition.UNDEFINED
    if "composition" in obj:
        comp = _parse_enum(obj["composition"], Composition, f"{path}.composition")
    prio_value: int | None = None
    precedes: tuple[str, ...] = ()
    if "priority" in obj:
        prio = _expect(obj["priority"], dict, f"{path}.priority", "an object")
        _check_keys(prio, {"value", "precedes"}, f"{path}.priority")
        if not prio:
            raise SchemaError("priority needs 'value' and/or 'precedes'", f"{path}.priority")
        if "value" in prio:
            prio_value = _expect(prio["value"], int, f"{path}.priority.value", "an integer")
        if "precedes" in prio:
            precedes = _string_list(prio["precedes"], f"{path}.priority.precedes")
    return ElementDecl(
        id=eid,
        kind=kind,
        supertype=extends,
        pattern=pattern,
        value=value,
        members=tuple(members),
        constraints=ConstraintSet(assoc, comp, prio_value, precedes),
        prefixes=_string_list(obj.get("prefix", []), f"{path}.prefix"),
        suffixes=_string_list(obj.get("suffix", []), f"{path}.suffix"),
        default_separators=_string_list(obj.get("separator", []), f"{path}.separator"),
    )


def load_model(document: str) -> LanguageModel:
    """Parse a model document. Purely syntactic: dangling references load fine
    and are reported later by `validate_model`."""
    try:
        data = json.loads(document, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    _expect(data, dict, "", "a top-level object")
    _check_keys(data, _TOP_KEYS, "")
    if "root" not in data or "elements" not in data:
        raise SchemaError("document needs 'root' and 'elements'")
    root = _expect(data["root"], str, "root", "a string")
    elements_obj = _expect(data["elements"], dict, "elements", "an object")
    skip = _expect(data.get("skip", DEFAULT_SKIP), str, "skip", "a string")
    elements = {eid: _parse_element(eid, body) for eid, body in elements_obj.items()}
    return LanguageModel(root, elements, skip)


def serialize_model(model: LanguageModel) -> str:
    """Emit a model document that round-trips through load_model."""
    out: dict[str, Any] = {"root": model.root}
    if model.skip != DEFAULT_SKIP:
        out["skip"] = model.skip
    elements: dict[str, Any] = {}
    for eid, elem in model.elements.items():
        body: dict[str, Any] = {}
        if elem.supertype is not None:
            body["extends"] = elem.supertype
        body["kind"] = elem.kind.value
        if elem.pattern is not None:
            if elem.pattern.regex is not None:
                body["pattern"] = {"regex": elem.pattern.regex}
            else:
                body["pattern"] = {"matcher": elem.pattern.matcher, "args": elem.pattern.args}
        if elem.value is not None:
            body["value"] = {"field": elem.value.field, "type": elem.value.type.value}
        if elem.members:
            ms = []
            for m in elem.members:
                mo: dict[str, Any] = {"name": m.name, "element": m.element}
                card = m.cardinality
                if card != SCALAR:
                    if card.is_list or card.min != 1:
                        mo["min"] = card.min
                        mo["max"] = "unbounded" if card.max is None else card.max
                    if card.optional:
                        mo["optional"] = True
                if m.prefixes:
                    mo["prefix"] = list(m.prefixes)
                if m.suffixes:
                    mo["suffix"] = list(m.suffixes)
                if m.separators is not None:
                    mo["separator"] = list(m.separators)
                ms.append(mo)
            body["members"] = ms
        if elem.prefixes:
            body["prefix"] = list(elem.prefixes)
        if elem.suffixes:
            body["suffix"] = list(elem.suffixes)
        if elem.default_separators:
            body["separator"] = list(elem.default_separators)
        cs = elem.constraints
        if cs.associativity is not Associativity.UNDEFINED:
            body["associativity"] = cs.associativity.value
        if cs.composition is not Composition.UNDEFINED:
            body["composition"] = cs.composition.value
        if cs.priority_value is not None or cs.precedes:
            prio: dict[str, Any] = {}
            if cs.priority_value is not None:
                prio["value"] = cs.priority_value
            if cs.precedes:
                prio["precedes"] = list(cs.precedes)
            body["priority"] = prio
        elements[eid] = body
    out["elements"] = elements
    return json.dumps(out, indent=2) + "\n"


# --------------------------------------------------------------------------
# Validation


def _delimiter_sites(elem: ElementDecl) -> Iterable[tuple[str, str]]:
    for p in elem.prefixes:
        yield f"{elem.id}.prefix", p
    for s in elem.suffixes:
        yield f"{elem.id}.suffix", s
    for s in elem.default_separators:
        yield f"{elem.id}.separator", s
    for m in elem.members:
        for p in m.prefixes:
            yield f"{elem.id}.{m.name}.prefix", p
        for s in m.suffixes:
            yield f"{elem.id}.{m.name}.suffix", s
        for s in m.separators or ():
            yield f"{elem.id}.{m.name}.separator", s


def validate_model(model: LanguageModel) -> ValidationReport:
    """Check every model invariant; problems go into the report, never raised.

    The model is usable for grammar synthesis iff the report has no errors.
    (Multiple supertypes are structurally unrepresentable here: an element has
    a single optional ``extends`` link.)
    """
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    def err(code: str, path: str, message: str) -> None:
        errors.append(ValidationIssue(code, path, message))

    def warn(code: str, path: str, message: str) -> None:
        warnings.append(ValidationIssue(code, path, message))

    elems = model.elements
    if model.root not in elems:
        err("UNKNOWN_ROOT", "root", f"root element {model.root!r} is not declared")
    elif elems[model.root].kind is Kind.BASIC:
        err("ROOT_IS_BASIC", "root", "the root element must be composite or abstract")

    subtypes: dict[str, list[str]] = {eid: [] for eid in elems}

    for eid, elem in elems.items():
        if not IDENTIFIER_RE.match(eid):
            err("BAD_IDENTIFIER", eid, f"element id {eid!r} is not a valid identifier")
        sup = elem.supertype
        if sup is not None:
            if sup not in elems:
                err("DANGLING_REFERENCE", f"{eid}.extends", f"unknown element {sup!r}")
            else:
                subtypes[sup].append(eid)
                if elems[sup].kind is Kind.BASIC:
                    err("BASIC_SUPERTYPE", f"{eid}.extends",
                        f"{sup!r} is basic; pattern elements cannot be extended")
        if elem.kind is Kind.BASIC:
            if elem.members:
                err("BASIC_WITH_MEMBERS", eid, "a basic element cannot have members")
            numericish = elem.value is not None and elem.value.type in (
                SemanticType.INTEGER, SemanticType.REAL, SemanticType.BOOLEAN)
            if elem.pattern is None:
                if elem.value is not None and not numericish:
                    err("MISSING_PATTERN", eid,
                        f"value field of type {elem.value.type.value} needs an explicit pattern")
                elif elem.value is None:
                    err("BASIC_WITHOUT_PATTERN", eid,
                        "a basic element needs a pattern or a numeric/boolean value field")
        else:
            if elem.pattern is not None:
                code = "PATTERN_ON_COMPOSITE" if elem.kind is Kind.COMPOSITE else "ABSTRACT_WITH_PATTERN"
                err(code, eid, f"a pattern-annotated element cannot be {elem.kind.value}")
            if elem.value is not None:
                code = "VALUE_ON_COMPOSITE" if elem.kind is Kind.COMPOSITE else "ABSTRACT_WITH_VALUE"
                err(code, eid, f"a {elem.kind.value} element cannot carry a value field")
            if elem.kind is Kind.ABSTRACT and elem.members:
                err("ABSTRACT_WITH_MEMBERS", eid, "an abstract element cannot have members")

        seen_names: set[str] = set()
        for i, m in enumerate(elem.members):
            mpath = f"{eid}.members[{i}]"
            if not IDENTIFIER_RE.match(m.name):
                err("BAD_IDENTIFIER", mpath, f"member name {m.name!r} is not a valid identifier")
            if m.name in seen_names:
                err("DUPLICATE_MEMBER", mpath, f"member name {m.name!r} already used")
            seen_names.add(m.name)
            if m.element not in elems:
                err("DANGLING_REFERENCE", f"{mpath}.element", f"unknown element {m.element!r}")
            card = m.cardinality
            if card.min < 0 or (card.max is not None and card.max < 1):
                err("CARDINALITY_INVALID", mpath, f"bad bounds [{card.min}, {card.max}]")
            elif card.max is not None and card.min > card.max:
                err("MIN_GT_MAX", mpath, f"min {card.min} exceeds max {card.max}")

        for target in elem.constraints.precedes:
            if target not in elems:
                err("DANGLING_REFERENCE", f"{eid}.priority.precedes", f"unknown element {target!r}")

        for path, regex in _delimiter_sites(elem):
            try:
                compile_pattern(regex)
            except RegexCompileError as exc:
                err("REGEX_INVALID", path, str(exc))
        if elem.pattern is not None and elem.pattern.regex is not None:
            try:
                compile_pattern(elem.pattern.regex)
            except RegexCompileError as exc:
                err("REGEX_INVALID", f"{eid}.pattern", str(exc))

    try:
        compile_pattern(model.skip)
    except RegexCompileError as exc:
        err("REGEX_INVALID", "skip", str(exc))

    # Supertype cycles: walk chains with a visited set.
    for eid in elems:
        seen = {eid}
        cur = elems[eid].supertype
        while cur is not None and cur in elems:
            if cur in seen:
                err("SUPERTYPE_CYCLE", eid, f"supertype chain of {eid!r} revisits {cur!r}")
                break
            seen.add(cur)
            cur = elems[cur].supertype

    for eid, elem in elems.items():
        if elem.kind is Kind.ABSTRACT and not subtypes[eid]:
            err("ABSTRACT_NO_SUBTYPES", eid, "abstract element has no subtypes")

    # Precedence consistency: explicit precedes edges combined with the strict
    # order induced by absolute values must stay acyclic.
    combined: dict[str, set[str]] = {eid: set() for eid in elems}
    for eid, elem in elems.items():
        for target in elem.constraints.precedes:
            if target in elems:
                combined[eid].add(target)
    values = {eid: e.constraints.priority_value for eid, e in elems.items()}
    for a in elems:
        for b in elems:
            va, vb = values[a], values[b]
            if va is not None and vb is not None and va < vb:
                combined[a].add(b)
    state: dict[str, int] = {}

    def has_cycle(node: str, trail: list[str]) -> bool:
        state[node] = 1
        trail.append(node)
        for nxt in combined[node]:
            if state.get(nxt, 0) == 1:
                return True
            if state.get(nxt, 0) == 0 and has_cycle(nxt, trail):
                return True
        trail.pop()
        state[node] = 2
        return False

    for eid in elems:
        if state.get(eid, 0) == 0:
            trail: list[str] = []
            if has_cycle(eid, trail):
                err("PRECEDENCE_CYCLE", trail[-1],
                    "the precedence relation (values plus precedes edges) is cyclic")
                break

    # Reachability from the root via member references and subtype links.
    if model.root in elems:
        reached = {model.root}
        frontier = [model.root]
        while frontier:
            cur = frontier.pop()
            elem = elems[cur]
            next_ids = [m.element for m in elem.members] + subtypes[cur]
            for nid in next_ids:
                if nid in elems and nid not in reached:
                    reached.add(nid)
                    frontier.append(nid)
        for eid in elems:
            if eid not in reached:
                warn("UNREACHABLE_ELEMENT", eid, f"{eid!r} is not reachable from the root")

    # Unit-production cycles: selection links plus bare single-member composites.
    unit_edges: dict[str, set[str]] = {eid: set() for eid in elems}
    for eid in elems:
        for sub in subtypes[eid]:
            if elems[sub].kind is not Kind.BASIC:
                unit_edges[eid].add(sub)
    for eid, elem in elems.items():
        if (elem.kind is Kind.COMPOSITE and len(elem.members) == 1
                and not elem.prefixes and not elem.suffixes):
            m = elem.members[0]
            if (m.cardinality == SCALAR and not m.prefixes and not m.suffixes
                    and m.element in elems and elems[m.element].kind is not Kind.BASIC):
                unit_edges[eid].add(m.element)
    ustate: dict[str, int] = {}

    def unit_cycle(node: str) -> bool:
        ustate[node] = 1
        for nxt in unit_edges[node]:
            if ustate.get(nxt, 0) == 1:
                return True
            if ustate.get(nxt, 0) == 0 and unit_cycle(nxt):
                return True
        ustate[node] = 2
        return False

    for eid in elems:
        if ustate.get(eid, 0) == 0 and unit_cycle(eid):
            warn("UNIT_CYCLE", eid, "model can derive unit-production cycles")
            break

    return ValidationReport(tuple(errors), tuple(warnings))


def resolve_hierarchy(model: LanguageModel) -> TypeHierarchy:
    """Direct subtypes, transitive subtype sets, and supertype chains per element."""
    report = validate_model(model)
    if not report.ok:
        raise HierarchyError(
            "model does not validate: " + "; ".join(i.message for i in report.errors))
    direct: dict[str, list[str]] = {eid: [] for eid in model.elements}
    for eid, elem in model.elements.items():
        if elem.supertype is not None:
            direct[elem.supertype].append(eid)

    transitive: dict[str, frozenset[str]] = {}

    def close(eid: str) -> frozenset[str]:
        if eid in transitive:
            return transitive[eid]
        acc: set[str] = set()
        for sub in direct[eid]:
            acc.add(sub)
            acc |= close(sub)
        result = frozenset(acc)
        transitive[eid] = result
        return result

    for eid in model.elements:
        close(eid)

    chains: dict[str, tuple[str, ...]] = {}
    for eid in model.elements:
        chain: list[str] = []
        cur = model.elements[eid].supertype
        while cur is not None:
            chain.append(cur)
            cur = model.elements[cur].supertype
        chains[eid] = tuple(chain)

    return TypeHierarchy({eid: tuple(subs) for eid, subs in direct.items()}, transitive, chains)
