"""Exception types shared across the pipeline.

Every stage has its own failure vocabulary so callers (and the CLI exit-code
contract) can tell apart document problems, model problems, lexical failures,
syntactic failures, and ambiguity.
"""

from __future__ import annotations


class ModelgenError(Exception):
    """Base class for all library errors."""


class DocumentSyntaxError(ModelgenError):
    """The model document is not well-formed (bad JSON). Carries position info."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(ModelgenError):
    """The model document is valid JSON but violates the document schema."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class RegexCompileError(ModelgenError):
    """A pattern does not compile under the supported regex subset."""

    def __init__(self, pattern: str, position: int, reason: str):
        self.pattern = pattern
        self.position = position
        self.reason = reason
        super().__init__(f"bad pattern {pattern!r} at index {position}: {reason}")


class UnknownMatcherError(ModelgenError):
    """A @Pattern matcher name is absent from the matcher registry."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown matcher {name!r}")


class HierarchyError(ModelgenError):
    """resolve_hierarchy was called on a model that does not validate."""


class SynthesisError(ModelgenError):
    """The model cannot be lowered to a grammar (e.g. reachable abstract with no subtypes)."""


class ScanError(ModelgenError):
    """No tokenization path spans the input. Lexical-level failure."""

    def __init__(self, offset: int, excerpt: str):
        self.offset = offset
        self.excerpt = excerpt
        super().__init__(f"cannot tokenize input at offset {offset}: {excerpt!r}")


class NoParseError(ModelgenError):
    """No derivation survives.

    ``reason`` is "syntax" when the chart never accepted, "constraints" when
    derivations existed but every one was inhibited by declarative constraints.
    """

    def __init__(self, offset: int, expected: tuple[str, ...], reason: str = "syntax"):
        self.offset = offset
        self.expected = expected
        self.reason = reason
        what = ", ".join(expected) if expected else "(nothing)"
        super().__init__(f"no parse ({reason}); rightmost position {offset}, expected: {what}")


class AmbiguityError(ModelgenError):
    """More than one parse survives where a unique one was required."""

    def __init__(self, count: int | None, spans: tuple[tuple[str, int, int], ...]):
        self.count = count
        self.spans = spans
        shown = "; ".join(f"{sym}@[{s},{e})" for sym, s, e in spans)
        n = "many" if count is None else str(count)
        super().__init__(f"ambiguous: {n} parses survive; differing at {shown}")


class ExplicitViolationError(ModelgenError):
    """A composition=EXPLICIT element was parsed with an unresolved nested ambiguity."""

    def __init__(self, element: str, start: int, end: int):
        self.element = element
        self.start = start
        self.end = end
        super().__init__(
            f"element {element} requires explicit delimiters: nested ambiguity at [{start},{end})"
        )


class ValueRangeError(ModelgenError):
    """A literal exceeds the documented width (64-bit signed integers)."""


class InternalConsistencyError(ModelgenError):
    """Parse tree and model disagree; indicates a bug, not a user error."""


class MissingCallbackError(ModelgenError):
    """A visitor callback table does not cover a reachable concrete element."""

    def __init__(self, element: str):
        self.element = element
        super().__init__(f"no callback for element {element}")
