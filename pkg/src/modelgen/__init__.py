"""modelgen: a model-based parser generator.

Declare an abstract syntax model with declarative concrete-syntax constraints;
get grammar synthesis, ambiguity-tolerant scanning, chart parsing with
constraint enforcement, and typed instances of the model.
"""

from .errors import (
    AmbiguityError,
    DocumentSyntaxError,
    ExplicitViolationError,
    HierarchyError,
    InternalConsistencyError,
    MissingCallbackError,
    ModelgenError,
    NoParseError,
    RegexCompileError,
    ScanError,
    SchemaError,
    SynthesisError,
    UnknownMatcherError,
    ValueRangeError,
)
from .grammar import (
    Grammar,
    Production,
    Symbol,
    emit_bnf,
    lower_composite,
    lower_optional,
    lower_repetition,
    lower_selection,
    synthesize_grammar,
)
from .instance import InstanceNode, TypedValue, convert_value, instance_to_dict, instantiate, visit
from .lexer import (
    TokenCandidate,
    TokenGraph,
    TokenType,
    apply_lexical_precedence,
    compile_token_types,
    longest_match,
    scan,
)
from .model import (
    Associativity,
    Cardinality,
    Composition,
    ConstraintSet,
    ElementDecl,
    Kind,
    LanguageModel,
    MemberDecl,
    PatternSpec,
    SemanticType,
    TypeHierarchy,
    ValidationReport,
    ValueSpec,
    abstract,
    basic,
    composite,
    language_model,
    load_model,
    member,
    resolve_hierarchy,
    serialize_model,
    validate_model,
)
from .parser import (
    EnumerationResult,
    ParseForest,
    ParseTree,
    check_counts,
    disambiguate_composition,
    enumerate_parses,
    filter_priority,
    inhibit_associativity,
    parse,
    require_unique,
)
from .patterns import CompiledPattern, MatcherRegistry, compile_pattern, default_registry
from .pipeline import Language

__version__ = "0.1.0"
