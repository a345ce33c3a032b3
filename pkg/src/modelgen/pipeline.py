"""End-to-end pipeline: model -> grammar -> token graph -> forest -> instances.

`Language` precomputes everything derivable from the model once (hierarchy,
grammar, token types) and then parses inputs; distinct parses over the same
Language may run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HierarchyError
from .grammar import Grammar, synthesize_grammar
from .instance import InstanceNode, instantiate
from .lexer import TokenGraph, apply_lexical_precedence, compile_token_types, scan
from .model import LanguageModel, TypeHierarchy, resolve_hierarchy, validate_model
from .parser import (
    EnumerationResult,
    ParseForest,
    ParseTree,
    disambiguate_composition,
    enumerate_parses,
    filter_priority,
    parse,
    require_unique,
)
from .patterns import MatcherRegistry


@dataclass(frozen=True)
class Language:
    model: LanguageModel
    hierarchy: TypeHierarchy
    grammar: Grammar
    token_types: list
    registry: MatcherRegistry | None

    @classmethod
    def build(cls, model: LanguageModel, registry: MatcherRegistry | None = None) -> "Language":
        hierarchy = resolve_hierarchy(model)  # raises HierarchyError on invalid models
        grammar = synthesize_grammar(model, hierarchy)
        token_types = compile_token_types(model, grammar, registry)
        return cls(model, hierarchy, grammar, token_types, registry)

    def tokenize(self, text: str) -> TokenGraph:
        graph = scan(text, self.token_types, self.model.skip, self.registry)
        return apply_lexical_precedence(graph, self.token_types)

    def forest(self, text: str) -> ParseForest:
        graph = self.tokenize(text)
        forest = parse(self.grammar, graph)
        forest = disambiguate_composition(forest, self.model)
        return filter_priority(forest, self.model)

    def parse_tree(self, text: str) -> ParseTree:
        return require_unique(self.forest(text))

    def parse_unique(self, text: str) -> InstanceNode:
        return instantiate(self.parse_tree(text), self.model)

    def parse_all(self, text: str, limit: int = 16) -> tuple[list[InstanceNode], EnumerationResult]:
        result = enumerate_parses(self.forest(text), limit)
        return [instantiate(t, self.model) for t in result.trees], result
