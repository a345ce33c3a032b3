"""Random model/input generation for oracle-equivalence and property suites."""

from __future__ import annotations

import random

from modelgen import (
    Associativity,
    ConstraintSet,
    Kind,
    Language,
    abstract,
    basic,
    composite,
    language_model,
    member,
)

LETTERS = "abcdefgh"


def random_unconstrained_model(rng: random.Random):
    """A small valid model with no evaluation-order constraints: a few
    single-character basics plus composites/selections over them, recursion
    allowed through the root. Shaped to avoid unit cycles and epsilon."""
    n_basic = rng.randint(2, 4)
    basics = [basic(f"T{LETTERS[i].upper()}", pattern=f"[{LETTERS[i]}]")
              for i in range(n_basic)]
    n_comp = rng.randint(1, 3)
    elements = [abstract("Root")]
    names = [b.id for b in basics]
    comp_names = [f"C{i}" for i in range(n_comp)]
    pool = names + ["Root"] + comp_names
    for i, cname in enumerate(comp_names):
        n_members = rng.randint(1, 3)
        members = []
        used_list = False
        for k in range(n_members):
            # recursion through the root is what makes interesting ambiguity
            target = "Root" if rng.random() < 0.45 else rng.choice(pool)
            if not used_list and rng.random() < 0.25 and target in names:
                sep = rng.choice([None, [","]])
                members.append(member(f"m{k}", target, min=1, max=None,
                                      separators=sep))
                used_list = True
            else:
                members.append(member(f"m{k}", target))
        prefixes = []
        if len(members) == 1 and members[0].cardinality.max == 1 \
                and members[0].element not in names:
            prefixes = ["!"]  # keep unit-production cycles out
        elements.append(composite(cname, members, extends="Root", prefixes=prefixes))
    # Root needs >= 1 subtype; give basics a chance to be alternatives too.
    for b in basics:
        if rng.random() < 0.6:
            b = basic(b.id, extends="Root", pattern=b.pattern.regex)
        elements.append(b)
    model = language_model("Root", elements)
    return model


def random_input_from_grammar(rng: random.Random, language: Language,
                              max_tokens: int = 10) -> str | None:
    """Sample a sentence by random derivation; None when it exceeds the cap."""
    grammar = language.grammar
    out: list[str] = []

    def emit_terminal(sym) -> bool:
        if sym.kind == "lit":
            from modelgen.patterns import compile_pattern
            text = compile_pattern(sym.text).literal_text()
            if text is None:
                return False
            out.append(text)
            return True
        elem = language.model.elements[sym.text]
        regex = elem.pattern.regex if elem.pattern else "[0-9]+"
        lead = regex[1] if regex.startswith("[") else "a"
        out.append(lead)
        return True

    def walk(symbol, depth: int) -> bool:
        if len(out) > max_tokens or depth > 24:
            return False
        if symbol.terminal:
            return emit_terminal(symbol)
        prods = grammar.by_lhs(symbol)
        if not prods:
            return False
        nt_count = [sum(1 for s in p.rhs if not s.terminal) for p in prods]
        weights = [1.0 / (1 + c * c * (depth + 1)) for c in nt_count]
        p = rng.choices(prods, weights=weights, k=1)[0]
        for sym in p.rhs:
            if not walk(sym, depth + 1):
                return False
        return True

    ok = walk(grammar.start, 0)
    if not ok or len(out) > max_tokens or not out:
        return None
    return " ".join(out)


def random_token_soup(rng: random.Random, language: Language, max_tokens: int = 6) -> str:
    toks = []
    basics = [e for e in language.model.elements.values() if e.kind is Kind.BASIC]
    for _ in range(rng.randint(1, max_tokens)):
        e = rng.choice(basics)
        regex = e.pattern.regex if e.pattern else "[0-9]+"
        toks.append(regex[1] if regex.startswith("[") else "0")
    return " ".join(toks)
