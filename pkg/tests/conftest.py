from __future__ import annotations

import random

import pytest

from modelgen import (
    Associativity,
    Composition,
    ConstraintSet,
    Language,
    SemanticType,
    abstract,
    basic,
    composite,
    language_model,
    member,
)

L2R = ConstraintSet(associativity=Associativity.LEFT_TO_RIGHT)


def calculator_model():
    """The arithmetic-expression language: unary +/-, binary + - * / with
    left-to-right associativity and * / binding tighter than + -, parentheses,
    integer and real literals."""
    return language_model(
        "Expression",
        [
            abstract("Expression"),
            composite("ParenthesizedExpression", [member("e", "Expression")],
                      extends="Expression", prefixes=[r"\("], suffixes=[r"\)"]),
            composite("BinaryExpression",
                      [member("e1", "Expression"), member("op", "BinaryOperator"),
                       member("e2", "Expression")],
                      extends="Expression"),
            composite("UnaryExpression",
                      [member("op", "UnaryOperator"), member("e", "Expression")],
                      extends="Expression"),
            abstract("LiteralExpression", extends="Expression"),
            basic("IntegerLiteral", extends="LiteralExpression",
                  value=("value", SemanticType.INTEGER)),
            basic("RealLiteral", extends="LiteralExpression",
                  value=("value", SemanticType.REAL)),
            abstract("UnaryOperator"),
            basic("PlusOperator", extends="UnaryOperator", pattern=r"\+"),
            basic("MinusOperator", extends="UnaryOperator", pattern=r"-"),
            abstract("BinaryOperator", constraints=L2R),
            basic("AdditionOperator", extends="BinaryOperator", pattern=r"\+",
                  constraints=ConstraintSet(priority_value=2)),
            basic("SubstractionOperator", extends="BinaryOperator", pattern=r"-",
                  constraints=ConstraintSet(priority_value=2)),
            basic("MultiplicationOperator", extends="BinaryOperator", pattern=r"\*",
                  constraints=ConstraintSet(priority_value=1)),
            basic("DivisionOperator", extends="BinaryOperator", pattern=r"\/",
                  constraints=ConstraintSet(priority_value=1)),
        ],
    )


CALC_EVAL = {
    "IntegerLiteral": lambda n, ch: float(n.values["value"].value),
    "RealLiteral": lambda n, ch: float(n.values["value"].value),
    "ParenthesizedExpression": lambda n, ch: ch["e"],
    "UnaryExpression": lambda n, ch: ch["op"](ch["e"]),
    "BinaryExpression": lambda n, ch: ch["op"](ch["e1"], ch["e2"]),
    "PlusOperator": lambda n, ch: (lambda x: x),
    "MinusOperator": lambda n, ch: (lambda x: -x),
    "AdditionOperator": lambda n, ch: (lambda a, b: a + b),
    "SubstractionOperator": lambda n, ch: (lambda a, b: a - b),
    "MultiplicationOperator": lambda n, ch: (lambda a, b: a * b),
    "DivisionOperator": lambda n, ch: (lambda a, b: a / b),
}


@pytest.fixture(scope="session")
def calc_language():
    return Language.build(calculator_model())


def minus_chain_model(assoc: Associativity = Associativity.UNDEFINED):
    """Single binary operator over integer literals; associativity optional."""
    return language_model(
        "Expr",
        [
            abstract("Expr"),
            basic("Num", extends="Expr", value=("value", SemanticType.INTEGER)),
            composite("Binary",
                      [member("e1", "Expr"), member("op", "MinusOp"), member("e2", "Expr")],
                      extends="Expr"),
            basic("MinusOp", pattern=r"-", constraints=ConstraintSet(associativity=assoc)),
        ],
    )


def power_model(assoc: Associativity = Associativity.RIGHT_TO_LEFT):
    return language_model(
        "Expr",
        [
            abstract("Expr"),
            basic("Letter", extends="Expr", pattern=r"[a-z]"),
            composite("Power",
                      [member("e1", "Expr"), member("op", "Caret"), member("e2", "Expr")],
                      extends="Expr"),
            basic("Caret", pattern=r"\^", constraints=ConstraintSet(associativity=assoc)),
        ],
    )


def dangling_else_model(mode: Composition):
    return language_model(
        "Statement",
        [
            abstract("Statement"),
            composite("ConditionalStatement",
                      [member("cond", "Expression", prefixes=["if"]),
                       member("then", "Statement"),
                       member("else", "Statement", optional=True, prefixes=["else"])],
                      extends="Statement",
                      constraints=ConstraintSet(composition=mode)),
            basic("LeafStatement", extends="Statement", pattern=r"[a-z][a-z0-9]*"),
            basic("Expression", pattern=r"[a-z][a-z0-9]*"),
        ],
    )


def func_power_model():
    return language_model(
        "Name",
        [
            abstract("Name"),
            basic("FunctionName", extends="Name", pattern=r"[a-z_]+",
                  constraints=ConstraintSet(precedes=("Identifier",))),
            basic("Identifier", extends="Name", pattern=r"[a-zA-Z][_a-zA-Z0-9]*"),
        ],
    )


def output_statement_model():
    return language_model(
        "Statement",
        [
            abstract("Statement"),
            composite("OutputStatement",
                      [member("exps", "Expression", min=1, max=None, separators=[","],
                              prefixes=[r"\("], suffixes=[r"\)"])],
                      extends="Statement", prefixes=["output"], suffixes=[";"],
                      constraints=ConstraintSet(precedes=("FunctionCallStatement",))),
            composite("FunctionCallStatement",
                      [member("name", "Identifier"),
                       member("args", "Expression", min=1, max=None, separators=[","],
                              prefixes=[r"\("], suffixes=[r"\)"])],
                      extends="Statement", suffixes=[";"]),
            abstract("Expression"),
            basic("IntegerLiteral", extends="Expression", value=("value", SemanticType.INTEGER)),
            composite("AddExpression",
                      [member("left", "Expression"),
                       member("right", "Expression", prefixes=[r"\+"])],
                      extends="Expression"),
            basic("Identifier", pattern=r"[a-zA-Z][_a-zA-Z0-9]*"),
        ],
    )


def random_calc_expression(rng: random.Random, max_depth: int = 6, max_ops: int = 12) -> str:
    """Random calculator expression of bounded depth and operator count."""
    budget = [rng.randint(1, max_ops)]

    def leaf() -> str:
        if rng.random() < 0.3:
            whole = rng.randint(0, 99)
            frac = rng.randint(0, 99)
            return f"{whole}.{frac}" if rng.random() < 0.9 else f"{whole}."
        return str(rng.randint(0, 99))

    def gen(depth: int) -> str:
        if depth >= max_depth or budget[0] <= 0 or rng.random() < 0.28:
            return leaf()
        kind = rng.random()
        if kind < 0.12:
            budget[0] -= 1
            return "(" + gen(depth + 1) + ")"
        if kind < 0.3:
            budget[0] -= 1
            return rng.choice(["-", "+"]) + gen(depth + 1)
        budget[0] -= 1
        op = rng.choice(["+", "-", "*", "/"])
        return gen(depth + 1) + op + gen(depth + 1)

    return gen(0)
