import json
import random

import pytest

from modelgen import (
    Language,
    MissingCallbackError,
    SemanticType,
    ValueRangeError,
    basic,
    composite,
    convert_value,
    instance_to_dict,
    language_model,
    member,
    visit,
)
from conftest import CALC_EVAL, calculator_model, random_calc_expression


@pytest.fixture(scope="module")
def calc():
    return Language.build(calculator_model())


def test_instantiate_shape_2_plus_3_times_4(calc):
    inst = calc.parse_unique("2+3*4")
    assert inst.element == "BinaryExpression"
    assert inst.children["e1"].element == "IntegerLiteral"
    assert inst.children["e1"].values["value"].value == 2
    assert inst.children["op"].element == "AdditionOperator"
    nested = inst.children["e2"]
    assert nested.element == "BinaryExpression"
    assert nested.children["e1"].values["value"].value == 3
    assert nested.children["op"].element == "MultiplicationOperator"
    assert nested.children["e2"].values["value"].value == 4


def test_no_abstract_elements_anywhere(calc):
    model = calc.model
    rng = random.Random(7)

    def walk(node):
        from modelgen import Kind
        assert model.elements[node.element].kind is not Kind.ABSTRACT
        for child in node.children.values():
            for c in (child if isinstance(child, tuple) else (child,)):
                walk(c)

    for _ in range(40):
        text = random_calc_expression(rng)
        try:
            walk(calc.parse_unique(text))
        except Exception:
            continue


def test_span_tiling(calc):
    rng = random.Random(11)

    def check(node, text):
        kids = []
        for child in node.children.values():
            kids.extend(child if isinstance(child, tuple) else (child,))
        kids.sort(key=lambda n: n.start)
        pos = node.start
        for k in kids:
            assert node.start <= k.start and k.end <= node.end
            assert k.start >= pos  # ordered, disjoint
            pos = k.end
            check(k, text)

    for _ in range(40):
        text = random_calc_expression(rng)
        try:
            inst = calc.parse_unique(text)
        except Exception:
            continue
        check(inst, text)
        assert (inst.start, inst.end) == (0, len(text.rstrip()))


def test_optional_absent_vs_empty_list():
    from conftest import dangling_else_model
    from modelgen import Composition
    lang = Language.build(dangling_else_model(Composition.EAGER))
    inst = lang.parse_unique("if c1 s1")
    assert "else" not in inst.children  # absent, not None or ()

    lang = Language.build(language_model("ExpressionSet", [
        composite("ExpressionSet", [member("exps", "E", min=0, max=None,
                                           prefixes=[r"\{"], suffixes=[r"\}"],
                                           separators=[","])]),
        basic("E", value=("value", SemanticType.INTEGER)),
    ]))
    inst = lang.parse_unique("{}")
    assert inst.children["exps"] == ()  # present and empty


def test_convert_value_cases():
    assert convert_value("42", SemanticType.INTEGER).value == 42
    assert convert_value("12.", SemanticType.REAL).value == 12.0
    assert convert_value("12.5", SemanticType.REAL).value == 12.5
    assert convert_value("true", SemanticType.BOOLEAN).value is True
    assert convert_value("false", SemanticType.BOOLEAN).value is False
    got = convert_value('"abc"', SemanticType.STRING, r"\"[^\"]*\"")
    assert got.value == "abc"
    # no quote pattern: text kept verbatim
    assert convert_value("abc", SemanticType.STRING, "[a-z]+").value == "abc"
    assert convert_value("'x'", SemanticType.CHARACTER, r"'[^']'").value == "x"


def test_convert_value_int64_bounds():
    assert convert_value(str(2 ** 63 - 1), SemanticType.INTEGER).value == 2 ** 63 - 1
    with pytest.raises(ValueRangeError):
        convert_value(str(2 ** 63), SemanticType.INTEGER)


def test_round_trip_fidelity(calc):
    text = "12.5*2+100"
    inst = calc.parse_unique(text)
    source = text

    def walk(node):
        for field, tv in node.values.items():
            elem = calc.model.elements[node.element]
            pattern = elem.pattern.regex if elem.pattern else None
            again = convert_value(source[node.start:node.end], tv.type, pattern)
            assert again == tv
        for child in node.children.values():
            for c in (child if isinstance(child, tuple) else (child,)):
                walk(c)

    walk(inst)


def test_string_value_end_to_end():
    lang = Language.build(language_model("S", [
        composite("S", [member("lit", "StringLiteral")]),
        basic("StringLiteral", pattern=r"\"[^\"]*\"", value=("text", SemanticType.STRING)),
    ]))
    inst = lang.parse_unique('"hello world"')
    assert inst.children["lit"].values["text"].value == "hello world"


def test_eval_visitor(calc):
    assert visit(calc.parse_unique("(1+2)*3"), CALC_EVAL) == 9.0
    assert visit(calc.parse_unique("-5"), CALC_EVAL) == -5.0


def test_counting_visitor(calc):
    counting = {eid: (lambda n, ch: 1 + sum(
        sum(c) if isinstance(c, tuple) else c for c in ch.values()))
        for eid in calc.model.elements}
    # 1+2 instantiates as BinaryExpression{e1: IntegerLiteral, op, e2}: 4 nodes
    assert visit(calc.parse_unique("1+2"), counting) == 4


def test_missing_callback_raises_before_side_effects(calc):
    inst = calc.parse_unique("1+2")
    called = []
    table = {"IntegerLiteral": lambda n, ch: called.append(n)}
    with pytest.raises(MissingCallbackError) as exc:
        visit(inst, table)
    assert exc.value.element == "BinaryExpression"
    assert called == []


def test_visitor_results_in_member_order():
    lang = Language.build(language_model("Triple", [
        composite("Triple", [member("a", "X"), member("b", "Y"), member("c", "X")]),
        basic("X", pattern="[x]"),
        basic("Y", pattern="[y]"),
    ]))
    inst = lang.parse_unique("x y x")
    order = []
    table = {
        "Triple": lambda n, ch: list(ch.keys()),
        "X": lambda n, ch: order.append("x"),
        "Y": lambda n, ch: order.append("y"),
    }
    assert visit(inst, table) == ["a", "b", "c"]
    assert order == ["x", "y", "x"]


def test_instance_json_shape(calc):
    inst = calc.parse_unique("1+2")
    d = instance_to_dict(inst)
    assert list(d.keys()) == ["element", "span", "values", "children"]
    assert d["element"] == "BinaryExpression"
    assert d["span"] == [0, 3]
    assert list(d["children"].keys()) == ["e1", "op", "e2"]
    assert d["children"]["e1"]["values"] == {"value": 1}
    # byte-determinism
    assert json.dumps(d) == json.dumps(instance_to_dict(calc.parse_unique("1+2")))


def test_instance_json_lists_and_absent():
    lang = Language.build(language_model("Set", [
        composite("Set", [member("xs", "E", min=0, max=None, prefixes=[r"\{"],
                                 suffixes=[r"\}"], separators=[","]),
                          member("tag", "Tag", optional=True)]),
        basic("E", value=("value", SemanticType.INTEGER)),
        basic("Tag", pattern="[a-z]+"),
    ]))
    d = instance_to_dict(lang.parse_unique("{1,2}"))
    assert [c["values"]["value"] for c in d["children"]["xs"]] == [1, 2]
    assert "tag" not in d["children"]
