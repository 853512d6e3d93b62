"""Canonical text rendering of query ASTs.

One clause per line, uppercase keywords, double-quoted strings, single-space
token separation, property maps with sorted keys. Formatting is idempotent:
parsing the output and formatting again reproduces the same text.
"""

from __future__ import annotations

from .ast import (
    BoolOp,
    Comparison,
    CountAggregate,
    CountSubquery,
    CypherQuery,
    ExistsPredicate,
    FunctionCall,
    Literal,
    MatchClause,
    NodePattern,
    NotOp,
    PatternChain,
    PropertyAccess,
    RelPattern,
    Subquery,
    VariableRef,
)

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def format_literal(value: object) -> str:
    if value is None:
        return "NULL"
    if value is True:
        return "TRUE"
    if value is False:
        return "FALSE"
    if isinstance(value, (int, float)):
        return str(value)
    escaped = "".join(_STRING_ESCAPES.get(ch, ch) for ch in str(value))
    return f'"{escaped}"'


def format_node_pattern(node: NodePattern) -> str:
    inner = node.variable or ""
    if node.label:
        inner += f":{node.label}"
    if node.properties:
        pairs = ", ".join(
            f"{key}: {format_literal(node.properties[key].value)}"
            for key in sorted(node.properties)
        )
        body = "{" + pairs + "}"
        inner = f"{inner} {body}" if inner else body
    return f"({inner})"


def format_rel_pattern(rel: RelPattern) -> str:
    inner = rel.variable or ""
    if rel.rel_type:
        inner += f":{rel.rel_type}"
    if rel.direction == "out":
        return f"-[{inner}]->"
    return f"<-[{inner}]-"


def format_chain(chain: PatternChain) -> str:
    parts = []
    for element in chain.elements:
        if isinstance(element, NodePattern):
            parts.append(format_node_pattern(element))
        else:
            parts.append(format_rel_pattern(element))
    return "".join(parts)


def format_subquery(sub: Subquery) -> str:
    text = ", ".join(format_chain(chain) for chain in sub.chains)
    if sub.where is not None:
        text += f" WHERE {format_expression(sub.where)}"
    return text


def _operand(expr) -> str:
    """Render an operand, parenthesizing nested boolean structure."""
    text = format_expression(expr)
    if isinstance(expr, (BoolOp, Comparison, NotOp)):
        return f"({text})"
    return text


def format_expression(expr) -> str:
    if isinstance(expr, Literal):
        return format_literal(expr.value)
    if isinstance(expr, VariableRef):
        return expr.name
    if isinstance(expr, PropertyAccess):
        return f"{expr.variable}.{expr.key}"
    if isinstance(expr, FunctionCall):
        args = ", ".join(format_expression(arg) for arg in expr.args)
        return f"{expr.name}({args})"
    if isinstance(expr, Comparison):
        return f"{_operand(expr.left)} {expr.op} {_operand(expr.right)}"
    if isinstance(expr, BoolOp):
        rendered = []
        for operand in expr.operands:
            if isinstance(operand, BoolOp):
                rendered.append(f"({format_expression(operand)})")
            else:
                rendered.append(format_expression(operand))
        return f" {expr.op} ".join(rendered)
    if isinstance(expr, NotOp):
        if isinstance(expr.operand, BoolOp):
            return f"NOT ({format_expression(expr.operand)})"
        return f"NOT {format_expression(expr.operand)}"
    if isinstance(expr, ExistsPredicate):
        return f"EXISTS {{ {format_subquery(expr.subquery)} }}"
    if isinstance(expr, CountSubquery):
        return f"COUNT {{ {format_subquery(expr.subquery)} }}"
    if isinstance(expr, CountAggregate):
        if expr.expr is None:
            return "COUNT(*)"
        inner = format_expression(expr.expr)
        return f"COUNT(DISTINCT {inner})" if expr.distinct else f"COUNT({inner})"
    raise TypeError(f"cannot format expression node {type(expr).__name__}")


def format_query(query: CypherQuery) -> str:
    lines: list[str] = []
    for clause in query.match_clauses:
        chains = ", ".join(format_chain(chain) for chain in clause.chains)
        lines.append(f"MATCH {chains}")
    if query.where is not None:
        lines.append(f"WHERE {format_expression(query.where)}")
    items = []
    for item in query.return_items:
        text = format_expression(item.expr)
        if item.alias:
            text += f" AS {item.alias}"
        items.append(text)
    prefix = "RETURN DISTINCT" if query.distinct else "RETURN"
    lines.append(f"{prefix} " + ", ".join(items))
    if query.order_by:
        rendered = ", ".join(
            f"{format_expression(order.expr)} {'DESC' if order.descending else 'ASC'}"
            for order in query.order_by
        )
        lines.append(f"ORDER BY {rendered}")
    if query.limit is not None:
        lines.append(f"LIMIT {query.limit}")
    return "\n".join(lines)
