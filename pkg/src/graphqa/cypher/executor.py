"""Query execution over the in-memory property graph.

Semantics of the subset:

- Pattern matching enumerates complete bindings. Within one MATCH clause the
  bound relationships are pairwise distinct (the usual Cypher relationship
  isomorphism); separate MATCH clauses carry no such constraint. EXISTS and
  COUNT pattern subqueries open their own uniqueness scope and see the outer
  bindings.
- A missing property reads as null. Null fails every comparison, and null
  never equals null. Ordering comparisons are numeric only: property strings
  are parsed on demand, and a comparison that cannot be made numeric is false.
- Boolean context is two-valued: anything but true (null included) counts as
  false in AND/OR/NOT.
- COUNT aggregates group implicitly by the non-aggregated projection items.
  COUNT(expr) counts non-null values, COUNT(DISTINCT expr) distinct non-null
  values, COUNT(*) rows per group.
- Row order is deterministic: rows sort by a canonical type-ranked key, then
  ORDER BY columns are applied as stable passes, then LIMIT truncates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..graph.model import GraphEdge, GraphNode, PropertyGraph
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
    Subquery,
    VariableRef,
)
from .formatter import format_expression


class ExecutionError(Exception):
    """Raised for constructs the executor cannot evaluate (unknown function)."""


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


# -- value semantics ----------------------------------------------------------


def to_number(value):
    """Numeric view of a value for ordering comparisons; None when impossible."""
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            try:
                return float(value)
            except ValueError:
                return None
    return None


def values_equal(left, right) -> bool:
    if isinstance(left, (GraphNode, GraphEdge)) or isinstance(right, (GraphNode, GraphEdge)):
        return type(left) is type(right) and left == right
    if isinstance(left, bool) or isinstance(right, bool):
        return isinstance(left, bool) and isinstance(right, bool) and left == right
    left_num = isinstance(left, (int, float))
    right_num = isinstance(right, (int, float))
    if left_num and right_num:
        return left == right
    if left_num or right_num:
        text = right if left_num else left
        if not isinstance(text, str):
            return False
        parsed = to_number(text)
        return parsed is not None and parsed == (left if left_num else right)
    if isinstance(left, str) and isinstance(right, str):
        return left == right
    return False


def compare_values(op: str, left, right) -> bool:
    if left is None or right is None:
        return False
    if op == "=":
        return values_equal(left, right)
    if op == "<>":
        return not values_equal(left, right)
    left_num, right_num = to_number(left), to_number(right)
    if left_num is None or right_num is None:
        return False
    if op == "<":
        return left_num < right_num
    if op == "<=":
        return left_num <= right_num
    if op == ">":
        return left_num > right_num
    if op == ">=":
        return left_num >= right_num
    raise ExecutionError(f"unknown comparison operator {op!r}")


def is_truthy(value) -> bool:
    return value is True


def value_sort_key(value):
    """Total order over result cells: null < bool < number < string < node < edge."""
    if value is None:
        return (0,)
    if isinstance(value, bool):
        return (1, 1 if value else 0)
    if isinstance(value, (int, float)):
        return (2, float(value))
    if isinstance(value, str):
        return (3, value)
    if isinstance(value, GraphNode):
        return (4, value.id)
    if isinstance(value, GraphEdge):
        return (5, value.source, value.rel_type, value.target, value.index)
    raise ExecutionError(f"unsortable value {value!r}")


def row_sort_key(row):
    return tuple(value_sort_key(cell) for cell in row)


# -- pattern matching ----------------------------------------------------------


def _pattern_match(pattern: NodePattern, node: GraphNode) -> bool:
    if pattern.label is not None and node.label != pattern.label:
        return False
    for key, literal in pattern.properties.items():
        if key not in node.properties:
            return False
        if not values_equal(node.properties[key], literal.value):
            return False
    return True


def _node_ok(pattern: NodePattern, node: GraphNode, env: dict) -> bool:
    if not _pattern_match(pattern, node):
        return False
    if pattern.variable and pattern.variable in env:
        return env[pattern.variable] == node
    return True


def _node_candidates(pattern: NodePattern, graph: PropertyGraph, env: dict):
    if pattern.variable and pattern.variable in env:
        bound = env[pattern.variable]
        if isinstance(bound, GraphNode) and _pattern_match(pattern, bound):
            yield bound
        return
    pool = (
        graph.nodes_with_label(pattern.label)
        if pattern.label is not None
        else graph.nodes()
    )
    for node in pool:
        if _pattern_match(pattern, node):
            yield node


def _chain_bindings(
    chain: PatternChain, graph: PropertyGraph, env: dict, used: frozenset
) -> Iterator[tuple[dict, frozenset]]:
    elements = chain.elements

    def extend(pos: int, current: GraphNode, env: dict, used: frozenset):
        if pos >= len(elements):
            yield env, used
            return
        rel = elements[pos]
        nxt = elements[pos + 1]
        edges = (
            graph.outgoing(current.id)
            if rel.direction == "out"
            else graph.incoming(current.id)
        )
        for edge in edges:
            if rel.rel_type is not None and edge.rel_type != rel.rel_type:
                continue
            if edge in used:
                continue
            other = graph.node(edge.target if rel.direction == "out" else edge.source)
            if not _node_ok(nxt, other, env):
                continue
            extended = env
            if rel.variable:
                extended = {**extended, rel.variable: edge}
            if nxt.variable and nxt.variable not in extended:
                extended = {**extended, nxt.variable: other}
            yield from extend(pos + 2, other, extended, used | {edge})

    first = elements[0]
    for node in _node_candidates(first, graph, env):
        start = env
        if first.variable and first.variable not in start:
            start = {**start, first.variable: node}
        yield from extend(1, node, start, used)


def _patterns_bindings(
    chains: list[PatternChain], graph: PropertyGraph, env: dict
) -> Iterator[dict]:
    """Bindings for chains sharing one relationship-uniqueness scope."""

    def recurse(index: int, env: dict, used: frozenset):
        if index == len(chains):
            yield env
            return
        for extended, used2 in _chain_bindings(chains[index], graph, env, used):
            yield from recurse(index + 1, extended, used2)

    yield from recurse(0, env, frozenset())


def _match_bindings(clauses: list[MatchClause], graph: PropertyGraph) -> list[dict]:
    bindings: list[dict] = [{}]
    for clause in clauses:
        bindings = [
            extended
            for env in bindings
            for extended in _patterns_bindings(clause.chains, graph, env)
        ]
    return bindings


def _subquery_matches(sub: Subquery, graph: PropertyGraph, env: dict) -> Iterator[dict]:
    for extended in _patterns_bindings(sub.chains, graph, env):
        if sub.where is None or is_truthy(evaluate(sub.where, extended, graph)):
            yield extended


# -- expression evaluation -------------------------------------------------------

_FUNCTIONS = ("tolower", "toupper", "tointeger", "tofloat", "size")


def evaluate(expr, env: dict, graph: PropertyGraph):
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, VariableRef):
        return env[expr.name]
    if isinstance(expr, PropertyAccess):
        entity = env[expr.variable]
        return entity.properties.get(expr.key)
    if isinstance(expr, Comparison):
        return compare_values(
            expr.op,
            evaluate(expr.left, env, graph),
            evaluate(expr.right, env, graph),
        )
    if isinstance(expr, BoolOp):
        if expr.op == "AND":
            return all(is_truthy(evaluate(op, env, graph)) for op in expr.operands)
        return any(is_truthy(evaluate(op, env, graph)) for op in expr.operands)
    if isinstance(expr, NotOp):
        return not is_truthy(evaluate(expr.operand, env, graph))
    if isinstance(expr, ExistsPredicate):
        return next(iter(_subquery_matches(expr.subquery, graph, env)), None) is not None
    if isinstance(expr, CountSubquery):
        return sum(1 for _ in _subquery_matches(expr.subquery, graph, env))
    if isinstance(expr, FunctionCall):
        args = [evaluate(arg, env, graph) for arg in expr.args]
        return _call_function(expr.name, args)
    raise ExecutionError(f"cannot evaluate expression node {type(expr).__name__}")


def _call_function(name: str, args: list):
    if name not in _FUNCTIONS:
        raise ExecutionError(f"unknown function {name!r}")
    if len(args) != 1:
        raise ExecutionError(f"{name}() takes exactly one argument")
    value = args[0]
    if name == "tolower":
        return value.lower() if isinstance(value, str) else None
    if name == "toupper":
        return value.upper() if isinstance(value, str) else None
    if name == "tointeger":
        number = to_number(value)
        return None if number is None else int(number)
    if name == "tofloat":
        number = to_number(value)
        return None if number is None else float(number)
    number = value
    return len(number) if isinstance(number, str) else None


# -- projection -------------------------------------------------------------------


def _project(query: CypherQuery, bindings: list[dict], graph: PropertyGraph) -> ResultTable:
    items = query.return_items
    columns = [item.alias or format_expression(item.expr) for item in items]
    agg_positions = [
        j for j, item in enumerate(items) if isinstance(item.expr, CountAggregate)
    ]

    if agg_positions:
        plain_positions = [j for j in range(len(items)) if j not in agg_positions]
        groups: dict = {}
        arrival: list = []
        for env in bindings:
            cells = tuple(evaluate(items[j].expr, env, graph) for j in plain_positions)
            key = row_sort_key(cells)
            if key not in groups:
                groups[key] = (
                    cells,
                    [set() if items[j].expr.distinct else 0 for j in agg_positions],
                )
                arrival.append(key)
            counters = groups[key][1]
            for slot, j in enumerate(agg_positions):
                aggregate = items[j].expr
                if aggregate.expr is None:
                    counters[slot] += 1
                    continue
                value = evaluate(aggregate.expr, env, graph)
                if value is None:
                    continue
                if aggregate.distinct:
                    counters[slot].add(value_sort_key(value))
                else:
                    counters[slot] += 1
        if not bindings and not plain_positions:
            key = ()
            groups[key] = ((), [set() if items[j].expr.distinct else 0 for j in agg_positions])
            arrival.append(key)
        rows = []
        for key in arrival:
            cells, counters = groups[key]
            plain_iter = iter(cells)
            counter_iter = iter(counters)
            row = []
            for j in range(len(items)):
                if j in agg_positions:
                    counter = next(counter_iter)
                    row.append(len(counter) if isinstance(counter, set) else counter)
                else:
                    row.append(next(plain_iter))
            rows.append(tuple(row))
    else:
        rows = [
            tuple(evaluate(item.expr, env, graph) for item in items)
            for env in bindings
        ]

    if query.distinct:
        seen: set = set()
        unique = []
        for row in rows:
            key = row_sort_key(row)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique

    rows.sort(key=row_sort_key)
    for order_item in reversed(query.order_by):
        position = _order_column(order_item, query)
        rows.sort(
            key=lambda row: value_sort_key(row[position]),
            reverse=order_item.descending,
        )
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultTable(columns=columns, rows=rows)


def _order_column(order_item, query: CypherQuery) -> int:
    for j, item in enumerate(query.return_items):
        if item.alias and isinstance(order_item.expr, VariableRef) \
                and order_item.expr.name == item.alias:
            return j
        if item.expr == order_item.expr:
            return j
    raise ExecutionError("ORDER BY column is not among the returned items")


def execute(query: CypherQuery, graph: PropertyGraph) -> ResultTable:
    """Run a parsed query and return its result table."""
    bindings = _match_bindings(query.match_clauses, graph)
    if query.where is not None:
        bindings = [
            env for env in bindings if is_truthy(evaluate(query.where, env, graph))
        ]
    return _project(query, bindings, graph)
