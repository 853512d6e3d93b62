"""AST for the supported Cypher subset.

Nodes are plain dataclasses compared structurally; property maps compare as
dicts, so key order never affects equality. The tree is treated as immutable
everywhere except inside the preprocessors, which deep-copy before editing.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterator, Union

OUT = "out"
IN = "in"


@dataclass
class Literal:
    value: Union[str, int, float, bool, None]


@dataclass
class NodePattern:
    variable: str | None = None
    label: str | None = None
    properties: dict[str, Literal] = field(default_factory=dict)


@dataclass
class RelPattern:
    variable: str | None = None
    rel_type: str | None = None
    direction: str = OUT


@dataclass
class PatternChain:
    """Alternating node and relationship patterns, starting and ending on a
    node: ``[NodePattern, RelPattern, NodePattern, ...]``."""

    elements: list

    def nodes(self) -> list[NodePattern]:
        return self.elements[0::2]

    def rels(self) -> list[RelPattern]:
        return self.elements[1::2]


@dataclass
class MatchClause:
    chains: list[PatternChain]


@dataclass
class VariableRef:
    name: str


@dataclass
class PropertyAccess:
    variable: str
    key: str


@dataclass
class FunctionCall:
    name: str
    args: list


@dataclass
class Comparison:
    op: str  # one of = <> < <= > >=
    left: object
    right: object


@dataclass
class BoolOp:
    op: str  # AND | OR
    operands: list


@dataclass
class NotOp:
    operand: object


@dataclass
class Subquery:
    """Pattern (plus optional WHERE) used inside EXISTS { } and COUNT { }."""

    chains: list[PatternChain]
    where: object | None = None


@dataclass
class ExistsPredicate:
    subquery: Subquery


@dataclass
class CountSubquery:
    subquery: Subquery


@dataclass
class CountAggregate:
    """COUNT(expr), COUNT(DISTINCT expr), or COUNT(*) when expr is None."""

    expr: object | None = None
    distinct: bool = False


@dataclass
class ReturnItem:
    expr: object
    alias: str | None = None


@dataclass
class OrderItem:
    expr: object
    descending: bool = False


@dataclass
class CypherQuery:
    match_clauses: list[MatchClause]
    where: object | None
    return_items: list[ReturnItem]
    distinct: bool = False
    order_by: list[OrderItem] = field(default_factory=list)
    limit: int | None = None

    def clone(self) -> "CypherQuery":
        return copy.deepcopy(self)


def chain_variables(chain: PatternChain) -> Iterator[tuple[str, str]]:
    """Yield (variable, kind) pairs bound by a chain, kind in {node, rel}."""
    for node in chain.nodes():
        if node.variable:
            yield node.variable, "node"
    for rel in chain.rels():
        if rel.variable:
            yield rel.variable, "rel"


def pattern_variables(query: CypherQuery) -> dict[str, str]:
    """Variables bound by the top-level MATCH clauses, mapped to their kind."""
    bound: dict[str, str] = {}
    for clause in query.match_clauses:
        for chain in clause.chains:
            for name, kind in chain_variables(chain):
                bound.setdefault(name, kind)
    return bound


def walk_expressions(expr) -> Iterator[object]:
    """Depth-first pre-order walk over an expression tree."""
    if expr is None:
        return
    yield expr
    if isinstance(expr, Comparison):
        yield from walk_expressions(expr.left)
        yield from walk_expressions(expr.right)
    elif isinstance(expr, BoolOp):
        for operand in expr.operands:
            yield from walk_expressions(operand)
    elif isinstance(expr, NotOp):
        yield from walk_expressions(expr.operand)
    elif isinstance(expr, FunctionCall):
        for arg in expr.args:
            yield from walk_expressions(arg)
    elif isinstance(expr, (ExistsPredicate, CountSubquery)):
        yield from walk_expressions(expr.subquery.where)
    elif isinstance(expr, CountAggregate):
        yield from walk_expressions(expr.expr)
