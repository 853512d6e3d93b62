"""Deterministic query rewriting for evidence subgraph retrieval.

`rewrite_return_all_bound` turns a query into one that returns every node and
relationship bound by its MATCH patterns, which is how the engine collects
the subgraph behind an answer.
"""

from __future__ import annotations

import itertools

from .ast import (
    BoolOp,
    Comparison,
    CountAggregate,
    CountSubquery,
    CypherQuery,
    ExistsPredicate,
    FunctionCall,
    NodePattern,
    NotOp,
    PropertyAccess,
    RelPattern,
    ReturnItem,
    VariableRef,
)
from .formatter import format_expression


def _all_taken_names(query: CypherQuery) -> set[str]:
    taken: set[str] = set()

    def from_chains(chains) -> None:
        for chain in chains:
            for element in chain.elements:
                variable = getattr(element, "variable", None)
                if variable:
                    taken.add(variable)

    def from_expr(expr) -> None:
        if isinstance(expr, (ExistsPredicate, CountSubquery)):
            from_chains(expr.subquery.chains)
            from_expr(expr.subquery.where)
        elif isinstance(expr, BoolOp):
            for operand in expr.operands:
                from_expr(operand)
        elif isinstance(expr, NotOp):
            from_expr(expr.operand)
        elif isinstance(expr, Comparison):
            from_expr(expr.left)
            from_expr(expr.right)
        elif isinstance(expr, FunctionCall):
            for arg in expr.args:
                from_expr(arg)

    for clause in query.match_clauses:
        from_chains(clause.chains)
    from_expr(query.where)
    for item in query.return_items:
        if item.alias:
            taken.add(item.alias)
    return taken


def rewrite_return_all_bound(query: CypherQuery) -> CypherQuery:
    """Name every anonymous relationship (r1, r2, ... in appearance order,
    skipping names already in use) and replace RETURN with the bound node
    variables followed by the relationship variables. MATCH and WHERE are
    untouched; aggregations, DISTINCT, ORDER BY, and LIMIT are dropped."""
    rewritten = query.clone()
    taken = _all_taken_names(rewritten)
    fresh = itertools.count(1)

    node_vars: list[str] = []
    rel_vars: list[str] = []
    for clause in rewritten.match_clauses:
        for chain in clause.chains:
            for element in chain.elements:
                if isinstance(element, NodePattern):
                    if element.variable and element.variable not in node_vars:
                        node_vars.append(element.variable)
                elif isinstance(element, RelPattern):
                    if element.variable is None:
                        name = f"r{next(fresh)}"
                        while name in taken:
                            name = f"r{next(fresh)}"
                        taken.add(name)
                        element.variable = name
                    if element.variable not in rel_vars:
                        rel_vars.append(element.variable)

    rewritten.return_items = [
        ReturnItem(expr=VariableRef(name=name)) for name in node_vars + rel_vars
    ]
    rewritten.distinct = False
    rewritten.order_by = []
    rewritten.limit = None
    return rewritten


def is_all_variable_projection(query: CypherQuery) -> bool:
    return bool(query.return_items) and all(
        isinstance(item.expr, VariableRef) for item in query.return_items
    )


def match_topology_signature(query: CypherQuery):
    """A structural fingerprint of MATCH plus WHERE with variables renamed by
    binding position, so two queries differing only in variable names (or in
    naming a previously anonymous slot) compare equal."""
    clone = query.clone()
    mapping: dict[str, str] = {}
    counter = itertools.count(1)

    def slot_name(variable: str | None) -> str:
        if variable is None:
            return f"v{next(counter)}"
        if variable not in mapping:
            mapping[variable] = f"v{next(counter)}"
        return mapping[variable]

    def rename_chains(chains) -> None:
        for chain in chains:
            for element in chain.elements:
                element.variable = slot_name(element.variable)

    def rename_expr(expr) -> None:
        if isinstance(expr, VariableRef):
            expr.name = mapping.get(expr.name, expr.name)
        elif isinstance(expr, PropertyAccess):
            expr.variable = mapping.get(expr.variable, expr.variable)
        elif isinstance(expr, Comparison):
            rename_expr(expr.left)
            rename_expr(expr.right)
        elif isinstance(expr, BoolOp):
            for operand in expr.operands:
                rename_expr(operand)
        elif isinstance(expr, NotOp):
            rename_expr(expr.operand)
        elif isinstance(expr, FunctionCall):
            for arg in expr.args:
                rename_expr(arg)
        elif isinstance(expr, (ExistsPredicate, CountSubquery)):
            rename_chains(expr.subquery.chains)
            if expr.subquery.where is not None:
                rename_expr(expr.subquery.where)

    for clause in clone.match_clauses:
        rename_chains(clause.chains)
    if clone.where is not None:
        rename_expr(clone.where)

    clause_signatures = []
    for clause in clone.match_clauses:
        chain_signatures = []
        for chain in clause.chains:
            elements = []
            for element in chain.elements:
                if isinstance(element, NodePattern):
                    props = frozenset(
                        (key, literal.value) for key, literal in element.properties.items()
                    )
                    elements.append(("n", element.variable, element.label, props))
                else:
                    elements.append(
                        ("r", element.variable, element.rel_type, element.direction)
                    )
            chain_signatures.append(tuple(elements))
        clause_signatures.append(tuple(chain_signatures))
    where_signature = (
        format_expression(clone.where) if clone.where is not None else None
    )
    return (tuple(clause_signatures), where_signature)
