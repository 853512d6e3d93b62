"""Individual rewrite steps over query text or the parsed tree.

Each AST step returns a list of planned single changes; the chain applies
them one at a time so every change lands in the log individually. Plans
mutate literal objects in place, which is why the tree handed in must be a
private copy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

from ..cypher.ast import (
    BoolOp,
    Comparison,
    CountSubquery,
    CypherQuery,
    ExistsPredicate,
    FunctionCall,
    Literal,
    NodePattern,
    NotOp,
    PropertyAccess,
)
from ..graph.ingest import IngestError
from ..graph.model import PropertyGraph
from ..graph.schema import ParentRule
from .synonyms import SynonymProvider


@dataclass
class ValueSlot:
    """A string literal tied to a node property: where it sits in the tree,
    which property key it constrains, and the label of the node it applies
    to (None when the pattern is unlabeled)."""

    literal: Literal
    key: str
    label: str | None


def _label_env(chains, env: dict[str, str]) -> None:
    for chain in chains:
        for element in chain.elements:
            if isinstance(element, NodePattern) and element.variable and element.label:
                env.setdefault(element.variable, element.label)


def collect_value_slots(query: CypherQuery) -> list[ValueSlot]:
    """Property-bound string literals: inline map values plus comparison
    operands compared against a property access."""
    env: dict[str, str] = {}
    for clause in query.match_clauses:
        _label_env(clause.chains, env)

    slots: list[ValueSlot] = []

    def from_chains(chains, scope: dict[str, str]) -> None:
        for chain in chains:
            for element in chain.elements:
                if not isinstance(element, NodePattern):
                    continue
                for key, literal in element.properties.items():
                    if isinstance(literal.value, str):
                        slots.append(ValueSlot(literal, key, element.label))

    def from_expr(expr, scope: dict[str, str]) -> None:
        if isinstance(expr, Comparison):
            pairs = ((expr.left, expr.right), (expr.right, expr.left))
            for side, other in pairs:
                if isinstance(side, Literal) and isinstance(side.value, str):
                    if isinstance(other, PropertyAccess):
                        slots.append(
                            ValueSlot(side, other.key, scope.get(other.variable))
                        )
                    else:
                        slots.append(ValueSlot(side, "", None))
                elif isinstance(side, FunctionCall):
                    from_expr(side, scope)
        elif isinstance(expr, BoolOp):
            for operand in expr.operands:
                from_expr(operand, scope)
        elif isinstance(expr, NotOp):
            from_expr(expr.operand, scope)
        elif isinstance(expr, FunctionCall):
            for arg in expr.args:
                if isinstance(arg, Literal) and isinstance(arg.value, str):
                    slots.append(ValueSlot(arg, "", None))
        elif isinstance(expr, (ExistsPredicate, CountSubquery)):
            inner = dict(scope)
            _label_env(expr.subquery.chains, inner)
            from_chains(expr.subquery.chains, inner)
            if expr.subquery.where is not None:
                from_expr(expr.subquery.where, inner)

    for clause in query.match_clauses:
        from_chains(clause.chains, env)
    if query.where is not None:
        from_expr(query.where, env)
    return slots


Plan = Callable[[], None]


def plan_lowercase(query: CypherQuery) -> list[Plan]:
    plans: list[Plan] = []
    seen: set[int] = set()
    for slot in collect_value_slots(query):
        if id(slot.literal) in seen:
            continue
        seen.add(id(slot.literal))
        value = slot.literal.value
        if isinstance(value, str) and value != value.lower():
            plans.append(lambda lit=slot.literal: setattr(lit, "value", lit.value.lower()))
    return plans


def plan_synonyms(
    query: CypherQuery, graph: PropertyGraph, provider: SynonymProvider
) -> tuple[list[Plan], list[str]]:
    """For every name value missing from the graph, take the first provider
    candidate the graph does contain. Values with no workable candidate are
    reported, not changed."""
    plans: list[Plan] = []
    notes: list[str] = []
    for slot in collect_value_slots(query):
        if slot.key != "name":
            continue
        value = slot.literal.value
        if graph.has_property_value(slot.label, "name", value):
            continue
        replacement = None
        for candidate in provider.lookup(value, slot.label):
            candidate = candidate.lower()
            if graph.has_property_value(slot.label, "name", candidate):
                replacement = candidate
                break
        if replacement is not None:
            plans.append(
                lambda lit=slot.literal, new=replacement: setattr(lit, "value", new)
            )
        else:
            where = f"{slot.label}.name" if slot.label else "name"
            notes.append(f'synonyms: no mapping found for "{value}" ({where})')
    return plans, notes


def plan_child_to_parent(
    query: CypherQuery, parent_child: Mapping[str, ParentRule]
) -> list[Plan]:
    """Replace child name values and child labels with their parents. Applied
    once per occurrence: a value that maps to another mapped value is not
    chased further, so chains in the map should be pre-flattened."""
    plans: list[Plan] = []
    for slot in collect_value_slots(query):
        if slot.key != "name" or not isinstance(slot.literal.value, str):
            continue
        rule = parent_child.get(slot.literal.value)
        if rule is not None and rule.kind == "name":
            plans.append(
                lambda lit=slot.literal, new=rule.parent: setattr(lit, "value", new)
            )

    def relabel(chains) -> None:
        for chain in chains:
            for element in chain.elements:
                if isinstance(element, NodePattern) and element.label:
                    rule = parent_child.get(element.label)
                    if rule is not None and rule.kind == "label":
                        plans.append(
                            lambda el=element, new=rule.parent: setattr(el, "label", new)
                        )

    def walk_expr(expr) -> None:
        if isinstance(expr, BoolOp):
            for operand in expr.operands:
                walk_expr(operand)
        elif isinstance(expr, NotOp):
            walk_expr(expr.operand)
        elif isinstance(expr, (ExistsPredicate, CountSubquery)):
            relabel(expr.subquery.chains)
            if expr.subquery.where is not None:
                walk_expr(expr.subquery.where)
        elif isinstance(expr, Comparison):
            walk_expr(expr.left)
            walk_expr(expr.right)

    for clause in query.match_clauses:
        relabel(clause.chains)
    if query.where is not None:
        walk_expr(query.where)
    return plans


@dataclass(frozen=True)
class DeprecationRule:
    """Regular-expression rewrite for constructs the grammar no longer
    accepts, applied to raw query text before parsing."""

    pattern: str
    replacement: str


# SIZE((n)-[:t]->()) counted pattern matches; COUNT { ... } is the current
# spelling. The inner group tolerates one level of nested parentheses, which
# covers pattern chains.
DEFAULT_DEPRECATION_RULES = (
    DeprecationRule(
        pattern=r"(?i)\bSIZE\s*\(\s*(\([^()]*\)(?:[^()]|\([^()]*\))*?)\s*\)",
        replacement=r"COUNT { \1 }",
    ),
)


def load_deprecation_rules(source) -> tuple[DeprecationRule, ...]:
    """Read ``pattern<TAB>replacement`` lines (# starts a comment)."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)
    rules: list[DeprecationRule] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise IngestError(f"deprecation rule line {number} is malformed: {line!r}")
        try:
            re.compile(parts[0])
        except re.error as exc:
            raise IngestError(f"deprecation rule line {number}: {exc}") from exc
        rules.append(DeprecationRule(pattern=parts[0], replacement=parts[1]))
    return tuple(rules)


def next_deprecation_change(
    text: str, rules: tuple[DeprecationRule, ...]
) -> tuple[int, str, str] | None:
    """Leftmost-next rewrite as (position, old_fragment, new_fragment), or
    None once no rule matches."""
    best: tuple[int, re.Match, DeprecationRule] | None = None
    for rule in rules:
        match = re.search(rule.pattern, text)
        if match and (best is None or match.start() < best[0]):
            best = (match.start(), match, rule)
    if best is None:
        return None
    _, match, rule = best
    return match.start(), match.group(0), match.expand(rule.replacement)
