"""Parsing, formatting, execution, and rewriting for the query subset."""

from .adapter import (
    AdapterResult,
    EmbeddedQueryRunner,
    QueryRunner,
    cell_to_wire,
    edge_to_map,
    node_to_map,
)
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
    OrderItem,
    PatternChain,
    PropertyAccess,
    RelPattern,
    ReturnItem,
    Subquery,
    VariableRef,
)
from .executor import ExecutionError, ResultTable, execute
from .formatter import format_expression, format_query
from .parser import ParseError, parse
from .rewrite import (
    is_all_variable_projection,
    match_topology_signature,
    rewrite_return_all_bound,
)

__all__ = [
    "AdapterResult",
    "BoolOp",
    "Comparison",
    "CountAggregate",
    "CountSubquery",
    "CypherQuery",
    "EmbeddedQueryRunner",
    "ExecutionError",
    "ExistsPredicate",
    "FunctionCall",
    "Literal",
    "MatchClause",
    "NodePattern",
    "NotOp",
    "OrderItem",
    "ParseError",
    "PatternChain",
    "PropertyAccess",
    "QueryRunner",
    "RelPattern",
    "ResultTable",
    "ReturnItem",
    "Subquery",
    "VariableRef",
    "cell_to_wire",
    "edge_to_map",
    "execute",
    "format_expression",
    "format_query",
    "is_all_variable_projection",
    "match_topology_signature",
    "node_to_map",
    "parse",
    "rewrite_return_all_bound",
]
