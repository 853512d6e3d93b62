"""Tokenizer and recursive-descent parser for the Cypher subset.

Supported surface: one or more MATCH clauses (comma-separated chains,
multi-hop, both edge directions, inline literal property maps), WHERE with
comparisons, AND/OR/NOT, EXISTS pattern predicates, COUNT { pattern } counts
and function calls, RETURN with optional DISTINCT, aliases and COUNT
aggregates, ORDER BY over returned columns, and LIMIT. Anything outside the
subset raises :class:`ParseError` with the character offset of the problem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

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

KEYWORDS = {
    "MATCH", "WHERE", "RETURN", "AS", "AND", "OR", "NOT", "EXISTS", "COUNT",
    "DISTINCT", "ORDER", "BY", "LIMIT", "ASC", "DESC", "TRUE", "FALSE", "NULL",
}

COMPARISON_OPS = ("=", "<>", "<", "<=", ">", ">=")

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\"}


class ParseError(Exception):
    def __init__(self, message: str, position: int, found: str | None = None,
                 expected: str | None = None) -> None:
        detail = message
        if expected:
            detail += f" (expected {expected}"
            detail += f", found {found!r})" if found else ")"
        elif found:
            detail += f" (found {found!r})"
        super().__init__(f"{detail} at position {position}")
        self.message = message
        self.position = position
        self.found = found
        self.expected = expected


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | punct | eof
    text: str
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT_RE.match(text, i)
            tokens.append(Token("ident", m.group(), m.group(), i))
            i = m.end()
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            raw = m.group()
            value: object = float(raw) if "." in raw else int(raw)
            tokens.append(Token("number", raw, value, i))
            i = m.end()
            continue
        if ch in ("'", '"'):
            start = i
            i += 1
            parts: list[str] = []
            while i < n and text[i] != ch:
                if text[i] == "\\":
                    if i + 1 >= n:
                        raise ParseError("unterminated string literal", start)
                    parts.append(_ESCAPES.get(text[i + 1], text[i + 1]))
                    i += 2
                else:
                    parts.append(text[i])
                    i += 1
            if i >= n:
                raise ParseError("unterminated string literal", start)
            i += 1
            tokens.append(Token("string", text[start:i], "".join(parts), start))
            continue
        two = text[i:i + 2]
        if two in ("<=", ">=", "<>"):
            tokens.append(Token("punct", two, two, i))
            i += 2
            continue
        if ch in "()[]{}:,.=<>-*":
            tokens.append(Token("punct", ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token("eof", "", None, n))
    return tokens


def _is_keyword(token: Token, word: str) -> bool:
    return token.kind == "ident" and token.text.upper() == word


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self._positions: dict[int, int] = {}

    # -- token helpers -------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.i]
        if token.kind != "eof":
            self.i += 1
        return token

    def fail(self, message: str, token: Token | None = None, expected: str | None = None):
        token = token or self.peek()
        found = token.text if token.kind != "eof" else "end of input"
        raise ParseError(message, token.pos, found=found, expected=expected)

    def expect_punct(self, text: str) -> Token:
        token = self.peek()
        if token.kind == "punct" and token.text == text:
            return self.advance()
        self.fail("unexpected token", expected=repr(text))

    def at_punct(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == text

    def take_punct(self, text: str) -> bool:
        if self.at_punct(text):
            self.advance()
            return True
        return False

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if _is_keyword(token, word):
            return self.advance()
        self.fail("unexpected token", expected=word)

    def take_keyword(self, word: str) -> bool:
        if _is_keyword(self.peek(), word):
            self.advance()
            return True
        return False

    def expect_name(self, what: str) -> Token:
        token = self.peek()
        if token.kind != "ident":
            self.fail(f"expected {what}", expected="an identifier")
        if token.text.upper() in KEYWORDS:
            self.fail(f"reserved word cannot be used as {what}", token)
        return self.advance()

    # -- grammar -------------------------------------------------------------

    def parse_query(self) -> CypherQuery:
        clauses: list[MatchClause] = []
        wheres: list[object] = []
        token = self.peek()
        if not _is_keyword(token, "MATCH"):
            self.fail("query must start with MATCH", expected="MATCH")
        while _is_keyword(self.peek(), "MATCH"):
            self.advance()
            chains = [self.parse_chain()]
            while self.take_punct(","):
                chains.append(self.parse_chain())
            clauses.append(MatchClause(chains=chains))
            if self.take_keyword("WHERE"):
                wheres.append(self.parse_expression())
        self.expect_keyword("RETURN")
        distinct = self.take_keyword("DISTINCT")
        items = [self.parse_return_item()]
        while self.take_punct(","):
            items.append(self.parse_return_item())
        order_by: list[OrderItem] = []
        if _is_keyword(self.peek(), "ORDER"):
            self.advance()
            self.expect_keyword("BY")
            order_by.append(self.parse_order_item())
            while self.take_punct(","):
                order_by.append(self.parse_order_item())
        limit: int | None = None
        if self.take_keyword("LIMIT"):
            token = self.peek()
            if token.kind != "number" or not isinstance(token.value, int):
                self.fail("LIMIT takes a non-negative integer", expected="an integer")
            self.advance()
            limit = token.value
        if self.peek().kind != "eof":
            self.fail("unexpected trailing input")

        where: object | None = None
        if len(wheres) == 1:
            where = wheres[0]
        elif wheres:
            operands: list[object] = []
            for expr in wheres:
                if isinstance(expr, BoolOp) and expr.op == "AND":
                    operands.extend(expr.operands)
                else:
                    operands.append(expr)
            where = BoolOp(op="AND", operands=operands)

        query = CypherQuery(
            match_clauses=clauses,
            where=where,
            return_items=items,
            distinct=distinct,
            order_by=order_by,
            limit=limit,
        )
        self._validate(query)
        return query

    # -- patterns ------------------------------------------------------------

    def parse_chain(self) -> PatternChain:
        elements: list = [self.parse_node_pattern()]
        while True:
            if self.at_punct("-"):
                open_pos = self.peek().pos
                self.advance()
                rel = self.parse_rel_body()
                self.expect_punct("-")
                if self.take_punct(">"):
                    rel.direction = "out"
                else:
                    raise ParseError(
                        "undirected relationships are not supported", open_pos
                    )
            elif self.at_punct("<"):
                self.advance()
                self.expect_punct("-")
                rel = self.parse_rel_body()
                self.expect_punct("-")
                if self.at_punct(">"):
                    self.fail("relationship cannot point both ways")
                rel.direction = "in"
            else:
                break
            elements.append(rel)
            elements.append(self.parse_node_pattern())
        return PatternChain(elements=elements)

    def parse_rel_body(self) -> RelPattern:
        self.expect_punct("[")
        variable = None
        rel_type = None
        token = self.peek()
        if token.kind == "ident" and token.text.upper() not in KEYWORDS:
            variable = self.advance().text
        if self.take_punct(":"):
            rel_type = self.expect_name("a relationship type").text
        self.expect_punct("]")
        return RelPattern(variable=variable, rel_type=rel_type)

    def parse_node_pattern(self) -> NodePattern:
        self.expect_punct("(")
        variable = None
        label = None
        token = self.peek()
        if token.kind == "ident" and token.text.upper() not in KEYWORDS:
            variable = self.advance().text
        if self.take_punct(":"):
            label = self.expect_name("a node label").text
        properties: dict[str, Literal] = {}
        if self.take_punct("{"):
            while True:
                key_token = self.expect_name("a property key")
                if key_token.text in properties:
                    raise ParseError(
                        f"duplicate property key {key_token.text!r}", key_token.pos
                    )
                self.expect_punct(":")
                properties[key_token.text] = self.parse_literal()
                if not self.take_punct(","):
                    break
            self.expect_punct("}")
        self.expect_punct(")")
        return NodePattern(variable=variable, label=label, properties=properties)

    def parse_literal(self) -> Literal:
        token = self.peek()
        if token.kind in ("string", "number"):
            self.advance()
            return Literal(token.value)
        if token.kind == "punct" and token.text == "-" and self.peek(1).kind == "number":
            self.advance()
            number = self.advance()
            return Literal(-number.value)
        if _is_keyword(token, "TRUE"):
            self.advance()
            return Literal(True)
        if _is_keyword(token, "FALSE"):
            self.advance()
            return Literal(False)
        if _is_keyword(token, "NULL"):
            self.advance()
            return Literal(None)
        self.fail("expected a literal value")

    # -- expressions -----------------------------------------------------------

    def parse_expression(self):
        operands = [self.parse_and_expr()]
        while self.take_keyword("OR"):
            operands.append(self.parse_and_expr())
        return self._bool_op("OR", operands)

    def parse_and_expr(self):
        operands = [self.parse_not_expr()]
        while self.take_keyword("AND"):
            operands.append(self.parse_not_expr())
        return self._bool_op("AND", operands)

    @staticmethod
    def _bool_op(op: str, operands: list):
        if len(operands) == 1:
            return operands[0]
        flat: list = []
        for operand in operands:
            if isinstance(operand, BoolOp) and operand.op == op:
                flat.extend(operand.operands)
            else:
                flat.append(operand)
        return BoolOp(op=op, operands=flat)

    def parse_not_expr(self):
        if self.take_keyword("NOT"):
            return NotOp(operand=self.parse_not_expr())
        return self.parse_comparison()

    def parse_comparison(self):
        left = self.parse_value_term()
        token = self.peek()
        if token.kind == "punct" and token.text in COMPARISON_OPS:
            self.advance()
            right = self.parse_value_term()
            return Comparison(op=token.text, left=left, right=right)
        return left

    def parse_value_term(self):
        token = self.peek()
        if token.kind in ("string", "number"):
            return self.parse_literal()
        if token.kind == "punct" and token.text == "-":
            return self.parse_literal()
        if token.kind == "punct" and token.text == "(":
            self.advance()
            inner = self.parse_expression()
            self.expect_punct(")")
            return inner
        if token.kind != "ident":
            self.fail("expected an expression")
        upper = token.text.upper()
        if upper in ("TRUE", "FALSE", "NULL"):
            return self.parse_literal()
        if upper == "COUNT":
            self.advance()
            if self.take_punct("{"):
                return CountSubquery(subquery=self.parse_subquery("}"))
            raise ParseError(
                "COUNT(...) aggregates are only allowed in RETURN; "
                "use COUNT { pattern } here",
                token.pos,
            )
        if upper == "EXISTS":
            self.advance()
            if self.take_punct("{"):
                return ExistsPredicate(subquery=self.parse_subquery("}"))
            if self.take_punct("("):
                chain = self.parse_chain()
                self.expect_punct(")")
                return ExistsPredicate(subquery=Subquery(chains=[chain], where=None))
            self.fail("EXISTS requires a pattern", expected="'{' or '('")
        if upper in KEYWORDS:
            self.fail("unexpected token")
        name_token = self.advance()
        if self.at_punct("("):
            self.advance()
            args: list = []
            if not self.at_punct(")"):
                args.append(self.parse_expression())
                while self.take_punct(","):
                    args.append(self.parse_expression())
            self.expect_punct(")")
            return FunctionCall(name=name_token.text.lower(), args=args)
        if self.take_punct("."):
            key = self.expect_name("a property key")
            node = PropertyAccess(variable=name_token.text, key=key.text)
            self._positions[id(node)] = name_token.pos
            return node
        node = VariableRef(name=name_token.text)
        self._positions[id(node)] = name_token.pos
        return node

    def parse_subquery(self, closer: str) -> Subquery:
        self.take_keyword("MATCH")
        chains = [self.parse_chain()]
        while self.take_punct(","):
            chains.append(self.parse_chain())
        where = None
        if self.take_keyword("WHERE"):
            where = self.parse_expression()
        self.expect_punct(closer)
        return Subquery(chains=chains, where=where)

    # -- RETURN / ORDER BY -----------------------------------------------------

    def parse_return_item(self) -> ReturnItem:
        token = self.peek()
        expr: object
        if _is_keyword(token, "COUNT"):
            self.advance()
            if self.take_punct("("):
                distinct = self.take_keyword("DISTINCT")
                if self.take_punct("*"):
                    if distinct:
                        raise ParseError("COUNT(DISTINCT *) is not supported", token.pos)
                    expr = CountAggregate(expr=None, distinct=False)
                else:
                    expr = CountAggregate(expr=self.parse_expression(), distinct=distinct)
                self.expect_punct(")")
            elif self.take_punct("{"):
                expr = CountSubquery(subquery=self.parse_subquery("}"))
            else:
                self.fail("COUNT requires (...) or { pattern }", expected="'(' or '{'")
        elif token.kind == "ident" and token.text.upper() not in KEYWORDS:
            expr = self.parse_projection_ref()
        else:
            self.fail(
                "unsupported RETURN expression; expected a variable, a property "
                "access, or COUNT"
            )
        alias = None
        if self.take_keyword("AS"):
            alias = self.expect_name("an alias").text
        return ReturnItem(expr=expr, alias=alias)

    def parse_projection_ref(self):
        name_token = self.expect_name("a variable")
        if self.peek().text == "(" and self.peek().kind == "punct":
            raise ParseError(
                "function calls are not supported here; only variables, "
                "property accesses, and COUNT can be projected",
                name_token.pos,
            )
        if self.take_punct("."):
            key = self.expect_name("a property key")
            node = PropertyAccess(variable=name_token.text, key=key.text)
        else:
            node = VariableRef(name=name_token.text)
        self._positions[id(node)] = name_token.pos
        return node

    def parse_order_item(self) -> OrderItem:
        expr = self.parse_projection_ref()
        descending = False
        if self.take_keyword("DESC"):
            descending = True
        else:
            self.take_keyword("ASC")
        return OrderItem(expr=expr, descending=descending)

    # -- validation --------------------------------------------------------------

    def _pos_of(self, node: object) -> int:
        return self._positions.get(id(node), 0)

    def _validate(self, query: CypherQuery) -> None:
        bound: dict[str, str] = {}
        for clause in query.match_clauses:
            for chain in clause.chains:
                self._bind_chain(chain, bound)
        if query.where is not None:
            self._check_expr(query.where, bound)

        aliases: list[str] = []
        for item in query.return_items:
            if isinstance(item.expr, CountAggregate):
                if item.expr.expr is not None:
                    self._check_expr(item.expr.expr, bound)
            elif isinstance(item.expr, CountSubquery):
                self._check_expr(item.expr, bound)
            else:
                self._check_expr(item.expr, bound)
            if item.alias:
                if item.alias in aliases:
                    raise ParseError(f"duplicate alias {item.alias!r}", 0)
                aliases.append(item.alias)

        for order in query.order_by:
            if isinstance(order.expr, VariableRef) and order.expr.name in aliases:
                continue
            if any(order.expr == item.expr for item in query.return_items):
                continue
            raise ParseError(
                "ORDER BY must reference a returned column or alias",
                self._pos_of(order.expr),
            )

    def _bind_chain(self, chain: PatternChain, scope: dict[str, str]) -> None:
        for node in chain.nodes():
            if node.variable:
                if scope.get(node.variable) == "rel":
                    raise ParseError(
                        f"variable {node.variable!r} is used as both a node and "
                        "a relationship",
                        0,
                    )
                scope[node.variable] = "node"
        for rel in chain.rels():
            if rel.variable:
                if rel.variable in scope:
                    raise ParseError(
                        f"relationship variable {rel.variable!r} is bound more "
                        "than once",
                        0,
                    )
                scope[rel.variable] = "rel"

    def _check_expr(self, expr, scope: dict[str, str]) -> None:
        if isinstance(expr, Literal):
            return
        if isinstance(expr, VariableRef):
            if expr.name not in scope:
                raise ParseError(
                    f"variable {expr.name!r} is not bound by any MATCH pattern",
                    self._pos_of(expr),
                )
            return
        if isinstance(expr, PropertyAccess):
            if expr.variable not in scope:
                raise ParseError(
                    f"variable {expr.variable!r} is not bound by any MATCH pattern",
                    self._pos_of(expr),
                )
            return
        if isinstance(expr, Comparison):
            self._check_expr(expr.left, scope)
            self._check_expr(expr.right, scope)
            return
        if isinstance(expr, BoolOp):
            for operand in expr.operands:
                self._check_expr(operand, scope)
            return
        if isinstance(expr, NotOp):
            self._check_expr(expr.operand, scope)
            return
        if isinstance(expr, FunctionCall):
            for arg in expr.args:
                self._check_expr(arg, scope)
            return
        if isinstance(expr, (ExistsPredicate, CountSubquery)):
            local = dict(scope)
            for chain in expr.subquery.chains:
                self._bind_chain(chain, local)
            if expr.subquery.where is not None:
                self._check_expr(expr.subquery.where, local)
            return
        raise ParseError(f"unsupported expression node {type(expr).__name__}", 0)


def parse(text: str) -> CypherQuery:
    """Parse a query in the supported subset; raise ParseError otherwise."""
    return _Parser(text).parse_query()
