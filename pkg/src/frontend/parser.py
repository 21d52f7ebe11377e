"""Parser for ADE system files and series specifications.

Systems are parsed with PLY into a small syntax tree, then evaluated once every
identifier has been classified:

    vars x;                       # optional; otherwise the variables used in D[...]
    func y2(x2);                  # optional dependency restriction
    D[x](y1)^2 + y1^2 - 1 = 0;    # input ADEs, rational expressions allowed
    D[x](y2) = y2;
    z = y1 + y2;                  # the target comes last

Identifiers that are neither independent variables nor indeterminates are parameters.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence, Union

import ply.lex as lex
import ply.yacc as yacc
from pydantic import BaseModel, Field
from sympy import Rational

from src.algebra.diffalg import DiffContext, DiffFraction, DiffIndeterminate, DiffPoly
from src.algebra.polyring import Poly, poly_normalize
from src.engines.dynsys import InputAde
from src.engines.seriescheck import Builtin, TruncSeries, evaluate_target, series_builtin, series_ring
from src.exceptions import DalgError, DegenerateExpressionError, ParseError, UsageError

reserved = {"vars": "VARS", "func": "FUNC", "D": "D"}

tokens = (
    "IDENT",
    "NUMBER",
    "PLUS",
    "MINUS",
    "TIMES",
    "DIVIDE",
    "CARET",
    "EQUALS",
    "SEMI",
    "COMMA",
    "LPAREN",
    "RPAREN",
    "LBRACKET",
    "RBRACKET",
) + tuple(reserved.values())

t_PLUS = r"\+"
t_MINUS = r"-"
t_TIMES = r"\*"
t_DIVIDE = r"/"
t_CARET = r"\^"
t_EQUALS = r"="
t_SEMI = r";"
t_COMMA = r","
t_LPAREN = r"\("
t_RPAREN = r"\)"
t_LBRACKET = r"\["
t_RBRACKET = r"\]"

t_ignore = " \t\r"
t_ignore_COMMENT = r"\#[^\n]*"


def t_IDENT(t):
    r"[A-Za-z_][A-Za-z0-9_]*"
    t.type = reserved.get(t.value, "IDENT")
    return t


def t_NUMBER(t):
    r"\d+"
    t.value = int(t.value)
    return t


def t_newline(t):
    r"\n+"
    t.lexer.lineno += len(t.value)


def t_error(t):
    line, column = _position(t.lexer.lexdata, t.lexpos)
    raise ParseError(f"Illegal character {t.value[0]!r}", line, column)


def _position(text: str, lexpos: int) -> tuple[int, int]:
    line = text.count("\n", 0, lexpos) + 1
    column = lexpos - (text.rfind("\n", 0, lexpos) + 1) + 1
    return line, column


@dataclass(frozen=True)
class Node:
    """A syntax tree node; ``pos`` is the lexer offset of its first token."""

    kind: str
    args: tuple
    pos: int


# Parsing rules


def p_system(p):
    """system : statement
    | system SEMI statement"""
    if len(p) == 2:
        p[0] = [p[1]] if p[1] is not None else []
    else:
        p[0] = p[1] + ([p[3]] if p[3] is not None else [])


def p_statement_empty(p):
    "statement :"
    p[0] = None


def p_statement_vars(p):
    "statement : VARS namelist"
    p[0] = Node("vars", tuple(p[2]), p.lexpos(1))


def p_statement_func(p):
    "statement : FUNC IDENT LPAREN namelist RPAREN"
    p[0] = Node("func", (p[2], tuple(p[4])), p.lexpos(1))


def p_statement_equation(p):
    "statement : expr EQUALS expr"
    p[0] = Node("equation", (p[1], p[3]), p.lexpos(2))


def p_namelist(p):
    """namelist : IDENT
    | namelist IDENT
    | namelist COMMA IDENT"""
    p[0] = [p[1]] if len(p) == 2 else p[1] + [p[len(p) - 1]]


def p_expr_binop(p):
    """expr : expr PLUS term
    | expr MINUS term"""
    p[0] = Node("add" if p[2] == "+" else "sub", (p[1], p[3]), p.lexpos(2))


def p_expr_term(p):
    "expr : term"
    p[0] = p[1]


def p_term_binop(p):
    """term : term TIMES factor
    | term DIVIDE factor"""
    p[0] = Node("mul" if p[2] == "*" else "div", (p[1], p[3]), p.lexpos(2))


def p_term_factor(p):
    "term : factor"
    p[0] = p[1]


def p_factor_power(p):
    "factor : atom CARET atom"
    exponent = p[3]
    if exponent.kind != "number":
        line, column = _position(p.lexer.lexdata, exponent.pos)
        raise ParseError("Exponents must be nonnegative integers", line, column)
    p[0] = Node("pow", (p[1], exponent.args[0]), p.lexpos(2))


def p_factor_atom(p):
    "factor : atom"
    p[0] = p[1]


def p_atom_number(p):
    "atom : NUMBER"
    p[0] = Node("number", (p[1],), p.lexpos(1))


def p_atom_name(p):
    "atom : IDENT"
    p[0] = Node("name", (p[1],), p.lexpos(1))


def p_atom_group(p):
    "atom : LPAREN expr RPAREN"
    p[0] = p[2]


def p_atom_uminus(p):
    "atom : MINUS factor"
    p[0] = Node("neg", (p[2],), p.lexpos(1))


def p_atom_deriv(p):
    "atom : D LBRACKET namelist RBRACKET LPAREN IDENT RPAREN"
    p[0] = Node("deriv", (tuple(p[3]), p[6]), p.lexpos(1))


def p_atom_call(p):
    "atom : IDENT LPAREN expr RPAREN"
    p[0] = Node("call", (p[1], p[3]), p.lexpos(1))


def p_error(p):
    if p is None:
        raise ParseError("Unexpected end of input")
    # tokens matched by string rules carry no lexer reference
    line, column = _position(_built["text"], p.lexpos)
    raise ParseError(f"Syntax error on token {p.value!r}", line, column)


_lock = threading.Lock()
_built: dict[str, Any] = {}


def _syntax_tree(text: str) -> list[Node]:
    """Statements of ``text``; PLY parser objects are not reentrant."""
    with _lock:
        if not _built:
            _built["lexer"] = lex.lex()
            _built["parser"] = yacc.yacc(debug=False, write_tables=False, errorlog=yacc.NullLogger())
        lexer = _built["lexer"].clone()
        _built["text"] = text
        return _built["parser"].parse(text, lexer=lexer)


class SessionDecl(BaseModel):
    """Declarations of a system file."""

    independents: list[str] = Field(description="Independent variables, in derivation order", examples=[["x"]])
    indeterminates: dict[str, list[str]] = Field(
        description="Differential indeterminates and the variables they depend on", examples=[{"y1": ["x"]}]
    )
    parameters: list[str] = Field(default_factory=list, description="Free constants", examples=[["c", "g2"]])


@dataclass(frozen=True)
class Target:
    """The target relation ``name = expr``."""

    name: str
    expr: DiffFraction


@dataclass(frozen=True)
class ParsedSystem:
    """Declarations, input ADEs and target of a system file."""

    decl: SessionDecl
    ades: list[InputAde]
    target: Target
    context: DiffContext = field(repr=False)

    def __iter__(self):
        return iter((self.decl, self.ades, self.target))


def _walk(node: Node, visit: Callable[[Node], None]) -> None:
    visit(node)
    for arg in node.args:
        if isinstance(arg, Node):
            _walk(arg, visit)


class _Builder:
    """Evaluates syntax trees once identifiers are classified."""

    def __init__(self, text: str, context: DiffContext) -> None:
        self.text = text
        self.context = context

    def error(self, message: str, node: Node) -> ParseError:
        line, column = _position(self.text, node.pos)
        return ParseError(message, line, column)

    def evaluate(self, node: Node) -> DiffFraction:
        ctx = self.context
        if node.kind == "number":
            return DiffFraction(DiffPoly.constant(ctx, node.args[0]))
        if node.kind == "name":
            (name,) = node.args
            if name in ctx.independents:
                return DiffFraction(DiffPoly.independent(ctx, name))
            if name in ctx.parameters:
                return DiffFraction(DiffPoly.parameter(ctx, name))
            if any(y.name == name for y in ctx.indeterminates):
                return DiffFraction(DiffPoly.descriptor(ctx, name, (0,) * ctx.l))
            raise self.error(f"Unknown identifier {name}", node)
        if node.kind == "deriv":
            variables, name = node.args
            index = [variables.count(x) for x in ctx.independents]
            y = ctx.indeterminate(name)
            if any(n and x not in y.dependencies for n, x in zip(index, ctx.independents)):
                return DiffFraction(DiffPoly.constant(ctx, 0))
            return DiffFraction(DiffPoly.descriptor(ctx, name, index))
        if node.kind == "neg":
            return -self.evaluate(node.args[0])
        if node.kind == "pow":
            return self.evaluate(node.args[0]) ** node.args[1]
        if node.kind == "call":
            raise self.error(f"Function calls such as {node.args[0]}(...) are not allowed in ADE inputs", node)
        left, right = (self.evaluate(arg) for arg in node.args)
        if node.kind == "add":
            return left + right
        if node.kind == "sub":
            return left - right
        if node.kind == "mul":
            return left * right
        if right.num.is_zero:
            raise self.error("Division by zero", node)
        return left / right


def _classify(statements: Sequence[Node], text: str) -> tuple[SessionDecl, Node, list[Node]]:
    """Split statements into declarations, input equations and the target, and classify identifiers."""
    declared_vars: list[str] = []
    functions: dict[str, list[str]] = {}
    equations: list[Node] = []
    for statement in statements:
        if statement.kind == "vars":
            declared_vars.extend(x for x in statement.args if x not in declared_vars)
        elif statement.kind == "func":
            name, deps = statement.args
            if name in functions:
                line, column = _position(text, statement.pos)
                raise ParseError(f"Function {name} is declared twice", line, column)
            functions[name] = list(deps)
        else:
            equations.append(statement)

    if not equations:
        raise ParseError("Expected input ADEs followed by a target `z = expr`")
    target = equations[-1]
    lhs = target.args[0]
    if lhs.kind != "name":
        line, column = _position(text, target.pos)
        raise ParseError("The last statement must be a target of the form `z = expr`", line, column)
    output = lhs.args[0]
    inputs = equations[:-1]
    if not inputs:
        line, column = _position(text, target.pos)
        raise ParseError("At least one input ADE is required before the target", line, column)

    derivative_vars: list[str] = []
    indeterminates: list[str] = list(functions)
    names: list[str] = []

    def visit(node: Node) -> None:
        if node.kind == "deriv":
            variables, name = node.args
            derivative_vars.extend(x for x in variables if x not in derivative_vars)
            if name not in indeterminates:
                indeterminates.append(name)
        elif node.kind == "name" and node.args[0] not in names:
            names.append(node.args[0])

    for statement in equations:
        _walk(statement.args[1], visit)
        if statement is not target:
            _walk(statement.args[0], visit)

    independents = declared_vars or derivative_vars
    for deps in functions.values():
        independents += [x for x in deps if x not in independents]
    if not independents:
        raise ParseError("No independent variable: declare one with `vars x;` or use D[x](y)")

    def misuse(kind: str) -> Optional[Node]:
        found: list[Node] = []

        def check(node: Node) -> None:
            if kind == "deriv" and node.kind == "deriv":
                variables, name = node.args
                if name in independents or name == output:
                    found.append(node)
                elif any(x not in independents for x in variables):
                    found.append(node)
            if kind == "output" and node.kind == "name" and node.args[0] == output:
                found.append(node)

        for statement in equations:
            _walk(statement.args[1], check)
            if statement is not target:
                _walk(statement.args[0], check)
        return found[0] if found else None

    bad = misuse("deriv")
    if bad is not None:
        line, column = _position(text, bad.pos)
        variables, name = bad.args
        if name in independents:
            raise ParseError(f"Independent variable {name} used as a function", line, column)
        if name == output:
            raise ParseError(f"Target {name} cannot be differentiated in its own definition", line, column)
        unknown = [x for x in variables if x not in independents]
        raise ParseError(f"D[...] uses undeclared independent variables {unknown}", line, column)
    bad = misuse("output")
    if bad is not None:
        line, column = _position(text, bad.pos)
        raise ParseError(f"Target name {output} cannot be used in the inputs or the target expression", line, column)
    if output in independents or output in indeterminates:
        line, column = _position(text, target.pos)
        raise ParseError(f"Target name {output} is already an independent variable or indeterminate", line, column)

    parameters = [n for n in names if n not in independents and n not in indeterminates and n != output]
    decl = SessionDecl(
        independents=list(independents),
        indeterminates={y: list(functions.get(y, independents)) for y in indeterminates},
        parameters=parameters,
    )
    return decl, target, inputs


def parse_system(text: str) -> ParsedSystem:
    """Parse a system file into declarations, input ADEs and the target.

    Args:
        text: the file contents

    Returns:
        ParsedSystem, which also unpacks as (decl, ades, target)

    Raises:
        ParseError: On syntax errors, identifier misuse, non-integer exponents and division by zero
        UnsupportedInputError: If an input ADE involves several indeterminates or has order 0
    """
    statements = _syntax_tree(text)
    decl, target_node, inputs = _classify(statements, text)
    try:
        context = DiffContext(
            independents=tuple(decl.independents),
            indeterminates=tuple(
                DiffIndeterminate(name, tuple(deps), ordinal)
                for ordinal, (name, deps) in enumerate(decl.indeterminates.items())
            ),
            parameters=tuple(decl.parameters),
        )
    except UsageError as e:
        raise ParseError(f"Invalid declarations: {e}")
    builder = _Builder(text, context)

    ades: list[InputAde] = []
    for equation in inputs:
        lhs, rhs = equation.args
        try:
            relation = builder.evaluate(lhs) - builder.evaluate(rhs)
        except DegenerateExpressionError as e:
            raise builder.error(str(e), equation)
        if relation.num.is_zero:
            raise builder.error("Equation reduces to 0 = 0", equation)
        den = relation.den.compact()
        ades.append(InputAde.from_diffpoly(relation.num.compact(), None if den.poly.is_constant else den))

    try:
        expr = builder.evaluate(target_node.args[1])
    except DegenerateExpressionError as e:
        raise builder.error(str(e), target_node)
    target = Target(name=target_node.args[0].args[0], expr=expr)
    logging.info(
        "Parsed %d input ADEs in %s, target %s, parameters %s",
        len(ades),
        decl.independents,
        target.name,
        decl.parameters,
    )
    return ParsedSystem(decl=decl, ades=ades, target=target, context=context)


_BUILTINS = {"exp": Builtin.EXP, "sin": Builtin.SIN, "cos": Builtin.COS}


def _rational(value: Union[str, int, Rational]) -> Rational:
    try:
        return Rational(value)
    except (TypeError, ValueError) as e:
        raise UsageError(f"Not a rational number: {value!r}: {e}")


def parse_parameters(items: Sequence[str]) -> dict[str, Rational]:
    """``["a=1", "c=1/2"]`` to a parameter specialization."""
    parameters: dict[str, Rational] = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"Expected name=value, got {item!r}")
        parameters[name.strip()] = _rational(value.strip())
    return parameters


def parse_series_spec(
    text: str,
    independents: Sequence[str],
    T: int,
    parameters: Optional[Mapping[str, Any]] = None,
) -> dict[str, TruncSeries]:
    """Parse ``"y1 = cos(x); y2 = exp(x)"`` into truncated series.

    Expressions may use the independent variables, specialized parameters, rationals, + - * /,
    integer powers and exp, sin, cos of arguments vanishing at the origin.

    Raises:
        ParseError: On syntax errors, unknown identifiers and unknown functions
        UsageError: If a builtin argument does not vanish at the origin or a denominator does
    """
    parameters = {name: _rational(value) for name, value in (parameters or {}).items()}
    ring = series_ring(independents)
    series: dict[str, TruncSeries] = {}

    def error(message: str, node: Node) -> ParseError:
        line, column = _position(text, node.pos)
        return ParseError(message, line, column)

    def evaluate(node: Node) -> TruncSeries:
        if node.kind == "number":
            return TruncSeries.constant(independents, T, node.args[0])
        if node.kind == "name":
            (name,) = node.args
            if name in independents:
                return TruncSeries.from_poly(independents, T, ring.gens[list(independents).index(name)])
            if name in parameters:
                return TruncSeries.constant(independents, T, parameters[name])
            if name in series:
                return series[name]
            raise error(f"Unknown identifier {name}; pass parameter values with --param", node)
        if node.kind == "neg":
            return -evaluate(node.args[0])
        if node.kind == "pow":
            return evaluate(node.args[0]) ** node.args[1]
        if node.kind == "call":
            name, argument = node.args
            if name not in _BUILTINS:
                raise error(f"Unknown function {name}, expected one of {sorted(_BUILTINS)}", node)
            return series_builtin(_BUILTINS[name], evaluate(argument))
        if node.kind == "deriv":
            raise error("Derivatives are not allowed in series specifications", node)
        left, right = (evaluate(arg) for arg in node.args)
        if node.kind == "add":
            return left + right
        if node.kind == "sub":
            return left - right
        if node.kind == "mul":
            return left * right
        return left * right**-1

    for statement in _syntax_tree(text):
        if statement.kind != "equation" or statement.args[0].kind != "name":
            raise error("Expected assignments of the form `y = expr`", statement)
        name = statement.args[0].args[0]
        try:
            series[name] = evaluate(statement.args[1])
        except ParseError:
            raise
        except DalgError as e:
            raise UsageError(f"Failed to expand the series of {name}: {e}")
    return series


def target_series(
    parsed: ParsedSystem, series: Mapping[str, TruncSeries], parameters: Optional[Mapping[str, Any]] = None
) -> dict[str, TruncSeries]:
    """Series of every input indeterminate plus the series of the target."""
    result = dict(series)
    if parsed.target.name not in result:
        result[parsed.target.name] = evaluate_target(parsed.target.expr, series, parameters)
    return result


def parse_ade(text: str, independents: Sequence[str], output: str = "z") -> Poly:
    """Parse a printed ADE ``<poly> = 0`` in the output indeterminate back into a normalized Poly.

    Raises:
        ParseError: On syntax errors, several statements or a non-polynomial relation
    """
    statements = _syntax_tree(text)
    if len(statements) != 1 or statements[0].kind != "equation":
        raise ParseError("Expected a single equation")
    (equation,) = statements
    names: list[str] = []

    def visit(node: Node) -> None:
        if node.kind == "name" and node.args[0] not in names:
            names.append(node.args[0])

    for side in equation.args:
        _walk(side, visit)
    parameters = [n for n in names if n not in independents and n != output]
    try:
        context = DiffContext(
            independents=tuple(independents),
            indeterminates=(DiffIndeterminate(output, tuple(independents)),),
            parameters=tuple(parameters),
        )
    except UsageError as e:
        raise ParseError(f"Invalid ADE variables: {e}")
    builder = _Builder(text, context)
    lhs, rhs = equation.args
    relation = builder.evaluate(lhs) - builder.evaluate(rhs)
    if not relation.is_polynomial or relation.num.is_zero:
        raise builder.error("Expected a nonzero polynomial relation", equation)
    return poly_normalize(relation.num.compact().poly)
