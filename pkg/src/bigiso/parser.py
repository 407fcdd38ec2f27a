"""Text front-end: polynomial expressions and structure documents.

Expressions are parsed by recursive descent over +, -, *, / (constant
divisors only), ^ with nonnegative integer exponents, parentheses, rational
literals and declared coordinate names.  Errors carry line and column.

A structure document declares a chart, the two frame blocks, and optional
blocks for the adapted split, a foliation, an affine submanifold, a sample
grid override, and named Hamiltonian pairs::

    chart x1 x2 y1 y2 z
    E:
      (1, 0, 0, 0, 0 | 0, 1, 1, 0, 0)
    E_prime:
      (1, 0, 0, 0, 0 | 0, 1, 1, 0, 0)
      ...
    adapted: x1 x2 | y1 y2 | z
    foliation: z
    submanifold: x4 = 0
    grid: -2..2 cap 24
    hamiltonian h1: f = x1 ; Xf = (0, 1, 0, 0)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .calculus import BigSection, Chart, PolyOneForm, PolyVectorField
from .scalars import Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN_CHARS = {"+", "-", "*", "/", "^", "(", ")"}


def _tokenize(text: str, line_no: int, col_offset: int = 0):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        col = i + 1 + col_offset
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, line_no, col))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("number", text[i:j], line_no, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], line_no, col))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line_no, col)
    tokens.append(("end", "", line_no, len(text) + 1 + col_offset))
    return tokens


class ExpressionParser:
    def __init__(self, chart: Chart, text: str, line_no: int = 1, col_offset: int = 0):
        self.chart = chart
        self.tokens = _tokenize(text, line_no, col_offset)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        return tok

    def parse(self) -> Polynomial:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[1]!r}", tok[2], tok[3])
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, line, col = self.advance()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError(f"non-constant divisor: {rhs}", line, col)
                c = rhs.constant_value()
                if c == 0:
                    raise ParseError("division by zero", line, col)
                value = value / c
        return value

    def factor(self) -> Polynomial:
        tok = self.peek()
        if tok[0] in ("+", "-"):
            self.advance()
            value = self.factor()
            return value if tok[0] == "+" else -value
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.advance()
            if tok[0] != "number":
                raise ParseError("exponent must be a nonnegative integer", tok[2], tok[3])
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.advance()
        kind, text, line, col = tok
        if kind == "number":
            return self.chart.constant(Fraction(int(text)))
        if kind == "name":
            if text not in self.chart.names:
                raise ParseError(f"unknown coordinate {text!r}", line, col)
            return self.chart.coordinate(text)
        if kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {text!r}", line, col)


def parse_expression(chart: Chart, text: str, line_no: int = 1, col_offset: int = 0) -> Polynomial:
    return ExpressionParser(chart, text, line_no, col_offset).parse()


def print_polynomial(p: Polynomial) -> str:
    """Canonical string form; parse_expression inverts it."""
    return str(p)


# --------------------------------------------------------------------------
# structure documents
# --------------------------------------------------------------------------

@dataclass
class HamiltonianPair:
    name: str
    f: Polynomial
    field_comps: tuple


@dataclass
class StructureDocument:
    chart: Chart
    e_sections: tuple
    e_prime_sections: tuple
    adapted_split: tuple | None = None  # (leaf names, middle names, transverse names)
    foliation_names: tuple | None = None
    submanifold_equations: tuple | None = None
    grid_range: tuple | None = None  # (lo, hi, cap)
    hamiltonian_pairs: tuple = ()
    restricted_e_lines: tuple = ()  # raw section lines, parsed on the sub chart
    restricted_e_prime_lines: tuple = ()

    def sections_for(self, chart: Chart, lines: Sequence) -> list:
        return [_parse_section(chart, text, ln) for text, ln in lines]


def _split_top_level(text: str, line_no: int, col_offset: int, separators=(",", "|")):
    parts = []
    depth = 0
    current = []
    start_col = col_offset
    found = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", line_no, col_offset + i + 1)
        if depth == 0 and ch in separators:
            parts.append(("".join(current), start_col))
            found.append(ch)
            current = []
            start_col = col_offset + i + 1
            continue
        current.append(ch)
    if depth != 0:
        raise ParseError("unbalanced '('", line_no, col_offset + len(text))
    parts.append(("".join(current), start_col))
    return parts, found


def _parse_section(chart: Chart, text: str, line_no: int) -> BigSection:
    stripped = text.strip()
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise ParseError("section must be parenthesized: (vf comps | form comps)", line_no, 1)
    inner = stripped[1:-1]
    offset = text.index("(") + 1
    halves, seps = _split_top_level(inner, line_no, offset, separators=("|",))
    if len(halves) != 2:
        raise ParseError("section needs exactly one '|' separating vf and form parts", line_no, offset)
    comps = []
    for half_text, half_col in halves:
        items, _ = _split_top_level(half_text, line_no, half_col, separators=(",",))
        exprs = [parse_expression(chart, item, line_no, col) for item, col in items]
        if len(exprs) != chart.dim:
            raise ParseError(
                f"expected {chart.dim} components, found {len(exprs)}", line_no, half_col
            )
        comps.append(exprs)
    return BigSection(PolyVectorField(chart, comps[0]), PolyOneForm(chart, comps[1]))


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def parse_document(text: str) -> StructureDocument:
    lines = text.splitlines()
    chart = None
    blocks = {"E": [], "E_prime": [], "restricted_E": [], "restricted_E_prime": []}
    current_block = None
    adapted = None
    foliation = None
    submanifold_lines = []
    grid_range = None
    hamiltonian = []

    for ln, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        lowered = stripped.lower()
        if lowered.startswith("chart"):
            names = stripped[len("chart") :].split()
            if not names:
                raise ParseError("chart needs at least one coordinate name", ln, 1)
            if chart is not None:
                raise ParseError("duplicate chart declaration", ln, 1)
            chart = Chart(tuple(names))
            current_block = None
            continue
        matched_block = None
        for key in blocks:
            if stripped == f"{key}:":
                matched_block = key
                break
        if matched_block:
            current_block = matched_block
            continue
        if stripped.startswith("("):
            if current_block is None:
                raise ParseError("section outside a frame block", ln, 1)
            blocks[current_block].append((line, ln))
            continue
        if lowered.startswith("adapted:"):
            body = stripped[len("adapted:") :]
            parts, _ = _split_top_level(body, ln, len("adapted:") + 1, separators=("|",))
            if len(parts) != 3:
                raise ParseError("adapted needs leaf | middle | transverse name groups", ln, 1)
            adapted = tuple(tuple(p.split()) for p, _ in parts)
            current_block = None
            continue
        if lowered.startswith("foliation:"):
            foliation = tuple(stripped[len("foliation:") :].split())
            current_block = None
            continue
        if lowered.startswith("submanifold:"):
            body = stripped[len("submanifold:") :]
            submanifold_lines.append((body, ln))
            current_block = None
            continue
        if lowered.startswith("grid:"):
            grid_range = _parse_grid_spec(stripped[len("grid:") :], ln)
            current_block = None
            continue
        if lowered.startswith("hamiltonian"):
            hamiltonian.append((stripped, ln))
            current_block = None
            continue
        raise ParseError(f"unrecognized line: {stripped!r}", ln, 1)

    if chart is None:
        raise ParseError("missing chart declaration", 1, 1)
    if not blocks["E"] and not blocks["E_prime"]:
        raise ParseError("missing frame blocks E/E_prime", len(lines), 1)

    e_sections = tuple(_parse_section(chart, text, ln) for text, ln in blocks["E"])
    ep_sections = tuple(_parse_section(chart, text, ln) for text, ln in blocks["E_prime"])

    sub_eqs = None
    if submanifold_lines:
        eqs = []
        for body, ln in submanifold_lines:
            for piece, col in _split_top_level(body, ln, 1, separators=(";",))[0]:
                if not piece.strip():
                    continue
                eqs.append(_parse_equation(chart, piece, ln, col))
        sub_eqs = tuple(eqs)

    ham_pairs = tuple(_parse_hamiltonian(chart, text, ln) for text, ln in hamiltonian)

    return StructureDocument(
        chart=chart,
        e_sections=e_sections,
        e_prime_sections=ep_sections,
        adapted_split=adapted,
        foliation_names=foliation,
        submanifold_equations=sub_eqs,
        grid_range=grid_range,
        hamiltonian_pairs=ham_pairs,
        restricted_e_lines=tuple(blocks["restricted_E"]),
        restricted_e_prime_lines=tuple(blocks["restricted_E_prime"]),
    )


def _parse_equation(chart: Chart, text: str, line_no: int, col: int) -> Polynomial:
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        left = parse_expression(chart, lhs, line_no, col)
        right = parse_expression(chart, rhs, line_no, col + len(lhs) + 1)
        return left - right
    return parse_expression(chart, text, line_no, col)


def _parse_grid_spec(text: str, line_no: int):
    parts = text.split()
    if not parts or ".." not in parts[0]:
        raise ParseError("grid needs the form lo..hi [cap N]", line_no, 1)
    lo_text, hi_text = parts[0].split("..", 1)
    try:
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise ParseError("grid bounds must be integers", line_no, 1)
    if lo > hi:
        raise ParseError("grid bounds out of order", line_no, 1)
    cap = 24
    if len(parts) >= 2:
        if parts[1] != "cap" or len(parts) < 3:
            raise ParseError("grid cap must be written as 'cap N'", line_no, 1)
        cap = int(parts[2])
    return (lo, hi, cap)


def _parse_hamiltonian(chart: Chart, text: str, line_no: int) -> HamiltonianPair:
    # hamiltonian NAME: f = EXPR ; Xf = (EXPR, ...)
    body = text[len("hamiltonian") :].strip()
    if ":" not in body:
        raise ParseError("hamiltonian needs 'hamiltonian NAME: f = ... ; Xf = (...)'", line_no, 1)
    name, rest = body.split(":", 1)
    pieces, _ = _split_top_level(rest, line_no, 1, separators=(";",))
    f_poly = None
    comps = None
    for piece, col in pieces:
        piece = piece.strip()
        if "=" not in piece:
            raise ParseError(f"hamiltonian field needs '=': {piece!r}", line_no, col)
        key, expr = piece.split("=", 1)
        key = key.strip().lower()
        if key == "f":
            f_poly = parse_expression(chart, expr, line_no, col)
        elif key == "xf":
            expr = expr.strip()
            if not (expr.startswith("(") and expr.endswith(")")):
                raise ParseError("Xf must be a parenthesized component list", line_no, col)
            items, _ = _split_top_level(expr[1:-1], line_no, col, separators=(",",))
            comps = tuple(parse_expression(chart, item, line_no, c) for item, c in items)
            if len(comps) != chart.dim:
                raise ParseError(f"Xf needs {chart.dim} components", line_no, col)
        else:
            raise ParseError(f"unknown hamiltonian field {key!r}", line_no, col)
    if f_poly is None or comps is None:
        raise ParseError("hamiltonian needs both f and Xf", line_no, 1)
    return HamiltonianPair(name.strip(), f_poly, comps)
