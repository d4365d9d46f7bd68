"""Text format for DAGs.

Grammar (dagitty-flavoured subset, ``->`` edges only)::

    document  := "dag" "{" statement* "}"
    statement := node_stmt | edge_stmt
    node_stmt := NAME attr_list?
    edge_stmt := NAME "->" NAME
    attr_list := "[" attr ("," attr)* "]"
    attr      := "latent" | "selected" | "pos" "=" QUOTED

``#`` starts a comment running to end of line; statements are separated by
whitespace or newlines. The first mention of a name in an edge implicitly
declares the node; an explicit node statement may appear before or after,
but only once.

The parser recovers at statement boundaries and reports every detectable
error as a :class:`ParseDiagnostic` with a 1-based line/column. The
serializer is canonical and deterministic: nodes then edges, each block
lexicographically ordered, two-space indent, one statement per line, LF.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AttributeConflict, CycleCreated
from .graph import Dag, NodeAttrs, SOFT_NODE_LIMIT


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    severity: str  # "error" | "warning"
    code: str
    message: str

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.column}: {self.code} {self.message}"


@dataclass(frozen=True)
class DagDocument:
    """A parsed DSL document: the original text plus the graph it denotes."""

    source: str
    dag: Dag
    warnings: tuple[ParseDiagnostic, ...] = ()


class DslParseError(Exception):
    """Raised by :func:`parse` when the input has at least one error."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        extra = f" (+{len(self.diagnostics) - 1} more)" if len(self.diagnostics) > 1 else ""
        super().__init__(first.render() + extra)


# --- tokenizer ------------------------------------------------------------

_PUNCT = {"{": "LBRACE", "}": "RBRACE", "[": "LBRACK", "]": "RBRACK", ",": "COMMA", "=": "EQUALS"}


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME ARROW LBRACE RBRACE LBRACK RBRACK COMMA EQUALS QUOTED EOF
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens: list[_Token] = []
    diags: list[ParseDiagnostic] = []
    line, col, i, n = 1, 1, 0, len(text)

    def advance(k=1):
        nonlocal line, col, i
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, start_line, start_col))
            advance()
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("ARROW", "->", start_line, start_col))
            advance(2)
            continue
        if ch == '"':
            advance()
            buf = []
            while i < n and text[i] not in '"\n':
                buf.append(text[i])
                advance()
            if i < n and text[i] == '"':
                advance()
                tokens.append(_Token("QUOTED", "".join(buf), start_line, start_col))
            else:
                diags.append(ParseDiagnostic(start_line, start_col, "error", "E_SYNTAX",
                                             "unterminated string"))
            continue
        if ch.isalpha() or ch == "_":
            buf = []
            while i < n and (text[i].isalnum() or text[i] == "_"):
                buf.append(text[i])
                advance()
            tokens.append(_Token("NAME", "".join(buf), start_line, start_col))
            continue
        diags.append(ParseDiagnostic(start_line, start_col, "error", "E_SYNTAX",
                                     f"unexpected character {ch!r}"))
        advance()
    tokens.append(_Token("EOF", "", line, col))
    return tokens, diags


# --- parser ---------------------------------------------------------------

@dataclass
class _NodeDecl:
    attrs: NodeAttrs
    explicit: bool = False
    line: int = 1
    column: int = 1


@dataclass
class _Builder:
    nodes: dict[str, _NodeDecl] = field(default_factory=dict)
    edges: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict)
    diags: list[ParseDiagnostic] = field(default_factory=list)

    def error(self, tok, code, message):
        self.diags.append(ParseDiagnostic(tok.line, tok.column, "error", code, message))

    def declare(self, tok, attrs: NodeAttrs | None, explicit: bool):
        decl = self.nodes.get(tok.text)
        if decl is None:
            self.nodes[tok.text] = _NodeDecl(attrs or NodeAttrs(), explicit, tok.line, tok.column)
        elif explicit and decl.explicit:
            self.error(tok, "E_DUP_NODE", f"node {tok.text} declared twice")
        elif explicit:
            decl.attrs = attrs or NodeAttrs()
            decl.explicit = True

    def add_edge(self, tail_tok, head_tok):
        self.declare(tail_tok, None, explicit=False)
        self.declare(head_tok, None, explicit=False)
        if tail_tok.text == head_tok.text:
            self.error(tail_tok, "E_SELF_LOOP", f"self loop on {tail_tok.text}")
            return
        key = (tail_tok.text, head_tok.text)
        if key in self.edges:
            self.error(tail_tok, "E_DUP_EDGE", f"duplicate edge {key[0]} -> {key[1]}")
        else:
            self.edges[key] = (tail_tok.line, tail_tok.column)


class _Parser:
    def __init__(self, text: str):
        self.tokens, lex_diags = _tokenize(text)
        self.pos = 0
        self.b = _Builder()
        self.b.diags.extend(lex_diags)

    def peek(self, ahead=0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def take(self) -> _Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def parse(self) -> _Builder:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "dag":
            self.take()
        else:
            self.b.error(tok, "E_SYNTAX", "expected 'dag' keyword")
        if self.peek().kind == "LBRACE":
            self.take()
        else:
            self.b.error(self.peek(), "E_SYNTAX", "expected '{'")
        while True:
            tok = self.peek()
            if tok.kind == "RBRACE":
                self.take()
                break
            if tok.kind == "EOF":
                self.b.error(tok, "E_SYNTAX", "missing closing '}'")
                break
            self.statement()
        tok = self.peek()
        if tok.kind != "EOF":
            self.b.error(tok, "E_SYNTAX", "trailing content after '}'")
        return self.b

    def statement(self):
        tok = self.peek()
        if tok.kind != "NAME":
            self.b.error(tok, "E_SYNTAX", f"expected a node name, got {tok.text!r}")
            self.take()  # recover: drop the offending token
            return
        name_tok = self.take()
        nxt = self.peek()
        if nxt.kind == "ARROW":
            self.take()
            head = self.peek()
            if head.kind != "NAME":
                self.b.error(head, "E_SYNTAX", "expected a node name after '->'")
                return
            self.b.add_edge(name_tok, self.take())
        elif nxt.kind == "LBRACK":
            attrs = self.attr_list()
            if attrs is not None:
                self.b.declare(name_tok, attrs, explicit=True)
        else:
            self.b.declare(name_tok, None, explicit=True)

    def attr_list(self) -> NodeAttrs | None:
        open_tok = self.take()  # LBRACK
        latent = selected = False
        pos = None
        ok = True
        while True:
            tok = self.peek()
            if tok.kind == "RBRACK":
                self.take()
                break
            if tok.kind in ("EOF", "RBRACE"):
                self.b.error(open_tok, "E_SYNTAX", "unterminated attribute list")
                ok = False
                break
            if tok.kind != "NAME":
                self.b.error(tok, "E_SYNTAX", f"expected an attribute, got {tok.text!r}")
                self.take()
                ok = False
                continue
            attr_tok = self.take()
            if attr_tok.text == "latent":
                latent = True
            elif attr_tok.text == "selected":
                selected = True
            elif attr_tok.text == "pos":
                pos = self.pos_value(attr_tok)
                if pos is None:
                    ok = False
            else:
                self.b.error(attr_tok, "E_UNKNOWN_ATTR", f"unknown attribute {attr_tok.text!r}")
                ok = False
            if self.peek().kind == "COMMA":
                self.take()
        if not ok:
            return None
        try:
            return NodeAttrs(latent=latent, selected=selected, pos=pos)
        except AttributeConflict as exc:
            self.b.error(open_tok, "E_ATTR_CONFLICT", str(exc))
            return None

    def pos_value(self, attr_tok):
        if self.peek().kind != "EQUALS":
            self.b.error(self.peek(), "E_SYNTAX", "expected '=' after pos")
            return None
        self.take()
        if self.peek().kind != "QUOTED":
            self.b.error(self.peek(), "E_SYNTAX", 'expected a quoted "x,y" value')
            return None
        val_tok = self.take()
        parts = val_tok.text.split(",")
        try:
            if len(parts) != 2:
                raise ValueError
            return (float(parts[0]), float(parts[1]))
        except ValueError:
            self.b.error(val_tok, "E_SYNTAX", f"invalid pos value {val_tok.text!r}")
            return None


def try_parse(text: str) -> tuple[DagDocument | None, list[ParseDiagnostic]]:
    """Parse without raising: returns (document, diagnostics).

    The document is None when any error-severity diagnostic was produced;
    warnings alone do not fail the parse.
    """
    b = _Parser(text).parse()
    diags = list(b.diags)

    nodes = {name: decl.attrs for name, decl in b.nodes.items()}
    if len(nodes) > SOFT_NODE_LIMIT:
        diags.append(ParseDiagnostic(1, 1, "warning", "W_NODE_LIMIT",
                                     f"{len(nodes)} nodes exceeds the soft limit of "
                                     f"{SOFT_NODE_LIMIT}; analysis may be slow"))

    dag = None
    if not any(d.severity == "error" for d in diags):
        try:
            dag = Dag(nodes, b.edges)
        except Exception:
            dag = None
        if dag is None:
            cyc = _diagnose_cycle(nodes, b.edges)
            diags.append(cyc)

    if any(d.severity == "error" for d in diags):
        return None, diags
    warnings = tuple(d for d in diags if d.severity == "warning")
    return DagDocument(source=text, dag=dag, warnings=warnings), diags


def _diagnose_cycle(nodes, edges) -> ParseDiagnostic:
    # Builder-level checks rule out everything except a directed cycle;
    # recover its node sequence for the message and point at an edge on it.
    try:
        Dag(nodes, edges)
    except CycleCreated as exc:
        cycle = exc.cycle
        for (tail, head), (line, col) in edges.items():
            if tail in cycle and head in cycle:
                return ParseDiagnostic(line, col, "error", "E_CYCLE",
                                       "cycle: " + " -> ".join(cycle))
    except Exception:
        pass
    return ParseDiagnostic(1, 1, "error", "E_CYCLE", "graph contains a directed cycle")


def parse(text: str) -> DagDocument:
    """Parse DSL text, raising :class:`DslParseError` carrying all diagnostics."""
    doc, diags = try_parse(text)
    if doc is None:
        raise DslParseError([d for d in diags if d.severity == "error"] or diags)
    return doc


def serialize(dag: Dag) -> str:
    """Canonical text for a graph; ``parse(serialize(d)).dag == d``."""
    lines = ["dag {"]
    for name in dag.node_names:
        a = dag.attrs(name)
        parts = []
        if a.latent:
            parts.append("latent")
        if a.selected:
            parts.append("selected")
        if a.pos is not None:
            parts.append(f'pos="{a.pos[0]!r},{a.pos[1]!r}"')
        lines.append(f"  {name} [{', '.join(parts)}]" if parts else f"  {name}")
    for tail, head in sorted(dag.edges):
        lines.append(f"  {tail} -> {head}")
    lines.append("}")
    return "\n".join(lines) + "\n"
