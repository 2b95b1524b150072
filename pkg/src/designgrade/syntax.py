"""Parsing of Python source into a condensed syntax tree.

The tree mirrors :mod:`ast` with two simplifications: expression contexts
(``Load``/``Store``/``Del``) and operator tokens (``Add``, ``Eq``, ``And``,
...) are dropped, so ``x = 1`` becomes four nodes (module, assignment, name,
literal). Every other ``ast`` node becomes a :class:`SyntaxNode` whose
``kind`` is one of :data:`KINDS`; constructs without a dedicated kind are
``"other"``.

Comments, blank lines and whitespace never reach the ``ast``; they are
collected from the token stream and the raw text instead.
"""

from __future__ import annotations

import ast
import io
import tokenize
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import ProgramSyntaxError

KINDS = (
    "module",
    "function_def",
    "assignment",
    "aug_assignment",
    "if_stmt",
    "try_stmt",
    "for_stmt",
    "while_stmt",
    "call",
    "comparison",
    "return_stmt",
    "pass_stmt",
    "break_stmt",
    "continue_stmt",
    "global_decl",
    "import_stmt",
    "list_display",
    "tuple_display",
    "literal",
    "name",
    "other",
)

WHITESPACE_CHARS = frozenset(" \t\n\r")

_SKIPPED = (ast.expr_context, ast.boolop, ast.operator, ast.unaryop, ast.cmpop)

_KIND_OF = {
    ast.Module: "module",
    ast.FunctionDef: "function_def",
    ast.AsyncFunctionDef: "function_def",
    ast.Assign: "assignment",
    ast.AnnAssign: "assignment",
    ast.AugAssign: "aug_assignment",
    ast.If: "if_stmt",
    ast.Try: "try_stmt",
    ast.For: "for_stmt",
    ast.AsyncFor: "for_stmt",
    ast.While: "while_stmt",
    ast.Call: "call",
    ast.Compare: "comparison",
    ast.Return: "return_stmt",
    ast.Pass: "pass_stmt",
    ast.Break: "break_stmt",
    ast.Continue: "continue_stmt",
    ast.Global: "global_decl",
    ast.Import: "import_stmt",
    ast.ImportFrom: "import_stmt",
    ast.List: "list_display",
    ast.Tuple: "tuple_display",
    ast.Name: "name",
    ast.JoinedStr: "literal",
}
if hasattr(ast, "TryStar"):  # 3.11+
    _KIND_OF[ast.TryStar] = "try_stmt"


@dataclass(frozen=True)
class SourceProgram:
    source_text: str
    path: Optional[str] = None

    @property
    def line_count(self) -> int:
        text = self.source_text
        if not text:
            return 0
        return text.count("\n") + (0 if text.endswith("\n") else 1)

    @property
    def char_count(self) -> int:
        return len(self.source_text)

    def lines(self) -> list[str]:
        """Physical lines without their terminators; a trailing newline adds no line."""
        if not self.source_text:
            return []
        parts = self.source_text.split("\n")
        if self.source_text.endswith("\n"):
            parts.pop()
        return parts

    @classmethod
    def from_file(cls, path) -> "SourceProgram":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls(fh.read(), str(path))


@dataclass(eq=False)
class SyntaxNode:
    kind: str
    start_line: int
    end_line: int
    children: list["SyntaxNode"] = field(default_factory=list)
    subkind: Optional[str] = None
    int_value: Optional[int] = None
    # statement nesting depth; None for non-statement nodes
    block_depth: Optional[int] = None
    ast_type: str = ""
    # name of the field holding this node in its parent ("body", "targets", ...)
    field: str = ""
    # identifier of a name node, or the names of a global declaration
    names: tuple[str, ...] = ()

    def walk(self) -> Iterator["SyntaxNode"]:
        """Pre-order traversal including this node."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def structure(self):
        """Hashable nested tuple describing the tree, used for equality checks."""
        return (
            self.kind,
            self.subkind,
            self.int_value,
            self.start_line,
            self.end_line,
            self.block_depth,
            self.ast_type,
            self.field,
            self.names,
            tuple(c.structure() for c in self.children),
        )


@dataclass(eq=False)
class ProgramSyntax:
    tree: SyntaxNode
    comment_count: int
    blank_line_count: int
    whitespace_char_count: int


def subtree_size(node: SyntaxNode) -> int:
    """Number of nodes in the subtree rooted at ``node``, the node included."""
    return sum(1 for _ in node.walk())


def _literal_subkind(value) -> Optional[str]:
    # bool is a subclass of int, so it must be tested first
    if isinstance(value, bool):
        return "bool"
    if value is None:
        return "none"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    if isinstance(value, complex):
        return "complex"
    if isinstance(value, (str, bytes)):
        return "string"
    return None  # Ellipsis


def _names_of(node: ast.AST) -> tuple[str, ...]:
    if isinstance(node, ast.Name):
        return (node.id,)
    if isinstance(node, (ast.Global, ast.Nonlocal)):
        return tuple(node.names)
    return ()


class _Converter:
    def __init__(self, lines: list[str]):
        self.lines = lines

    def _is_elif(self, parent: ast.If, orelse: list) -> bool:
        if len(orelse) != 1 or not isinstance(orelse[0], ast.If):
            return False
        child = orelse[0]
        line = self.lines[child.lineno - 1] if child.lineno <= len(self.lines) else ""
        return line[child.col_offset:].startswith("elif")

    def convert(
        self, node: ast.AST, depth: int, fallback_line: int, fstring_part=False, field_name=""
    ) -> SyntaxNode:
        # fstring_part: text fragment or format spec of an enclosing f-string,
        # which is one literal as a whole
        kind = _KIND_OF.get(type(node), "other")
        if fstring_part:
            kind = "other"
        subkind = int_value = None
        if isinstance(node, ast.Constant):
            subkind = _literal_subkind(node.value)
            if subkind is not None and not fstring_part:
                kind = "literal"
                if subkind == "int":
                    int_value = node.value
            else:
                subkind = None
        elif kind == "literal":
            subkind = "string"

        own_start = getattr(node, "lineno", None)
        own_end = getattr(node, "end_lineno", None) or own_start
        anchor = own_start if own_start is not None else fallback_line

        children = []
        for name, value in ast.iter_fields(node):
            items = value if isinstance(value, list) else [value]
            child_depth = depth
            if isinstance(node, ast.Module):
                pass
            elif items and isinstance(items[0], (ast.stmt, getattr(ast, "match_case", ()))):
                child_depth = depth + 1
                if isinstance(node, ast.If) and name == "orelse" and self._is_elif(node, value):
                    child_depth = depth
            part = isinstance(node, ast.JoinedStr) or (
                isinstance(node, ast.FormattedValue) and name == "format_spec"
            )
            for item in items:
                if not isinstance(item, ast.AST) or isinstance(item, _SKIPPED):
                    continue
                children.append(self.convert(item, child_depth, anchor, part, name))

        starts = [c.start_line for c in children]
        ends = [c.end_line for c in children]
        if own_start is not None:
            starts.append(own_start)
            ends.append(own_end)
        start = min(starts) if starts else fallback_line
        end = max(ends) if ends else fallback_line

        is_statement = isinstance(node, (ast.stmt, ast.excepthandler)) or type(node).__name__ == "match_case"
        return SyntaxNode(
            kind=kind,
            start_line=start,
            end_line=end,
            children=children,
            subkind=subkind,
            int_value=int_value,
            block_depth=depth if is_statement else None,
            ast_type=type(node).__name__,
            field=field_name,
            names=_names_of(node),
        )


def _scan_tokens(text: str, path=None) -> int:
    comments = 0
    try:
        for tok in tokenize.generate_tokens(io.StringIO(text).readline):
            if tok.type == tokenize.COMMENT:
                comments += 1
    except (tokenize.TokenError, IndentationError) as exc:
        line = exc.args[1][0] if len(exc.args) > 1 and isinstance(exc.args[1], tuple) else 0
        raise ProgramSyntaxError(line, str(exc.args[0]), path) from exc
    return comments


def parse_program(source: SourceProgram) -> ProgramSyntax:
    """Parse ``source`` and gather token-level statistics.

    Raises :class:`ProgramSyntaxError` when the text is not valid Python 3.
    """
    text = source.source_text
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            module = ast.parse(text)
    except SyntaxError as exc:
        raise ProgramSyntaxError(exc.lineno or 0, exc.msg, source.path) from exc
    except ValueError as exc:  # null bytes
        raise ProgramSyntaxError(0, str(exc), source.path) from exc

    comments = _scan_tokens(text, source.path)
    lines = source.lines()
    root = _Converter(lines).convert(module, 0, 1 if lines else 0)
    root.start_line = 1 if lines else 0
    root.end_line = len(lines)

    return ProgramSyntax(
        tree=root,
        comment_count=comments,
        blank_line_count=sum(1 for line in lines if not line.strip()),
        whitespace_char_count=sum(1 for ch in text if ch in WHITESPACE_CHARS),
    )
