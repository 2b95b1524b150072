"""The 33 design statistics computed from a parsed program."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .syntax import ProgramSyntax, SourceProgram, SyntaxNode, parse_program, subtree_size

SCHEMA_VERSION = "1.0"


class FeatureSpec(NamedTuple):
    id: int
    name: str
    description: str

    @property
    def increase_phrase(self) -> str:
        return f"increase the {self.description}"

    @property
    def decrease_phrase(self) -> str:
        return f"decrease the {self.description}"


_FEATURES = [
    (1, "n_functions", "number of user defined functions"),
    (2, "n_assignments", "number of assignments"),
    (3, "nodes_per_function", "size of each function (syntax nodes per function)"),
    (4, "lines_per_function", "number of lines of code per function"),
    (5, "total_lines", "total number of lines of code"),
    (6, "n_literals", "number of literal values"),
    (7, "whitespace_ratio", "proportion of white-space characters"),
    (8, "n_empty_lines", "number of empty lines"),
    (9, "deepest_indentation", "deepest level of indentation"),
    (10, "n_if_statements", "number of if statements"),
    (11, "n_comments", "number of comments"),
    (12, "nodes_per_line", "amount of code per line (syntax nodes per line)"),
    (13, "n_try_except", "number of try-except statements"),
    (14, "nodes_per_try", "size of each try-except statement"),
    (15, "nodes_per_if", "size of each if statement"),
    (16, "n_lists", "number of lists"),
    (17, "n_tuples", "number of tuples"),
    (18, "avg_literal_line", "average line number of literals"),
    (19, "avg_function_line", "average line number of function definitions"),
    (20, "avg_if_line", "average line number of if statements"),
    (21, "nodes_in_functions_ratio", "proportion of code inside functions"),
    (22, "n_calls", "number of function calls"),
    (23, "n_pass", "number of pass statements"),
    (24, "n_break", "number of break statements"),
    (25, "n_continue", "number of continue statements"),
    (26, "n_globals", "number of global variables"),
    (27, "n_zero_one_int_literals", "number of 0 and 1 integer literals"),
    (28, "avg_import_line", "average line number of import statements"),
    (29, "n_numeric_literals", "number of numeric literals (magic numbers)"),
    (30, "n_comparisons", "number of comparisons"),
    (31, "n_returns", "number of return statements"),
    (32, "max_returns_per_function", "maximum number of return statements in a function"),
    (33, "max_literals_per_if", "maximum number of literals in an if statement"),
]


@dataclass(frozen=True)
class FeatureSchema:
    version: str
    features: tuple[FeatureSpec, ...]

    def __len__(self):
        return len(self.features)

    @property
    def names(self) -> list[str]:
        return [f.name for f in self.features]

    def by_id(self, feature_id: int) -> FeatureSpec:
        return self.features[feature_id - 1]


SCHEMA = FeatureSchema(SCHEMA_VERSION, tuple(FeatureSpec(*row) for row in _FEATURES))
N_FEATURES = len(SCHEMA)

COUNT_FEATURE_IDS = frozenset([1, 2, 5, 6, 8, 10, 11, 13, 16, 17, *range(22, 28), *range(29, 34)])
RATIO_FEATURE_IDS = frozenset([7, 21])


@dataclass(frozen=True)
class FeatureVector:
    schema_version: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} values, got {len(self.values)}")

    def __getitem__(self, name: str) -> float:
        return self.values[SCHEMA.names.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(SCHEMA.names, self.values))


def _mean(xs) -> float:
    xs = list(xs)
    return sum(xs) / len(xs) if xs else 0.0


def _ratio(num, den) -> float:
    return num / den if den else 0.0


def _outermost(root: SyntaxNode, kind: str) -> list[SyntaxNode]:
    found = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.kind == kind and node is not root:
            found.append(node)
            continue
        stack.extend(node.children)
    return found


_SCOPE_TYPES = frozenset(
    ["FunctionDef", "AsyncFunctionDef", "ClassDef", "Lambda", "ListComp", "SetComp", "DictComp", "GeneratorExp"]
)


def _target_names(node: SyntaxNode) -> list[str]:
    # plain names only; attribute and subscript targets are not variables
    if node.kind == "name":
        return list(node.names)
    if node.ast_type in ("Tuple", "List", "Starred"):
        return [n for c in node.children for n in _target_names(c)]
    return []


def global_variable_names(root: SyntaxNode) -> set[str]:
    """Names assigned at module scope or declared ``global`` anywhere."""
    names: set[str] = set()
    stack = [(root, True)]
    while stack:
        node, module_scope = stack.pop()
        if node.kind == "global_decl":
            names.update(node.names)
        if module_scope and node.kind in ("assignment", "aug_assignment"):
            for child in node.children:
                if child.field in ("targets", "target"):
                    names.update(_target_names(child))
        inner = module_scope and node.ast_type not in _SCOPE_TYPES
        stack.extend((c, inner) for c in node.children)
    return names


def _count_in(node: SyntaxNode, kind: str) -> int:
    return sum(1 for n in node.walk() if n.kind == kind)


def extract_features(syntax: ProgramSyntax, source: SourceProgram) -> FeatureVector:
    root = syntax.tree
    by_kind: dict[str, list[SyntaxNode]] = {}
    for node in root.walk():
        by_kind.setdefault(node.kind, []).append(node)

    def of(kind):
        return by_kind.get(kind, [])

    functions = of("function_def")
    ifs = of("if_stmt")
    tries = of("try_stmt")
    literals = of("literal")
    total_lines = source.line_count
    root_size = subtree_size(root)

    depths = [n.block_depth for n in root.walk() if n.block_depth is not None]
    values = [
        len(functions),
        len(of("assignment")) + len(of("aug_assignment")),
        _mean(subtree_size(f) for f in functions),
        _mean(f.end_line - f.start_line + 1 for f in functions),
        total_lines,
        len(literals),
        _ratio(syntax.whitespace_char_count, source.char_count),
        syntax.blank_line_count,
        max(depths, default=0),
        len(ifs),
        syntax.comment_count,
        _ratio(root_size, total_lines),
        len(tries),
        _mean(subtree_size(t) for t in tries),
        _mean(subtree_size(i) for i in ifs),
        len(of("list_display")),
        len(of("tuple_display")),
        _mean(n.start_line for n in literals),
        _mean(f.start_line for f in functions),
        _mean(i.start_line for i in ifs),
        _ratio(sum(subtree_size(f) for f in _outermost(root, "function_def")), root_size),
        len(of("call")),
        len(of("pass_stmt")),
        len(of("break_stmt")),
        len(of("continue_stmt")),
        len(global_variable_names(root)),
        sum(1 for n in literals if n.subkind == "int" and n.int_value in (0, 1)),
        _mean(n.start_line for n in of("import_stmt")),
        sum(1 for n in literals if n.subkind in ("int", "float", "complex")),
        len(of("comparison")),
        len(of("return_stmt")),
        max((_count_in(f, "return_stmt") for f in functions), default=0),
        max((_count_in(i, "literal") for i in ifs), default=0),
    ]
    return FeatureVector(SCHEMA_VERSION, tuple(float(v) for v in values))


def program_features(text: str, path=None) -> FeatureVector:
    """Parse ``text`` and extract its feature vector in one step."""
    source = SourceProgram(text, path)
    return extract_features(parse_program(source), source)


def file_features(path) -> FeatureVector:
    source = SourceProgram.from_file(path)
    return extract_features(parse_program(source), source)
