"""Hand-counted feature vectors.

Each entry maps a snippet to the non-zero features it should produce; every
feature not listed must be exactly 0. Node counts follow the condensed tree
(no Load/Store contexts, no operator tokens).
"""

from fractions import Fraction as F

GOLDEN = {
    "empty": ("", {}),
    "assign_with_comment": (
        "x = 1  # init\n",
        # Module, Assign, Name, Constant = 4 nodes; 5 spaces + 1 newline of 14 chars
        dict(n_assignments=1, total_lines=1, n_literals=1, whitespace_ratio=F(6, 14), n_comments=1,
             nodes_per_line=4, avg_literal_line=1, n_globals=1, n_zero_one_int_literals=1,
             n_numeric_literals=1),
    ),
    "function_and_call": (
        "def f(x):\n    return x + 1\nprint(f(2))\n",
        # def subtree: FunctionDef, arguments, arg, Return, BinOp, Name, Constant = 7
        # module: 1 + 7 + Expr, Call, Name, Call, Name, Constant = 14
        dict(n_functions=1, nodes_per_function=7, lines_per_function=2, total_lines=3, n_literals=2,
             whitespace_ratio=F(11, 39), deepest_indentation=1, nodes_per_line=F(14, 3),
             avg_literal_line=F(5, 2), avg_function_line=1, nodes_in_functions_ratio=F(7, 14), n_calls=2,
             n_zero_one_int_literals=1, n_numeric_literals=2, n_returns=1, max_returns_per_function=1),
    ),
    "elif_chain": (
        "if a > 0:\n    pass\nelif a < 0:\n    pass\n",
        # inner if: If, Compare, Name, Constant, Pass = 5; outer: 1 + 3 + 1 + 5 = 10; module 11
        dict(total_lines=4, n_literals=2, whitespace_ratio=F(18, 40), deepest_indentation=1,
             n_if_statements=2, nodes_per_line=F(11, 4), nodes_per_if=F(15, 2), avg_literal_line=2,
             avg_if_line=2, n_pass=2, n_zero_one_int_literals=2, n_numeric_literals=2, n_comparisons=2,
             max_literals_per_if=2),
    ),
    "nested_function": (
        "def outer(a):\n    def inner(b):\n        return b * 2\n    return inner(a)\n",
        # inner: FunctionDef, arguments, arg, Return, BinOp, Name, Constant = 7
        # outer: 1 + arguments + arg + 7 + Return, Call, Name, Name = 14; module 15
        dict(n_functions=2, nodes_per_function=F(21, 2), lines_per_function=3, total_lines=4, n_literals=1,
             whitespace_ratio=F(26, 73), deepest_indentation=2, nodes_per_line=F(15, 4), avg_literal_line=3,
             avg_function_line=F(3, 2), nodes_in_functions_ratio=F(14, 15), n_calls=1, n_numeric_literals=1,
             n_returns=2, max_returns_per_function=2),
    ),
    "global_counter": (
        "# counter\ncount = 0\n\ndef bump():\n    global count, total\n    count += 1\n",
        # Assign subtree 3; FunctionDef, arguments, Global, AugAssign, Name, Constant = 6; module 10
        dict(n_functions=1, n_assignments=2, nodes_per_function=6, lines_per_function=3, total_lines=6,
             n_literals=2, whitespace_ratio=F(22, 72), n_empty_lines=1, deepest_indentation=1, n_comments=1,
             nodes_per_line=F(10, 6), avg_literal_line=4, avg_function_line=4, nodes_in_functions_ratio=F(6, 10),
             n_globals=2, n_zero_one_int_literals=2, n_numeric_literals=2),
    ),
    "try_list_tuple_imports": (
        'import os\nfrom sys import argv\ntry:\n    data = [1, 2.5, "x"]\n    pair = (data, None)\n'
        "except ValueError:\n    pass\n",
        # Import+alias 2, ImportFrom+alias 2; Try: 1 + Assign(6) + Assign(5) + ExceptHandler(3) = 15; module 20
        dict(n_assignments=2, total_lines=7, n_literals=4, whitespace_ratio=F(31, 113), deepest_indentation=1,
             nodes_per_line=F(20, 7), n_try_except=1, nodes_per_try=15, n_lists=1, n_tuples=1,
             avg_literal_line=F(17, 4), n_pass=1, n_globals=2, n_zero_one_int_literals=1,
             avg_import_line=F(3, 2), n_numeric_literals=2),
    ),
    "loops_break_continue": (
        "for i in range(10):\n    if 0 < i < 5:\n        continue\n    while True:\n        break\n",
        # For: 1 + Name + Call(3) + If(6) + While(3) = 14; module 15
        dict(total_lines=5, n_literals=4, whitespace_ratio=F(38, 85), deepest_indentation=2, n_if_statements=1,
             nodes_per_line=3, nodes_per_if=6, avg_literal_line=F(9, 4), avg_if_line=2, n_calls=1, n_break=1,
             n_continue=1, n_zero_one_int_literals=1, n_numeric_literals=3, n_comparisons=1,
             max_literals_per_if=2),
    ),
    "class_method_lambda": (
        'class Box:\n    """A box."""\n\n    def size(self):\n        if self.w:\n            return 1\n'
        "        return 0\n\nf = lambda: 3\n",
        # method: 1 + arguments + arg + If(5) + Return(2) = 10; class 13; Assign(Name, Lambda(2)) 5; module 19
        dict(n_functions=1, n_assignments=1, nodes_per_function=10, lines_per_function=4, total_lines=9,
             n_literals=4, whitespace_ratio=F(54, 121), n_empty_lines=2, deepest_indentation=3,
             n_if_statements=1, nodes_per_line=F(19, 9), nodes_per_if=5, avg_literal_line=6,
             avg_function_line=4, avg_if_line=5, nodes_in_functions_ratio=F(10, 19), n_globals=1,
             n_zero_one_int_literals=2, n_numeric_literals=3, n_returns=2, max_returns_per_function=2,
             max_literals_per_if=1),
    ),
    "decorated_fstring": (
        'import functools\n\n@functools.cache\ndef label(n):\n    # format\n    return f"n={n:>3}"\n',
        # f-string: JoinedStr, Constant, FormattedValue, Name, JoinedStr(spec), Constant = 6 nodes, one literal
        # def: 1 + arguments + arg + Return(7) + Attribute + Name = 12, spanning lines 3-6; module 15
        dict(n_functions=1, nodes_per_function=12, lines_per_function=4, total_lines=6, n_literals=1,
             whitespace_ratio=F(18, 85), n_empty_lines=1, deepest_indentation=1, n_comments=1,
             nodes_per_line=F(15, 6), avg_literal_line=6, avg_function_line=3, nodes_in_functions_ratio=F(12, 15),
             avg_import_line=1, n_returns=1, max_returns_per_function=1),
    ),
    "comment_only": (
        "# only a comment\n\n   \n",
        dict(total_lines=3, whitespace_ratio=F(9, 22), n_empty_lines=2, n_comments=1, nodes_per_line=F(1, 3)),
    ),
    "else_then_if": (
        "if x:\n    pass\nelse:\n    if y:\n        pass\n",
        # a nested if under else is one level deeper, unlike elif
        dict(total_lines=5, whitespace_ratio=F(23, 44), deepest_indentation=2, n_if_statements=2,
             nodes_per_line=F(7, 5), nodes_per_if=F(9, 2), avg_if_line=F(5, 2), n_pass=2),
    ),
}
