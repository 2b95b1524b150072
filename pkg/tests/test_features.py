import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designgrade.features import (
    COUNT_FEATURE_IDS,
    N_FEATURES,
    SCHEMA,
    program_features,
)
from designgrade.synthetic import FLAWS, TASKS, render_program
from golden import GOLDEN


def test_schema_has_33_contiguous_ids():
    assert N_FEATURES == 33
    assert [f.id for f in SCHEMA.features] == list(range(1, 34))
    assert len(set(SCHEMA.names)) == 33


def test_empty_program_is_all_zero():
    assert program_features("").values == (0.0,) * 33


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_vectors(name):
    text, expected = GOLDEN[name]
    got = program_features(text).as_dict()
    assert set(expected) <= set(SCHEMA.names)
    want = {n: float(expected.get(n, 0)) for n in SCHEMA.names}
    assert got == want


def test_function_example_from_docs():
    fv = program_features("def f(x):\n    return x + 1\nprint(f(2))\n")
    assert fv["n_functions"] == 1
    assert fv["n_returns"] == 1
    assert fv["n_calls"] == 2
    assert fv["total_lines"] == 3
    assert fv["n_numeric_literals"] == 2
    assert fv["n_zero_one_int_literals"] == 1
    assert fv["nodes_in_functions_ratio"] > 0
    assert fv["max_returns_per_function"] == 1


def test_lambda_is_not_a_function():
    assert program_features("f = lambda x: x\n")["n_functions"] == 0


def test_methods_and_async_defs_count_as_functions():
    text = "class A:\n    def m(self):\n        pass\n\nasync def g():\n    pass\n"
    assert program_features(text)["n_functions"] == 2


def test_booleans_are_literals_but_not_numbers():
    fv = program_features("a = True\nb = False\n")
    assert fv["n_literals"] == 2
    assert fv["n_numeric_literals"] == 0
    assert fv["n_zero_one_int_literals"] == 0


def test_globals_ignore_imports_defs_attributes_and_function_locals():
    text = (
        "import os\n"
        "CONST = 3\n"
        "a, (b, *c) = 1, (2, 3, 4)\n"
        "os.x = 1\n"
        "d: int = 0\n"
        "class K:\n"
        "    inner = 1\n"
        "def f():\n"
        "    local = 2\n"
        "    global g\n"
        "    g = local\n"
        "if True:\n"
        "    e = 1\n"
    )
    fv = program_features(text)
    # CONST, a, b, c, d, e, g
    assert fv["n_globals"] == 7


def test_annotated_and_augmented_assignments_count():
    fv = program_features("x: int = 1\nx += 2\ny: int\n")
    assert fv["n_assignments"] == 3


def test_deepest_indentation_counts_try_handlers_and_else():
    text = (
        "try:\n"
        "    pass\n"
        "except E:\n"
        "    for i in x:\n"
        "        pass\n"
        "    else:\n"
        "        while y:\n"
        "            pass\n"
    )
    assert program_features(text)["deepest_indentation"] == 3


def test_whitespace_counts_tabs_and_carriage_returns():
    text = "if x:\r\n\tpass\r\n"
    fv = program_features(text)
    assert fv["whitespace_ratio"] == 6 / len(text)


def test_nested_ifs_counted_inside_every_ancestor():
    text = "if a:\n    if b:\n        c = 1\n"
    # inner: If, Name, Assign, Name, Constant = 5; outer: If, Name + 5 = 7
    assert program_features(text)["nodes_per_if"] == (7 + 5) / 2
    assert program_features(text)["max_literals_per_if"] == 1


_STATEMENTS = [
    "x = 1",
    "y += 2",
    "print(x, [1, 2], (3, 4))",
    "if x > 1:\n    pass",
    "try:\n    z = 0\nexcept ValueError:\n    pass",
    "for i in range(3):\n    break",
    "while False:\n    continue",
    "def h():\n    return 1",
    "import os",
    "# note",
    "global q",
]

PURE_COUNT_IDS = sorted({1, 2, 6, 10, 11, 13, 16, 17, *range(22, 28), *range(29, 32)})


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from(_STATEMENTS), min_size=1, max_size=8), st.data())
def test_duplicating_a_statement_never_decreases_counts(body, data):
    stmt = data.draw(st.sampled_from(body))
    base = program_features("\n".join(body) + "\n")
    grown = program_features("\n".join(body + [stmt]) + "\n")
    for fid in PURE_COUNT_IDS:
        assert grown.values[fid - 1] >= base.values[fid - 1], SCHEMA.by_id(fid).name


@settings(max_examples=60, deadline=None)
@given(
    task=st.sampled_from(TASKS),
    flags=st.fixed_dictionaries({f: st.booleans() for f in FLAWS}),
    seed=st.integers(0, 2**32 - 1),
)
def test_value_ranges_on_generated_programs(task, flags, seed):
    text = render_program(task, flags, np.random.default_rng(seed))
    fv = program_features(text)
    assert fv == program_features(text)
    for fid, value in enumerate(fv.values, start=1):
        assert math.isfinite(value)
        if fid in COUNT_FEATURE_IDS:
            assert value >= 0 and value == int(value)
    assert 0 <= fv["whitespace_ratio"] <= 1
    assert 0 <= fv["nodes_in_functions_ratio"] <= 1


@pytest.mark.parametrize("text", ["x = 1\n", "# c\n", "\n\n", "import os\n"])
def test_zero_guard_for_missing_constructs(text):
    fv = program_features(text)
    for name in ("nodes_per_function", "lines_per_function", "nodes_per_try", "nodes_per_if",
                 "avg_function_line", "avg_if_line", "max_returns_per_function", "max_literals_per_if"):
        assert fv[name] == 0
