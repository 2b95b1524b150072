import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designgrade.baselines import SigmoidLinearModel
from designgrade.corpus import Standardizer, examples_from_pairs, fit_standardizer
from designgrade.errors import MessageTableError, NoGoodPrograms, SchemaMismatch
from designgrade.features import N_FEATURES, SCHEMA, FeatureVector
from designgrade.feedback import (
    NO_SUGGESTIONS,
    FeedbackReport,
    GoodProfile,
    MessageTable,
    compute_good_profile,
    generate_feedback,
    render_report,
)
from designgrade.regressors import init_mlp


def vec(**values):
    out = np.zeros(N_FEATURES)
    for name, v in values.items():
        out[SCHEMA.names.index(name)] = v
    return out


def identity_standardizer():
    return Standardizer(np.zeros(N_FEATURES), np.ones(N_FEATURES), np.zeros(N_FEATURES, dtype=bool))


def profile_of(mean):
    return GoodProfile(0.75, np.asarray(mean, dtype=float), 1)


def fv(values):
    return FeatureVector(SCHEMA.version, tuple(float(v) for v in values))


# good profile

def test_profile_averages_strictly_good_programs():
    examples = examples_from_pairs([
        ("a", vec(n_functions=2), 0.8),
        ("b", vec(n_functions=4), 0.9),
        ("c", vec(n_functions=100), 0.5),
        ("d", vec(n_functions=1000), 0.75),
    ])
    profile = compute_good_profile(examples)
    assert profile.mean_features[0] == 3
    assert profile.n_good == 2


def test_no_good_programs():
    examples = examples_from_pairs([("a", vec(), 0.75), ("b", vec(), 0.1)])
    with pytest.raises(NoGoodPrograms):
        compute_good_profile(examples)


def test_single_good_program_is_the_profile():
    v = np.arange(N_FEATURES, dtype=float)
    profile = compute_good_profile(examples_from_pairs([("a", v, 0.9), ("b", v * 0, 0.2)]))
    np.testing.assert_array_equal(profile.mean_features, v)


# suggestions

def monotone_model(weight=1.0):
    w = np.zeros(N_FEATURES)
    w[0] = weight
    return SigmoidLinearModel(w, 0.0)


def test_increase_functions_message():
    report = generate_feedback(monotone_model(), identity_standardizer(), profile_of(vec(n_functions=5)),
                               fv(vec(n_functions=3)))
    assert [s.message for s in report.suggestions] == ["increase the number of user defined functions"]


def test_monotone_model_gives_exactly_one_increase():
    report = generate_feedback(monotone_model(), identity_standardizer(), profile_of(vec(n_functions=5, n_globals=2)),
                               fv(vec(n_functions=3, n_globals=9)))
    (s,) = report.suggestions
    assert (s.feature_id, s.direction) == (1, "increase")
    assert s.baseline_score == pytest.approx(1 / (1 + np.exp(-3)))
    assert s.counterfactual_score == pytest.approx(1 / (1 + np.exp(-5)))
    assert s.delta > 0


def test_equal_to_profile_gives_nothing():
    mean = np.arange(N_FEATURES, dtype=float)
    model = SigmoidLinearModel(np.random.default_rng(0).normal(size=N_FEATURES), 0.1)
    report = generate_feedback(model, identity_standardizer(), profile_of(mean), fv(mean))
    assert report.suggestions == []


def test_decrease_direction_and_ordering():
    w = vec(n_globals=-1.0, n_literals=-0.5)
    model = SigmoidLinearModel(w, 0.0)
    x = vec(n_globals=4, n_literals=4)
    report = generate_feedback(model, identity_standardizer(), profile_of(np.zeros(N_FEATURES)), fv(x))
    assert [(s.feature_name, s.direction) for s in report.suggestions] == [
        ("n_globals", "decrease"), ("n_literals", "decrease")]
    deltas = [s.delta for s in report.suggestions]
    assert deltas == sorted(deltas, reverse=True)


def test_top_k_and_min_delta():
    w = np.linspace(0.1, 1.0, N_FEATURES)
    model = SigmoidLinearModel(w * 0.1, 0.0)
    profile = profile_of(np.ones(N_FEATURES))
    full = generate_feedback(model, identity_standardizer(), profile, fv(np.zeros(N_FEATURES)))
    assert len(full.suggestions) == N_FEATURES
    top = generate_feedback(model, identity_standardizer(), profile, fv(np.zeros(N_FEATURES)), top_k=3)
    assert top.suggestions == full.suggestions[:3]
    cut = full.suggestions[10].delta
    filtered = generate_feedback(model, identity_standardizer(), profile, fv(np.zeros(N_FEATURES)), min_delta=cut)
    assert all(s.delta > cut for s in filtered.suggestions)
    assert len(filtered.suggestions) == 10


def test_schema_mismatch():
    old_profile = GoodProfile(0.75, vec(), 1, schema_version="0.9")
    with pytest.raises(SchemaMismatch):
        generate_feedback(monotone_model(), identity_standardizer(), old_profile, fv(vec()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_soundness_and_direction_with_random_networks(seed):
    rng = np.random.default_rng(seed)
    X_train = rng.integers(0, 20, size=(30, N_FEATURES)).astype(float)
    std = fit_standardizer(X_train)
    model = init_mlp(seed, N_FEATURES, 8)
    mean = X_train.mean(axis=0)
    x = rng.integers(0, 20, size=N_FEATURES).astype(float)
    x[:5] = mean[:5]
    report = generate_feedback(model, std, profile_of(mean), fv(x))
    base = float(model.predict(std.transform(x[None, :]))[0])
    assert report.baseline_score == base
    for s in report.suggestions:
        i = s.feature_id - 1
        assert i >= 5
        x_cf = x.copy()
        x_cf[i] = mean[i]
        again = float(model.predict(std.transform(x_cf[None, :]))[0])
        assert again == s.counterfactual_score > base
        assert s.direction == ("increase" if mean[i] > x[i] else "decrease")
        assert s.current_value == x[i] and s.target_value == mean[i]


def test_profile_ignores_model():
    examples = examples_from_pairs([("a", vec(n_functions=2), 0.8), ("b", vec(n_functions=6), 0.95)])
    assert compute_good_profile(examples).to_dict() == compute_good_profile(list(examples)).to_dict()


# messages and rendering

def test_message_table_is_total():
    table = MessageTable()
    for spec in SCHEMA.features:
        assert table[(spec.id, "increase")].startswith("increase the ")
        assert table[(spec.id, "decrease")].startswith("decrease the ")


def test_message_file_overrides(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text('# custom\n1,increase,"Try splitting the work into more functions, like a recipe."\n')
    table = MessageTable.from_file(path)
    assert table[(1, "increase")] == "Try splitting the work into more functions, like a recipe."
    assert table[(1, "decrease")] == "decrease the number of user defined functions"


@pytest.mark.parametrize("line", ["34,increase,x", "0,increase,x", "1,sideways,x", "one,increase,x", "1,increase"])
def test_message_file_rejects_bad_records(tmp_path, line):
    path = tmp_path / "m.csv"
    path.write_text(line + "\n")
    with pytest.raises(MessageTableError):
        MessageTable.from_file(path)


def _report():
    return generate_feedback(monotone_model(), identity_standardizer(), profile_of(vec(n_functions=5)),
                             fv(vec(n_functions=3)), program_path="p.py")


def test_render_empty():
    text = render_report(FeedbackReport("p.py", 0.4), "text")
    assert text.splitlines() == ["p.py", "Predicted design score: 0.40", NO_SUGGESTIONS]


def test_render_numbered_line():
    lines = render_report(_report(), "text").splitlines()
    assert lines[1] == "Predicted design score: 0.95"
    assert lines[2] == "  1. increase the number of user defined functions"


def test_structured_round_trip():
    report = _report()
    again = FeedbackReport.from_dict(json.loads(render_report(report, "structured")))
    assert again == report
