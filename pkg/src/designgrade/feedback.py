"""Counterfactual feedback: which single feature, moved to the good-program mean,
would raise the predicted score."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import MessageTableError, NoGoodPrograms, SchemaMismatch
from .features import N_FEATURES, SCHEMA, FeatureSchema, FeatureVector

GOOD_THRESHOLD = 0.75
DIRECTIONS = ("increase", "decrease")
NO_SUGGESTIONS = "No design improvements found above threshold."


@dataclass
class GoodProfile:
    threshold: float
    mean_features: np.ndarray
    n_good: int
    schema_version: str = SCHEMA.version

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "mean_features": [float(v) for v in self.mean_features],
            "n_good": self.n_good,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_dict(cls, data) -> "GoodProfile":
        return cls(
            float(data["threshold"]),
            np.array(data["mean_features"], dtype=float),
            int(data["n_good"]),
            data.get("schema_version", SCHEMA.version),
        )


def compute_good_profile(examples, threshold: float = GOOD_THRESHOLD) -> GoodProfile:
    """Mean raw feature vector of the examples scoring strictly above ``threshold``."""
    good = [ex for ex in examples if ex.score > threshold]
    if not good:
        raise NoGoodPrograms(f"no training program scores above {threshold}")
    versions = {ex.features.schema_version for ex in good}
    if len(versions) != 1:
        raise SchemaMismatch(f"examples mix feature schemas {sorted(versions)}")
    X = np.array([ex.features.values for ex in good], dtype=float)
    return GoodProfile(threshold, X.mean(axis=0), len(good), versions.pop())


class MessageTable:
    """Sentence for every (feature id, direction) pair."""

    def __init__(self, schema: FeatureSchema = SCHEMA, overrides: Optional[dict] = None):
        self.schema = schema
        self.messages = {}
        for spec in schema.features:
            self.messages[(spec.id, "increase")] = spec.increase_phrase
            self.messages[(spec.id, "decrease")] = spec.decrease_phrase
        for key, sentence in (overrides or {}).items():
            self._check_key(key)
            self.messages[key] = sentence

    def _check_key(self, key):
        feature_id, direction = key
        if not 1 <= feature_id <= len(self.schema) or direction not in DIRECTIONS:
            raise MessageTableError(f"unknown message key {key!r}")

    def __getitem__(self, key) -> str:
        return self.messages[key]

    @classmethod
    def from_file(cls, path, schema: FeatureSchema = SCHEMA) -> "MessageTable":
        """Read ``feature_id,direction,sentence`` lines; ``#`` lines are comments."""
        text = Path(path).read_text(encoding="utf-8")
        overrides = {}
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        for lineno, row in enumerate(csv.reader(lines), start=1):
            if len(row) != 3:
                raise MessageTableError(f"{path}: record {lineno}: expected 3 fields, got {len(row)}")
            try:
                feature_id = int(row[0])
            except ValueError:
                raise MessageTableError(f"{path}: record {lineno}: bad feature id {row[0]!r}") from None
            key = (feature_id, row[1].strip().lower())
            try:
                cls(schema)._check_key(key)
            except MessageTableError as exc:
                raise MessageTableError(f"{path}: record {lineno}: {exc}") from None
            overrides[key] = row[2].strip()
        return cls(schema, overrides)


@dataclass(frozen=True)
class Suggestion:
    feature_id: int
    feature_name: str
    direction: str
    current_value: float
    target_value: float
    baseline_score: float
    counterfactual_score: float
    delta: float
    message: str


@dataclass
class FeedbackReport:
    program_path: str
    baseline_score: float
    suggestions: list[Suggestion] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "program_path": self.program_path,
            "baseline_score": self.baseline_score,
            "suggestions": [asdict(s) for s in self.suggestions],
        }

    @classmethod
    def from_dict(cls, data) -> "FeedbackReport":
        return cls(
            data["program_path"],
            data["baseline_score"],
            [Suggestion(**s) for s in data["suggestions"]],
        )


def _score(model, standardizer, raw: np.ndarray) -> float:
    return float(model.predict(standardizer.transform(raw[None, :]))[0])


def generate_feedback(
    model,
    standardizer,
    profile: GoodProfile,
    features: FeatureVector,
    schema: FeatureSchema = SCHEMA,
    table: Optional[MessageTable] = None,
    program_path: str = "",
    top_k: Optional[int] = None,
    min_delta: float = 0.0,
) -> FeedbackReport:
    """Substitute each feature, one at a time, with the profile mean and keep
    the substitutions that raise the model's score.

    Substitution happens on raw feature values; the standardizer is applied
    afterwards. ``model`` is anything with ``predict(X) -> scores``.
    """
    if features.schema_version != schema.version or profile.schema_version != schema.version:
        raise SchemaMismatch(
            f"features {features.schema_version}, profile {profile.schema_version}, schema {schema.version}"
        )
    table = table or MessageTable(schema)
    x = np.array(features.values, dtype=float)
    if len(x) != N_FEATURES:
        raise SchemaMismatch(f"expected {N_FEATURES} features, got {len(x)}")
    baseline = _score(model, standardizer, x)

    suggestions = []
    for i, spec in enumerate(schema.features):
        current, target = float(x[i]), float(profile.mean_features[i])
        if current == target:
            continue
        x_cf = x.copy()
        x_cf[i] = target
        cf_score = _score(model, standardizer, x_cf)
        if cf_score <= baseline:
            continue
        delta = cf_score - baseline
        if delta <= min_delta:
            continue
        direction = "decrease" if current > target else "increase"
        suggestions.append(
            Suggestion(spec.id, spec.name, direction, current, target, baseline, cf_score, delta,
                       table[(spec.id, direction)])
        )
    suggestions.sort(key=lambda s: (-s.delta, s.feature_id))
    if top_k is not None:
        suggestions = suggestions[:top_k]
    return FeedbackReport(program_path, baseline, suggestions)


def render_report(report: FeedbackReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(report.to_dict(), indent=2)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = io.StringIO()
    out.write(f"{report.program_path}\n")
    out.write(f"Predicted design score: {report.baseline_score:.2f}\n")
    if not report.suggestions:
        out.write(NO_SUGGESTIONS + "\n")
    for n, s in enumerate(report.suggestions, start=1):
        out.write(f"  {n}. {s.message}\n")
    return out.getvalue()


def render_reports(reports: Sequence[FeedbackReport], fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps([r.to_dict() for r in reports], indent=2)
    return "\n".join(render_report(r, fmt) for r in reports)
