"""Versioned on-disk model bundle.

An artifact is one JSON document holding everything needed to grade and give
feedback without the training data: the standardizer, the good-program
profile, the model weights (or tree), and training metadata. Floats are written
with ``repr`` precision, so a save/load round trip reproduces every weight
bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .baselines import LinearModel, RegressionTree, SigmoidLinearModel, TreeNode
from .corpus import Standardizer
from .errors import ArtifactError, SchemaMismatch
from .feedback import GoodProfile
from .features import SCHEMA
from .regressors import Ensemble, MlpParameters

FORMAT_VERSION = "1"
MODEL_KINDS = ("mlp", "ensemble", "linear", "sigmoid-linear", "cart")


def _floats(a) -> Any:
    return np.asarray(a, dtype=float).tolist()


def _mlp_payload(p: MlpParameters) -> dict:
    return {
        "hidden_weights": _floats(p.hidden_weights),
        "hidden_bias": _floats(p.hidden_bias),
        "output_weights": _floats(p.output_weights),
        "output_bias": float(p.output_bias),
    }


def encode_model(kind: str, model) -> dict:
    if kind == "mlp":
        return _mlp_payload(model)
    if kind == "ensemble":
        return {
            "members": [_mlp_payload(m) for m in model.members],
            "member_seeds": [int(s) for s in model.member_seeds],
        }
    if kind == "linear":
        return {"weights": _floats(model.weights), "intercept": float(model.intercept), "degenerate": model.degenerate}
    if kind == "sigmoid-linear":
        return {"weights": _floats(model.weights), "intercept": float(model.intercept)}
    if kind == "cart":
        return {
            "n_features": model.n_features,
            "max_depth": model.max_depth,
            "min_leaf": model.min_leaf,
            "root": model.root.to_dict(),
        }
    raise ArtifactError(f"unknown model kind {kind!r}")


def decode_model(kind: str, payload: dict):
    try:
        if kind == "mlp":
            return MlpParameters.from_arrays(payload)
        if kind == "ensemble":
            members = [MlpParameters.from_arrays(m) for m in payload["members"]]
            return Ensemble(members, [int(s) for s in payload["member_seeds"]])
        if kind == "linear":
            return LinearModel(np.array(payload["weights"], dtype=float), float(payload["intercept"]),
                               bool(payload.get("degenerate", False)))
        if kind == "sigmoid-linear":
            return SigmoidLinearModel(np.array(payload["weights"], dtype=float), float(payload["intercept"]))
        if kind == "cart":
            return RegressionTree(TreeNode.from_dict(payload["root"]), int(payload["n_features"]),
                                  int(payload["max_depth"]), int(payload["min_leaf"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"malformed {kind} payload: {exc}") from exc
    raise ArtifactError(f"unknown model kind {kind!r}")


@dataclass
class ModelArtifact:
    model_kind: str
    model: Any
    standardizer: Standardizer
    good_profile: Optional[GoodProfile]
    train_meta: dict = field(default_factory=dict)
    feature_schema_version: str = SCHEMA.version
    format_version: str = FORMAT_VERSION

    def predict_raw(self, X_raw) -> np.ndarray:
        """Scores for raw (unstandardized) feature rows."""
        X = np.asarray(X_raw, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        return self.model.predict(self.standardizer.transform(X))

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "model_kind": self.model_kind,
            "feature_schema_version": self.feature_schema_version,
            "feature_names": SCHEMA.names,
            "standardizer": self.standardizer.to_dict(),
            "good_profile": self.good_profile.to_dict() if self.good_profile else None,
            "model": encode_model(self.model_kind, self.model),
            "train_meta": self.train_meta,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, allow_nan=False) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8", newline="\n")

    @classmethod
    def from_dict(cls, data: dict) -> "ModelArtifact":
        if not isinstance(data, dict):
            raise ArtifactError("artifact must be a JSON object")
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise ArtifactError(f"unsupported artifact format_version {version!r} (expected {FORMAT_VERSION!r})")
        schema = data.get("feature_schema_version")
        if schema != SCHEMA.version:
            raise SchemaMismatch(f"artifact uses feature schema {schema!r}, this build extracts {SCHEMA.version!r}")
        kind = data.get("model_kind")
        if kind not in MODEL_KINDS:
            raise ArtifactError(f"unknown model kind {kind!r}")
        try:
            standardizer = Standardizer.from_dict(data["standardizer"])
            profile = GoodProfile.from_dict(data["good_profile"]) if data.get("good_profile") else None
        except (KeyError, TypeError, ValueError) as exc:
            raise ArtifactError(f"malformed artifact: {exc}") from exc
        return cls(
            model_kind=kind,
            model=decode_model(kind, data["model"]),
            standardizer=standardizer,
            good_profile=profile,
            train_meta=data.get("train_meta", {}),
            feature_schema_version=schema,
            format_version=version,
        )

    @classmethod
    def load(cls, path) -> "ModelArtifact":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ArtifactError(f"{path}: not a JSON document: {exc}") from exc
        return cls.from_dict(data)
