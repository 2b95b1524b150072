"""Design-quality scoring and counterfactual feedback for Python programs."""

from .artifact import ModelArtifact
from .features import SCHEMA, FeatureVector, extract_features, file_features, program_features
from .feedback import GoodProfile, compute_good_profile, generate_feedback, render_report
from .regressors import Ensemble, MlpParameters, TrainConfig, train_ensemble, train_mlp
from .syntax import SourceProgram, parse_program, subtree_size

__all__ = [
    "SCHEMA",
    "Ensemble",
    "FeatureVector",
    "GoodProfile",
    "MlpParameters",
    "ModelArtifact",
    "SourceProgram",
    "TrainConfig",
    "compute_good_profile",
    "extract_features",
    "file_features",
    "generate_feedback",
    "parse_program",
    "program_features",
    "render_report",
    "subtree_size",
    "train_ensemble",
    "train_mlp",
]
