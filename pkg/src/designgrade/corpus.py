"""Scored-program corpora: manifests, splits, standardization and metrics."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CorpusError,
    EmptyDataset,
    LengthMismatch,
    ManifestError,
    ProgramSyntaxError,
    ScoreOutOfRange,
    SyntaxErrorIn,
    TooFewExamples,
)
from .features import N_FEATURES, SCHEMA, SCHEMA_VERSION, FeatureVector, file_features


@dataclass(frozen=True)
class LabeledExample:
    path: str
    features: FeatureVector
    score: float


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    score: float
    row: int


def _data_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            yield lineno, line


def read_manifest(manifest_path) -> list[ManifestEntry]:
    """Parse a ``path,score`` or ``path,raw_score,max_score`` manifest.

    Paths are resolved against the manifest's directory. Every malformed row is
    reported together in one :class:`CorpusError`.
    """
    entries, problems = _scan_manifest(manifest_path)
    if problems:
        raise CorpusError(problems)
    return entries


def _scan_manifest(manifest_path):
    manifest_path = Path(manifest_path)
    text = manifest_path.read_text(encoding="utf-8")
    rows = list(_data_lines(text))
    if not rows:
        raise ManifestError(f"{manifest_path}: no header")
    header_row, header_line = rows[0]
    header = [h.strip() for h in next(csv.reader([header_line]))]
    if header not in (["path", "score"], ["path", "raw_score", "max_score"]):
        raise ManifestError(
            f"{manifest_path}: header must be 'path,score' or 'path,raw_score,max_score', got {header_line!r}",
            row=header_row,
        )

    base = manifest_path.parent
    problems: list[ManifestError] = []
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for lineno, line in rows[1:]:
        fields = [f.strip() for f in next(csv.reader([line]))]
        if len(fields) != len(header):
            problems.append(ManifestError(f"expected {len(header)} columns, got {len(fields)}", row=lineno))
            continue
        rel = fields[0]
        try:
            numbers = [float(f) for f in fields[1:]]
        except ValueError:
            problems.append(ManifestError(f"{rel}: non-numeric score", row=lineno))
            continue
        if not all(math.isfinite(v) for v in numbers):
            problems.append(ManifestError(f"{rel}: non-finite score", row=lineno))
            continue
        if len(numbers) == 2:
            raw, max_score = numbers
            if max_score <= 0:
                problems.append(ManifestError(f"{rel}: max_score must be > 0", row=lineno))
                continue
            score = raw / max_score
        else:
            score = numbers[0]
        if not 0.0 <= score <= 1.0:
            problems.append(ScoreOutOfRange(rel, score, row=lineno))
            continue
        path = str(base / rel)
        if path in seen:
            problems.append(ManifestError(f"{rel}: duplicate path", row=lineno))
            continue
        seen.add(path)
        entries.append(ManifestEntry(path, score, lineno))
    return entries, problems


def _extract(entry: ManifestEntry):
    try:
        return file_features(entry.path)
    except ProgramSyntaxError as exc:
        return SyntaxErrorIn(entry.path, exc.line, exc.message, row=entry.row)
    except (OSError, UnicodeDecodeError) as exc:
        return ManifestError(f"{entry.path}: {exc}", row=entry.row)


def load_corpus(manifest_path, workers: int = 1) -> list[LabeledExample]:
    """Read a manifest and extract features for every listed program, in manifest order.

    Fails as a whole, listing every bad row and every unreadable or unparseable file.
    """
    entries, problems = _scan_manifest(manifest_path)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_extract, entries))
    else:
        results = [_extract(e) for e in entries]
    problems += [r for r in results if isinstance(r, Exception)]
    problems.sort(key=lambda p: p.row or 0)
    if problems:
        raise CorpusError(problems)
    return [LabeledExample(e.path, fv, e.score) for e, fv in zip(entries, results)]


def as_arrays(examples: Sequence[LabeledExample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([ex.features.values for ex in examples], dtype=float).reshape(-1, N_FEATURES)
    y = np.array([ex.score for ex in examples], dtype=float)
    return X, y


@dataclass(frozen=True)
class SplitSpec:
    train: float = 0.7
    dev: float = 0.15
    test: float = 0.15
    seed: int = 0

    def __post_init__(self):
        ratios = (self.train, self.dev, self.test)
        if any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must be non-negative and sum to 1, got {ratios}")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SplitSpec":
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("split needs three comma-separated ratios")
        return cls(*parts, seed=seed)


def split_sizes(n: int, spec: SplitSpec) -> tuple[int, int, int]:
    # the epsilon keeps products like 0.7 * 10 from flooring to 6
    n_train = math.floor(spec.train * n + 1e-9)
    n_dev = math.floor(spec.dev * n + 1e-9)
    return n_train, n_dev, n - n_train - n_dev


def split_corpus(examples: Sequence, spec: SplitSpec):
    """Seeded permutation followed by contiguous train/dev/test cuts."""
    sizes = split_sizes(len(examples), spec)
    if min(sizes) < 1:
        raise TooFewExamples(f"{len(examples)} examples give split sizes {sizes}; every split must be nonempty")
    order = np.random.default_rng(spec.seed & 0xFFFFFFFFFFFFFFFF).permutation(len(examples))
    shuffled = [examples[i] for i in order]
    a, b = sizes[0], sizes[0] + sizes[1]
    return shuffled[:a], shuffled[a:b], shuffled[b:]


@dataclass
class Standardizer:
    means: np.ndarray
    stds: np.ndarray
    constant_mask: np.ndarray

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        safe = np.where(self.constant_mask, 1.0, self.stds)
        out = (X - self.means) / safe
        return np.where(self.constant_mask, 0.0, out)

    def to_dict(self) -> dict:
        return {
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
            "constant_mask": [bool(v) for v in self.constant_mask],
        }

    @classmethod
    def from_dict(cls, data) -> "Standardizer":
        return cls(
            np.array(data["means"], dtype=float),
            np.array(data["stds"], dtype=float),
            np.array(data["constant_mask"], dtype=bool),
        )


def fit_standardizer(X) -> Standardizer:
    """Column means and population standard deviations of the training matrix.

    ``X`` may also be a sequence of :class:`LabeledExample`.
    """
    if len(X) and isinstance(X[0], LabeledExample):
        X = as_arrays(X)[0]
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("cannot fit a standardizer on zero rows")
    constant = np.ptp(X, axis=0) == 0
    return Standardizer(X.mean(axis=0), X.std(axis=0), constant)


def apply_standardizer(std: Standardizer, x_raw) -> np.ndarray:
    return std.transform(x_raw)


def _paired(preds, truths):
    p = np.asarray(preds, dtype=float).reshape(-1)
    t = np.asarray(truths, dtype=float).reshape(-1)
    if len(p) != len(t):
        raise LengthMismatch(f"{len(p)} predictions vs {len(t)} targets")
    if len(p) == 0:
        raise EmptyDataset("no predictions")
    return p, t


def mse_metric(preds, truths) -> float:
    p, t = _paired(preds, truths)
    return float(np.mean((t - p) ** 2))


def avg_accuracy(preds, truths) -> float:
    """Mean of ``1 - |pred - truth|``; terms may go negative for out-of-range predictions.

    Computed as ``1 - MAE`` so the two forms agree bit for bit.
    """
    p, t = _paired(preds, truths)
    return float(1.0 - np.mean(np.abs(p - t)))


def write_feature_dump(records, out) -> None:
    """CSV with ``path,schema_version`` followed by the 33 feature columns."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["path", "schema_version", *SCHEMA.names])
    for path, fv in records:
        writer.writerow([path, fv.schema_version, *(repr(float(v)) for v in fv.values)])


def read_feature_dump(text: str) -> list[tuple[str, FeatureVector]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[:2] != ["path", "schema_version"] or header[2:] != SCHEMA.names:
        raise ManifestError("not a feature dump for this schema")
    return [(row[0], FeatureVector(row[1], tuple(float(v) for v in row[2:]))) for row in reader if row]


def examples_from_pairs(pairs, schema_version: Optional[str] = None) -> list[LabeledExample]:
    """Build examples from ``(path, raw feature values, score)`` triples."""
    version = schema_version or SCHEMA_VERSION
    return [LabeledExample(p, FeatureVector(version, tuple(map(float, v))), float(s)) for p, v, s in pairs]
