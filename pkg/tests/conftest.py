import numpy as np
import pytest

from designgrade.corpus import SplitSpec, load_corpus
from designgrade.pipeline import train_pipeline
from designgrade.regressors import TrainConfig
from designgrade.synthetic import generate_synthetic_corpus


@pytest.fixture(scope="session")
def synthetic_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    return generate_synthetic_corpus(60, seed=11, out_dir=out)


@pytest.fixture(scope="session")
def synthetic_examples(synthetic_manifest):
    return load_corpus(synthetic_manifest)


@pytest.fixture(scope="session")
def small_ensemble(synthetic_examples):
    config = TrainConfig(hidden_size=8, epochs=40, seed=5)
    return train_pipeline(synthetic_examples, "ensemble", config, ensemble_size=3, split=SplitSpec(seed=5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
