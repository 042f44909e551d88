from __future__ import annotations

from pathlib import Path

import pytest

from trendex.pipeline import DataBundle, load_bundle

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "data" / "fixture"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def bundle() -> DataBundle:
    """The bundled fixture corpus, loaded once for the whole session."""
    return load_bundle(FIXTURE_DIR)
