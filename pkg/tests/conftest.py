from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixture_path():
    """Absolute path of a bundled description fixture by file name."""

    def get(name: str) -> str:
        return str(FIXTURES / name)

    return get
