import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "test_fockleray" / "fixtures"


@pytest.fixture()
def fixtures_dir() -> pathlib.Path:
    return FIXTURES
