import pytest

from hvi.config import load_settings


@pytest.fixture
def settings():
    return load_settings(overrides={"jobs": 1})
