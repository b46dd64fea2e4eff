from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def record_bytes() -> bytes:
    return (FIXTURES / "solis_record.xml").read_bytes()


@pytest.fixture
def topic_bytes() -> bytes:
    return (FIXTURES / "topic_163.xml").read_bytes()
