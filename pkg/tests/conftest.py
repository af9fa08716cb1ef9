import pytest

from gnlc.catalog import from_identifier

CATALOG_IDS = ("heisenberg:2", "heisenberg:3", "free:3", "free:4", "free:5")


@pytest.fixture(scope="session")
def packages():
    """All catalog entries, built once per test session."""
    return {ident: from_identifier(ident) for ident in CATALOG_IDS}
