import pathlib

import pytest

from dgs.graphs import parse_adjacency_text

DATA_DIR = pathlib.Path(__file__).parent / "data"

# the 20-vertex worked example: det(W) = -2^13 * b with this odd part
EXAMPLE20_B = 7 * 11 * 383 * 210857 * 231734663160530708115251000501057


def example20_text() -> str:
    return (DATA_DIR / "example_n20.adj").read_text()


@pytest.fixture(scope="session")
def example20():
    return parse_adjacency_text(example20_text())
