import json
from pathlib import Path

import pytest

from evigraph.datamodel import parse_srl_document

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig3_text() -> str:
    return (DATA / "fig3_srl.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fig3_document(fig3_text):
    return parse_srl_document(fig3_text)


@pytest.fixture(scope="session")
def fig3_graph_golden() -> dict:
    return json.loads((DATA / "fig3_graph_golden.json").read_text(encoding="utf-8"))
