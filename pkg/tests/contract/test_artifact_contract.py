"""Contract tests for the JSON artifacts other tools read.

Pins the keys of static_model.json, kinetic_model.json, ingest_report.json
and summary.json, and the rules their documents enforce.

Run with: pytest -m contract tests/contract/test_artifact_contract.py
"""

import json

import pytest
from pydantic import ValidationError as PydanticValidationError

from src.lib.artifacts import dump_json
from src.lib.csv_models import KineticModelDocument, StaticModelDocument, SummaryDocument
from src.services.model_store import kinetic_model_payload, static_model_payload
from src.services.panel_builder import binarize, filter_complete, ingest_report
from src.services.price_loader import load_prices


@pytest.mark.contract
class TestModelDocumentContract:
    """Key sets and size rules of the model documents."""

    def test_static_keys(self, static_model_factory):
        """static_model.json carries exactly these top-level keys."""
        payload = json.loads(dump_json(static_model_payload(static_model_factory(3, 1), {})))

        assert set(payload) == {"schema_version", "n", "tickers", "h", "j", "fit_meta"}

    def test_kinetic_keys(self, kinetic_model_factory):
        """kinetic_model.json carries exactly these top-level keys."""
        model = kinetic_model_factory(3, 2, 20, seed=1)

        payload = json.loads(dump_json(kinetic_model_payload(model, {"l2_j": 0.0}, {})))

        assert set(payload) == {
            "schema_version",
            "n",
            "m_basis",
            "t_len",
            "tickers",
            "gamma",
            "a",
            "j",
            "penalties",
            "fit_meta",
        }
        assert len(payload["gamma"]) == 6
        assert len(payload["j"]) == 9

    def test_static_rejects_extra_keys(self):
        """Unknown keys are refused."""
        with pytest.raises(PydanticValidationError):
            StaticModelDocument(n=1, tickers=["A"], h=[0.0], j=[], extra=1)

    def test_kinetic_basis_size(self):
        """gamma must hold n * m_basis values."""
        with pytest.raises(PydanticValidationError, match="gamma"):
            KineticModelDocument(
                n=1,
                m_basis=2,
                t_len=10,
                tickers=["A"],
                gamma=[0.0],
                a=[0.0],
                j=[0.0],
                penalties={},
            )


@pytest.mark.contract
class TestIngestReportContract:
    """Keys of ingest_report.json."""

    def test_keys(self, csv_fixtures):
        """The report names shapes, drops and sector counts."""
        partial = binarize(load_prices(csv_fixtures / "prices_gapped.csv"))

        report = ingest_report(partial, filter_complete(partial))

        assert set(report) == {
            "raw_shape",
            "shape",
            "dropped_tickers",
            "dropped_ticker_count",
            "dropped_date_count",
            "missing_cells",
            "missing_by_ticker",
            "first_date",
            "last_date",
            "sector_counts",
        }
        assert report["first_date"] == "2020-01-02"
        assert report["sector_counts"] == {"unknown": 2}


@pytest.mark.contract
class TestSummaryContract:
    """Shape of summary.json."""

    def test_sections(self):
        """A schema version and one mapping of rows per section."""
        document = SummaryDocument(sections={"static_network": {"Edges retained": 3}})

        assert document.model_dump() == {
            "schema_version": 1,
            "sections": {"static_network": {"Edges retained": 3}},
        }
