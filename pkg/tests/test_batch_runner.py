import pytest
from unittest.mock import Mock

from src.asymptotics import leading_coefficient
from src.batch_runner import BatchRunner
from src.errors import NotNormalized
from src.seifert_core import parse_index


def evaluate_asym(text):
    return leading_coefficient(parse_index(text)).to_dict()


class TestBatchRunner:
    @pytest.fixture
    def entries(self):
        """Sample (line number, text) pairs with one malformed line."""
        return [
            (1, "0; -1; 2/1, 3/1, 7/1"),
            (2, "0; -1; 2/x"),
            (4, "2; 2;"),
        ]

    def test_invalid_workers(self):
        with pytest.raises(ValueError):
            BatchRunner(evaluate_asym, workers=0)

    def test_empty_entries(self):
        assert BatchRunner(evaluate_asym).run([]) == []

    def test_records_carry_line_and_input(self, entries):
        records = BatchRunner(evaluate_asym).run(entries)

        assert [record["line"] for record in records] == [1, 2, 4]
        assert records[0]["input"] == "0; -1; 2/1, 3/1, 7/1"
        assert records[0]["coefficient"]["rational"] == "1/42"
        assert records[2]["coefficient"]["rational"] == "2/1"

    def test_error_isolated_to_its_line(self, entries):
        """Test that a malformed line becomes an error record and later lines still run."""
        records = BatchRunner(evaluate_asym).run(entries)

        assert records[1]["error"] == "IndexSyntaxError"
        assert "2/x" in records[1]["message"]
        assert "coefficient" in records[2]

    def test_non_domain_errors_propagate(self):
        runner = BatchRunner(Mock(side_effect=RuntimeError("boom")))

        with pytest.raises(RuntimeError):
            runner.run([(1, "0; 0;")])

    def test_domain_error_name(self):
        runner = BatchRunner(Mock(side_effect=NotNormalized("beta out of range")))

        records = runner.run([(7, "0; 0; 3/5")])

        assert records == [{"line": 7, "input": "0; 0; 3/5", "error": "NotNormalized", "message": "beta out of range"}]

    def test_order_preserved_across_workers_and_chunks(self):
        entries = [(i + 1, f"0; -1; 2/1, 3/1, {alpha}/1") for i, alpha in enumerate(range(7, 60))]

        serial = BatchRunner(evaluate_asym, workers=1).run(entries)
        parallel = BatchRunner(evaluate_asym, workers=4, chunk_size=5).run(entries)

        assert parallel == serial
        assert [record["line"] for record in parallel] == list(range(1, len(entries) + 1))

    def test_progress_callback(self):
        entries = [(i, "2; 2;") for i in range(1, 8)]
        progress = Mock()

        BatchRunner(evaluate_asym, chunk_size=3).run(entries, progress_callback=progress)

        assert [call.args for call in progress.call_args_list] == [(3, 7), (6, 7), (7, 7)]
