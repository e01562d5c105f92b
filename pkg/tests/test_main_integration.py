import json
import pytest
import tempfile
import sys
from pathlib import Path
from unittest.mock import patch
from click.testing import CliRunner

# Add parent directory to path to import main
sys.path.insert(0, str(Path(__file__).parent.parent))
import main
from src.config import DEFAULT_CONFIG


BRIESKORN = "0; -1; 2/1, 3/1, 7/1"


@pytest.fixture
def runner():
    return CliRunner()


def write_batch(tmpdir: str, lines) -> str:
    path = Path(tmpdir) / "indices.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def json_lines(output: str):
    return [json.loads(line) for line in output.splitlines() if line.strip()]


class TestTextOutput:
    """Integration tests for single-index text reports."""

    def test_asym_brieskorn(self, runner):
        """Test the leading coefficient of the (2,3,7) Brieskorn sphere."""
        result = runner.invoke(main.main, ['asym', BRIESKORN])

        assert result.exit_code == 0
        assert "coefficient: 1/42 · log2" in result.output
        assert "= -chi log2" in result.output

    def test_su11_enum_brieskorn(self, runner):
        """Test one k-triple and two conjugacy classes for (2,3,7)."""
        result = runner.invoke(main.main, ['su11-enum', BRIESKORN])

        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "1 triple(s), 2 class(es)"
        assert "k = (1, 1, 1), epsilon = +" in result.output
        assert "k = (1, 1, 1), epsilon = -" in result.output

    def test_reverse_brieskorn(self, runner):
        result = runner.invoke(main.main, ['reverse', BRIESKORN])

        assert result.exit_code == 0
        assert result.output == "0; -2; 2/1, 3/2, 7/6\n"

    def test_reverse_normalizes_input(self, runner):
        result = runner.invoke(main.main, ['reverse', "0; 1; 2/-1, 3/-1, 7/-1"])

        assert result.exit_code == 0
        assert result.output == "0; -1; 2/1, 3/1, 7/1\n"

    def test_info_brieskorn(self, runner):
        result = runner.invoke(main.main, ['info', BRIESKORN])

        assert result.exit_code == 0
        assert "Orbifold Euler characteristic: -1/42" in result.output
        assert "Euler class: (-1; 1, 1, 1)" in result.output
        assert "Unit tangent bundle of the base: 0; -2; 2/1, 3/2, 7/6" in result.output

    def test_euler_check_realizable(self, runner):
        result = runner.invoke(main.main, ['euler-check', BRIESKORN])

        assert result.exit_code == 0
        assert "✓ realizable" in result.output
        assert "cases: B_MINUS_ONE" in result.output

    def test_euler_check_spherical_base(self, runner):
        result = runner.invoke(main.main, ['euler-check', "0; -1; 2/1, 3/1, 5/1"])

        assert result.exit_code == 0
        assert "✗ not realizable" in result.output
        assert "NON_HYPERBOLIC_BASE" in result.output

    def test_lifts_brieskorn(self, runner):
        result = runner.invoke(main.main, ['lifts', BRIESKORN])

        assert result.exit_code == 0
        assert "2 realizable lift(s)" in result.output
        assert "(-2; 1, 2, 6)  1/42 · log2" in result.output
        assert "(-1; 1, 1, 1)  1/42 · log2" in result.output

    def test_lifts_without_sl2r(self, runner):
        result = runner.invoke(main.main, ['lifts', "0; -1; 2/1, 3/1, 5/1"])

        assert result.exit_code == 0
        assert "0 realizable lift(s)" in result.output
        assert "no SL(2,R)-representation" in result.output

    def test_su11_verify_passes(self, runner):
        result = runner.invoke(main.main, ['su11-verify', BRIESKORN])

        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert len(lines) == 2
        assert all(line.startswith("✓") for line in lines)

    def test_su11_verify_without_classes(self, runner):
        result = runner.invoke(main.main, ['su11-verify', "0; -1; 2/0, 3/1, 7/1"])

        assert result.exit_code == 0
        assert "No irreducible representations" in result.output


class TestJsonOutput:
    """Integration tests for --json records."""

    def test_asym_json(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--json'])

        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["index"] == BRIESKORN
        assert record["lambdas"] == [2, 3, 7]
        assert record["coefficient"] == {"rational": "1/42", "unit": "log2"}
        assert record["quadratic_limit"] == 0
        assert record["minus_chi_log2"] is True

    def test_asym_precision(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--json', '--precision', '6'])

        assert result.exit_code == 0
        assert json.loads(result.output)["coefficient"]["decimal"] == "0.0165035"

    def test_decimal_flag_uses_config_precision(self, runner):
        result = runner.invoke(main.main, ['asym', "2; 2;", '--json', '--decimal'])

        assert result.exit_code == 0
        coefficient = json.loads(result.output)["coefficient"]
        assert coefficient["rational"] == "2/1"
        assert coefficient["decimal"] == "1.38629436112"

    def test_asym_alt(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--alt', '-2; 1, 2, 6', '--json'])

        assert result.exit_code == 0
        assert json.loads(result.output)["coefficient"]["rational"] == "1/42"

    def test_lifts_json(self, runner):
        result = runner.invoke(main.main, ['lifts', BRIESKORN, '--json'])

        record = json.loads(result.output)
        assert [lift["b"] for lift in record["equivalent_realizable"]] == [-2, -1]
        assert [c["rational"] for c in record["coefficients"]] == ["1/42", "1/42"]
        assert record["induces_sl2r"] is True

    def test_asym_tolerance_drives_rotation_check(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--json', '--tol', '1e-6'])

        assert result.exit_code == 0
        assert json.loads(result.output)["lambdas"] == [2, 3, 7]

    def test_zero_tolerance_fails_rotation_check(self, runner):
        result = runner.invoke(main.main, ['lifts', BRIESKORN, '--tol', '0'])

        assert result.exit_code == 1
        assert "Rotation order" in result.output

    def test_su11_enum_json(self, runner):
        result = runner.invoke(main.main, ['su11-enum', BRIESKORN, '--json'])

        record = json.loads(result.output)
        assert record["k_triples"] == [[1, 1, 1]]
        assert record["count"] == 2
        assert record["classes"] == [{"k": [1, 1, 1], "epsilon": 1}, {"k": [1, 1, 1], "epsilon": -1}]
        assert record["notes"] == []

    def test_su11_enum_boundary_note(self, runner):
        result = runner.invoke(main.main, ['su11-enum', "0; 0; 4/1, 4/3, 2/1", '--json'])

        assert result.exit_code == 0
        assert "REDUCIBLE_BOUNDARY k=[1, 3, 1]" in json.loads(result.output)["notes"]

    def test_su11_verify_json(self, runner):
        result = runner.invoke(main.main, ['su11-verify', BRIESKORN, '--json'])

        record = json.loads(result.output)
        assert record["passed"] is True
        assert len(record["representations"]) == 2
        for entry in record["representations"]:
            assert entry["h"] == "-I"
            assert len(entry["sl2r"]) == 3

    def test_reverse_json(self, runner):
        result = runner.invoke(main.main, ['reverse', BRIESKORN, '--json'])

        record = json.loads(result.output)
        assert record["reversed"] == "0; -2; 2/1, 3/2, 7/6"
        assert record["shifts"] == [1, 1, 1]
        assert record["class_negated"] is True

    def test_json_is_deterministic(self, runner):
        first = runner.invoke(main.main, ['info', BRIESKORN, '--json'])
        second = runner.invoke(main.main, ['info', BRIESKORN, '--json'])

        assert first.exit_code == 0
        assert first.output == second.output
        assert first.output.count("\n") == 1

    @patch('main.load_config')
    def test_config_json_format(self, mock_config, runner):
        """Test that output.format = json in config switches single-index output to JSON."""
        config = json.loads(json.dumps(DEFAULT_CONFIG))
        config['output']['format'] = 'json'
        mock_config.return_value = config

        result = runner.invoke(main.main, ['euler-check', BRIESKORN])

        assert result.exit_code == 0
        assert json.loads(result.output)["realizable"] is True


class TestBatchMode:
    """Integration tests for --batch files."""

    def test_three_lines_three_records(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, [BRIESKORN, "0; -2; 2/1, 3/2, 7/6", "2; 2;"])

            result = runner.invoke(main.main, ['asym', '--batch', batch])

            assert result.exit_code == 0
            records = json_lines(result.output)
            assert len(records) == 3
            assert [record["line"] for record in records] == [1, 2, 3]
            assert [record["coefficient"]["rational"] for record in records] == ["1/42", "1/42", "2/1"]

    def test_malformed_line_is_isolated(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, [BRIESKORN, "not an index", "0; -1; 1/1, 3/1"])

            result = runner.invoke(main.main, ['euler-check', '--batch', batch])

            assert result.exit_code == 0
            records = json_lines(result.output)
            assert len(records) == 3
            assert records[0]["realizable"] is True
            assert records[1]["error"] == "IndexSyntaxError"
            assert records[1]["input"] == "not an index"
            assert records[2]["error"] == "InvalidBranchIndex"

    def test_domain_error_in_batch(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, ["1; 0; 2/1, 3/1, 7/1", BRIESKORN])

            result = runner.invoke(main.main, ['su11-enum', '--batch', batch])

            assert result.exit_code == 0
            records = json_lines(result.output)
            assert records[0]["error"] == "UnsupportedShape"
            assert records[1]["count"] == 2

    def test_comments_and_blank_lines_skipped(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, ["# header", "", BRIESKORN + "  # brieskorn"])

            result = runner.invoke(main.main, ['reverse', '--batch', batch])

            records = json_lines(result.output)
            assert len(records) == 1
            assert records[0]["line"] == 3
            assert records[0]["input"] == BRIESKORN

    def test_empty_file_gives_empty_output(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = Path(tmpdir) / "empty.txt"
            batch.touch()

            result = runner.invoke(main.main, ['info', '--batch', str(batch)])

            assert result.exit_code == 0
            assert result.output == ""

    def test_workers_preserve_order(self, runner):
        lines = [f"0; -1; 2/1, 3/1, {alpha}/1" for alpha in range(7, 40)]
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, lines)

            serial = runner.invoke(main.main, ['asym', '--batch', batch])
            parallel = runner.invoke(main.main, ['asym', '--batch', batch, '--workers', '4'])

            assert parallel.exit_code == 0
            assert parallel.output == serial.output

    def test_batch_to_file(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, [BRIESKORN, "garbage"])
            output = Path(tmpdir) / "results.jsonl"

            result = runner.invoke(main.main, ['lifts', '--batch', batch, '-o', str(output)])

            assert result.exit_code == 0
            assert "2 record(s)" in result.output
            assert "1 error(s)" in result.output
            assert len(json_lines(output.read_text(encoding="utf-8"))) == 2


class TestOutputFile:
    """Integration tests for -o/--output."""

    def test_text_report_to_file(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            output = Path(tmpdir) / "report.txt"

            result = runner.invoke(main.main, ['asym', BRIESKORN, '-o', str(output)])

            assert result.exit_code == 0
            assert "Report written to" in result.output
            assert "coefficient: 1/42 · log2" in output.read_text(encoding="utf-8")

    def test_unwritable_output(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            output = Path(tmpdir) / "missing" / "report.txt"

            result = runner.invoke(main.main, ['info', BRIESKORN, '-o', str(output)])

            assert result.exit_code == 1
            assert "❌ Error" in result.output


class TestMainErrorScenarios:
    """Integration tests for error handling and exit codes."""

    def test_malformed_index_is_usage_error(self, runner):
        result = runner.invoke(main.main, ['info', "0; -1; 2/x"])

        assert result.exit_code == 2
        assert "Malformed" in result.output

    def test_missing_source_is_usage_error(self, runner):
        result = runner.invoke(main.main, ['info'])

        assert result.exit_code == 2

    def test_index_and_batch_together(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = write_batch(tmpdir, [BRIESKORN])

            result = runner.invoke(main.main, ['info', BRIESKORN, '--batch', batch])

            assert result.exit_code == 2

    def test_missing_batch_file(self, runner):
        result = runner.invoke(main.main, ['info', '--batch', '/nonexistent/indices.txt'])

        assert result.exit_code == 2

    def test_batch_file_not_utf8(self, runner):
        with tempfile.TemporaryDirectory() as tmpdir:
            batch = Path(tmpdir) / "indices.txt"
            batch.write_bytes(b"0; -1; 2/1, 3/1, 7/1\n\xff\xfe bad\n")

            result = runner.invoke(main.main, ['asym', '--batch', str(batch)])

            assert result.exit_code == 1
            assert "❌ Error" in result.output
            assert "UTF-8" in result.output

    def test_invalid_workers(self, runner):
        result = runner.invoke(main.main, ['info', BRIESKORN, '--workers', '0'])

        assert result.exit_code == 2

    def test_invalid_branch_index(self, runner):
        result = runner.invoke(main.main, ['info', "0; -1; 1/1, 3/1"])

        assert result.exit_code == 1
        assert "❌ Error" in result.output

    def test_negative_genus(self, runner):
        result = runner.invoke(main.main, ['asym', "-1; 0;"])

        assert result.exit_code == 1
        assert "Genus" in result.output

    def test_unsupported_shape(self, runner):
        result = runner.invoke(main.main, ['su11-enum', "1; 0; 2/1, 3/1, 7/1"])

        assert result.exit_code == 1
        assert "❌ Error" in result.output

    def test_alt_not_equivalent(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--alt', '-1; 0, 1, 1'])

        assert result.exit_code == 1
        assert "❌ Error" in result.output

    def test_alt_not_realizable(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--alt', '-3; 1, 1, 1'])

        assert result.exit_code == 1

    def test_alt_malformed(self, runner):
        result = runner.invoke(main.main, ['asym', BRIESKORN, '--alt', '-1; x'])

        assert result.exit_code == 1
        assert "❌ Error" in result.output


class TestResolvePrecision:
    """Tests for decimal precision priority: --precision > config (with --decimal) > none."""

    def test_precision_flag_wins(self):
        assert main.resolve_precision(False, 5, DEFAULT_CONFIG) == 5

    def test_decimal_uses_config(self):
        config = {'numerics': {'decimal_precision': 20}}
        assert main.resolve_precision(True, None, config) == 20

    def test_no_decimal(self):
        assert main.resolve_precision(False, None, DEFAULT_CONFIG) is None
