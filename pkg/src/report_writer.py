import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from src.errors import BatchFileError


def format_rational(value: Fraction) -> str:
    """
    Canonical rational text 'p/q' with q > 0 and gcd(p, q) = 1.

    Integers keep the denominator ('2/1') so every rational has one shape.
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_complex(value: complex) -> Dict[str, float]:
    return {"re": float(value.real), "im": float(value.imag)}


class ReportWriter:
    """Writes computation records as JSON lines or plain text."""

    @staticmethod
    def format_json(record: Dict) -> str:
        """
        Render one record as compact single-line JSON.

        Key order follows the record's construction order, so output is
        deterministic for fixed input.
        """
        return json.dumps(record, separators=(",", ":"), ensure_ascii=False)

    def write_jsonl(self, records: Iterable[Dict], output_path: Optional[str] = None) -> str:
        """
        Write records one JSON object per line.

        Args:
            records: Records to serialize
            output_path: File to write; nothing is written when None

        Returns:
            The rendered content ('' for no records)
        """
        lines = [self.format_json(record) for record in records]
        content = "\n".join(lines) + ("\n" if lines else "")
        if output_path is not None:
            Path(output_path).write_text(content, encoding='utf-8')
        return content

    def write_text(self, lines: List[str], output_path: Optional[str] = None) -> str:
        """
        Write a plain text report.

        Args:
            lines: Report lines, without trailing newlines
            output_path: File to write; nothing is written when None

        Returns:
            The rendered content
        """
        content = "\n".join(lines) + ("\n" if lines else "")
        if output_path is not None:
            Path(output_path).write_text(content, encoding='utf-8')
        return content

    @staticmethod
    def parse_batch(batch_path: str) -> List[Tuple[int, str]]:
        """
        Read a batch file of one index per line.

        Blank lines and lines starting with '#' are skipped; trailing
        '# ...' comments are stripped.

        Args:
            batch_path: Path to a UTF-8, newline-delimited file

        Returns:
            List of (1-based line number, index text) pairs

        Raises:
            FileNotFoundError: If the batch file doesn't exist
            BatchFileError: If the file is not valid UTF-8
        """
        try:
            content = Path(batch_path).read_text(encoding='utf-8')
        except UnicodeDecodeError as e:
            raise BatchFileError(f"Batch file {batch_path} is not valid UTF-8: {e.reason} at byte {e.start}") from e

        entries = []
        for line_no, line in enumerate(content.splitlines(), start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            entries.append((line_no, text))
        return entries
