"""Line-level batch evaluation with error isolation and ordered output."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

from src.errors import SeifertError

logger = logging.getLogger(__name__)


class BatchRunner:
    """Evaluates one record per batch line, in input order."""

    def __init__(self, evaluate: Callable[[str], Dict], workers: int = 1, chunk_size: int = 50):
        """
        Initialize the runner.

        Args:
            evaluate: Maps an index text to a result record; raises SeifertError on bad input
            workers: Number of worker threads (1 evaluates inline)
            chunk_size: Lines handed to the pool per round, also the progress granularity
        """
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self.evaluate = evaluate
        self.workers = workers
        self.chunk_size = chunk_size

    def _evaluate_line(self, entry: Tuple[int, str]) -> Dict:
        """Evaluate one line; domain errors become an error record."""
        line_no, text = entry
        try:
            result = self.evaluate(text)
        except SeifertError as e:
            logger.debug("Line %d failed: %s", line_no, e)
            return {
                "line": line_no,
                "input": text,
                "error": type(e).__name__,
                "message": str(e),
            }
        return {"line": line_no, "input": text, **result}

    def run(
        self,
        entries: List[Tuple[int, str]],
        progress_callback: Optional[Callable[[int, int], None]] = None
    ) -> List[Dict]:
        """
        Evaluate all entries, in chunks, preserving input order.

        Args:
            entries: (line number, text) pairs as produced by ReportWriter.parse_batch
            progress_callback: Optional callback function(current, total) after each chunk

        Returns:
            One record per entry, in the same order
        """
        if not entries:
            return []

        total = len(entries)
        records: List[Dict] = []

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            for chunk_start in range(0, total, self.chunk_size):
                chunk = entries[chunk_start:chunk_start + self.chunk_size]
                # map() yields results in submission order
                records.extend(pool.map(self._evaluate_line, chunk))
                if progress_callback:
                    progress_callback(len(records), total)

        return records
