"""
dumps.py

Reproduction files for internal failures: steps the constructions guarantee
cannot fail, failing anyway.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

from .config import settings
from .formats import serialize_graph
from .graph import EdgeColoredMultigraph, RainbowError

logger = logging.getLogger(__name__)


class InternalFailure(RainbowError):
    """Raised when a guaranteed step fails; carries the step name and offending graph"""

    def __init__(self, step: str, graph: EdgeColoredMultigraph, detail: str = ""):
        self.step = step
        self.graph = graph
        self.detail = detail
        self.dump_path: Optional[Path] = None
        super().__init__(f"internal failure in {step}: {detail}" if detail else f"internal failure in {step}")


def write_dump(step: str, graph: EdgeColoredMultigraph, detail: str = "", directory: Optional[Path] = None) -> Path:
    """
    Write `# failed-step`, `# detail` and the graph file text to a new file
    under the dump directory.

    Returns:
        Path of the written file
    """
    directory = Path(directory or settings.dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stamp = datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    path = directory / f"{step}-{stamp}.ecg"
    detail_line = " ".join(detail.split())
    path.write_text(f"# failed-step: {step}\n# detail: {detail_line}\n{serialize_graph(graph)}")
    logger.error(f"Internal failure in {step}; reproduction written to {path}")
    return path


def fail(step: str, graph: EdgeColoredMultigraph, detail: str = "") -> InternalFailure:
    """Dump the instance and build the exception to raise."""
    failure = InternalFailure(step, graph, detail)
    try:
        failure.dump_path = write_dump(step, graph, detail)
    except OSError as e:
        logger.error(f"Could not write dump for {step}: {e}")
    return failure
