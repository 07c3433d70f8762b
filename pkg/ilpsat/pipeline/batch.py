import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from ilpsat.errors import IlpSatError
from ilpsat.maxsat.wcnf_io import read_wcnf
from ilpsat.pipeline.config import PipelineConfig
from ilpsat.pipeline.runner import run_instance

logger = logging.getLogger(__name__)

WCNF_SUFFIXES = (".wcnf",)


def discover_instances(directory: Path) -> List[Path]:
    """All ``*.wcnf`` files below `directory`, sorted by path."""
    return sorted(p for p in Path(directory).rglob("*") if p.is_file() and p.suffix in WCNF_SUFFIXES)


def _run_one(path: Path, config: PipelineConfig) -> Dict[str, Any]:
    try:
        origin = read_wcnf(path)
        result = run_instance(origin, replace(config, input_path=path), name=path.name)
        return result.stats.to_dict(config.record_timings)
    except (IlpSatError, OSError) as exc:
        logger.warning("%s: %s", path.name, exc)
        return {"instance": path.name, "error": f"{type(exc).__name__}: {exc}"}


def run_batch(
    paths: Sequence[Path],
    config: PipelineConfig,
    workers: int = 1,
    sink: Optional[TextIO] = None,
) -> List[Dict[str, Any]]:
    """
    Run the pipeline on every instance and return one stats row per instance.

    Each worker owns its instance end to end. Rows are written to `sink` as
    JSON lines under a lock in completion order; with one worker that is
    input order.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    lock = threading.Lock()
    rows: List[Dict[str, Any]] = []

    def emit(row: Dict[str, Any]) -> None:
        with lock:
            rows.append(row)
            if sink is not None:
                sink.write(json.dumps(row, sort_keys=True) + "\n")
                sink.flush()

    if workers == 1:
        for path in paths:
            emit(_run_one(path, config))
        return rows

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_one, path, config) for path in paths]
        for future in as_completed(futures):
            emit(future.result())
    return rows
