import hashlib
import os
from concurrent.futures import ThreadPoolExecutor, as_completed

from loguru import logger

from config import WORKERS_ENV
from errors import ConfigError, LabError

# Global progress store
PROGRESS = {}   # run_id -> {'percent': int, 'status': str}


def make_run_id(config_text):
    return hashlib.sha1(config_text.encode("utf-8")).hexdigest()[:12]


def worker_count(workers=None):
    if workers is None:
        raw = os.environ.get(WORKERS_ENV)
        if raw is None:
            return 1
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"worker count must be positive, got {workers}")
    return workers


def run_sweep(run_id, fn, items, workers=None, label="sweep"):
    """Apply fn to every item on a thread pool; results keep the input order."""
    items = list(items)
    workers = worker_count(workers)
    total = max(len(items), 1)
    results = [None] * len(items)
    PROGRESS[run_id] = {'percent': 0, 'status': f'{label}: 0/{len(items)}'}
    try:
        if workers == 1:
            for i, item in enumerate(items):
                results[i] = fn(item)
                PROGRESS[run_id] = {'percent': int(100 * (i + 1) / total),
                                    'status': f'{label}: {i + 1}/{len(items)}'}
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(fn, item): i for i, item in enumerate(items)}
                for done, future in enumerate(as_completed(futures), start=1):
                    results[futures[future]] = future.result()
                    PROGRESS[run_id] = {'percent': int(100 * done / total),
                                        'status': f'{label}: {done}/{len(items)}'}
    except LabError as e:
        PROGRESS[run_id] = {'percent': 100, 'status': f'Error: {e}'}
        raise
    PROGRESS[run_id] = {'percent': 100, 'status': f'Done - {len(items)} {label} runs'}
    logger.debug(f"{run_id}: {len(items)} {label} runs on {workers} worker(s)")
    return results
