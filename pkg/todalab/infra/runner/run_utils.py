import base64
import os
import pickle
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence

import cloudpickle
import psutil
from tqdm.auto import tqdm

THREADS_ENV = 'TODA_LAB_THREADS'


def pickle_thunk(thunk_plus):
    pickled_thunk = cloudpickle.dumps(thunk_plus)
    encoded_thunk = base64.b64encode(zlib.compress(pickled_thunk)).decode('utf-8')
    return encoded_thunk


def unpickle_thunk(encoded_thunk):
    return pickle.loads(zlib.decompress(base64.b64decode(encoded_thunk)))


def _call_encoded(encoded_thunk):
    thunk, kwargs = unpickle_thunk(encoded_thunk)
    return thunk(**kwargs)


def num_workers(requested=None):
    """ Worker count for independent cells.

    ``TODA_LAB_THREADS`` caps the count; it never exceeds the physical core count.
    """
    cpu = psutil.cpu_count(logical=False) or 1
    cap = os.environ.get(THREADS_ENV)
    n = cpu if requested is None else int(requested)
    if cap is not None and cap.strip():
        n = min(n, int(cap))
    return max(1, min(n, cpu))


def run_cells(thunk: Callable, cells: Sequence[dict], workers=None, desc=None, verbose=True) -> List:
    """ Evaluate ``thunk(**cell)`` for every cell and return the results in cell order.

    Cells are independent; with more than one worker they run in separate processes, the
    thunk being shipped with cloudpickle. The merged output does not depend on the number
    of workers.

    Args:
        thunk: callable evaluated once per cell.
        cells: keyword arguments of each cell.
        workers: requested worker count (capped by ``num_workers``).
        desc: progress bar label.
        verbose: show a tqdm progress bar.
    """
    n = min(num_workers(workers), max(1, len(cells)))
    if n == 1:
        return [thunk(**cell) for cell in tqdm(cells, desc=desc, disable=not verbose)]
    encoded = [pickle_thunk((thunk, dict(cell))) for cell in cells]
    with ProcessPoolExecutor(max_workers=n) as executor:
        results = list(tqdm(executor.map(_call_encoded, encoded), total=len(encoded),
                            desc=desc, disable=not verbose))
    return results
