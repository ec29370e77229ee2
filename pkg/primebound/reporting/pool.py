import multiprocessing
import os


def resolve_workers(workers):
    """0 or None means one worker per available core."""
    if not workers:
        try:
            return len(os.sched_getaffinity(0))
        except AttributeError:
            return os.cpu_count() or 1
    return max(1, int(workers))


def map_ordered(func, items, workers=1):
    """
    Apply func to every item and return the results in input order.

    With more than one worker the items are distributed over a process pool;
    the ordered reduction keeps the result independent of scheduling.
    func must be a picklable module-level callable.
    """
    items = list(items)
    workers = min(resolve_workers(workers), max(1, len(items)))
    if workers <= 1:
        return [func(item) for item in items]

    with multiprocessing.Pool(processes=workers) as pool:
        return list(pool.imap(func, items, chunksize=1))


def chunk_range(start, stop, chunks):
    """Split [start, stop) into at most `chunks` contiguous half-open ranges."""
    length = stop - start
    if length <= 0:
        return []
    chunks = max(1, min(chunks, length))
    step, extra = divmod(length, chunks)
    ranges = []
    lo = start
    for i in range(chunks):
        hi = lo + step + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges
