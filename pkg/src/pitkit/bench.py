"""Throughput measurement for the hitting-set stream."""
from __future__ import annotations

import csv
import hashlib
import io
import resource
import time
from dataclasses import asdict, dataclass
from itertools import islice

from .field import FieldSpec, ensure_min_size
from .hitting import hitting_set, hitting_set_size, required_size


@dataclass
class BenchReport:
    k: int
    d: int
    n: int
    field: str
    set_size: int
    points: int
    seconds: float
    points_per_second: float
    peak_rss_mib: float
    memory_class: str
    sha256: str

    def to_json(self) -> dict:
        return asdict(self)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(self.to_json()), lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.to_json())
        return buf.getvalue()


def _peak_rss_mib() -> float:
    # ru_maxrss is reported in KiB on Linux
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024


def memory_class(mib: float) -> str:
    for limit in (64, 256, 1024, 4096):
        if mib < limit:
            return f"<{limit}MiB"
    return ">=4096MiB"


def bench(k: int, d: int, n: int, field: FieldSpec, point_budget: int) -> BenchReport:
    """Stream up to ``point_budget`` hitting-set points, lifting ``field``
    first if it is too small.  The sha256 digest covers every streamed delta,
    so two runs can be compared for bit-identical output."""
    big, _ = ensure_min_size(field, required_size(k, d, n))
    digest = hashlib.sha256()
    count = 0
    start = time.perf_counter()
    for pt in islice(hitting_set(k, d, n, big), max(point_budget, 0)):
        digest.update(repr(pt.delta).encode())
        count += 1
    elapsed = time.perf_counter() - start
    rss = _peak_rss_mib()
    return BenchReport(
        k=k, d=d, n=n, field=str(big), set_size=hitting_set_size(k, d, n), points=count,
        seconds=round(elapsed, 4), points_per_second=round(count / elapsed, 1) if elapsed > 0 and count else 0.0,
        peak_rss_mib=round(rss, 1), memory_class=memory_class(rss), sha256=digest.hexdigest(),
    )
