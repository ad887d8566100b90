"""Time the full desk-scale pipeline on a catalog.

    python scripts/bench_pipeline.py [catalog.csv] [repeats]
"""

import pathlib
import statistics
import sys
import time

from currigraph.export import to_dot
from currigraph.graph import transitive_closure
from currigraph.ingest import build_graph, load_catalog
from currigraph.validate import validate

ROOT = pathlib.Path(__file__).resolve().parent.parent


def run_once(data):
    stages = {}
    t = time.perf_counter()
    records, issues = load_catalog(data)
    stages["load"] = time.perf_counter() - t
    t = time.perf_counter()
    g, more = build_graph(records)
    stages["build"] = time.perf_counter() - t
    t = time.perf_counter()
    validate(g, issues + more)
    stages["validate"] = time.perf_counter() - t
    t = time.perf_counter()
    transitive_closure(g)
    stages["closure"] = time.perf_counter() - t
    t = time.perf_counter()
    to_dot(g)
    stages["dot"] = time.perf_counter() - t
    return stages


def main(catalog=ROOT / "data" / "sample_cse.csv", repeats="20"):
    data = pathlib.Path(catalog).read_bytes()
    runs = [run_once(data) for _ in range(int(repeats))]
    for stage in runs[0]:
        print(f"{stage:<9} {statistics.median(r[stage] for r in runs) * 1000:7.2f} ms")
    total = statistics.median(sum(r.values()) for r in runs)
    print(f"{'total':<9} {total * 1000:7.2f} ms (median of {repeats})")


if __name__ == "__main__":
    main(*sys.argv[1:])
