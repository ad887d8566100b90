"""Typo-recall experiment: corrupt one title reference, see what check reports.

    python scripts/typo_recall.py [trials] [seed]
"""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from currigraph.ingest import build_graph, load_catalog  # noqa: E402
from currigraph.validate import IssueType, validate  # noqa: E402
from tests.oracles import rng_for, typo_trial  # noqa: E402


def main(trials="500", seed="0"):
    base = (ROOT / "data" / "sample_cse.csv").read_text()
    rng = rng_for(int(seed))
    flagged_once = top = 0
    misses = []
    for _ in range(int(trials)):
        text, original, mutated = typo_trial(rng, base)
        records, issues = load_catalog(text.encode())
        g, more = build_graph(records)
        hits = [i for i in validate(g, issues + more)
                if i.kind in (IssueType.PROBABLE_TYPO, IssueType.UNKNOWN_PREREQ)]
        flagged_once += len(hits) == 1
        if hits and hits[0].suggestions and g.courses[hits[0].suggestions[0][0]].title == original:
            top += 1
        else:
            best = g.courses[hits[0].suggestions[0][0]].title if hits and hits[0].suggestions else None
            misses.append((original, mutated, best))
    n = int(trials)
    print(f"flagged exactly once: {flagged_once}/{n}")
    print(f"original title ranked first: {top}/{n} ({100 * top / n:.1f}%)")
    for original, mutated, best in misses[:10]:
        print(f"  {original!r} -> {mutated!r}: top suggestion {best!r}")


if __name__ == "__main__":
    main(*sys.argv[1:])
