"""Write DOT files for three standard views of a catalog.

    python scripts/render_views.py [catalog.csv] [out_dir]

fragment.dot   neighbourhood of "Data Abstractions & Structures"
prereqs.dot    "Algorithms I" and everything it depends on
between.dot    every prerequisite path between two chosen courses
"""

import pathlib
import sys

from currigraph.export import ExportOptions, Focus, select_paths, to_dot
from currigraph.graph import paths_between
from currigraph.ingest import load_graph

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main(catalog=ROOT / "data" / "sample_cse.csv", out_dir="figures"):
    g, _ = load_graph(catalog)
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    by_title = lambda t: g.title_index[t.casefold()]

    das = by_title("Data Abstractions & Structures")
    (out / "fragment.dot").write_text(to_dot(g, ExportOptions(focus=das, depth=1)))

    algo = by_title("Algorithms I")
    (out / "prereqs.dot").write_text(to_dot(g, ExportOptions(focus=algo, direction=Focus.PREREQUISITES)))

    result = paths_between(g, by_title("Object-Oriented Programming"), by_title("Machine Learning"))
    (out / "between.dot").write_text(to_dot(select_paths(g, result)))
    print(f"{result.direction.value}: {len(result.paths)} path(s)")
    for p in result.paths:
        print("  " + " -> ".join(g.label(c) for c in p))
    print(f"wrote {', '.join(sorted(f.name for f in out.glob('*.dot')))} to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:])
