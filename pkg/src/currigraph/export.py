"""Deterministic DOT and JSON exports, optionally focused on one course."""

from __future__ import annotations

import enum
import json
import zlib
from dataclasses import dataclass
from typing import Optional

from .graph import require_node, condensed_levels, transitive_prerequisites, transitive_successors
from .ingest import print_prereq_expr
from .model import CourseCode, CurriculumGraph, EdgeKind

# A 12-colour qualitative palette (ColorBrewer Set3).
PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)


class Focus(enum.Enum):
    PREREQUISITES = "pre"
    SUCCESSORS = "succ"
    BOTH = "both"


class ColorBy(enum.Enum):
    CATEGORY = "category"
    LEVEL = "level"


@dataclass(frozen=True)
class ExportOptions:
    focus: Optional[CourseCode] = None
    direction: Focus = Focus.BOTH
    depth: Optional[int] = None  # None means unbounded
    color_by: ColorBy = ColorBy.CATEGORY
    include_phantoms: bool = True


def select_subgraph(g: CurriculumGraph, opts: ExportOptions) -> CurriculumGraph:
    """Restrict ``g`` to the focus course and its neighbourhood.

    Without a focus the graph is returned unchanged (minus phantoms when
    ``include_phantoms`` is off).
    """
    if opts.focus is None:
        keep = set(g.nodes)
    else:
        require_node(g, opts.focus)
        keep = {opts.focus}
        if opts.direction in (Focus.PREREQUISITES, Focus.BOTH):
            keep.update(transitive_prerequisites(g, opts.focus, opts.depth))
        if opts.direction in (Focus.SUCCESSORS, Focus.BOTH):
            keep.update(transitive_successors(g, opts.focus, opts.depth))
    if not opts.include_phantoms:
        keep -= set(g.phantoms) - ({opts.focus} if opts.focus else set())
    if opts.focus is None and keep == set(g.nodes):
        return g
    return CurriculumGraph(
        courses={c: v for c, v in g.courses.items() if c in keep},
        edges=tuple(e for e in g.edges if e.source in keep and e.target in keep),
        phantoms={c: r for c, r in g.phantoms.items() if c in keep},
        synthetic_codes=frozenset(c for c in g.synthetic_codes if c in keep),
        self_references=tuple(s for s in g.self_references if s[0] in keep),
    )


def select_paths(g: CurriculumGraph, result) -> CurriculumGraph:
    """Subgraph made of the nodes and consecutive-pair edges of a PathResult."""
    nodes = {c for p in result.paths for c in p}
    hops = {(u, v) for p in result.paths for u, v in zip(p, p[1:])}
    return CurriculumGraph(
        courses={c: v for c, v in g.courses.items() if c in nodes},
        edges=tuple(e for e in g.edges if (e.source, e.target) in hops and e.kind is EdgeKind.PREREQUISITE),
        phantoms={c: r for c, r in g.phantoms.items() if c in nodes},
    )


def category_color(category: str) -> str:
    return PALETTE[zlib.crc32(category.encode("utf-8")) % len(PALETTE)]


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def to_dot(g: CurriculumGraph, opts: ExportOptions = ExportOptions()) -> str:
    sub = select_subgraph(g, opts)
    levels = condensed_levels(sub) if opts.color_by is ColorBy.LEVEL else {}
    lines = [
        "digraph curriculum {",
        "  rankdir=LR;",
        "  node [shape=box, style=filled];",
    ]
    for code in sub.nodes:
        if code in sub.phantoms:
            attrs = (f"label={_quote(sub.label(code))}, style=dashed, "
                     f"color=red, fontcolor=red, tooltip={_quote('unresolved reference')}")
        else:
            course = sub.courses[code]
            if opts.color_by is ColorBy.LEVEL:
                fill = PALETTE[levels[code] % len(PALETTE)]
            else:
                fill = category_color(course.category)
            attrs = f"label={_quote(course.title)}, fillcolor={_quote(fill)}"
        lines.append(f"  {_quote(str(code))} [{attrs}];")
    for e in sub.edges:
        style = " [style=dashed]" if e.kind is EdgeKind.COREQUISITE else ""
        lines.append(f"  {_quote(str(e.source))} -> {_quote(str(e.target))}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def course_record(course) -> dict:
    """A course as a JSON catalog object (keys in catalog column order)."""
    return {
        "code": str(course.code),
        "title": course.title,
        "category": course.category,
        "description": course.description,
        "credits": None if course.credits is None else str(course.credits),
        "meeting": course.meeting,
        "capacity": course.capacity,
        "enrollment": course.enrollment,
        "instructor": course.instructor,
        "main_skills": list(course.main_skills),
        "prerequisites": print_prereq_expr(course.prereq_expr),
    }


def to_json(g: CurriculumGraph, opts: ExportOptions = ExportOptions()) -> str:
    sub = select_subgraph(g, opts)
    doc = {
        "courses": [course_record(sub.courses[c]) for c in sorted(sub.courses)],
        "edges": [
            {"from": str(e.source), "to": str(e.target), "kind": e.kind.value,
             "requirement_index": e.requirement_index, "alternative_group": e.alternative_group}
            for e in sub.edges
        ],
        "phantoms": [{"code": str(c), "reference": str(r)} for c, r in sub.phantoms.items()],
    }
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))
