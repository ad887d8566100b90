"""Curriculum knowledge graph: catalog ingest, prerequisite queries, syllabus checks, exports."""

from .export import ColorBy, ExportOptions, Focus, select_paths, select_subgraph, to_dot, to_json
from .graph import (
    CycleReport, CyclicGraph, Direction, PathResult, SameCourse, UnknownCourse,
    detect_cycles, direct_prerequisites, direct_successors, level_assignment,
    paths_between, topological_order, transitive_prerequisites, transitive_successors,
)
from .ingest import (
    FormatError, IngestIssue, IssueKind, PrereqSyntaxError, RawCourseRecord,
    build_graph, flatten_edges, load_catalog, load_graph, parse_prereq_expr,
    print_prereq_expr,
)
from .model import (
    All, Any, ByCode, ByTitle, Course, CourseCode, CurriculumGraph, CurrigraphError,
    EdgeKind, MalformedCode, PrereqEdge, Ref, normalize_title, parse_course_code,
)
from .validate import Severity, IssueType, ValidationIssue, edit_distance, suggest_corrections, validate

__version__ = "0.1.0"
