"""``currigraph`` command line: check, query, path, export, stats.

Exit codes: 0 success, 1 validation errors found by ``check``, 2 usage or
catalog format problems, 3 unknown (or ambiguous) course in a query.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import graph as q
from .export import ColorBy, ExportOptions, Focus, to_dot, to_json
from .ingest import FormatError, load_graph
from .model import ByCode, ByTitle, MalformedCode, looks_like_code, normalize_title, parse_course_code, title_key
from .validate import DEFAULT_MAX_DISTANCE, has_errors, report_json, report_text, suggest_corrections, validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3
ENV_CATALOG = "CURRIGRAPH_CATALOG"


class CliError(Exception):
    def __init__(self, message, status):
        super().__init__(message)
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: error: {message}", EXIT_USAGE)


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _catalog_path(args, positional=None):
    for candidate in (positional, getattr(args, "sub_catalog", None), args.catalog, os.environ.get(ENV_CATALOG)):
        if candidate:
            return candidate
    raise CliError(f"no catalog given (use --catalog, a positional path, or ${ENV_CATALOG})", EXIT_USAGE)


def _load(path):
    try:
        return load_graph(path)
    except OSError as exc:
        raise CliError(f"cannot read catalog {path!r}: {exc.strerror or exc}", EXIT_USAGE) from None
    except FormatError as exc:
        raise CliError(f"malformed catalog {path!r}: {exc}", EXIT_USAGE) from None


def resolve_course(g, name):
    """Code match first, then exact case-folded title; otherwise exit 3."""
    name = normalize_title(name)
    if looks_like_code(name):
        try:
            code = parse_course_code(name)
        except MalformedCode:
            code = None
        if code is not None and code in g:
            return code
    key = title_key(name)
    matches = [c for c, course in g.courses.items() if title_key(course.title) == key]
    if len(matches) == 1:
        return matches[0]
    if len(matches) > 1:
        listing = "\n".join(f"  {c}\t{g.courses[c].title}" for c in sorted(matches))
        raise CliError(f"course name {name!r} is ambiguous; candidates:\n{listing}", EXIT_UNKNOWN)
    ref = ByCode(parse_course_code(name)) if looks_like_code(name) else ByTitle(name)
    suggestions = suggest_corrections(ref, g) if name else []
    message = f"unknown course {name!r}"
    if suggestions:
        message += "; did you mean:\n" + "\n".join(
            f"  {c}\t{g.courses[c].title} (distance {d})" for c, d in suggestions)
    raise CliError(message, EXIT_UNKNOWN)


def _line(g, code):
    suffix = " [unresolved]" if code in g.phantoms else ""
    return f"{code}\t{g.label(code)}{suffix}"


def cmd_check(args, out):
    g, ingest_issues = _load(_catalog_path(args, args.path))
    issues = validate(g, ingest_issues, max_distance=args.max_distance)
    out.write(report_json(issues) if args.format == "json" else report_text(issues))
    return EXIT_VALIDATION if has_errors(issues) else EXIT_OK


def _split_positionals(values, count, usage):
    if len(values) == count + 1:
        return values[0], values[1:]
    if len(values) == count:
        return None, values
    raise CliError(usage, EXIT_USAGE)


def cmd_query(args, out):
    path, (mode, name) = _split_positionals(args.args, 2, "usage: currigraph query [catalog] {pre,succ} COURSE")
    if mode not in ("pre", "succ"):
        raise CliError(f"query mode must be 'pre' or 'succ', got {mode!r}", EXIT_USAGE)
    g, _ = _load(_catalog_path(args, path))
    code = resolve_course(g, name)
    if args.transitive or args.depth is not None:
        fn = q.transitive_prerequisites if mode == "pre" else q.transitive_successors
        result = fn(g, code, args.depth)
    else:
        fn = q.direct_prerequisites if mode == "pre" else q.direct_successors
        result = fn(g, code)
    for c in result:
        out.write(_line(g, c) + "\n")
    return EXIT_OK


def cmd_path(args, out):
    path, (name_a, name_b) = _split_positionals(args.args, 2, "usage: currigraph path [catalog] COURSE_A COURSE_B")
    g, _ = _load(_catalog_path(args, path))
    a = resolve_course(g, name_a)
    b = resolve_course(g, name_b)
    if a == b:
        raise CliError(f"both courses resolve to {a}", EXIT_USAGE)
    result = q.paths_between(g, a, b, max_len=args.max_len, max_paths=args.max_paths)
    if result.direction is q.Direction.NONE:
        out.write("no relationship\n")
        return EXIT_OK
    out.write(result.direction.value + "\n")
    for p in result.paths:
        out.write(" -> ".join(str(c) for c in p) + "\n")
    if result.truncated:
        out.write(f"(truncated after {len(result.paths)} paths)\n")
    return EXIT_OK


def cmd_export(args, out):
    if args.focus is None and (args.direction is not None or args.depth is not None):
        raise CliError("--direction and --depth require --focus", EXIT_USAGE)
    g, _ = _load(_catalog_path(args, args.path))
    opts = ExportOptions(
        focus=resolve_course(g, args.focus) if args.focus is not None else None,
        direction=Focus(args.direction or "both"),
        depth=args.depth,
        color_by=ColorBy(args.color_by),
        include_phantoms=not args.no_phantoms,
    )
    text = to_json(g, opts) + "\n" if args.json else to_dot(g, opts)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out!r}: {exc.strerror or exc}", EXIT_USAGE) from None
    else:
        out.write(text)
    return EXIT_OK


def graph_stats(g) -> dict:
    levels = q.condensed_levels(g)
    return {
        "nodes": len(g.nodes),
        "courses": len(g.courses),
        "edges": len(g.edges),
        "phantoms": len(g.phantoms),
        "max level": max(levels.values(), default=0),
        "sources": sum(1 for n in g.nodes if not g.reverse_adjacency[n]),
        "sinks": sum(1 for n in g.nodes if not g.forward_adjacency[n]),
        "cycles": len(q.detect_cycles(g)),
    }


def cmd_stats(args, out):
    g, _ = _load(_catalog_path(args, args.path))
    for key, value in graph_stats(g).items():
        out.write(f"{key}: {value}\n")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="currigraph", description="Curriculum prerequisite graph tool.")
    parser.add_argument("--catalog", help=f"catalog file (.csv or .json); default ${ENV_CATALOG}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--catalog", dest="sub_catalog", help="catalog file (.csv or .json)")
        p.set_defaults(func=fn)
        return p

    p = add("check", cmd_check, "validate a catalog and list syllabus errors")
    p.add_argument("path", nargs="?")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-distance", type=_positive, default=DEFAULT_MAX_DISTANCE)

    p = add("query", cmd_query, "list prerequisites or successors of a course")
    p.add_argument("args", nargs="+", metavar="[catalog] {pre,succ} COURSE")
    p.add_argument("--transitive", action="store_true")
    p.add_argument("--depth", type=_positive)

    p = add("path", cmd_path, "prerequisite paths between two courses")
    p.add_argument("args", nargs="+", metavar="[catalog] COURSE_A COURSE_B")
    p.add_argument("--max-len", type=_positive, default=q.DEFAULT_MAX_LEN)
    p.add_argument("--max-paths", type=_positive, default=q.DEFAULT_MAX_PATHS)

    p = add("export", cmd_export, "write the graph as DOT or JSON")
    p.add_argument("path", nargs="?")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="DOT output (default)")
    fmt.add_argument("--json", action="store_true")
    p.add_argument("--focus")
    p.add_argument("--direction", choices=("pre", "succ", "both"))
    p.add_argument("--depth", type=_positive)
    p.add_argument("--color-by", choices=("category", "level"), default="category")
    p.add_argument("--no-phantoms", action="store_true", help="leave unresolved references out")
    p.add_argument("--out")

    p = add("stats", cmd_stats, "summary counts for a catalog")
    p.add_argument("path", nargs="?")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(err)
            return EXIT_USAGE
        return args.func(args, out)
    except CliError as exc:
        err.write(f"{exc}\n")
        return exc.status
    except q.UnknownCourse as exc:
        err.write(f"{exc}\n")
        return EXIT_UNKNOWN


def run():
    sys.exit(main())
