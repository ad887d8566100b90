"""Catalog loading, prerequisite clause parsing, and graph assembly."""

from __future__ import annotations

import csv
import enum
import io
import json
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Callable, Optional

from .model import (
    All, Any, ByCode, ByTitle, Course, CourseCode, CourseRef, CurriculumGraph,
    CurrigraphError, EdgeKind, MalformedCode, PrereqEdge, PrereqExpr, Ref,
    iter_refs, looks_like_code, make_all, make_any, normalize_title,
    parse_course_code, title_key,
)

COLUMNS = ("code", "title", "category", "description", "credits", "meeting",
           "capacity", "enrollment", "instructor", "main_skills", "prerequisites")
REQUIRED = ("title",)

PHANTOM_SUBJECT = "PHANTOM"
SYNTHETIC_SUBJECT = "XX"


class FormatError(CurrigraphError):
    """The catalog bytes are not valid CSV/JSON or do not follow the schema."""


class PrereqSyntaxError(CurrigraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class IssueKind(enum.Enum):
    MISSING_REQUIRED = "MISSING_REQUIRED"
    MALFORMED_VALUE = "MALFORMED_VALUE"
    DUPLICATE_CODE = "DUPLICATE_CODE"
    PARSE_ERROR = "PARSE_ERROR"
    QUALIFIER_STRIPPED = "QUALIFIER_STRIPPED"


@dataclass(frozen=True)
class IngestIssue:
    line_number: int
    field: str
    kind: IssueKind
    message: str
    course: Optional[CourseCode] = None  # set when the row was kept as a course


@dataclass(frozen=True)
class RawCourseRecord:
    line_number: int
    code: str = ""
    title: str = ""
    category: str = ""
    description: str = ""
    credits: str = ""
    meeting: str = ""
    capacity: str = ""
    enrollment: str = ""
    instructor: str = ""
    main_skills: str = ""
    prerequisites: str = ""


# --------------------------------------------------------------------------
# Loading


def load_catalog(source, format: str = "csv"):
    """Read catalog records from a byte stream (or bytes).

    Returns ``(records, issues)``.  Rows without a title are skipped with a
    MISSING_REQUIRED issue.  Raises FormatError for undecodable input, a bad
    CSV header, or JSON that is not an array of objects with known keys.
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        text = bytes(data).decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FormatError(f"catalog is not valid UTF-8: {exc}") from None
    fmt = format.lower()
    if fmt == "csv":
        rows, issues = _csv_rows(text)
    elif fmt == "json":
        rows, issues = _json_rows(text)
    else:
        raise FormatError(f"unsupported catalog format {format!r}")

    records = []
    for line_number, row in rows:
        missing = [c for c in REQUIRED if not row.get(c, "").strip()]
        if missing:
            for col in missing:
                issues.append(IngestIssue(line_number, col, IssueKind.MISSING_REQUIRED,
                                          f"line {line_number}: required column {col!r} is blank"))
            continue
        records.append(RawCourseRecord(line_number=line_number, **row))
    return records, issues


def _csv_rows(text):
    if not text.strip():
        raise FormatError("catalog is empty (no header row)")
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    try:
        header = next(reader)
        if tuple(h.strip() for h in header) != COLUMNS:
            raise FormatError(f"header {header!r} does not match {','.join(COLUMNS)}")
        rows, bad = [], []
        start = reader.line_num + 1
        for values in reader:
            line_number = start
            start = reader.line_num + 1
            if not values or all(not v.strip() for v in values):
                continue
            if len(values) != len(COLUMNS):
                bad.append(IngestIssue(line_number, "", IssueKind.MALFORMED_VALUE,
                                       f"line {line_number}: expected {len(COLUMNS)} fields, got {len(values)}: {values!r}"))
                continue
            rows.append((line_number, dict(zip(COLUMNS, values))))
    except csv.Error as exc:
        raise FormatError(f"invalid CSV: {exc}") from None
    return rows, bad


def _json_rows(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    # Accept the export document as well as a bare array.
    if isinstance(doc, dict) and isinstance(doc.get("courses"), list):
        doc = doc["courses"]
    if not isinstance(doc, list):
        raise FormatError("JSON catalog must be a top-level array of course objects")
    rows = []
    for i, obj in enumerate(doc, start=1):
        if not isinstance(obj, dict):
            raise FormatError(f"element {i} is not an object")
        unknown = sorted(set(obj) - set(COLUMNS))
        if unknown:
            raise FormatError(f"element {i}: unknown keys {unknown}")
        rows.append((i, {c: _json_text(obj.get(c)) for c in COLUMNS}))
    return rows, []


def _json_text(value):
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(str(v) for v in value)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


# --------------------------------------------------------------------------
# Prerequisite grammar

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<conc>\(\s*concurrent\s*\))"
    r"|(?P<coreq>corequisite:)"
    r"|(?P<lparen>\()"
    r"|(?P<rparen>\))"
    r"|(?P<word>[^\s()]+)",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # word, and, or, lparen, rparen, conc, coreq, eof
    text: str
    offset: int  # byte offset into the UTF-8 clause


def _tokenize(clause: str):
    toks = []
    pos = 0
    byte = 0
    for m in _TOKEN.finditer(clause):
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "word" and text.lower() in ("and", "or"):
                kind = text.lower()
            toks.append(_Tok(kind, text, byte))
        byte += len(text.encode("utf-8"))
        pos = m.end()
    assert pos == len(clause)
    toks.append(_Tok("eof", "", byte))
    return toks


class _Parser:
    def __init__(self, clause: str):
        self.toks = _tokenize(clause)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        if self.peek().kind == "eof":
            return None
        expr = self.expr()
        tok = self.peek()
        if tok.kind == "rparen":
            raise PrereqSyntaxError("unbalanced ')'", tok.offset)
        if tok.kind != "eof":
            raise PrereqSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return expr

    def expr(self):
        terms = [self.term()]
        while self.peek().kind == "or":
            op = self.take()
            terms.append(self.term(after=op))
        return make_any(terms)

    def term(self, after=None):
        factors = [self.factor(after)]
        while self.peek().kind == "and":
            op = self.take()
            factors.append(self.factor(op))
        return make_all(factors)

    def factor(self, after):
        tok = self.peek()
        if tok.kind == "lparen":
            self.take()
            inner = self.expr()
            close = self.peek()
            if close.kind != "rparen":
                if close.kind == "eof":
                    raise PrereqSyntaxError("unbalanced '('", tok.offset)
                raise PrereqSyntaxError(f"unexpected {close.text!r}", close.offset)
            self.take()
            return inner
        return self.courseref(after)

    def courseref(self, after):
        kind = EdgeKind.PREREQUISITE
        if self.peek().kind == "coreq":
            after = self.take()
            kind = EdgeKind.COREQUISITE
        words = []
        while self.peek().kind == "word":
            words.append(self.take().text)
        if not words:
            tok = self.peek()
            if tok.kind in ("eof", "rparen") and after is not None:
                raise PrereqSyntaxError(f"dangling {after.text!r}", after.offset)
            if tok.kind == "eof":
                raise PrereqSyntaxError("expected a course reference", tok.offset)
            if tok.kind in ("and", "or"):
                raise PrereqSyntaxError(f"dangling {tok.text!r}", tok.offset)
            if tok.kind == "rparen" and self._depth_at(self.i) == 0:
                raise PrereqSyntaxError("unbalanced ')'", tok.offset)
            raise PrereqSyntaxError(f"expected a course reference, got {tok.text!r}", tok.offset)
        if self.peek().kind == "conc":
            self.take()
            kind = EdgeKind.COREQUISITE
        return Ref(_make_ref(" ".join(words)), kind)

    def _depth_at(self, index):
        depth = 0
        for tok in self.toks[:index]:
            depth += tok.kind == "lparen"
            depth -= tok.kind == "rparen"
        return depth


def _make_ref(text: str) -> CourseRef:
    if looks_like_code(text):
        return ByCode(parse_course_code(text))
    return ByTitle(normalize_title(text))


def parse_prereq_expr(clause: str) -> PrereqExpr:
    """Parse a prerequisite clause into a canonical AND/OR tree.

    Keywords ``and``/``or`` are case-insensitive whole words; AND binds
    tighter than OR. A reference followed by ``(concurrent)`` or preceded by
    ``corequisite:`` is a corequisite. Blank input gives ``None``.

    Raises:
        PrereqSyntaxError: unbalanced parentheses or a dangling operator;
            ``offset`` is a byte offset into the UTF-8 encoded clause.
    """
    return _Parser(clause).parse()


def print_prereq_expr(expr: PrereqExpr) -> str:
    if expr is None:
        return ""
    if isinstance(expr, Ref):
        text = str(expr.ref)
        return f"{text} (concurrent)" if expr.kind is EdgeKind.COREQUISITE else text
    if isinstance(expr, Any):
        return " or ".join(print_prereq_expr(c) for c in expr.children)
    parts = []
    for child in expr.children:
        s = print_prereq_expr(child)
        parts.append(f"({s})" if isinstance(child, Any) else s)
    return " and ".join(parts)


_QUALIFIERS = (
    re.compile(r"\s+or\s+permission\b.*$", re.IGNORECASE | re.DOTALL),
    re.compile(r"\s+with\s+.*?\bbetter\s*$", re.IGNORECASE | re.DOTALL),
)


def strip_qualifiers(clause: str):
    """Remove trailing grade/permission qualifiers.

    Returns ``(clause, removed)`` where ``removed`` lists the stripped text
    fragments in the order they were found.
    """
    removed = []
    changed = True
    while changed:
        changed = False
        for pattern in _QUALIFIERS:
            m = pattern.search(clause)
            if m:
                removed.append(m.group().strip())
                clause = clause[:m.start()]
                changed = True
    return clause, removed


# --------------------------------------------------------------------------
# Flattening and graph assembly


def _leaf_positions(expr: PrereqExpr):
    """Yield ``(ref_leaf, requirement_index, alternative_group)``."""
    if expr is None:
        return
    conjuncts = expr.children if isinstance(expr, All) else (expr,)
    for req, conjunct in enumerate(conjuncts):
        yield from _walk(conjunct, req, 0)


def _walk(node, req, alt):
    if isinstance(node, Ref):
        yield node, req, alt
    elif isinstance(node, Any):
        for pos, child in enumerate(node.children, start=1):
            yield from _walk(child, req, pos)
    else:
        for child in node.children:
            yield from _walk(child, req, alt)


def flatten_edges(expr: PrereqExpr, target: CourseCode,
                  resolve: Callable[[CourseRef], CourseCode]) -> list:
    """One edge per Ref leaf of ``expr``, pointing at ``target``.

    ``requirement_index`` is the leaf's top-level conjunct position and
    ``alternative_group`` its 1-based position under the nearest Any (0 if
    none). Leaves that resolve to ``target`` itself are dropped; see
    :func:`self_references`.
    """
    edges = []
    for leaf, req, alt in _leaf_positions(expr):
        source = resolve(leaf.ref)
        if source == target:
            continue
        edges.append(PrereqEdge(source, target, leaf.kind, req, alt))
    return edges


def self_references(expr: PrereqExpr, target: CourseCode, resolve) -> list:
    """The references in ``expr`` that resolve to ``target``."""
    return [leaf.ref for leaf in iter_refs(expr) if resolve(leaf.ref) == target]


def _parse_credits(text):
    value = Decimal(text)
    if not value.is_finite():
        raise InvalidOperation
    return value.quantize(Decimal("0.1"))


def _parse_count(text):
    value = int(text)
    if value < 0:
        raise ValueError
    return value


def build_graph(records):
    """Assemble a CurriculumGraph from loaded records.

    Never raises on bad data: duplicate codes, malformed values and
    unparseable clauses become IngestIssues; unresolved references become
    phantom nodes. Returns ``(graph, issues)``.
    """
    issues = []
    courses = {}
    clauses = {}
    synthetic = set()
    lines = {}

    for rec in records:
        ln = rec.line_number
        code = None
        malformed = False
        if rec.code.strip():
            try:
                code = parse_course_code(rec.code)
            except MalformedCode:
                malformed = True
        if code is None:
            code = CourseCode(SYNTHETIC_SUBJECT, ln)
            synthetic.add(code)
        if malformed:
            issues.append(IngestIssue(ln, "code", IssueKind.MALFORMED_VALUE,
                                      f"line {ln}: malformed course code {rec.code!r}; assigned {code}", course=code))
        if code in courses:
            issues.append(IngestIssue(ln, "code", IssueKind.DUPLICATE_CODE,
                                      f"line {ln}: duplicate course code {str(code)!r}, first seen on line {lines[code]}", course=code))
            continue

        credits = None
        if rec.credits.strip():
            try:
                credits = _parse_credits(rec.credits.strip())
            except (InvalidOperation, ValueError):
                issues.append(IngestIssue(ln, "credits", IssueKind.MALFORMED_VALUE,
                                          f"line {ln}: credits {rec.credits!r} is not a decimal number", course=code))
        counts = {}
        for col in ("capacity", "enrollment"):
            raw = getattr(rec, col).strip()
            counts[col] = 0
            if raw:
                try:
                    counts[col] = _parse_count(raw)
                except ValueError:
                    issues.append(IngestIssue(ln, col, IssueKind.MALFORMED_VALUE,
                                              f"line {ln}: {col} {raw!r} is not a non-negative integer", course=code))

        clause, removed = strip_qualifiers(rec.prerequisites)
        for fragment in removed:
            issues.append(IngestIssue(ln, "prerequisites", IssueKind.QUALIFIER_STRIPPED,
                                      f"line {ln}: ignored qualifier {fragment!r}", course=code))
        expr = None
        try:
            expr = parse_prereq_expr(clause)
        except PrereqSyntaxError as exc:
            issues.append(IngestIssue(ln, "prerequisites", IssueKind.PARSE_ERROR,
                                      f"line {ln}: cannot parse {rec.prerequisites!r}: {exc}", course=code))

        skills = tuple(s for s in (normalize_title(t) for t in rec.main_skills.split(";")) if s)
        courses[code] = Course(
            code=code,
            title=normalize_title(rec.title),
            category=normalize_title(rec.category),
            description=rec.description.strip(),
            meeting=normalize_title(rec.meeting),
            main_skills=skills,
            credits=credits,
            capacity=counts["capacity"],
            enrollment=counts["enrollment"],
            instructor=normalize_title(rec.instructor),
            prereq_expr=expr,
        )
        lines[code] = ln

    title_index = {}
    for code, course in courses.items():
        title_index.setdefault(title_key(course.title), code)

    # Phantom numbering is keyed on the sorted set of unresolved titles, so it
    # does not depend on catalog row order.
    first_spelling = {}
    taken = set(courses)
    for course in courses.values():
        for leaf in iter_refs(course.prereq_expr):
            if isinstance(leaf.ref, ByCode):
                taken.add(leaf.ref.code)
            elif leaf.ref.key not in title_index:
                first_spelling.setdefault(leaf.ref.key, leaf.ref)
    phantoms = {}
    phantom_by_title = {}
    number = 0
    for key in sorted(first_spelling):
        number += 1
        while CourseCode(PHANTOM_SUBJECT, number) in taken:
            number += 1
        code = CourseCode(PHANTOM_SUBJECT, number)
        phantom_by_title[key] = code
        phantoms[code] = first_spelling[key]

    def resolve(ref):
        if isinstance(ref, ByCode):
            if ref.code not in courses:
                phantoms.setdefault(ref.code, ref)
            return ref.code
        if ref.key in title_index:
            return title_index[ref.key]
        return phantom_by_title[ref.key]

    edges = {}
    selfrefs = []
    for code, course in courses.items():
        for ref in self_references(course.prereq_expr, code, resolve):
            selfrefs.append((code, ref))
        for edge in flatten_edges(course.prereq_expr, code, resolve):
            edges.setdefault(edge.key, edge)

    graph = CurriculumGraph(courses=courses, edges=tuple(edges.values()), phantoms=phantoms,
                            synthetic_codes=frozenset(synthetic), self_references=tuple(selfrefs))
    return graph, issues


def load_graph(path, format: str | None = None):
    """Load and build a catalog file; format is inferred from the extension."""
    path = str(path)
    if format is None:
        format = "json" if path.lower().endswith(".json") else "csv"
    with open(path, "rb") as fh:
        records, issues = load_catalog(fh, format)
    graph, build_issues = build_graph(records)
    return graph, issues + build_issues
