"""Syllabus error detection with ranked correction suggestions."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Optional

from .graph import detect_cycles
from .model import ByCode, ByTitle, CourseCode, CurriculumGraph, normalize_title, title_key

DEFAULT_MAX_DISTANCE = 3
MAX_SUGGESTIONS = 5
TYPO_DISTANCE = 2
CREDIT_RANGE = (0, 30)


class Severity(enum.IntEnum):
    ERROR = 0
    WARNING = 1
    INFO = 2


class IssueType(enum.Enum):
    UNKNOWN_PREREQ = "UNKNOWN_PREREQ"
    PROBABLE_TYPO = "PROBABLE_TYPO"
    CYCLE = "CYCLE"
    SELF_PREREQ = "SELF_PREREQ"
    DUPLICATE_TITLE = "DUPLICATE_TITLE"
    CREDITS_OUT_OF_RANGE = "CREDITS_OUT_OF_RANGE"
    OVER_ENROLLED = "OVER_ENROLLED"
    SYNTHETIC_CODE = "SYNTHETIC_CODE"
    # ingest problems, passed through
    MISSING_REQUIRED = "MISSING_REQUIRED"
    MALFORMED_VALUE = "MALFORMED_VALUE"
    DUPLICATE_CODE = "DUPLICATE_CODE"
    PARSE_ERROR = "PARSE_ERROR"
    QUALIFIER_STRIPPED = "QUALIFIER_STRIPPED"


SEVERITY = {
    IssueType.CYCLE: Severity.ERROR,
    IssueType.SELF_PREREQ: Severity.ERROR,
    IssueType.UNKNOWN_PREREQ: Severity.ERROR,
    IssueType.PROBABLE_TYPO: Severity.WARNING,
    IssueType.DUPLICATE_TITLE: Severity.WARNING,
    IssueType.CREDITS_OUT_OF_RANGE: Severity.WARNING,
    IssueType.OVER_ENROLLED: Severity.WARNING,
}
_KIND_ORDER = {k: i for i, k in enumerate(IssueType)}


@dataclass(frozen=True)
class ValidationIssue:
    kind: IssueType
    course: Optional[CourseCode]  # None only for rows dropped at load time
    detail: str
    suggestions: tuple = ()  # (CourseCode, distance) pairs

    @property
    def severity(self) -> Severity:
        return SEVERITY.get(self.kind, Severity.INFO)

    def sort_key(self):
        course = (0,) if self.course is None else (1, self.course)
        return (self.severity, course, _KIND_ORDER[self.kind], self.detail, self.suggestions)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "severity": self.severity.name,
            "course": None if self.course is None else str(self.course),
            "detail": self.detail,
            "suggestions": [{"code": str(c), "distance": d} for c, d in self.suggestions],
        }


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance between case-folded, whitespace-normalized strings."""
    a = normalize_title(a).casefold()
    b = normalize_title(b).casefold()
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _threshold(x: str, y: str, max_distance: int) -> int:
    longer = max(len(normalize_title(x)), len(normalize_title(y)))
    return min(max_distance, max(TYPO_DISTANCE, longer // 4))


def suggest_corrections(unknown, g: CurriculumGraph, max_distance: int = DEFAULT_MAX_DISTANCE) -> list:
    """Up to five real courses close to an unresolved reference.

    Titles are compared for ByTitle references, display codes for ByCode.
    A candidate qualifies within 2 edits or a quarter of the longer string,
    whichever is larger, never beyond ``max_distance``. Sorted by
    (distance, code).
    """
    text = unknown.text if isinstance(unknown, ByTitle) else str(unknown.code)
    found = []
    for code, course in g.courses.items():
        other = course.title if isinstance(unknown, ByTitle) else str(code)
        d = edit_distance(text, other)
        if d <= _threshold(text, other, max_distance):
            found.append((code, d))
    found.sort(key=lambda cd: (cd[1], cd[0]))
    return found[:MAX_SUGGESTIONS]


def validate(g: CurriculumGraph, ingest_issues=(), max_distance: int = DEFAULT_MAX_DISTANCE) -> list:
    """Every detectable syllabus problem, sorted by (severity, course, kind)."""
    issues = []

    seen = set()
    for e in g.edges:
        if e.source in g.phantoms and (e.source, e.target) not in seen:
            seen.add((e.source, e.target))
            ref = g.phantoms[e.source]
            sugg = tuple(suggest_corrections(ref, g, max_distance))
            what = "course code" if isinstance(ref, ByCode) else "title"
            if sugg and sugg[0][1] <= TYPO_DISTANCE:
                kind = IssueType.PROBABLE_TYPO
                detail = (f"prerequisite {str(ref)!r} matches no catalog {what}; "
                          f"did you mean {g.courses[sugg[0][0]].title!r} ({sugg[0][0]})?")
            else:
                kind = IssueType.UNKNOWN_PREREQ
                detail = f"prerequisite {str(ref)!r} matches no catalog {what}"
            issues.append(ValidationIssue(kind, e.target, detail, sugg))

    for cycle in detect_cycles(g).cycles:
        path = " -> ".join(str(c) for c in cycle + cycle[:1])
        issues.append(ValidationIssue(IssueType.CYCLE, cycle[0], f"prerequisite cycle {path}"))

    for code, ref in g.self_references:
        issues.append(ValidationIssue(IssueType.SELF_PREREQ, code,
                                      f"course lists itself ({str(ref)!r}) as a prerequisite"))

    first_by_title = {}
    for code, course in g.courses.items():
        key = title_key(course.title)
        if key in first_by_title:
            issues.append(ValidationIssue(IssueType.DUPLICATE_TITLE, code,
                                          f"title {course.title!r} is already used by {first_by_title[key]}"))
        else:
            first_by_title[key] = code

        lo, hi = CREDIT_RANGE
        if course.credits is not None and not lo <= course.credits <= hi:
            issues.append(ValidationIssue(IssueType.CREDITS_OUT_OF_RANGE, code,
                                          f"credits {course.credits} outside [{lo}, {hi}]"))
        if course.capacity > 0 and course.enrollment > course.capacity:
            issues.append(ValidationIssue(IssueType.OVER_ENROLLED, code,
                                          f"enrollment {course.enrollment} exceeds capacity {course.capacity}"))

    for code in g.synthetic_codes:
        issues.append(ValidationIssue(IssueType.SYNTHETIC_CODE, code,
                                      f"row has no usable code; assigned {code} to {g.courses[code].title!r}"))

    for issue in ingest_issues:
        issues.append(ValidationIssue(IssueType(issue.kind.value), issue.course, issue.message))

    issues.sort(key=ValidationIssue.sort_key)
    return issues


def report_json(issues) -> str:
    return json.dumps([i.to_dict() for i in issues], ensure_ascii=False, indent=2) + "\n"


def report_text(issues) -> str:
    if not issues:
        return "no issues\n"
    lines = []
    for i in issues:
        where = str(i.course) if i.course is not None else "-"
        line = f"{i.severity.name:<7} {i.kind.value:<20} {where:<12} {i.detail}"
        if i.suggestions:
            line += "  [suggestions: " + ", ".join(f"{c} ({d})" for c, d in i.suggestions) + "]"
        lines.append(line)
    counts = {s: sum(1 for i in issues if i.severity is s) for s in Severity}
    lines.append(f"{len(issues)} issue(s): {counts[Severity.ERROR]} error(s), "
                 f"{counts[Severity.WARNING]} warning(s), {counts[Severity.INFO]} info")
    return "\n".join(lines) + "\n"


def has_errors(issues) -> bool:
    return any(i.severity is Severity.ERROR for i in issues)
