"""Domain types: course codes, courses, prerequisite expressions, the graph."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal
from types import MappingProxyType
from typing import Mapping, Optional, Union


class CurrigraphError(Exception):
    """Base class for all errors raised by this package."""


class MalformedCode(CurrigraphError, ValueError):
    def __init__(self, text: str):
        super().__init__(f"malformed course code: {text!r}")
        self.text = text


_WS = re.compile(r"\s+")
_CODE = re.compile(r"^\s*([A-Za-z]{1,8})\s*(\d{1,5})([A-Za-z]?)\s*$")


def normalize_title(raw: str) -> str:
    """Trim and collapse internal whitespace runs to a single space."""
    return _WS.sub(" ", raw).strip()


def title_key(title: str) -> str:
    """Matching key for a title: normalized, then case-folded."""
    return normalize_title(title).casefold()


@dataclass(frozen=True, order=True)
class CourseCode:
    subject: str
    number: int
    suffix: str = ""

    def __post_init__(self):
        if not (1 <= len(self.subject) <= 8 and self.subject.isascii()
                and self.subject.isalpha() and self.subject.isupper()):
            raise MalformedCode(str(self.subject))
        if not 1 <= self.number <= 99999:
            raise MalformedCode(f"{self.subject} {self.number}")
        if self.suffix and not (len(self.suffix) == 1 and self.suffix.isascii()
                                and self.suffix.isalpha() and self.suffix.isupper()):
            raise MalformedCode(f"{self.subject} {self.number}{self.suffix}")

    def __str__(self) -> str:
        return f"{self.subject} {self.number}{self.suffix}"


def parse_course_code(text: str) -> CourseCode:
    """Parse ``SUBJECT NUMBER[SUFFIX]`` (whitespace optional, any case)."""
    m = _CODE.match(text)
    if m is None or int(m.group(2)) == 0:
        raise MalformedCode(text)
    return CourseCode(m.group(1).upper(), int(m.group(2)), m.group(3).upper())


def looks_like_code(text: str) -> bool:
    m = _CODE.match(text)
    return m is not None and int(m.group(2)) > 0


class EdgeKind(enum.Enum):
    PREREQUISITE = "PREREQUISITE"
    COREQUISITE = "COREQUISITE"


@dataclass(frozen=True)
class ByCode:
    code: CourseCode

    def __str__(self) -> str:
        return str(self.code)


@dataclass(frozen=True)
class ByTitle:
    text: str

    def __post_init__(self):
        if not self.text or normalize_title(self.text) != self.text:
            raise ValueError(f"title reference must be non-empty and normalized: {self.text!r}")

    @property
    def key(self) -> str:
        return self.text.casefold()

    def __str__(self) -> str:
        return self.text


CourseRef = Union[ByCode, ByTitle]


@dataclass(frozen=True)
class Ref:
    ref: CourseRef
    kind: EdgeKind = EdgeKind.PREREQUISITE


@dataclass(frozen=True)
class All:
    children: tuple

    def __post_init__(self):
        _check_children(self, All)


@dataclass(frozen=True)
class Any:
    children: tuple

    def __post_init__(self):
        _check_children(self, Any)


def _check_children(node, same_type):
    if len(node.children) < 2:
        raise ValueError(f"{same_type.__name__} needs at least two children")
    for child in node.children:
        if child is None:
            raise ValueError("an empty expression cannot be nested")
        if isinstance(child, same_type):
            raise ValueError(f"{same_type.__name__} directly under {same_type.__name__} is not canonical")


# ``None`` stands for an empty prerequisite clause.
PrereqExpr = Optional[Union[Ref, All, Any]]


def make_all(children) -> PrereqExpr:
    """Build a canonical conjunction, splicing nested All nodes."""
    return _make(All, children)


def make_any(children) -> PrereqExpr:
    """Build a canonical disjunction, splicing nested Any nodes."""
    return _make(Any, children)


def _make(cls, children):
    flat = []
    for child in children:
        if child is None:
            continue
        if isinstance(child, cls):
            flat.extend(child.children)
        else:
            flat.append(child)
    if not flat:
        return None
    if len(flat) == 1:
        return flat[0]
    return cls(tuple(flat))


def iter_refs(expr: PrereqExpr):
    """Yield the Ref leaves of ``expr`` in source order."""
    if expr is None:
        return
    if isinstance(expr, Ref):
        yield expr
        return
    for child in expr.children:
        yield from iter_refs(child)


@dataclass(frozen=True)
class Course:
    code: CourseCode
    title: str
    category: str = ""
    description: str = ""
    meeting: str = ""
    main_skills: tuple = ()
    credits: Optional[Decimal] = None
    capacity: int = 0
    enrollment: int = 0
    instructor: str = ""
    prereq_expr: PrereqExpr = None

    def __post_init__(self):
        if not self.title:
            raise ValueError(f"course {self.code} has an empty title")


@dataclass(frozen=True)
class PrereqEdge:
    source: CourseCode  # the prerequisite
    target: CourseCode  # the dependent course
    kind: EdgeKind = EdgeKind.PREREQUISITE
    requirement_index: int = 0
    alternative_group: int = 0

    @property
    def key(self):
        return (self.source, self.target, self.kind.value)


@dataclass(frozen=True, eq=False)
class CurriculumGraph:
    """Immutable property graph of courses and prerequisite edges.

    ``courses`` keeps catalog order (first occurrence of a title wins in
    ``title_index``).  ``phantoms`` maps each minted node for an unresolved
    reference to the reference that produced it.  Adjacency maps cover every
    node, include all edge kinds and are sorted by code.
    """

    courses: Mapping[CourseCode, Course]
    edges: tuple
    phantoms: Mapping[CourseCode, CourseRef] = field(default_factory=dict)
    synthetic_codes: frozenset = frozenset()
    self_references: tuple = ()
    title_index: Mapping[str, CourseCode] = field(init=False)
    forward_adjacency: Mapping[CourseCode, tuple] = field(init=False)
    reverse_adjacency: Mapping[CourseCode, tuple] = field(init=False)

    def __post_init__(self):
        index = {}
        for code, course in self.courses.items():
            index.setdefault(title_key(course.title), code)
        edges = tuple(sorted(self.edges, key=lambda e: e.key))
        seen = set()
        for e in edges:
            if e.source == e.target:
                raise ValueError(f"self-prerequisite edge on {e.source}")
            if e.key in seen:
                raise ValueError(f"duplicate edge {e.source} -> {e.target} ({e.kind.value})")
            seen.add(e.key)
            for end in (e.source, e.target):
                if end not in self.courses and end not in self.phantoms:
                    raise ValueError(f"edge endpoint {end} is neither a course nor a phantom")
        nodes = sorted(set(self.courses) | set(self.phantoms))
        fwd = {n: set() for n in nodes}
        rev = {n: set() for n in nodes}
        for e in edges:
            fwd[e.source].add(e.target)
            rev[e.target].add(e.source)
        set_ = object.__setattr__
        set_(self, "courses", MappingProxyType(dict(self.courses)))
        set_(self, "phantoms", MappingProxyType(dict(sorted(self.phantoms.items()))))
        set_(self, "edges", edges)
        set_(self, "synthetic_codes", frozenset(self.synthetic_codes))
        set_(self, "self_references", tuple(self.self_references))
        set_(self, "title_index", MappingProxyType(index))
        set_(self, "forward_adjacency", MappingProxyType({n: tuple(sorted(s)) for n, s in fwd.items()}))
        set_(self, "reverse_adjacency", MappingProxyType({n: tuple(sorted(s)) for n, s in rev.items()}))

    @property
    def nodes(self) -> tuple:
        """Every node code (courses and phantoms) in sorted order."""
        return tuple(self.forward_adjacency)

    def __contains__(self, code) -> bool:
        return code in self.courses or code in self.phantoms

    def label(self, code: CourseCode) -> str:
        """Display label: the course title, or the unresolved reference text."""
        if code in self.courses:
            return self.courses[code].title
        return str(self.phantoms[code])

    def edges_of_kind(self, kind: EdgeKind = EdgeKind.PREREQUISITE) -> tuple:
        return tuple(e for e in self.edges if e.kind is kind)

    def __eq__(self, other):
        if not isinstance(other, CurriculumGraph):
            return NotImplemented
        return (dict(self.courses) == dict(other.courses)
                and self.edges == other.edges
                and dict(self.phantoms) == dict(other.phantoms))

    def __hash__(self):
        return hash((tuple(sorted(self.courses)), self.edges))

    def structure(self):
        """Hashable snapshot of everything observable, including iteration order."""
        return (tuple(self.courses.items()), self.edges, tuple(self.phantoms.items()),
                tuple(sorted(self.synthetic_codes)), self.self_references,
                tuple(self.title_index.items()),
                tuple(self.forward_adjacency.items()), tuple(self.reverse_adjacency.items()))
