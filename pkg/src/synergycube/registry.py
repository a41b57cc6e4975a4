"""Category registries and the geographical hierarchy.

An analysis is always taken over three finite code registries (geography,
technology, organization) plus a leveled region hierarchy that maps every
municipality-level code up to a single national root. Registries and
hierarchies are immutable once loaded and safe to share between threads.

File formats
------------
Code table: UTF-8, delimiter-separated rows ``code,label`` (label optional,
may itself contain the delimiter), ``#`` starts a comment line.

Hierarchy: a header line ``levels: L0>L1>...`` naming the levels from finest
to coarsest, then rows ``child,child_level,parent`` (an optional fourth
column carries a display label for the child code).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateCode,
    EmptyAxis,
    InvalidHierarchy,
    LevelOrder,
    MultipleParents,
    OrphanCode,
    UnknownLevel,
)

GEOGRAPHY = "geography"
TECHNOLOGY = "technology"
ORGANIZATION = "organization"

_COMMENT = "#"


@dataclass(frozen=True)
class CategoryAxis:
    """A named, ordered, finite registry of category codes.

    Codes are opaque strings; order is the file/declaration order and fixes
    the corresponding cube dimension.
    """

    name: str
    codes: tuple[str, ...]
    labels: Mapping[str, str] = field(default_factory=dict, hash=False)
    _index: Mapping[str, int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if not self.codes:
            raise EmptyAxis(self.name)
        index: dict[str, int] = {}
        for i, code in enumerate(self.codes):
            if code in index:
                raise DuplicateCode(code, self.name)
            index[code] = i
        object.__setattr__(self, "codes", tuple(self.codes))
        object.__setattr__(self, "_index", index)

    @property
    def cardinality(self) -> int:
        return len(self.codes)

    @property
    def index(self) -> Mapping[str, int]:
        """Mapping code -> position along the cube dimension."""
        return self._index

    def label_of(self, code: str) -> str:
        return self.labels.get(code, "")

    def __contains__(self, code) -> bool:
        return code in self._index


def axis_from_codes(
    name: str, codes: Iterable[str], labels: Mapping[str, str] | None = None
) -> CategoryAxis:
    return CategoryAxis(name, tuple(codes), dict(labels or {}))


def load_axis(path, name: str, delimiter: str = ",") -> CategoryAxis:
    """Read a code-table file into an axis.

    Rows are ``code`` or ``code,label``; extra delimiter-separated fields
    are folded back into the label so unquoted labels containing the
    delimiter survive.
    """
    codes: list[str] = []
    labels: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter=delimiter):
            if not row or row[0].lstrip().startswith(_COMMENT):
                continue
            code = row[0].strip()
            if not code:
                continue
            if code in labels:
                raise DuplicateCode(code, str(path))
            labels[code] = delimiter.join(f.strip() for f in row[1:]).strip()
            codes.append(code)
    if not codes:
        raise EmptyAxis(str(path))
    return CategoryAxis(name, tuple(codes), labels)


@dataclass(frozen=True)
class RegionHierarchy:
    """Leveled many-to-one maps from the finest region codes up to one root.

    ``levels`` runs finest -> coarsest; ``parent_maps[k]`` sends every code
    at ``levels[k]`` to its single parent at ``levels[k+1]``. Construction
    validates totality (no orphans) and the single-root property.
    """

    levels: tuple[str, ...]
    parent_maps: tuple[Mapping[str, str], ...]
    labels: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if len(self.levels) < 2:
            raise InvalidHierarchy("a hierarchy needs at least two levels")
        if len(set(self.levels)) != len(self.levels):
            raise InvalidHierarchy("level names must be unique")
        if len(self.parent_maps) != len(self.levels) - 1:
            raise InvalidHierarchy(
                "expected one parent map per adjacent level pair "
                f"({len(self.levels) - 1}), got {len(self.parent_maps)}"
            )
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(
            self, "parent_maps", tuple(dict(m) for m in self.parent_maps)
        )
        for k, pmap in enumerate(self.parent_maps):
            if not pmap:
                raise InvalidHierarchy(f"level {self.levels[k]!r} has no codes")
            if k == 0:
                continue
            # totality: every parent referenced from below is itself mapped up
            missing = set(self.parent_maps[k - 1].values()) - set(pmap)
            if missing:
                raise OrphanCode(sorted(missing)[0], self.levels[k])
        roots = set(self.parent_maps[-1].values())
        if len(roots) != 1:
            raise InvalidHierarchy(
                f"expected a single root at {self.levels[-1]!r}, got {sorted(roots)}"
            )

    @property
    def root(self) -> str:
        return next(iter(self.parent_maps[-1].values()))

    def level_index(self, level: str) -> int:
        try:
            return self.levels.index(level)
        except ValueError:
            raise UnknownLevel(level) from None

    def codes_at(self, level: str) -> tuple[str, ...]:
        """All codes at a level, sorted ascending."""
        k = self.level_index(level)
        if k == len(self.levels) - 1:
            return (self.root,)
        codes = set(self.parent_maps[k])
        if k > 0:
            codes |= set(self.parent_maps[k - 1].values())
        return tuple(sorted(codes))

    def label_of(self, code: str) -> str:
        return self.labels.get(code, "")


def load_hierarchy(path) -> RegionHierarchy:
    """Read and validate a hierarchy file."""
    levels: tuple[str, ...] | None = None
    maps: list[dict[str, str]] = []
    labels: dict[str, str] = {}
    level_pos: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(_COMMENT):
                continue
            if levels is None:
                if not line.startswith("levels:"):
                    raise InvalidHierarchy(
                        f"{path}:{lineno}: expected 'levels: L0>L1>...' header"
                    )
                levels = tuple(
                    part.strip() for part in line[len("levels:"):].split(">")
                )
                if len(levels) < 2 or any(not lv for lv in levels):
                    raise InvalidHierarchy(f"{path}:{lineno}: malformed level list")
                level_pos = {lv: k for k, lv in enumerate(levels)}
                maps = [{} for _ in range(len(levels) - 1)]
                continue
            row = next(csv.reader([line]))
            if len(row) < 3:
                raise InvalidHierarchy(
                    f"{path}:{lineno}: expected 'child,child_level,parent'"
                )
            child, child_level, parent = (f.strip() for f in row[:3])
            if child_level not in level_pos:
                raise UnknownLevel(child_level)
            if not parent:
                raise OrphanCode(child, child_level)
            k = level_pos[child_level]
            if k == len(levels) - 1:
                raise InvalidHierarchy(
                    f"{path}:{lineno}: root level {child_level!r} cannot have a parent"
                )
            if child in maps[k]:
                raise MultipleParents(child, child_level)
            maps[k][child] = parent
            if len(row) > 3 and row[3].strip():
                labels[child] = row[3].strip()
    if levels is None:
        raise InvalidHierarchy(f"{path}: empty hierarchy file")
    return RegionHierarchy(levels, tuple(maps), labels)


def rollup_map(
    h: RegionHierarchy, from_level: str, to_level: str
) -> dict[str, str]:
    """Total map sending every ``from_level`` code to its ``to_level`` ancestor.

    ``from_level == to_level`` yields the identity; rolling toward a finer
    level raises LevelOrder.
    """
    i = h.level_index(from_level)
    j = h.level_index(to_level)
    if i > j:
        raise LevelOrder(from_level, to_level)
    mapping = {code: code for code in h.codes_at(from_level)}
    for k in range(i, j):
        step = h.parent_maps[k]
        mapping = {leaf: step[anc] for leaf, anc in mapping.items()}
    return mapping
