"""Firm-record ingestion and the three-dimensional contingency cube.

Counting is exact integer arithmetic end to end; probabilities appear only
in the metrics layer. Cubes are dense over the full code registries, so a
never-observed category still occupies a (zero) cell and keeps
maximum-entropy denominators registry-driven.

A built cube is immutable. Ingestion of disjoint partitions of a record
stream can run concurrently and be combined with :func:`merge`, which is
exact and associative.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    AxisMismatch,
    OrphanCode,
    ParseError,
    UnknownCode,
    UnknownGroup,
)
from .registry import CategoryAxis

RECORD_HEADER = ("geo", "sector", "size")

_REASON_PARSE = "parse"


@dataclass(frozen=True)
class FirmRecord:
    """One firm: municipality code, sector code, size-class code."""

    geo: str
    sector: str
    size: str


@dataclass(frozen=True)
class IngestStats:
    """Outcome of one ingestion pass."""

    rows: int
    accepted: int
    rejected: Mapping[str, int] = field(default_factory=dict)

    @property
    def rejected_total(self) -> int:
        return sum(self.rejected.values())


@dataclass(frozen=True, eq=False)
class ContingencyCube:
    """Dense integer count array over (geography, technology, organization)."""

    geo: CategoryAxis
    tech: CategoryAxis
    org: CategoryAxis
    counts: np.ndarray

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        expected = (
            self.geo.cardinality,
            self.tech.cardinality,
            self.org.cardinality,
        )
        if counts.shape != expected:
            raise AxisMismatch(
                f"counts shape {counts.shape} does not match axes {expected}"
            )
        if (counts < 0).any():
            raise ValueError("cell counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def axes(self) -> tuple[CategoryAxis, CategoryAxis, CategoryAxis]:
        return (self.geo, self.tech, self.org)

    @property
    def total_n(self) -> int:
        return int(self.counts.sum())

    def cell(self, geo_code: str, sector_code: str, size_code: str) -> int:
        return int(
            self.counts[
                self.geo.index[geo_code],
                self.tech.index[sector_code],
                self.org.index[size_code],
            ]
        )


def empty_cube(
    geo: CategoryAxis, tech: CategoryAxis, org: CategoryAxis
) -> ContingencyCube:
    shape = (geo.cardinality, tech.cardinality, org.cardinality)
    return ContingencyCube(geo, tech, org, np.zeros(shape, dtype=np.int64))


def same_axes(a: ContingencyCube, b: ContingencyCube) -> bool:
    return a.geo == b.geo and a.tech == b.tech and a.org == b.org


def ingest(
    records: Iterable[FirmRecord | tuple[str, str, str]],
    axes: tuple[CategoryAxis, CategoryAxis, CategoryAxis],
    strict: bool = True,
) -> tuple[ContingencyCube, IngestStats]:
    """Count a stream of firm records into a cube.

    In strict mode any unknown code aborts with UnknownCode; otherwise the
    row is skipped and tallied per reason in the stats.
    """
    geo, tech, org = axes
    gi, ti, oi = geo.index, tech.index, org.index
    n_t, n_o = tech.cardinality, org.cardinality
    size = geo.cardinality * n_t * n_o

    linear: list[int] = []
    add = linear.append
    rows = 0
    rejected: dict[str, int] = {}
    for rows, rec in enumerate(records, start=1):
        if isinstance(rec, FirmRecord):
            g, t, o = rec.geo, rec.sector, rec.size
        else:
            try:
                g, t, o = rec
            except ValueError:
                if strict:
                    raise ParseError(rows, f"expected 3 fields, got {len(rec)}")
                rejected[_REASON_PARSE] = rejected.get(_REASON_PARSE, 0) + 1
                continue
        try:
            add((gi[g] * n_t + ti[t]) * n_o + oi[o])
        except KeyError:
            axis, code = _unknown(g, t, o, gi, ti, oi)
            if strict:
                raise UnknownCode(rows, axis, code) from None
            key = f"unknown_{axis}"
            rejected[key] = rejected.get(key, 0) + 1

    counts = np.bincount(
        np.asarray(linear, dtype=np.int64), minlength=size
    ).reshape(geo.cardinality, n_t, n_o)
    cube = ContingencyCube(geo, tech, org, counts)
    return cube, IngestStats(rows=rows, accepted=len(linear), rejected=rejected)


def _unknown(g, t, o, gi, ti, oi):
    if g not in gi:
        return "geography", g
    if t not in ti:
        return "technology", t
    return "organization", o


def iter_record_file(
    path, delimiter: str = ",", strict: bool = True
) -> Iterator[tuple[str, str, str]]:
    """Yield (geo, sector, size) rows from a firm-record file.

    The file must start with the header ``geo,sector,size``. In non-strict
    mode malformed rows are yielded as-is so the counting pass can tally
    them; in strict mode they raise ParseError.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(0, "empty record file, expected header") from None
        if tuple(f.strip().lower() for f in header) != RECORD_HEADER:
            raise ParseError(1, f"expected header {','.join(RECORD_HEADER)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3 and strict:
                raise ParseError(lineno, f"expected 3 fields, got {len(row)}")
            yield tuple(row)  # type: ignore[misc]


def ingest_file(
    path,
    axes: tuple[CategoryAxis, CategoryAxis, CategoryAxis],
    strict: bool = True,
    delimiter: str = ",",
) -> tuple[ContingencyCube, IngestStats]:
    return ingest(iter_record_file(path, delimiter, strict), axes, strict)


def merge(a: ContingencyCube, b: ContingencyCube) -> ContingencyCube:
    """Cellwise sum of two cubes over identical axes."""
    if not same_axes(a, b):
        raise AxisMismatch("cannot merge cubes with different axes")
    return ContingencyCube(a.geo, a.tech, a.org, a.counts + b.counts)


def rollup_cube(
    cube: ContingencyCube, mapping: Mapping[str, str]
) -> ContingencyCube:
    """Aggregate the geography axis through a leaf -> ancestor map.

    The technology and organization axes are untouched; the total count is
    preserved exactly.
    """
    parents = sorted(set(mapping.values()))
    parent_pos = {p: i for i, p in enumerate(parents)}
    rows = np.empty(cube.geo.cardinality, dtype=np.intp)
    for i, code in enumerate(cube.geo.codes):
        if code not in mapping:
            raise OrphanCode(code, cube.geo.name)
        rows[i] = parent_pos[mapping[code]]
    shape = (len(parents), cube.tech.cardinality, cube.org.cardinality)
    counts = np.zeros(shape, dtype=np.int64)
    np.add.at(counts, rows, cube.counts)
    parent_axis = CategoryAxis(cube.geo.name, tuple(parents), dict(cube.geo.labels))
    return ContingencyCube(parent_axis, cube.tech, cube.org, counts)


def slice_group(
    cube: ContingencyCube, group: str, mapping: Mapping[str, str]
) -> ContingencyCube:
    """Sub-cube of the leaves that roll up into one group.

    The geography axis of the result holds only those leaves (cube order
    preserved); its total is the group's firm count.
    """
    leaves = [code for code in cube.geo.codes if mapping.get(code) == group]
    if not leaves:
        if group not in set(mapping.values()):
            raise UnknownGroup(group)
        raise UnknownGroup(group)
    idx = [cube.geo.index[code] for code in leaves]
    sub_axis = CategoryAxis(cube.geo.name, tuple(leaves), dict(cube.geo.labels))
    return ContingencyCube(sub_axis, cube.tech, cube.org, cube.counts[idx])
