"""Emission-factor database and unit-factor registry.

Both live in line-oriented, diff-able CSV files so the numbers can be
audited cell by cell. Loading fails loudly on unknown block names, missing
cells or broken ordering; silent data loss is the worst failure mode for an
inventory database.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple, Union

from .errors import (
    FactorParseError,
    ForbiddenCell,
    InvalidOrdering,
    InvalidTriple,
    MissingBuiltin,
    MissingCell,
    UnknownUnit,
)
from .model import (
    FORBIDDEN_CELLS,
    EmissionTriple,
    FunctionalBlock,
    HSL,
    is_valid_cell,
)

#: 12 blocks x 4 levels minus the two undefined security cells.
EXPECTED_CELL_COUNT = 46

FACTOR_HEADER = ["block", "level", "low", "typical", "up"]
UNITS_HEADER = ["key", "value", "unit", "note"]

#: Closed set of units a registry entry may carry.
REGISTRY_UNITS = frozenset(
    {
        "kgCO2-eq/kg",
        "kgCO2-eq/unit",
        "kgCO2-eq/Gb",
        "kgCO2-eq/mm2",
        "Gb/mm2",
        "mm",
        "g/cm3",
    }
)

#: Mandatory registry entries (key -> unit). Extra user keys are allowed.
REQUIRED_BUILTINS = {
    "li_ion_per_kg": "kgCO2-eq/kg",
    "ndfeb_speaker_per_kg": "kgCO2-eq/kg",
    "alkaline_aaa_per_unit": "kgCO2-eq/unit",
    "alkaline_aa_per_unit": "kgCO2-eq/unit",
    "dram_density": "Gb/mm2",
    "flash_density": "Gb/mm2",
    "solder_thickness": "mm",
    "solder_density": "g/cm3",
}


@dataclass(frozen=True)
class TableMetadata:
    source: str = ""
    version: str = ""
    method: str = "ReCiPe 2016 v1.1 (H)"


@dataclass(frozen=True)
class EmissionFactorTable:
    """Map (block, level) -> emission triple; immutable once loaded."""

    cells: Mapping[Tuple[FunctionalBlock, HSL], EmissionTriple]
    metadata: TableMetadata = field(default_factory=TableMetadata)

    def __post_init__(self):
        cells = dict(self.cells)
        for key in cells:
            if key in FORBIDDEN_CELLS:
                block, level = key
                raise ForbiddenCell(f"table contains undefined cell ({block.key}, {level.key})")
        for block in FunctionalBlock:
            for level in HSL:
                if is_valid_cell(block, level) and (block, level) not in cells:
                    raise MissingCell(f"table misses cell ({block.key}, {level.key})")
        if len(cells) != EXPECTED_CELL_COUNT:
            raise MissingCell(f"expected {EXPECTED_CELL_COUNT} cells, got {len(cells)}")
        object.__setattr__(self, "cells", cells)

    def lookup(self, block: FunctionalBlock, level: HSL) -> EmissionTriple:
        if not is_valid_cell(block, level):
            raise ForbiddenCell(f"({block.key}, {level.key}) is not a valid combination")
        return self.cells[(block, level)]

    def column_sum(self, level: HSL) -> Tuple[float, float, float]:
        """Componentwise sum over all blocks defined at `level`."""
        low = typ = up = 0.0
        for block in FunctionalBlock:
            if is_valid_cell(block, level):
                cell = self.cells[(block, level)]
                low += cell.low
                typ += cell.typical
                up += cell.up
        return (low, typ, up)


def lookup(table: EmissionFactorTable, block: FunctionalBlock, level: HSL) -> EmissionTriple:
    return table.lookup(block, level)


@dataclass(frozen=True)
class UnitFactor:
    """One scaling constant: scalar or triple value, unit, provenance note."""

    key: str
    value: Union[float, EmissionTriple]
    unit: str
    note: str = ""

    def __post_init__(self):
        if self.unit not in REGISTRY_UNITS:
            raise UnknownUnit(f"entry {self.key!r} has unit {self.unit!r}; allowed: {sorted(REGISTRY_UNITS)}")
        if isinstance(self.value, EmissionTriple):
            if self.value.low <= 0:
                raise InvalidTriple(f"entry {self.key!r} must be strictly positive")
        elif self.value <= 0:
            raise InvalidTriple(f"entry {self.key!r} must be strictly positive, got {self.value}")

    def scalar(self) -> float:
        """Scalar view; triple-valued entries expose their typical value."""
        if isinstance(self.value, EmissionTriple):
            return self.value.typical
        return self.value

    def as_triple(self) -> EmissionTriple:
        if isinstance(self.value, EmissionTriple):
            return self.value
        return EmissionTriple(self.value, self.value, self.value)


@dataclass(frozen=True)
class UnitFactorRegistry:
    entries: Mapping[str, UnitFactor]

    def __post_init__(self):
        entries = dict(self.entries)
        for key, unit in REQUIRED_BUILTINS.items():
            if key not in entries:
                raise MissingBuiltin(f"registry misses mandatory entry {key!r}")
            if entries[key].unit != unit:
                raise UnknownUnit(f"mandatory entry {key!r} must have unit {unit!r}, got {entries[key].unit!r}")
        object.__setattr__(self, "entries", entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str) -> UnitFactor:
        return self.entries[key]


def _parse_float(text: str, line_no: int, column: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise FactorParseError(f"expected a number, got {text!r}", line_no, column) from None


def _data_lines(text: str):
    """Yield (line_no, line) for non-blank, non-comment lines; collect metadata."""
    meta = {}
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            for key in ("source", "version", "method"):
                prefix = key + ":"
                if body.lower().startswith(prefix):
                    meta[key] = body[len(prefix):].strip()
            continue
        rows.append((line_no, line))
    return meta, rows


def parse_factor_table(text: str) -> EmissionFactorTable:
    """Parse the `block,level,low,typical,up` grammar into a validated table."""
    meta, rows = _data_lines(text)
    if not rows:
        raise FactorParseError("empty factor file", 1, 1)
    header_no, header = rows[0]
    if [c.strip() for c in header.split(",")] != FACTOR_HEADER:
        raise FactorParseError(f"expected header {','.join(FACTOR_HEADER)!r}", header_no, 1)
    cells: Dict[Tuple[FunctionalBlock, HSL], EmissionTriple] = {}
    for line_no, line in rows[1:]:
        fields = next(csv.reader(io.StringIO(line)))
        if len(fields) != 5:
            raise FactorParseError(f"expected 5 fields, got {len(fields)}", line_no, 1)
        try:
            block = FunctionalBlock.from_key(fields[0])
        except KeyError as exc:
            raise FactorParseError(str(exc), line_no, 1) from None
        try:
            level = HSL.from_key(fields[1])
        except KeyError as exc:
            raise FactorParseError(str(exc), line_no, len(fields[0]) + 2) from None
        if not is_valid_cell(block, level):
            raise ForbiddenCell(
                f"line {line_no}: ({block.key}, {level.key}) is not a valid combination"
            )
        low = _parse_float(fields[2], line_no, 1)
        typ = _parse_float(fields[3], line_no, 1)
        up = _parse_float(fields[4], line_no, 1)
        if not (0.0 <= low <= typ <= up):
            raise InvalidOrdering(
                f"line {line_no}: cell ({block.key}, {level.key}) has unordered "
                f"values ({low}, {typ}, {up})"
            )
        if (block, level) in cells:
            raise FactorParseError(f"duplicate cell ({block.key}, {level.key})", line_no, 1)
        cells[(block, level)] = EmissionTriple(low, typ, up)
    metadata = TableMetadata(
        source=meta.get("source", ""),
        version=meta.get("version", ""),
        method=meta.get("method", TableMetadata.method),
    )
    return EmissionFactorTable(cells=cells, metadata=metadata)


def load_factor_table(path) -> EmissionFactorTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_factor_table(fh.read())


def serialize_factor_table(table: EmissionFactorTable) -> str:
    """Deterministic rendering; round-trips bitwise through the parser."""
    out = []
    if table.metadata.source:
        out.append(f"# source: {table.metadata.source}")
    if table.metadata.version:
        out.append(f"# version: {table.metadata.version}")
    out.append(f"# method: {table.metadata.method}")
    out.append(",".join(FACTOR_HEADER))
    for block in FunctionalBlock:
        for level in HSL:
            if is_valid_cell(block, level):
                c = table.cells[(block, level)]
                out.append(f"{block.key},{level.key},{c.low!r},{c.typical!r},{c.up!r}")
    return "\n".join(out) + "\n"


def _parse_value(text: str, line_no: int):
    """Scalar `v` or triple `low/typ/up`."""
    if "/" in text:
        parts = text.split("/")
        if len(parts) != 3:
            raise FactorParseError(f"triple value needs 3 components, got {text!r}", line_no, 1)
        low, typ, up = (_parse_float(p, line_no, 1) for p in parts)
        try:
            return EmissionTriple(low, typ, up)
        except InvalidTriple as exc:
            raise FactorParseError(str(exc), line_no, 1) from None
    return _parse_float(text, line_no, 1)


def parse_unit_registry(text: str) -> UnitFactorRegistry:
    """Parse the `key,value,unit,note` grammar into a validated registry."""
    _, rows = _data_lines(text)
    if not rows:
        raise FactorParseError("empty unit-registry file", 1, 1)
    header_no, header = rows[0]
    if [c.strip() for c in header.split(",")] != UNITS_HEADER:
        raise FactorParseError(f"expected header {','.join(UNITS_HEADER)!r}", header_no, 1)
    entries: Dict[str, UnitFactor] = {}
    for line_no, line in rows[1:]:
        fields = next(csv.reader(io.StringIO(line)))
        if len(fields) != 4:
            raise FactorParseError(f"expected 4 fields, got {len(fields)}", line_no, 1)
        key = fields[0].strip()
        if not key:
            raise FactorParseError("empty key", line_no, 1)
        if key in entries:
            raise FactorParseError(f"duplicate key {key!r}", line_no, 1)
        value = _parse_value(fields[1].strip(), line_no)
        entries[key] = UnitFactor(key=key, value=value, unit=fields[2].strip(), note=fields[3].strip())
    return UnitFactorRegistry(entries=entries)


def load_unit_registry(path) -> UnitFactorRegistry:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_unit_registry(fh.read())


def serialize_unit_registry(registry: UnitFactorRegistry) -> str:
    out = [",".join(UNITS_HEADER)]
    for key in sorted(registry.entries):
        e = registry.entries[key]
        if isinstance(e.value, EmissionTriple):
            value = f"{e.value.low!r}/{e.value.typical!r}/{e.value.up!r}"
        else:
            value = repr(e.value)
        note = e.note
        if "," in note or '"' in note:
            note = '"' + note.replace('"', '""') + '"'
        out.append(f"{key},{value},{e.unit},{note}")
    return "\n".join(out) + "\n"
