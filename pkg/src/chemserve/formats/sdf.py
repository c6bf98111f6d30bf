"""SD files: connection tables plus tagged data fields, ``$$$$``-delimited."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from chemserve.errors import FormatError
from chemserve.formats.ctab import parse_ctab, write_ctab
from chemserve.molgraph import Molecule

_TAG_RE = re.compile(r"^>\s*<([^<>]+)>")


@dataclass
class SdfEntry:
    molecule: Molecule
    properties: dict[str, str] = field(default_factory=dict)


def _parse_entry(lines: list[str], entry_idx: int) -> SdfEntry:
    try:
        end = next(i for i, line in enumerate(lines) if line.rstrip() == "M  END")
    except StopIteration:
        raise FormatError('missing "M  END"', entry=entry_idx, line=len(lines)) from None

    try:
        mol = parse_ctab("\n".join(lines[: end + 1]))
    except FormatError as exc:
        raise FormatError(exc.reason, entry=entry_idx, line=exc.line) from None

    properties: dict[str, str] = {}
    i = end + 1
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        m = _TAG_RE.match(line)
        if m is None:
            raise FormatError(f"expected a property tag line, got {line!r}", entry=entry_idx, line=i + 1)
        tag = m.group(1)
        if tag in properties:
            raise FormatError(f"duplicate property tag {tag!r}", entry=entry_idx, line=i + 1)
        i += 1
        values = []
        while i < len(lines) and lines[i].strip():
            values.append(lines[i])
            i += 1
        properties[tag] = "\n".join(values)
    return SdfEntry(mol, properties)


def parse_sdf(text: str) -> list[SdfEntry]:
    """Parse an SD file; a trailing record without ``$$$$`` is accepted."""
    normalized = text.replace("\r\n", "\n")
    if not normalized.strip():
        return []
    records: list[list[str]] = [[]]
    for line in normalized.split("\n"):
        if line.rstrip() == "$$$$":
            records.append([])
        else:
            records[-1].append(line)
    if not any(line.strip() for line in records[-1]):
        records.pop()
    return [_parse_entry(rec, idx) for idx, rec in enumerate(records)]


def write_sdf(entries: list[SdfEntry]) -> str:
    """Write entries with their property blocks; inverse of parse_sdf."""
    chunks = []
    for entry in entries:
        block = write_ctab(entry.molecule)
        for tag, value in entry.properties.items():
            if ">" in tag or "<" in tag or "\n" in tag:
                raise FormatError(f"illegal property tag {tag!r}")
            block += f">  <{tag}>\n{value}\n\n"
        chunks.append(block + "$$$$\n")
    return "".join(chunks)
