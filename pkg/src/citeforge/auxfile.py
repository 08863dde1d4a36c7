"""The aux file protocol: typed records and the per-pass session.

The aux file is the only channel between passes.  It holds four record
kinds, one per line when written:

    \\citation{keys}      what was cited, payload verbatim
    \\bibdata{databases}  argument of the bibliography command
    \\bibstyle{style}     argument of the style command
    \\@citedef{key}{label}  a resolved label, consumed on the next pass

Reading is immune to line breaks: all newline bytes are deleted first
and the concatenation is parsed, so a record split anywhere across
lines (even mid-name) still parses.  Writers must therefore never put a
newline inside a payload, which :func:`format_record` enforces.

Only ``\\@citedef`` carries information forward; the other three are
parsed and discarded, exactly as a reader that defines them as gobblers
would.  Anything else in the file is an error, byte offset included.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional

from .errors import AuxCorruptError, AuxFormatError

if TYPE_CHECKING:
    from .citations import LabelTable

__all__ = [
    "AuxKind",
    "AuxRecord",
    "AuxSession",
    "MISSING_AUX_MESSAGE",
    "format_record",
    "write_record",
    "read_aux",
    "handle_missing_aux",
]

MISSING_AUX_MESSAGE = (
    "No .aux file; I won't give you warnings about undefined citations."
)


class AuxKind(enum.Enum):
    CITATION = "citation"
    BIBDATA = "bibdata"
    BIBSTYLE = "bibstyle"
    CITEDEF = "@citedef"


@dataclass(frozen=True)
class AuxRecord:
    """One aux record.  ``label`` is used by CITEDEF records only."""

    kind: AuxKind
    payload: str
    label: Optional[str] = None

    @classmethod
    def citation(cls, keys: str) -> "AuxRecord":
        return cls(AuxKind.CITATION, keys)

    @classmethod
    def bibdata(cls, databases: str) -> "AuxRecord":
        return cls(AuxKind.BIBDATA, databases)

    @classmethod
    def bibstyle(cls, style: str) -> "AuxRecord":
        return cls(AuxKind.BIBSTYLE, style)

    @classmethod
    def citedef(cls, key: str, label: str) -> "AuxRecord":
        return cls(AuxKind.CITEDEF, key, label)


def _check_payload(text: str, what: str) -> None:
    if "\n" in text or "\r" in text:
        raise AuxFormatError(f"{what} may not contain a newline: {text!r}")


def format_record(record: AuxRecord) -> str:
    """The record's exact one-line serialization, newline terminated."""
    _check_payload(record.payload, f"{record.kind.value} payload")
    if record.kind is AuxKind.CITEDEF:
        if record.label is None:
            raise AuxFormatError("@citedef record requires a label")
        _check_payload(record.label, "@citedef label")
        return f"\\@citedef{{{record.payload}}}{{{record.label}}}\n"
    return f"\\{record.kind.value}{{{record.payload}}}\n"


@dataclass
class AuxSession:
    """Per-pass aux state: the read-once guard and the write queue.

    ``loader`` is called on first use to pull the previous pass's file
    in (or to note its absence); binding it here keeps the protocol
    logic free of file handling.  In ``no_aux`` mode the session starts
    with the read already marked done, warnings disabled, and every
    write discarded, so no aux file is ever touched.
    """

    no_aux: bool = False
    loader: Optional[Callable[["AuxSession"], None]] = None
    read_done: bool = False
    warnings_enabled: bool = True
    pending_writes: list[AuxRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.no_aux:
            self.read_done = True
            self.warnings_enabled = False

    def ensure_read(self) -> None:
        if self.read_done:
            return
        if self.loader is not None:
            self.loader(self)
        self.read_done = True

    def write(self, record: AuxRecord) -> None:
        if self.no_aux:
            return
        format_record(record)  # reject unserializable records at write time
        self.pending_writes.append(record)

    def serialize(self) -> bytes:
        return b"".join(format_record(r).encode("utf-8") for r in self.pending_writes)


def write_record(session: AuxSession, record: AuxRecord) -> None:
    """Queue ``record`` for the file rewrite; dropped in no-aux mode."""
    session.write(record)


_RECORD_OPENERS = (
    (AuxKind.CITEDEF, b"\\@citedef{"),
    (AuxKind.CITATION, b"\\citation{"),
    (AuxKind.BIBDATA, b"\\bibdata{"),
    (AuxKind.BIBSTYLE, b"\\bibstyle{"),
)


def _scan_braced(data: bytes, start: int, origin: list[int], record_start: int) -> tuple[bytes, int]:
    # data[start] is the opening brace.  Escaped characters do not count
    # toward nesting so written payloads like {\em x} stay parseable.
    depth = 0
    i = start
    while i < len(data):
        b = data[i]
        if b == 0x5C:  # backslash
            i += 2
            continue
        if b == 0x7B:  # {
            depth += 1
        elif b == 0x7D:  # }
            depth -= 1
            if depth == 0:
                return data[start + 1 : i], i + 1
        i += 1
    raise AuxCorruptError("unterminated record", origin[record_start])


def read_aux(session: AuxSession, content: bytes, table: "LabelTable") -> None:
    """Parse aux file bytes and apply its label definitions to ``table``.

    A no-op when the session has already read (the read-once guard).
    Newlines and carriage returns are deleted before parsing, which is
    what makes records immune to being split across lines.
    """
    if session.read_done:
        return
    session.read_done = True

    stripped = bytearray()
    origin: list[int] = []
    for index, byte in enumerate(content):
        if byte not in (0x0A, 0x0D):
            stripped.append(byte)
            origin.append(index)
    origin.append(len(content))  # sentinel for end-of-data offsets
    data = bytes(stripped)

    pos = 0
    while pos < len(data):
        for kind, opener in _RECORD_OPENERS:
            if data.startswith(opener, pos):
                break
        else:
            raise AuxCorruptError("unrecognized aux content", origin[pos])
        record_start = pos
        brace = pos + len(opener) - 1
        payload, pos = _scan_braced(data, brace, origin, record_start)
        if kind is AuxKind.CITEDEF:
            if pos >= len(data) or data[pos] != 0x7B:
                raise AuxCorruptError("@citedef record missing its label", origin[record_start])
            label, pos = _scan_braced(data, pos, origin, record_start)
            table.define(payload.decode("utf-8"), label.decode("utf-8"))
        # citation/bibdata/bibstyle records are consumed and discarded


def handle_missing_aux(session: AuxSession) -> str:
    """Mark the read done with warnings off; returns the notice to show."""
    session.read_done = True
    session.warnings_enabled = False
    return MISSING_AUX_MESSAGE
