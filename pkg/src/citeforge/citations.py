"""Citation resolution: the label table and the cite commands.

Labels live in a table keyed by ``b@`` plus the citation key, the same
namespace a macro-based implementation would use for its label control
sequences.  Each key is in one of three states:

* undefined: never seen; a cite falls back to the raw key in
  typewriter type and may warn, once.
* fallback: an undefined key that has already been cited; renders the
  same way but never warns again.
* defined: carries the label text to typeset.

``cite`` renders the bracketed list and queues one ``\\citation``
record whose payload is the raw key text, unsplit and untrimmed; the
comma split happens only for rendering.  ``nocite`` does the recording
without rendering anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .auxfile import AuxRecord, AuxSession, write_record
from .rendering import RenderedFragment, Style
from .scanner import OptionalArg, split_comma_list

__all__ = [
    "LABEL_PREFIX",
    "label_name",
    "Undefined",
    "Fallback",
    "Defined",
    "LabelState",
    "UNDEFINED",
    "LabelTable",
    "CiteStyleHooks",
    "undefined_citation_warning",
    "nocite",
    "cite_one",
    "cite",
    "citedef",
]

LABEL_PREFIX = "b@"


def label_name(key: str) -> str:
    """The table name for a citation key: the key behind ``b@``."""
    return LABEL_PREFIX + key


@dataclass(frozen=True)
class Undefined:
    pass


@dataclass(frozen=True)
class Fallback:
    key: str


@dataclass(frozen=True)
class Defined:
    label: str


LabelState = Union[Undefined, Fallback, Defined]

UNDEFINED = Undefined()


class LabelTable:
    """Label states for this pass, keyed by :func:`label_name`."""

    def __init__(self) -> None:
        self.entries: dict[str, LabelState] = {}

    def state_for(self, key: str) -> LabelState:
        return self.entries.get(label_name(key), UNDEFINED)

    def define(self, key: str, label: str) -> None:
        self.entries[label_name(key)] = Defined(label)

    def set_fallback(self, key: str) -> None:
        self.entries[label_name(key)] = Fallback(key)

    def keys(self) -> list[str]:
        """Citation keys present, in first-touched order."""
        return [name[len(LABEL_PREFIX):] for name in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _prepend_comma(note: str) -> str:
    return ", " + note


@dataclass
class CiteStyleHooks:
    """Presentation knobs for rendered citations."""

    open: str = "["
    close: str = "]"
    separator: str = ", "
    note_format: Callable[[str], str] = field(default=_prepend_comma)


def undefined_citation_warning(line: int, key: str, line_numbers: bool = True) -> str:
    prefix = f"{line}: " if line_numbers else ""
    return f"{prefix}Undefined citation `{key}'."


def nocite(session: AuxSession, keys: str) -> None:
    """Record ``keys`` as cited, verbatim, rendering nothing.

    The first citation-shaped command in a pass is what pulls the
    previous aux file in, so this forces the read before writing.
    """
    session.ensure_read()
    write_record(session, AuxRecord.citation(keys))


def cite_one(
    key: str,
    table: LabelTable,
    warnings_enabled: bool,
    line: int,
    *,
    line_numbers: bool = True,
) -> tuple[RenderedFragment, Optional[str]]:
    """Render a single key; returns the fragment and at most one warning.

    An undefined key renders as the raw key in typewriter type and is
    moved to the fallback state so later cites of it stay silent; the
    state changes whether or not the warning was allowed to fire.
    """
    state = table.state_for(key)
    fragment = RenderedFragment()
    if isinstance(state, Defined):
        fragment.append(Style.PLAIN, state.label)
        return fragment, None
    if isinstance(state, Fallback):
        fragment.append(Style.TYPEWRITER, key)
        return fragment, None
    table.set_fallback(key)
    fragment.append(Style.TYPEWRITER, key)
    warning = None
    if warnings_enabled:
        warning = undefined_citation_warning(line, key, line_numbers)
    return fragment, warning


WarnSink = Callable[[int, str, str], None]
LintSink = Callable[[str], None]


def cite(
    session: AuxSession,
    table: LabelTable,
    hooks: CiteStyleHooks,
    keys: str,
    note: OptionalArg,
    line: int,
    *,
    line_numbers: bool = True,
    warn: Optional[WarnSink] = None,
    lint: Optional[LintSink] = None,
) -> RenderedFragment:
    """Render ``[k1, k2, note]`` and queue the citation record.

    ``keys`` is recorded bytewise before any splitting, so whatever was
    written between the braces is what lands in the aux file.  Split
    items are not trimmed either: ``a, b`` cites the key `` b``, space
    and all, which the lint sink points out.
    """
    nocite(session, keys)
    fragment = RenderedFragment()
    fragment.append(Style.PLAIN, hooks.open)
    for index, key in enumerate(split_comma_list(keys)):
        if index:
            fragment.append(Style.PLAIN, hooks.separator)
        if any(ch.isspace() for ch in key) and lint is not None:
            lint(f"{line}: citation key `{key}' contains a space")
        rendered, warning = cite_one(
            key, table, session.warnings_enabled, line, line_numbers=line_numbers
        )
        fragment.extend(rendered)
        if warning is not None and warn is not None:
            warn(line, key, warning)
    if note.present_nonempty:
        fragment.append(Style.PLAIN, hooks.note_format(note.text))
    fragment.append(Style.PLAIN, hooks.close)
    return fragment


def citedef(table: LabelTable, key: str, label: str) -> None:
    """Install a resolved label, replacing any fallback state."""
    table.define(key, label)
