"""Bibliography (.bbl) processing.

A bbl file is one ``thebibliography`` environment, usually preceded by
macro definitions.  Processing walks it once and produces:

* a :class:`BibItem` per ``\\bibitem``, each carrying its key, label,
  alignment, and body blocks (split at ``\\newblock``);
* a label definition per item, installed in the pass's label table and
  queued as an ``@citedef`` aux record;
* the :class:`LayoutParams` in force, the widest-label measurement
  included.

Labeling follows the two classic shapes.  A bare ``\\bibitem{key}``
counts: 1, 2, 3, ...; the label box pads on the left so the numbers
align right.  ``\\bibitem[tag]{key}`` uses the tag and pads on the
right.  The first item decides the alignment and later items cannot
change it, even when the shapes are mixed.  An empty ``[]`` is the
same as no optional at all, so such an item is numbered.

All processing state (macro definitions, the item counter, alignment)
is local to one :func:`process_bbl` call.  Body text is normalized the
way a typesetter would: whitespace runs collapse to single spaces and
block edges are trimmed.  ``\\em``, ``\\it``, ``\\sc``, ``\\tt`` and
``\\rm`` switch the style for the rest of their group; other unknown
commands pass through as text with a lint note.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .auxfile import AuxRecord, AuxSession, write_record
from .citations import LabelTable, citedef
from .dimensions import CharMetric, Dimension
from .errors import (
    MacroError,
    MacroRecursionError,
    StructureError,
    UnbalancedGroupError,
)
from .macros import (
    MAX_EXPANSION_DEPTH,
    MacroDef,
    define_newcommand,
    expand_macros,
    substitute_params,
)
from .rendering import RenderedFragment, Span, Style
from .scanner import (
    CharStream,
    OptionalArg,
    scan_group_arg,
    scan_optional_arg,
    skip_comment,
    skip_filler,
)

__all__ = [
    "Alignment",
    "LayoutParams",
    "BibItem",
    "Bibliography",
    "BblState",
    "measure_label",
    "begin_thebibliography",
    "bibitem",
    "process_bbl",
]

LintSink = Callable[[str], None]

_STYLE_SWITCHES: Mapping[str, Style] = {
    "em": Style.EMPHASIS,
    "it": Style.EMPHASIS,
    "sc": Style.SMALLCAPS,
    "tt": Style.TYPEWRITER,
    "rm": Style.PLAIN,
}

_BLOCK_SPACES = " \t\r\n\f\v"
_LETTERS = frozenset(string.ascii_letters)


class Alignment(enum.Enum):
    LABELS_LEFT = "labels_left"
    LABELS_RIGHT = "labels_right"


@dataclass
class LayoutParams:
    """Paragraph shape and page-breaking parameters for the item list.

    ``hangindent`` is derived: label width plus the extra space, never
    stored separately, so the two cannot drift apart.
    """

    biblabelwidth: Dimension = Dimension.pt(0)
    biblabelextraspace: Dimension = Dimension.em(Fraction(1, 2))
    parskip: Dimension = Dimension.of(
        "1.5", "ex", plus=("0.5", "ex"), minus=("0.5", "ex")
    )
    newblock_glue: Dimension = Dimension.of(
        "0.11", "em", plus=("0.33", "em"), minus=("0.07", "em")
    )
    clubpenalty: int = 4000
    widowpenalty: int = 4000
    tolerance: int = 10000
    hfuzz: Dimension = Dimension.pt(Fraction(1, 2))
    frenchspacing: bool = True

    def hangindent(self, em_size_pt: Fraction | None = None) -> Dimension:
        return self.biblabelwidth.add(self.biblabelextraspace, em_size_pt)


@dataclass
class BibItem:
    key: str
    label: str
    alpha: bool
    alignment: Alignment
    body: list[RenderedFragment] = field(default_factory=list)


@dataclass
class Bibliography:
    items: list[BibItem]
    layout: LayoutParams

    @property
    def alignment(self) -> Optional[Alignment]:
        return self.items[0].alignment if self.items else None


@dataclass
class BblState:
    """Mutable state for a single bbl run; make a fresh one per call."""

    metric: CharMetric = field(default_factory=CharMetric)
    em_size_pt: Fraction = Fraction(10)
    layout: LayoutParams = field(default_factory=LayoutParams)
    overrides: Optional[Mapping[str, object]] = None
    item_counter: int = 0
    alignment: Optional[Alignment] = None
    in_environment: bool = False
    macros: dict[str, MacroDef] = field(default_factory=dict)
    items: list[BibItem] = field(default_factory=list)
    max_expansion_depth: int = MAX_EXPANSION_DEPTH


def measure_label(label: str, metric: CharMetric) -> Dimension:
    """Width of the bracketed label ``[label]`` as typeset, in em."""
    total = Fraction(0)
    for ch in "[" + label + "]":
        total += metric.width_of(ch)
    return Dimension.em(total)


def _apply_overrides(state: BblState) -> None:
    if not state.overrides:
        return
    for name, value in state.overrides.items():
        if not hasattr(state.layout, name):
            raise ValueError(f"unknown layout override {name!r}")
        setattr(state.layout, name, value)


def begin_thebibliography(widest: str, state: BblState) -> None:
    """Open (or reopen) the environment.

    Sets the label box width from the widest label, resets the item
    counter and the alignment decision, and restores the default extra
    space; configured overrides are reapplied on top so they survive a
    reopen.
    """
    state.layout.biblabelwidth = measure_label(widest, state.metric)
    state.layout.biblabelextraspace = Dimension.em(Fraction(1, 2))
    state.item_counter = 0
    state.alignment = None
    state.in_environment = True
    _apply_overrides(state)


def bibitem(
    state: BblState,
    optional: OptionalArg,
    key: str,
    session: AuxSession,
    table: LabelTable,
    line: Optional[int] = None,
    source: str = "",
) -> BibItem:
    """Start a new item; defines its label and queues the aux record.

    A nonempty optional is the label (alpha shape, left alignment); an
    absent or empty one numbers the item (right alignment).  Alignment
    is only decided by the first item of the environment.  Alpha labels
    are expanded against the file's own macro definitions before use.
    """
    if not state.in_environment:
        raise StructureError("\\bibitem outside thebibliography", line, source)
    if optional.present_nonempty:
        label = expand_macros(
            state.macros, optional.text, max_depth=state.max_expansion_depth
        )
        alpha = True
        if state.alignment is None:
            state.alignment = Alignment.LABELS_LEFT
    else:
        state.item_counter += 1
        label = str(state.item_counter)
        alpha = False
        if state.alignment is None:
            state.alignment = Alignment.LABELS_RIGHT
    citedef(table, key, label)
    write_record(session, AuxRecord.citedef(key, label))
    item = BibItem(key=key, label=label, alpha=alpha, alignment=state.alignment)
    state.items.append(item)
    return item


class _BlockBuilder:
    """Accumulates one body block, normalizing whitespace as it goes.

    Runs of whitespace become single spaces, and leading and trailing
    whitespace disappears.  A space keeps the style in force where it
    occurred, the way a space token is set in the current font, so the
    gap before ``{\\em ...}`` stays plain.
    """

    def __init__(self) -> None:
        self._spans: list[Span] = []
        self._style: Style = Style.PLAIN
        self._chunks: list[str] = []
        self._pending_space: Optional[Style] = None
        self._has_text = False

    def _flush(self) -> None:
        if self._chunks:
            self._spans.append(Span(self._style, "".join(self._chunks)))
            self._chunks = []

    def _emit(self, text: str, style: Style) -> None:
        if style is not self._style:
            self._flush()
            self._style = style
        self._chunks.append(text)

    def add(self, text: str, style: Style) -> None:
        for ch in text:
            if ch in _BLOCK_SPACES:
                if self._has_text and self._pending_space is None:
                    self._pending_space = style
                continue
            if self._pending_space is not None:
                self._emit(" ", self._pending_space)
                self._pending_space = None
            self._emit(ch, style)
            self._has_text = True

    def finish(self) -> Optional[RenderedFragment]:
        self._flush()
        if not self._has_text:
            return None
        return RenderedFragment(self._spans)


def _take_control(stream: CharStream) -> tuple[str, str]:
    """Consume the control sequence at the cursor; (name, raw text)."""
    start = stream.position
    stream.take()
    if not stream.at_end() and stream.peek() in _LETTERS:
        name_start = stream.position
        while not stream.at_end() and stream.peek() in _LETTERS:
            stream.take()
        name = stream.content[name_start : stream.position]
    elif not stream.at_end():
        name = stream.take()
    else:
        name = ""
    return name, stream.content[start : stream.position]


def _pop_exhausted(streams: list[CharStream]) -> None:
    while streams and streams[-1].at_end():
        streams.pop()


def _scan_macro_arguments(
    streams: list[CharStream], macro: MacroDef, source: str, line: int
) -> list[str]:
    args: list[str] = []
    for _ in range(macro.num_params):
        _pop_exhausted(streams)
        while streams:
            skip_filler(streams[-1])
            if not streams[-1].at_end():
                break
            streams.pop()
        if not streams:
            raise MacroError(f"{source}:{line}: missing argument for \\{macro.name}")
        stream = streams[-1]
        ch = stream.peek()
        if ch == "{":
            args.append(scan_group_arg(stream))
        elif ch == "\\":
            _, raw = _take_control(stream)
            args.append(raw)
        elif ch == "#" and stream.peek(1).isdigit():
            args.append(stream.take() + stream.take())
        else:
            args.append(stream.take())
    return args


def _scan_macro_name_arg(stream: CharStream) -> str:
    skip_filler(stream)
    if stream.peek() == "{":
        inner = scan_group_arg(stream).strip()
        name = inner[1:] if inner.startswith("\\") else inner
        if name:
            return name
    elif stream.peek() == "\\":
        name, _ = _take_control(stream)
        if name:
            return name
    raise MacroError(f"{stream.source}:{stream.line}: expected a macro name")


def process_bbl(
    content: str,
    state: BblState,
    session: AuxSession,
    table: LabelTable,
    *,
    lint: Optional[LintSink] = None,
    source: str = "",
) -> Bibliography:
    """Walk a bbl file and build the bibliography it describes.

    ``state`` must be fresh: everything it accumulates (macros, the
    counter, alignment, items) is meant to live exactly as long as this
    call.  Label definitions and aux records escape through ``table``
    and ``session``; nothing else does.  Macro calls are expanded by
    re-injecting the substituted body into the scan, so expansions may
    themselves produce items, blocks, or further calls, up to the
    configured depth.
    """
    _apply_overrides(state)

    def note(message: str) -> None:
        if lint is not None:
            lint(message)

    streams: list[CharStream] = [CharStream(content, source=source)]
    style_stack: list[Style] = [Style.PLAIN]
    current_item: Optional[BibItem] = None
    block = _BlockBuilder()

    def close_block() -> None:
        nonlocal block
        finished = block.finish()
        if finished is not None and current_item is not None:
            current_item.body.append(finished)
        block = _BlockBuilder()

    def close_item() -> None:
        nonlocal current_item
        close_block()
        current_item = None

    def handle_text(text: str, line: int, src: str) -> None:
        if current_item is not None:
            block.add(text, style_stack[-1])
            return
        if text.strip(_BLOCK_SPACES) == "":
            return
        if state.in_environment:
            raise StructureError("text before the first \\bibitem", line, src)
        note(f"{src}:{line}: text outside thebibliography ignored")

    while streams:
        stream = streams[-1]
        if stream.at_end():
            streams.pop()
            continue
        ch = stream.peek()
        if ch == "%":
            skip_comment(stream)
            continue
        if ch == "{":
            stream.take()
            style_stack.append(style_stack[-1])
            continue
        if ch == "}":
            if len(style_stack) == 1:
                raise UnbalancedGroupError("unexpected '}'", stream.line, stream.source)
            stream.take()
            style_stack.pop()
            continue
        if ch != "\\":
            start = stream.position
            line = stream.line
            while not stream.at_end() and stream.peek() not in "\\{}%":
                stream.take()
            handle_text(stream.content[start : stream.position], line, stream.source)
            continue

        line = stream.line
        name, raw = _take_control(stream)

        if name in _STYLE_SWITCHES:
            style_stack[-1] = _STYLE_SWITCHES[name]
            skip_filler(stream)
        elif name == "begin":
            close_item()
            scan_group_arg(stream)  # environment name; any counts as ours
            widest = _expand_here(state, scan_group_arg(stream), source, line)
            begin_thebibliography(widest, state)
        elif name == "end":
            close_item()
            scan_group_arg(stream)  # environment name, discarded
            state.in_environment = False
        elif name == "bibitem":
            close_item()
            optional = scan_optional_arg(stream, lint)
            key = scan_group_arg(stream)
            current_item = bibitem(
                state, optional, key, session, table, line, stream.source
            )
            skip_filler(stream)
        elif name == "newblock":
            skip_filler(stream)
            if current_item is not None:
                close_block()
        elif name == "newcommand":
            skip_filler(stream)
            macro_name = _scan_macro_name_arg(stream)
            nparams = scan_optional_arg(stream, lint)
            body = scan_group_arg(stream)
            try:
                define_newcommand(
                    state.macros,
                    macro_name,
                    nparams,
                    body,
                    max_depth=state.max_expansion_depth,
                )
            except MacroRecursionError:
                raise
            except MacroError as exc:
                raise MacroError(f"{stream.source}:{line}: {exc}") from exc
        elif name in state.macros:
            macro = state.macros[name]
            args = _scan_macro_arguments(streams, macro, stream.source, line)
            replacement = substitute_params(macro.body, args)
            if len(streams) >= state.max_expansion_depth:
                raise MacroRecursionError(name, state.max_expansion_depth)
            if replacement:
                streams.append(CharStream(replacement, line=line, source=stream.source))
        else:
            note(f"{stream.source}:{line}: unknown command `{raw}' passed through")
            handle_text(raw, line, stream.source)

    close_item()
    if state.in_environment:
        note(f"{source}: thebibliography environment never closed")
    if len(style_stack) != 1:
        note(f"{source}: unbalanced group at end of file")
    return Bibliography(items=state.items, layout=state.layout)


def _expand_here(state: BblState, text: str, source: str, line: int) -> str:
    try:
        return expand_macros(state.macros, text, max_depth=state.max_expansion_depth)
    except MacroRecursionError:
        raise
    except MacroError as exc:
        raise MacroError(f"{source}:{line}: {exc}") from exc
