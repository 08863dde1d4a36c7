"""Document scanning: commands, arguments, and plain text runs.

The scanner works on a fixed character regime: ``\\`` starts a command,
``{``/``}`` delimit groups, ``%`` starts a comment running to the end of
the line, and command names are maximal ASCII letter runs (a single
non-letter character otherwise).  Comments are stripped wherever the
scanner reads, including inside arguments; the comment consumes its
newline, so a line split with a trailing ``%`` joins seamlessly.

Only commands listed in the arity table handed to :func:`next_command`
are recognized.  Everything else, including unknown commands, passes
through byte-for-byte as plain text, which is what makes scanning safe
on documents full of markup this package does not understand.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .errors import ScanError, UnbalancedGroupError

__all__ = [
    "CharStream",
    "OptionalArg",
    "EMPTY_OPTIONAL",
    "CommandSpec",
    "CommandInvocation",
    "COMMAND_TABLE",
    "DOCUMENT_COMMANDS",
    "scan_optional_arg",
    "scan_group_arg",
    "split_comma_list",
    "next_command",
    "skip_filler",
    "skip_comment",
]

ESCAPE = "\\"
COMMENT = "%"
_WHITESPACE = " \t\r\n\f\v"
_LETTERS = frozenset(string.ascii_letters)

LintSink = Callable[[str], None]


@dataclass
class CharStream:
    """A character cursor over document text.

    ``line`` is 1-based and equals one plus the number of newlines
    consumed so far; for streams that carry re-injected text it can be
    seeded with the line of the injection site instead.
    """

    content: str
    position: int = 0
    line: int = 1
    source: str = ""

    def at_end(self) -> bool:
        return self.position >= len(self.content)

    def peek(self, offset: int = 0) -> str:
        """The character ``offset`` places ahead, or '' past the end."""
        index = self.position + offset
        if index >= len(self.content):
            return ""
        return self.content[index]

    def take(self) -> str:
        ch = self.content[self.position]
        self.position += 1
        if ch == "\n":
            self.line += 1
        return ch

    def take_run(self, count: int) -> str:
        """Consume ``count`` characters and return them unchanged."""
        start = self.position
        for _ in range(count):
            self.take()
        return self.content[start : self.position]


@dataclass(frozen=True)
class OptionalArg:
    """A bracketed optional argument.

    An empty ``[]`` and an absent argument both produce ``text == ""``
    and are deliberately indistinguishable here; the scanner reports the
    empty-bracket case through its lint sink instead.
    """

    text: str = ""

    @property
    def present_nonempty(self) -> bool:
        return self.text != ""

    def __bool__(self) -> bool:
        return self.present_nonempty


EMPTY_OPTIONAL = OptionalArg()


@dataclass(frozen=True)
class CommandSpec:
    takes_optional: bool
    arg_count: int


#: Every command this package knows how to scan, with its argument shape.
#: ``newcommand`` is listed with two mandatory arguments (the macro name
#: and the body); its optional parameter count sits between them, and
#: next_command handles that ordering as a special case.
COMMAND_TABLE: Mapping[str, CommandSpec] = {
    "cite": CommandSpec(True, 1),
    "nocite": CommandSpec(False, 1),
    "bibliography": CommandSpec(False, 1),
    "bibliographystyle": CommandSpec(False, 1),
    "bibitem": CommandSpec(True, 1),
    "newcommand": CommandSpec(True, 2),
    "begin": CommandSpec(False, 2),
    "end": CommandSpec(False, 1),
    "newblock": CommandSpec(False, 0),
}

#: The subset acted on while scanning a document body.  Bibliography
#: structure commands are only meaningful inside a bbl file; in a
#: document they fall back to pass-through like any unknown command.
DOCUMENT_COMMANDS: Mapping[str, CommandSpec] = {
    name: COMMAND_TABLE[name]
    for name in ("cite", "nocite", "bibliography", "bibliographystyle")
}


@dataclass(frozen=True)
class CommandInvocation:
    name: str
    optional: OptionalArg
    args: list[str]
    source_line: int


def skip_comment(stream: CharStream) -> None:
    # Consume '%' through the end of line, newline included, so the two
    # half lines join with no space between them.
    while not stream.at_end():
        if stream.take() == "\n":
            return


def skip_filler(stream: CharStream) -> None:
    """Skip whitespace (line breaks included) and comments."""
    while not stream.at_end():
        ch = stream.peek()
        if ch in _WHITESPACE:
            stream.take()
        elif ch == COMMENT:
            skip_comment(stream)
        else:
            return


def _peek_control(stream: CharStream) -> tuple[str, int]:
    """Name and total length of the control sequence at the cursor.

    The cursor must sit on the escape character.  A run of ASCII letters
    forms a control word; any other single character forms a control
    symbol.  A trailing lone escape yields ``("", 1)``.
    """
    ch = stream.peek(1)
    if ch == "":
        return "", 1
    if ch not in _LETTERS:
        return ch, 2
    length = 1
    name_chars = []
    while stream.peek(length) in _LETTERS:
        name_chars.append(stream.peek(length))
        length += 1
    return "".join(name_chars), length


def scan_optional_arg(stream: CharStream, lint: LintSink | None = None) -> OptionalArg:
    """Scan ``[...]`` if the next non-space character opens one.

    Spaces, line breaks, and comments before the bracket are consumed
    during lookahead.  When no bracket follows, nothing else is
    consumed and the empty argument is returned.  A ``]`` nested inside
    a brace group does not close the argument.
    """
    skip_filler(stream)
    if stream.peek() != "[":
        return EMPTY_OPTIONAL
    open_line = stream.line
    stream.take()
    depth = 0
    parts: list[str] = []
    while True:
        if stream.at_end():
            raise ScanError(
                "unterminated optional argument ('[' never closed)",
                open_line,
                stream.source,
            )
        ch = stream.peek()
        if ch == ESCAPE:
            parts.append(stream.take())
            if not stream.at_end():
                parts.append(stream.take())
        elif ch == COMMENT:
            skip_comment(stream)
        elif ch == "{":
            depth += 1
            parts.append(stream.take())
        elif ch == "}":
            if depth == 0:
                raise UnbalancedGroupError(
                    "unexpected '}' inside optional argument",
                    stream.line,
                    stream.source,
                )
            depth -= 1
            parts.append(stream.take())
        elif ch == "]" and depth == 0:
            stream.take()
            break
        else:
            parts.append(stream.take())
    text = "".join(parts)
    if text == "":
        if lint is not None:
            lint(_at(stream, open_line, "empty optional argument '[]' treated as absent"))
        return EMPTY_OPTIONAL
    return OptionalArg(text)


def scan_group_arg(stream: CharStream) -> str:
    """Scan a mandatory ``{...}`` argument and return its content.

    Leading whitespace and comments are skipped.  Outer braces are
    stripped; inner braces are preserved.  Escaped characters do not
    count toward nesting, so ``{a\\}b}`` yields ``a\\}b``.
    """
    skip_filler(stream)
    if stream.at_end() or stream.peek() != "{":
        found = "end of input" if stream.at_end() else repr(stream.peek())
        raise ScanError(f"expected '{{' but found {found}", stream.line, stream.source)
    open_line = stream.line
    stream.take()
    depth = 1
    parts: list[str] = []
    while True:
        if stream.at_end():
            raise UnbalancedGroupError(
                "unbalanced group ('{' never closed)", open_line, stream.source
            )
        ch = stream.peek()
        if ch == ESCAPE:
            parts.append(stream.take())
            if not stream.at_end():
                parts.append(stream.take())
        elif ch == COMMENT:
            skip_comment(stream)
        elif ch == "{":
            depth += 1
            parts.append(stream.take())
        elif ch == "}":
            depth -= 1
            stream.take()
            if depth == 0:
                return "".join(parts)
            parts.append("}")
        else:
            parts.append(stream.take())


def split_comma_list(text: str) -> list[str]:
    """Split at every comma, preserving items exactly.

    No trimming happens: ``"a, b"`` yields ``["a", " b"]``, and
    consecutive commas yield empty items.  The empty string yields no
    items at all.
    """
    if text == "":
        return []
    return text.split(",")


def _scan_macro_name(stream: CharStream) -> str:
    """The name argument of ``newcommand``: ``{\\name}`` or bare ``\\name``."""
    skip_filler(stream)
    if stream.peek() == "{":
        inner = scan_group_arg(stream)
        name = inner.strip()
        if name.startswith(ESCAPE):
            name = name[1:]
        if name == "":
            raise ScanError("empty macro name", stream.line, stream.source)
        return name
    if stream.peek() == ESCAPE:
        name, length = _peek_control(stream)
        if name == "":
            raise ScanError("expected a macro name", stream.line, stream.source)
        stream.take_run(length)
        return name
    found = "end of input" if stream.at_end() else repr(stream.peek())
    raise ScanError(f"expected a macro name, found {found}", stream.line, stream.source)


def next_command(
    stream: CharStream,
    known: Mapping[str, CommandSpec],
    lint: LintSink | None = None,
) -> Union[CommandInvocation, str]:
    """The next recognized command, or the text run leading up to one.

    Text runs are maximal: they carry everything (unknown commands
    included, byte-for-byte) up to the next command found in ``known``
    or the end of input.  Recognized commands come back with their
    optional and mandatory arguments already scanned; whitespace after
    the command name is consumed, mirroring how a reader that tokenizes
    control words would behave.
    """
    parts: list[str] = []
    while not stream.at_end():
        ch = stream.peek()
        if ch == COMMENT:
            skip_comment(stream)
            continue
        if ch != ESCAPE:
            parts.append(stream.take())
            continue
        name, length = _peek_control(stream)
        if name not in known:
            parts.append(stream.take_run(length))
            continue
        if parts:
            return "".join(parts)
        command_line = stream.line
        stream.take_run(length)
        skip_filler(stream)
        spec = known[name]
        if name == "newcommand":
            macro_name = _scan_macro_name(stream)
            optional = scan_optional_arg(stream, lint)
            body = scan_group_arg(stream)
            return CommandInvocation(name, optional, [macro_name, body], command_line)
        optional = scan_optional_arg(stream, lint) if spec.takes_optional else EMPTY_OPTIONAL
        args = [scan_group_arg(stream) for _ in range(spec.arg_count)]
        return CommandInvocation(name, optional, args, command_line)
    return "".join(parts)


def _at(stream: CharStream, line: int, message: str) -> str:
    if stream.source:
        return f"{stream.source}:{line}: {message}"
    return f"{line}: {message}"
