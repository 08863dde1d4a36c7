"""A small newcommand-style macro facility.

Definitions take 0 to 9 positional parameters.  The body is expanded
once at definition time against the macros already defined, with the
new macro's own ``#n`` markers left in place; use-site expansion then
substitutes arguments textually and rescans the result.  This is a
text-level engine: it knows escapes, brace groups, and ``#n`` markers,
nothing more.

Arguments are scanned the undelimited way: skip spaces, then take a
brace group (braces stripped), a whole control sequence, a ``#n``
marker, or a single character.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Dict

from .errors import MacroError, MacroRecursionError
from .scanner import OptionalArg

__all__ = [
    "MAX_EXPANSION_DEPTH",
    "MacroDef",
    "MacroTable",
    "define_newcommand",
    "expand_macros",
    "substitute_params",
]

MAX_EXPANSION_DEPTH = 256

_LETTERS = frozenset(string.ascii_letters)
_SPACES = " \t\r\n\f\v"


@dataclass(frozen=True)
class MacroDef:
    name: str
    num_params: int
    body: str


MacroTable = Dict[str, MacroDef]


def define_newcommand(
    defs: MacroTable,
    name: str,
    nparams: OptionalArg,
    body: str,
    *,
    max_depth: int = MAX_EXPANSION_DEPTH,
) -> MacroDef:
    """Define ``name``; redefinition silently overwrites.

    An absent (or empty) parameter count means zero parameters.  The
    body is expanded now against ``defs``, so macros used inside it are
    frozen at their current meaning.
    """
    if nparams.present_nonempty:
        try:
            count = int(nparams.text.strip())
        except ValueError:
            raise MacroError(
                f"parameter count `{nparams.text}' is not a number"
            ) from None
    else:
        count = 0
    if count > 9:
        raise MacroError(f"{count} is too many parameters")
    if count < 0:
        raise MacroError(f"{count} is too few parameters")
    expanded = expand_macros(defs, body, max_depth=max_depth)
    definition = MacroDef(name, count, expanded)
    defs[name] = definition
    return definition


def _control_at(text: str, i: int) -> tuple[str, int]:
    """(name, length) of the control sequence starting at ``text[i]``."""
    j = i + 1
    if j >= len(text):
        return "", 1
    if text[j] not in _LETTERS:
        return text[j], 2
    k = j
    while k < len(text) and text[k] in _LETTERS:
        k += 1
    return text[j:k], k - i


def _scan_group(text: str, i: int, name: str) -> tuple[str, int]:
    # text[i] is "{"; returns content with outer braces stripped.
    depth = 0
    j = i
    while j < len(text):
        ch = text[j]
        if ch == "\\":
            j += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[i + 1 : j], j + 1
        j += 1
    raise MacroError(f"unbalanced braces in argument of \\{name}")


def _scan_argument(text: str, i: int, name: str) -> tuple[str, int]:
    while i < len(text) and text[i] in _SPACES:
        i += 1
    if i >= len(text):
        raise MacroError(f"missing argument for \\{name}")
    ch = text[i]
    if ch == "{":
        return _scan_group(text, i, name)
    if ch == "\\":
        _, length = _control_at(text, i)
        return text[i : i + length], i + length
    if ch == "#" and i + 1 < len(text) and text[i + 1].isdigit():
        return text[i : i + 2], i + 2
    return ch, i + 1


def substitute_params(body: str, args: list[str]) -> str:
    """Replace ``#1`` .. ``#9`` in ``body`` with the given arguments."""
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "#" and i + 1 < len(body) and body[i + 1].isdigit():
            index = int(body[i + 1])
            if index < 1 or index > len(args):
                raise MacroError(
                    f"parameter #{index} used but only {len(args)} argument(s) supplied"
                )
            out.append(args[index - 1])
            i += 2
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def expand_macros(
    defs: MacroTable,
    text: str,
    *,
    max_depth: int = MAX_EXPANSION_DEPTH,
) -> str:
    """Expand every defined macro in ``text`` until none remain.

    Unknown control sequences pass through untouched.  Each expansion
    result is rescanned, so macros may produce further macro calls; the
    nesting depth is capped (default 256) to turn runaway recursion
    into an error naming the offending macro.
    """
    return _expand(defs, text, 0, max_depth)


def _expand(defs: MacroTable, text: str, depth: int, max_depth: int) -> str:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        name, length = _control_at(text, i)
        if name not in defs:
            out.append(text[i : i + length])
            i += length
            continue
        if depth >= max_depth:
            raise MacroRecursionError(name, max_depth)
        macro = defs[name]
        i += length
        args: list[str] = []
        for _ in range(macro.num_params):
            arg, i = _scan_argument(text, i, name)
            args.append(arg)
        replacement = substitute_params(macro.body, args)
        out.append(_expand(defs, replacement, depth + 1, max_depth))
    return "".join(out)
