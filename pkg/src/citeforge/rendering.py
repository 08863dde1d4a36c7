"""Rendered output model: flat styled text spans.

Rendering does not attempt typesetting.  Output is a flat sequence of
(style, text) spans; styles never nest.  Two string renderers are
provided: ``render_plain`` keeps only the text, ``render_annotated``
wraps styled spans in visible markers so fidelity can be checked in
tests and on the command line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

__all__ = [
    "Style",
    "Span",
    "RenderedFragment",
    "render_plain",
    "render_annotated",
]


class Style(enum.Enum):
    PLAIN = "plain"
    TYPEWRITER = "tt"
    EMPHASIS = "em"
    SMALLCAPS = "sc"


@dataclass(frozen=True)
class Span:
    style: Style
    text: str


@dataclass
class RenderedFragment:
    """An ordered run of styled spans.

    ``append`` merges adjacent spans of equal style, so a fragment is
    always in normal form: no empty spans, no two neighbours sharing a
    style.
    """

    spans: list[Span] = field(default_factory=list)

    def append(self, style: Style, text: str) -> None:
        if not text:
            return
        if self.spans and self.spans[-1].style is style:
            self.spans[-1] = Span(style, self.spans[-1].text + text)
        else:
            self.spans.append(Span(style, text))

    def extend(self, other: "RenderedFragment") -> None:
        for span in other.spans:
            self.append(span.style, span.text)

    def plain_text(self) -> str:
        return "".join(span.text for span in self.spans)

    def __bool__(self) -> bool:
        return bool(self.spans)


def render_plain(fragment: RenderedFragment) -> str:
    """Concatenated span texts with styling dropped."""
    return fragment.plain_text()


def render_annotated(fragment: RenderedFragment) -> str:
    """Span texts with non-plain styles wrapped as ⟨tt:...⟩ markers."""
    parts: list[str] = []
    for span in fragment.spans:
        if span.style is Style.PLAIN:
            parts.append(span.text)
        else:
            parts.append(f"⟨{span.style.value}:{span.text}⟩")
    return "".join(parts)
