"""Span model: normal form and the two string renderers."""

from hypothesis import given
from hypothesis import strategies as st

from citeforge.rendering import (
    RenderedFragment,
    Span,
    Style,
    render_annotated,
    render_plain,
)

STYLES = list(Style)


def test_append_skips_empty_text():
    fragment = RenderedFragment()
    fragment.append(Style.PLAIN, "")
    assert fragment.spans == []
    assert not fragment


def test_append_merges_adjacent_same_style():
    fragment = RenderedFragment()
    fragment.append(Style.PLAIN, "a")
    fragment.append(Style.PLAIN, "b")
    fragment.append(Style.TYPEWRITER, "c")
    fragment.append(Style.TYPEWRITER, "d")
    assert fragment.spans == [
        Span(Style.PLAIN, "ab"),
        Span(Style.TYPEWRITER, "cd"),
    ]


def test_extend_merges_at_the_seam():
    left = RenderedFragment([Span(Style.PLAIN, "a")])
    right = RenderedFragment([Span(Style.PLAIN, "b"), Span(Style.EMPHASIS, "c")])
    left.extend(right)
    assert left.spans == [Span(Style.PLAIN, "ab"), Span(Style.EMPHASIS, "c")]


@given(
    st.lists(
        st.tuples(st.sampled_from(STYLES), st.text(max_size=8)),
        max_size=30,
    )
)
def test_fragment_normal_form(pieces):
    fragment = RenderedFragment()
    for style, text in pieces:
        fragment.append(style, text)
    assert all(span.text for span in fragment.spans)
    for first, second in zip(fragment.spans, fragment.spans[1:]):
        assert first.style is not second.style
    assert fragment.plain_text() == "".join(text for _, text in pieces)


def test_render_plain_drops_styling():
    fragment = RenderedFragment(
        [Span(Style.PLAIN, "see "), Span(Style.TYPEWRITER, "key"), Span(Style.PLAIN, ".")]
    )
    assert render_plain(fragment) == "see key."


def test_render_annotated_marks_styled_spans():
    fragment = RenderedFragment(
        [
            Span(Style.PLAIN, "a "),
            Span(Style.TYPEWRITER, "b"),
            Span(Style.EMPHASIS, "c"),
            Span(Style.SMALLCAPS, "d"),
        ]
    )
    assert render_annotated(fragment) == "a ⟨tt:b⟩⟨em:c⟩⟨sc:d⟩"


def test_annotated_equals_plain_when_all_plain():
    fragment = RenderedFragment([Span(Style.PLAIN, "just text")])
    assert render_annotated(fragment) == render_plain(fragment) == "just text"
