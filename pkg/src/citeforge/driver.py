"""Pass orchestration: scan a document, keep the aux file honest, repeat.

One pass reads the previous aux file (lazily, at the first
citation-shaped command), scans the document left to right, renders
text and citations, processes the bbl file at the ``\\bibliography``
site, and finally rewrites the aux file from scratch with everything
recorded this pass.  The label table starts each pass empty; its only
inputs are the aux file just read and the bbl definitions of this very
pass.

``run_to_fixpoint`` repeats passes until the aux bytes stop changing,
which is the protocol's notion of convergence: once the aux file
reproduces itself, another pass cannot learn anything new.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .auxfile import AuxRecord, AuxSession, handle_missing_aux, read_aux
from .bbl import Bibliography, BblState, LayoutParams, process_bbl
from .citations import (
    CiteStyleHooks,
    Defined,
    Fallback,
    LabelTable,
    cite,
    nocite,
)
from .dimensions import CharMetric, Dimension, Numberish, as_fraction
from .files import FileAccess
from .rendering import RenderedFragment, Style, render_annotated, render_plain
from .scanner import DOCUMENT_COMMANDS, CharStream, next_command

__all__ = [
    "JobConfig",
    "PassResult",
    "FixpointResult",
    "CiteWarning",
    "file_exists",
    "run_pass",
    "run_to_fixpoint",
    "build_report",
    "report_json",
]


@dataclass
class JobConfig:
    """Everything a run needs to know besides the document itself."""

    jobname: str
    bbl_basename: Optional[str] = None
    no_aux: bool = False
    max_passes: int = 4
    em_size_pt: Fraction = Fraction(10)
    metric: CharMetric = field(default_factory=CharMetric)
    diagnostics_line_numbers: bool = True
    hooks: CiteStyleHooks = field(default_factory=CiteStyleHooks)
    layout_overrides: Optional[dict] = None
    document_name: str = ""

    def __post_init__(self) -> None:
        if self.bbl_basename is None:
            self.bbl_basename = self.jobname
        if not self.document_name:
            self.document_name = f"{self.jobname}.tex"
        self.em_size_pt = as_fraction(self.em_size_pt)
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")


@dataclass(frozen=True)
class CiteWarning:
    """One undefined-citation warning, with its location data."""

    line: int
    key: str
    text: str


@dataclass
class PassResult:
    rendered: RenderedFragment
    aux_bytes: bytes
    warnings: list[CiteWarning]
    bibliography: Optional[Bibliography]
    messages: list[str]
    lint: list[str]
    undefined_keys: list[str]
    table: LabelTable
    nobreak_before_bibliography: bool

    def warning_texts(self) -> list[str]:
        return [w.text for w in self.warnings]


@dataclass
class FixpointResult:
    final: PassResult
    passes_used: int
    converged: bool
    aux_history: list[bytes]


def file_exists(
    fs: FileAccess, config: JobConfig, base: str = "", ext: str = ""
) -> bool:
    """Existence test for ``base.ext``, defaulting base to the jobname."""
    name = base if base else config.jobname
    if ext:
        name = f"{name}.{ext}"
    return fs.exists(name)


def _render_bibliography(bibliography: Bibliography) -> RenderedFragment:
    fragment = RenderedFragment()
    for item in bibliography.items:
        fragment.append(Style.PLAIN, f"[{item.label}] ")
        for index, block in enumerate(item.body):
            if index:
                fragment.append(Style.PLAIN, " ")
            fragment.extend(block)
        fragment.append(Style.PLAIN, "\n")
    return fragment


def run_pass(config: JobConfig, document: str, fs: FileAccess) -> PassResult:
    """One full pass over ``document``; rewrites the aux file at the end.

    Deterministic: the same config, document, and file contents always
    produce the same result, bit for bit.
    """
    table = LabelTable()
    messages: list[str] = []
    lint: list[str] = []
    warnings: list[CiteWarning] = []

    def loader(session: AuxSession) -> None:
        aux_name = f"{config.jobname}.aux"
        if fs.exists(aux_name):
            read_aux(session, fs.read_bytes(aux_name), table)
        else:
            messages.append(handle_missing_aux(session))

    session = AuxSession(no_aux=config.no_aux, loader=loader)
    rendered = RenderedFragment()
    bibliography: Optional[Bibliography] = None
    nobreak = False

    def warn(line: int, key: str, text: str) -> None:
        warnings.append(CiteWarning(line, key, text))

    stream = CharStream(document, source=config.document_name)
    while not stream.at_end():
        item = next_command(stream, DOCUMENT_COMMANDS, lint=lint.append)
        if isinstance(item, str):
            rendered.append(Style.PLAIN, item)
            continue
        if item.name == "cite":
            fragment = cite(
                session,
                table,
                config.hooks,
                item.args[0],
                item.optional,
                item.source_line,
                line_numbers=config.diagnostics_line_numbers,
                warn=warn,
                lint=lint.append,
            )
            rendered.extend(fragment)
        elif item.name == "nocite":
            nocite(session, item.args[0])
        elif item.name == "bibliographystyle":
            session.ensure_read()
            session.write(AuxRecord.bibstyle(item.args[0]))
        elif item.name == "bibliography":
            session.ensure_read()
            session.write(AuxRecord.bibdata(item.args[0]))
            bbl_name = f"{config.bbl_basename}.bbl"
            if fs.exists(bbl_name):
                nobreak = True
                state = BblState(
                    metric=config.metric,
                    em_size_pt=config.em_size_pt,
                    overrides=config.layout_overrides,
                )
                bibliography = process_bbl(
                    fs.read_bytes(bbl_name).decode("utf-8"),
                    state,
                    session,
                    table,
                    lint=lint.append,
                    source=bbl_name,
                )
                rendered.extend(_render_bibliography(bibliography))
            else:
                messages.append(f"No file {bbl_name}.")

    aux_bytes = b"" if config.no_aux else session.serialize()
    if not config.no_aux:
        fs.write_bytes(f"{config.jobname}.aux", aux_bytes)

    undefined = [
        name[2:] for name, state in table.entries.items() if isinstance(state, Fallback)
    ]
    return PassResult(
        rendered=rendered,
        aux_bytes=aux_bytes,
        warnings=warnings,
        bibliography=bibliography,
        messages=messages,
        lint=lint,
        undefined_keys=undefined,
        table=table,
        nobreak_before_bibliography=nobreak,
    )


def run_to_fixpoint(config: JobConfig, document: str, fs: FileAccess) -> FixpointResult:
    """Run passes until the aux file reproduces itself.

    Convergence is declared when pass ``k`` writes byte-identical aux
    content to pass ``k - 1``; with a fixed bbl this takes two passes
    for well-formed documents.  If the limit is hit first, the result
    says so and keeps the aux history for diffing.
    """
    previous: Optional[PassResult] = None
    history: list[bytes] = []
    for pass_number in range(1, config.max_passes + 1):
        result = run_pass(config, document, fs)
        history.append(result.aux_bytes)
        if previous is not None and result.aux_bytes == previous.aux_bytes:
            return FixpointResult(result, pass_number, True, history)
        previous = result
    assert previous is not None
    return FixpointResult(previous, config.max_passes, False, history)


def _dimension_json(dim: Dimension, em_size_pt: Fraction) -> dict:
    data: dict = {"pt": float(dim.to_pt(em_size_pt)), "source": str(dim)}
    stretch = dim.stretch_pt(em_size_pt)
    if stretch is not None:
        data["stretch_pt"] = float(stretch)
    shrink = dim.shrink_pt(em_size_pt)
    if shrink is not None:
        data["shrink_pt"] = float(shrink)
    return data


def _layout_json(layout: LayoutParams, em_size_pt: Fraction) -> dict:
    return {
        "biblabelwidth": _dimension_json(layout.biblabelwidth, em_size_pt),
        "biblabelextraspace": _dimension_json(layout.biblabelextraspace, em_size_pt),
        "hangindent": _dimension_json(layout.hangindent(em_size_pt), em_size_pt),
        "parskip": _dimension_json(layout.parskip, em_size_pt),
        "newblock_glue": _dimension_json(layout.newblock_glue, em_size_pt),
        "clubpenalty": layout.clubpenalty,
        "widowpenalty": layout.widowpenalty,
        "tolerance": layout.tolerance,
        "hfuzz": _dimension_json(layout.hfuzz, em_size_pt),
        "frenchspacing": layout.frenchspacing,
    }


def build_report(config: JobConfig, outcome: FixpointResult) -> dict:
    """A machine-readable account of the final pass."""
    final = outcome.final
    citations = {}
    for name, state in final.table.entries.items():
        key = name[2:]
        if isinstance(state, Defined):
            citations[key] = {"status": "defined", "label": state.label}
        elif isinstance(state, Fallback):
            citations[key] = {"status": "fallback", "label": state.key}
    report: dict = {
        "jobname": config.jobname,
        "passes_used": outcome.passes_used,
        "converged": outcome.converged,
        "warnings": [
            {"line": w.line, "key": w.key, "text": w.text} for w in final.warnings
        ],
        "messages": list(final.messages),
        "lint": list(final.lint),
        "citations": citations,
        "undefined": list(final.undefined_keys),
        "rendered": render_plain(final.rendered),
        "rendered_annotated": render_annotated(final.rendered),
    }
    if final.bibliography is not None:
        bibliography = final.bibliography
        report["bibliography"] = {
            "nobreak_before": final.nobreak_before_bibliography,
            "alignment": (
                bibliography.alignment.value if bibliography.alignment else None
            ),
            "items": [
                {"key": item.key, "label": item.label, "alpha": item.alpha}
                for item in bibliography.items
            ],
            "layout": _layout_json(bibliography.layout, config.em_size_pt),
        }
    else:
        report["bibliography"] = None
    return report


def report_json(config: JobConfig, outcome: FixpointResult) -> str:
    return json.dumps(build_report(config, outcome), indent=2)
