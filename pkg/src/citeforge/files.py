"""File access behind a small interface.

The driver never touches the file system directly; it goes through one
of these, which is what makes "no file was written" checkable in tests
and keeps the no-aux mode honest.  Access is per-name and sequential;
nothing here is safe for concurrent writers of the same name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

__all__ = ["FileAccess", "DirectoryFiles", "MemoryFiles"]


class FileAccess(Protocol):
    def exists(self, name: str) -> bool: ...

    def read_bytes(self, name: str) -> bytes: ...

    def write_bytes(self, name: str, data: bytes) -> None: ...


@dataclass
class DirectoryFiles:
    """Real files resolved against a fixed root directory."""

    root: Path

    def _path(self, name: str) -> Path:
        return Path(self.root) / name

    def exists(self, name: str) -> bool:
        return self._path(name).is_file()

    def read_bytes(self, name: str) -> bytes:
        return self._path(name).read_bytes()

    def write_bytes(self, name: str, data: bytes) -> None:
        self._path(name).write_bytes(data)


@dataclass
class MemoryFiles:
    """An in-memory store that also logs every write it sees."""

    files: dict[str, bytes] = field(default_factory=dict)
    writes: list[tuple[str, bytes]] = field(default_factory=list)

    def exists(self, name: str) -> bool:
        return name in self.files

    def read_bytes(self, name: str) -> bytes:
        return self.files[name]

    def write_bytes(self, name: str, data: bytes) -> None:
        self.files[name] = data
        self.writes.append((name, data))
