"""The bundled scene corpus: one ``.geo`` file per worked configuration."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .dsl import Scene, load


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    title: str
    paper_anchor: str
    expected_verdict: str = "pass"

    def load(self) -> Scene:
        return load(self.path.read_text())

    def matches(self, needle: str) -> bool:
        needle = needle.lower()
        return any(needle in s.lower() for s in (self.title, self.paper_anchor, self.path.name))


def corpus_dir() -> Path:
    return Path(str(resources.files("trigbash") / "corpus"))


def load_corpus(directory: Optional[Path] = None) -> list[CorpusEntry]:
    """Every ``*.geo`` file under ``directory``, sorted by path.

    Each file must parse and resolve; its title and anchor come from the
    ``# title:`` and ``# paper:`` header comments.
    """
    directory = Path(directory) if directory is not None else corpus_dir()
    entries = []
    for path in sorted(directory.glob("*.geo")):
        scene = load(path.read_text())
        entries.append(CorpusEntry(path, scene.title or path.stem, scene.anchor))
    return entries
