"""Append-only label log: one JSON record per line, torn-write tolerant.

Every labeling action is appended as
``{"pair_a": ..., "pair_b": ..., "score": ..., "timestamp": ..., "source": ...}``.
Relabeling a pair never rewrites history: the old entry is only marked
superseded in memory, so replaying the file always reproduces the exact
current label set (latest wins per unordered pair).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .model import SimilarityLabel, active_labels

logger = logging.getLogger(__name__)


class LabelLogError(ValueError):
    """A non-trailing log entry is malformed (reported with line number)."""


@dataclass
class LogEntry:
    label: SimilarityLabel
    superseded: bool = False


def _encode(label: SimilarityLabel) -> str:
    return json.dumps(
        {
            "pair_a": label.a,
            "pair_b": label.b,
            "score": label.score,
            "timestamp": label.created_at,
            "source": label.source,
        },
        ensure_ascii=False,
    )


def _decode(line: str) -> SimilarityLabel:
    record = json.loads(line)
    return SimilarityLabel(
        a=str(record["pair_a"]),
        b=str(record["pair_b"]),
        score=float(record["score"]),
        created_at=float(record["timestamp"]),
        source=str(record["source"]),
    )


def replay(path: str | Path) -> tuple[list[SimilarityLabel], list[LogEntry]]:
    """Rebuild (active label set, full history) from a log file.

    A malformed final line is treated as a torn write and dropped with a
    warning; a malformed line anywhere else is corruption and raises.
    """
    path = Path(path)
    if not path.exists():
        return [], []
    lines = path.read_text(encoding="utf-8").splitlines()
    labels: list[SimilarityLabel] = []
    numbered = [(no, line) for no, line in enumerate(lines, start=1) if line.strip()]
    for position, (line_no, line) in enumerate(numbered):
        try:
            labels.append(_decode(line))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if position == len(numbered) - 1:
                logger.warning("dropping torn final line %d of %s: %s", line_no, path, exc)
                break
            raise LabelLogError(f"malformed log entry at line {line_no} of {path}: {exc}") from exc

    current = {label.key: label for label in active_labels(labels)}
    history = [LogEntry(label, superseded=current.get(label.key) is not label) for label in labels]
    return list(current.values()), history


@dataclass
class LabelLog:
    """Handle over one on-disk label log."""

    path: Path
    entries: list[LogEntry]

    @classmethod
    def open(cls, path: str | Path) -> "LabelLog":
        """Open (replaying any existing content) or start an empty log."""
        path = Path(path)
        _, history = replay(path)
        return cls(path=path, entries=history)

    @property
    def labels(self) -> list[SimilarityLabel]:
        """Full label history in append order."""
        return [entry.label for entry in self.entries]

    @property
    def active(self) -> list[SimilarityLabel]:
        """Latest label per unordered pair, in canonical pair order."""
        return active_labels(self.labels)

    def append(self, label: SimilarityLabel) -> None:
        """Append one label; on write failure the in-memory state is unchanged."""
        line = _encode(label) + "\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
        self.entries.append(LogEntry(label))
        self._refresh_superseded(label.key)

    def _refresh_superseded(self, key: tuple[str, str]) -> None:
        # mirror active_labels: latest (created_at, score, source) wins, later entry on ties
        same = [entry for entry in self.entries if entry.label.key == key]
        winner = same[0]
        for entry in same[1:]:
            a, b = entry.label, winner.label
            if (a.created_at, a.score, a.source) >= (b.created_at, b.score, b.source):
                winner = entry
        for entry in same:
            entry.superseded = entry is not winner


def append_label(log: LabelLog, label: SimilarityLabel) -> LabelLog:
    """Functional wrapper over :meth:`LabelLog.append`."""
    log.append(label)
    return log
