"""Deterministic fresh-name generation."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable

# Generated Core names carry this marker; surface identifiers cannot contain it,
# so a generated name never captures or shadows a user name.
GEN_MARK = "#"


class NameSupply:
    """Per-prefix counters.

    ``NameSupply()`` yields ``s0, s1, l0, ...`` (ASP naming, as in the emitted
    programs); ``NameSupply(GEN_MARK)`` yields ``temp#0, y#1, ...`` for Core.
    """

    def __init__(self, sep: str = "", start: int = 0):
        self.sep = sep
        self.start = start
        self._counters: dict[str, int] = defaultdict(lambda: start)

    def fresh(self, prefix: str) -> str:
        n = self._counters[prefix]
        self._counters[prefix] = n + 1
        return f"{prefix}{self.sep}{n}"

    @property
    def counter(self) -> int:
        return sum(n - self.start for n in self._counters.values())


def base_name(name: str) -> str:
    return name.split(GEN_MARK, 1)[0] or "v"


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """Smallest ``base#k`` not in ``avoid``; needs no shared counter."""
    taken = set(avoid)
    stem = base_name(base)
    k = 0
    while f"{stem}{GEN_MARK}{k}" in taken:
        k += 1
    return f"{stem}{GEN_MARK}{k}"
