from __future__ import annotations

from dataclasses import dataclass, field

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def by_pred(self, pred: str) -> list:
        return [a for a in self.atoms if a.pred == pred]

    def sorted_strs(self) -> list[str]:
        return sorted(str(a) for a in self.atoms)


@dataclass
class SolveResult:
    status: str
    answer_sets: list = field(default_factory=list)
    wall_time: float = 0.0
    backend: str = ""
    exhausted: bool = True

    @property
    def count(self) -> int:
        return len(self.answer_sets)

    def as_sets(self) -> set:
        return {a.atoms for a in self.answer_sets}
