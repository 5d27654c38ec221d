"""Result records shared by the verification suites."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

MAX_STORED_FAILURES = 25


@dataclass
class Counterexample:
    identity: str
    inputs: Tuple[str, ...]
    residual: str

    def as_dict(self) -> dict:
        return {"identity": self.identity, "inputs": list(self.inputs), "residual": self.residual}


@dataclass
class IdentityResult:
    """Outcome of one named identity over a set of inputs.

    ``checked`` counts explicitly evaluated inputs; ``pruned`` counts basis
    tuples on which every term vanishes for degree/side reasons alone.
    """

    name: str
    checked: int = 0
    pruned: int = 0
    sampled: bool = False
    failure_count: int = 0
    failures: List[Counterexample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, inputs: Tuple[str, ...], residual: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_STORED_FAILURES:
            self.failures.append(Counterexample(self.name, tuple(inputs), residual))

    @property
    def mode(self) -> str:
        return "sampled" if self.sampled else "exhaustive"


@dataclass
class IdentityReport:
    suite: str
    model: str
    p: Optional[int]
    results: List[IdentityResult] = field(default_factory=list)
    seed: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    tables: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(self, name: str) -> IdentityResult:
        r = IdentityResult(name)
        self.results.append(r)
        return r

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self) -> List[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def first_counterexample(self) -> Optional[Counterexample]:
        for r in self.results:
            if r.failures:
                return r.failures[0]
        return None

    def summary(self) -> Dict[str, bool]:
        return {r.name: r.passed for r in self.results}

    def lines(self) -> List[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {self.suite}/{r.name}: {r.mode}, checked={r.checked} pruned={r.pruned}"
            if not r.passed:
                line += f" failures={r.failure_count}"
                if r.failures:
                    cx = r.failures[0]
                    line += f" e.g. inputs=({', '.join(cx.inputs)}) residual={cx.residual}"
            out.append(line)
        out.extend(f"NOTE {self.suite}: {note}" for note in self.notes)
        return out
