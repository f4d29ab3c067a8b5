"""Pass/fail records shared by the verification modules."""
from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
PROBABLE = "probable-pass"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {PASS: 0, PROBABLE: 0, FAIL: 1, INCONCLUSIVE: 2}


@dataclass
class Verdict:
    status: str
    primes: tuple = ()
    charts: tuple = ()
    witness: object = None
    details: list = field(default_factory=list)
    seeds: tuple = ()

    def __post_init__(self):
        if self.status not in EXIT_CODES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    @property
    def ok(self) -> bool:
        return self.status in (PASS, PROBABLE)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def lines(self) -> list[str]:
        out = [f"status: {self.status}"]
        if self.primes:
            out.append("primes: " + " ".join(str(p) for p in self.primes))
        if self.seeds:
            out.append("seeds: " + " ".join(str(s) for s in self.seeds))
        if self.charts:
            out.append(f"charts: {len(self.charts)}")
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        out.extend(str(d) for d in self.details)
        return out

    def __str__(self):
        return "\n".join(self.lines())


def combine(verdicts, **extra) -> Verdict:
    """Worst status wins; primes and charts are merged in order."""
    rank = {PASS: 0, PROBABLE: 1, INCONCLUSIVE: 2, FAIL: 3}
    verdicts = list(verdicts)
    status = max((v.status for v in verdicts), key=rank.__getitem__, default=PASS)
    primes, charts, details = [], [], []
    witness = None
    for v in verdicts:
        primes += [p for p in v.primes if p not in primes]
        charts += [c for c in v.charts if c not in charts]
        details += v.details
        if witness is None and v.status == status:
            witness = v.witness
    return Verdict(status, tuple(primes), tuple(charts), witness, details, **extra)
