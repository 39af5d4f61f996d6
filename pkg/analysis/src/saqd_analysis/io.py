"""Reader for the simulator's results CSV (the only coupling surface)."""

from __future__ import annotations

import csv
from dataclasses import dataclass

CSV_COLUMNS = [
    "manifold",
    "d",
    "L",
    "p",
    "t",
    "validator",
    "corrector",
    "trials",
    "failures",
    "pfail",
    "ci_lo",
    "ci_hi",
    "seed",
]


@dataclass(frozen=True)
class ResultPoint:
    manifold: str
    d: int
    L: int
    p: float
    t: int
    validator: str
    corrector: str
    trials: int
    failures: int
    pfail: float
    ci_lo: float
    ci_hi: float
    seed: int

    @property
    def half_width(self) -> float:
        return (self.ci_hi - self.ci_lo) / 2.0


def read_results(path: str) -> list[ResultPoint]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(
                f"unexpected results schema {reader.fieldnames}, want {CSV_COLUMNS}"
            )
        points = [
            ResultPoint(
                manifold=row["manifold"],
                d=int(row["d"]),
                L=int(row["L"]),
                p=float(row["p"]),
                t=int(row["t"]),
                validator=row["validator"],
                corrector=row["corrector"],
                trials=int(row["trials"]),
                failures=int(row["failures"]),
                pfail=float(row["pfail"]),
                ci_lo=float(row["ci_lo"]),
                ci_hi=float(row["ci_hi"]),
                seed=int(row["seed"]),
            )
            for row in reader
        ]
    if not points:
        raise ValueError(f"no data rows in {path}")
    return points
