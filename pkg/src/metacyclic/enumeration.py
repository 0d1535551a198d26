"""Parameter sweeps over (m, n) and Ramanujan classification of every twist."""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .errors import ParameterError
from .group import unit_order, validate_params
from .spectral import RAMANUJAN_BOUND, ramanujan_check


@dataclass(frozen=True)
class SearchRange:
    m_min: int
    m_max: int
    n_min: int
    n_max: int
    require_nontrivial_k: bool = True

    def __post_init__(self):
        if not 3 <= self.m_min <= self.m_max:
            raise ParameterError("invalid-range", f"need 3 <= m_min <= m_max, got {self.m_min}..{self.m_max}")
        if not 3 <= self.n_min <= self.n_max:
            raise ParameterError("invalid-range", f"need 3 <= n_min <= n_max, got {self.n_min}..{self.n_max}")

    def pairs(self):
        for m in range(self.m_min, self.m_max + 1):
            for n in range(self.n_min, self.n_max + 1):
                yield m, n


@dataclass(frozen=True)
class TripleRecord:
    m: int
    n: int
    k: int
    alpha: int
    lam: float
    ramanujan: bool
    boundary: bool

    def __post_init__(self):
        if self.ramanujan and self.lam > RAMANUJAN_BOUND + 1e-9:
            raise ParameterError("inconsistent-record", f"{self} marked Ramanujan above the bound")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {key: d[key] for key in ("m", "n", "k", "alpha", "lambda", "ramanujan", "boundary")}


def valid_twists(m: int, n: int, include_trivial: bool = False) -> list[int]:
    """Units ``k`` mod ``n`` with ``k^m = 1``, ascending; ``k = 1`` only if asked."""
    if m < 3 or n < 3:
        raise ParameterError("invalid-size", f"need m, n >= 3, got ({m}, {n})")
    start = 1 if include_trivial else 2
    return [k for k in range(start, n)
            if math.gcd(k, n) == 1 and pow(k, m, n) == 1 and (include_trivial or unit_order(k, n) > 1)]


def pair_records(m: int, n: int, include_trivial: bool = False) -> list[TripleRecord]:
    out = []
    for k in valid_twists(m, n, include_trivial):
        p = validate_params(m, n, k)
        report = ramanujan_check(p, allow_torus=include_trivial)
        out.append(TripleRecord(m, n, k, p.alpha, report.lambda_x, report.ramanujan, report.boundary))
    return out


def _pair_task(args):
    return pair_records(*args)


def default_jobs() -> int:
    return os.cpu_count() or 1


def sweep(search: SearchRange, jobs: int = 1) -> list[TripleRecord]:
    """Records for every pair and twist in ``search``, in ``(m, n, k)`` order."""
    tasks = [(m, n, not search.require_nontrivial_k) for m, n in search.pairs()]
    if jobs <= 1 or len(tasks) < 2:
        chunks = [_pair_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map keeps submission order, so the merge is deterministic
            chunks = list(pool.map(_pair_task, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    return [rec for chunk in chunks for rec in chunk]


def ramanujan_pairs(records) -> set[tuple[int, int]]:
    return {(r.m, r.n) for r in records if r.ramanujan}


def write_records_csv(records, fh: io.TextIOBase):
    fh.write("m,n,k,alpha,lambda,ramanujan\n")
    for r in records:
        fh.write(f"{r.m},{r.n},{r.k},{r.alpha},{r.lam:.12g},{str(r.ramanujan).lower()}\n")


def records_json(records) -> str:
    return json.dumps([r.as_dict() for r in records], indent=1)
