"""Shared fixtures data and cached computations for the test-suite."""

import csv
import math
from functools import lru_cache
from pathlib import Path

import numpy as np

from metacyclic.enumeration import SearchRange, sweep
from metacyclic.errors import ParameterError
from metacyclic.group import validate_params

DATA = Path(__file__).parent / "data"
SQRT12 = 2.0 * math.sqrt(3.0)


def valid_params(m_values, n_values, include_torus=False):
    out = []
    for m in m_values:
        for n in n_values:
            for k in range(1, n):
                if math.gcd(k, n) != 1 or pow(k, m, n) != 1:
                    continue
                p = validate_params(m, n, k)
                if p.is_torus and not include_torus:
                    continue
                out.append(p)
    return out


def params_up_to_order(max_order, include_torus=False):
    return [p for p in valid_params(range(3, max_order // 3 + 1), range(3, max_order // 3 + 1), include_torus)
            if p.order <= max_order]


def sample(items, count, seed):
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(items), size=min(count, len(items)), replace=False)
    return [items[i] for i in sorted(picks)]


@lru_cache(maxsize=1)
def reference_triples():
    with open(DATA / "reference_ramanujan_triples.csv") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        return tuple((int(r["m"]), int(r["n"]), int(r["k"])) for r in rows)


@lru_cache(maxsize=1)
def full_sweep():
    """All records over m in 3..8, n in 3..399 (computed once per session)."""
    return tuple(sweep(SearchRange(3, 8, 3, 399)))


def expect_parameter_error(fn, kind):
    try:
        fn()
    except ParameterError as exc:
        assert exc.kind == kind, exc
    else:
        raise AssertionError(f"expected ParameterError({kind})")
