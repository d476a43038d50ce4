"""Symmetric-index tables shared by both jet backends.

Hessians and third-derivative tensors are stored as vectors over canonical
index tuples (i <= j, resp. i <= j <= k).  Computing only canonical entries
and scattering them to the dense tensors makes the symmetry invariants hold
to exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class JetTables:
    p: int
    n2: int  # number of canonical pairs
    n3: int  # number of canonical triples
    I2: np.ndarray
    J2: np.ndarray
    I3: np.ndarray
    J3: np.ndarray
    K3: np.ndarray
    HIJ: np.ndarray  # canonical-pair index of (I3, J3)
    HIK: np.ndarray  # canonical-pair index of (I3, K3)
    HJK: np.ndarray  # canonical-pair index of (J3, K3)
    scatter2: np.ndarray  # (p*p,) canonical index of each dense hess entry
    scatter3: np.ndarray  # (p*p*p,) canonical index of each dense third entry


@lru_cache(maxsize=32)
def jet_tables(p):
    pairs = [(i, j) for i in range(p) for j in range(i, p)]
    pair_at = {ij: t for t, ij in enumerate(pairs)}
    triples = [
        (i, j, k) for i in range(p) for j in range(i, p) for k in range(j, p)
    ]

    def arr(values):
        return np.ascontiguousarray(values, dtype=np.intc)

    scatter2 = [pair_at[tuple(sorted((a, b)))] for a in range(p) for b in range(p)]
    trip_at = {ijk: t for t, ijk in enumerate(triples)}
    scatter3 = [
        trip_at[tuple(sorted((a, b, c)))]
        for a in range(p)
        for b in range(p)
        for c in range(p)
    ]
    return JetTables(
        p=p,
        n2=len(pairs),
        n3=len(triples),
        I2=arr([i for i, _ in pairs]),
        J2=arr([j for _, j in pairs]),
        I3=arr([i for i, _, _ in triples]),
        J3=arr([j for _, j, _ in triples]),
        K3=arr([k for _, _, k in triples]),
        HIJ=arr([pair_at[(i, j)] for i, j, _ in triples]),
        HIK=arr([pair_at[(i, k)] for i, _, k in triples]),
        HJK=arr([pair_at[(j, k)] for _, j, k in triples]),
        scatter2=arr(scatter2),
        scatter3=arr(scatter3),
    )
