"""Vectorised enumeration of the symmetric group.

Shared by the size computation and the determinant expansion: both walk
all N! permutations and need, per permutation, its length-class count
vector, its number of fixed points, its sign and the product of the
off-diagonal weights.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

MAX_N = 10
_CHUNK = 1 << 16


def check_capacity(n: int, what: str, hint: str = "") -> None:
    if n > MAX_N:
        msg = f"{what} enumerates all {n}! permutations; capped at N = {MAX_N}"
        raise CapacityError(msg + (f" ({hint})" if hint else ""))


def worker_count() -> int:
    env = os.environ.get("RESLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def all_permutations(n: int) -> np.ndarray:
    """All permutations of ``range(n)`` as rows, in lexicographic order."""
    out = np.zeros((1, 0), dtype=np.uint8)
    for m in range(1, n + 1):
        f = len(out)
        nxt = np.empty((f * m, m), dtype=np.uint8)
        for i in range(m):
            nxt[i * f:(i + 1) * f, 0] = i
            nxt[i * f:(i + 1) * f, 1:] = out + (out >= i)
        out = nxt
    return out


def inversion_parity(perms: np.ndarray) -> np.ndarray:
    """+1 / -1 per row, from the parity of the inversion count."""
    perms = np.atleast_2d(perms)
    inv = np.zeros(len(perms), dtype=np.int64)
    n = perms.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            inv += perms[:, i] > perms[:, j]
    return np.where(inv % 2 == 0, 1, -1).astype(np.int8)


@dataclass
class PermutationTable:
    """Per-permutation data for a fixed configuration.

    ``keys[k]`` is a tuple of length ``K + 1``: counts of each length class
    followed by the number of fixed points.  ``key_index[p]`` points from
    permutation row ``p`` into ``keys``.
    """

    perms: np.ndarray
    keys: list
    key_index: np.ndarray
    sign: np.ndarray
    weight: np.ndarray


def _chunk(perms, class_mat, n_slots, weight_mat):
    rows = np.arange(len(perms))
    ids = class_mat[np.arange(perms.shape[1]), perms]
    counts = np.zeros((len(perms), n_slots), dtype=np.int16)
    for col in range(perms.shape[1]):
        counts[rows, ids[:, col]] += 1
    uniq, inverse = np.unique(counts, axis=0, return_inverse=True)
    weight = None
    if weight_mat is not None:
        weight = np.prod(weight_mat[np.arange(perms.shape[1]), perms], axis=1)
    return uniq, inverse.reshape(-1), inversion_parity(perms), weight


def permutation_table(class_mat: np.ndarray, n_classes: int,
                      weight_mat: np.ndarray | None = None) -> PermutationTable:
    """Enumerate Pi_N against a class-id matrix (diagonal id = ``n_classes``).

    ``weight_mat`` (optional) is multiplied entrywise along each permutation.
    Work is split into contiguous row blocks; the merge keeps first-seen key
    order, so the result does not depend on the worker count.
    """
    n = class_mat.shape[0]
    check_capacity(n, "permutation enumeration")
    perms = all_permutations(n)
    blocks = [perms[s:s + _CHUNK] for s in range(0, len(perms), _CHUNK)]
    args = (class_mat, n_classes + 1, weight_mat)
    if len(blocks) > 1 and worker_count() > 1:
        with ThreadPoolExecutor(worker_count()) as pool:
            parts = list(pool.map(lambda b: _chunk(b, *args), blocks))
    else:
        parts = [_chunk(b, *args) for b in blocks]

    lookup: dict = {}
    keys: list = []
    index_parts, signs, weights = [], [], []
    for uniq, inverse, sign, weight in parts:
        local = np.empty(len(uniq), dtype=np.int64)
        for i, row in enumerate(uniq):
            key = tuple(int(v) for v in row)
            if key not in lookup:
                lookup[key] = len(keys)
                keys.append(key)
            local[i] = lookup[key]
        index_parts.append(local[inverse])
        signs.append(sign)
        weights.append(weight)
    return PermutationTable(
        perms=perms,
        keys=keys,
        key_index=np.concatenate(index_parts),
        sign=np.concatenate(signs),
        weight=np.concatenate(weights) if weight_mat is not None else None,
    )
