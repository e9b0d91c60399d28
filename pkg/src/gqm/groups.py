"""Finite groups given by explicit multiplication tables.

These act as the inner register of labeled groupoids: composing two
transitions multiplies their register labels. Validation is by
exhaustion, which is fine at the orders used here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GroupTableError(ValueError):
    """The given square table is not a group multiplication table."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Group on indices 0..order-1 with ``table[i, j] = i*j``."""

    order: int
    table: np.ndarray
    identity: int
    inverse: np.ndarray

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.order == other.order
            and np.array_equal(self.table, other.table)
        )

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverse[i])


def group_from_table(table) -> FiniteGroup:
    """Build a group from a table, rejecting anything that is not one.

    Checks, in order: shape, index range, Latin-square rows/columns,
    a two-sided identity, associativity on all triples, and two-sided
    inverses.
    """
    t = np.asarray(table, dtype=int)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupTableError("table must be a non-empty square matrix")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupTableError("table entries must be element indices in 0..order-1")
    for i in range(n):
        if len(set(t[i].tolist())) != n:
            raise GroupTableError(f"row {i} is not a permutation")
        if len(set(t[:, i].tolist())) != n:
            raise GroupTableError(f"column {i} is not a permutation")
    identity = None
    for e in range(n):
        if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n)):
            identity = e
            break
    if identity is None:
        raise GroupTableError("table has no two-sided identity")
    # t[t][a,b,c] = (a*b)*c and t[:, t][a,b,c] = a*(b*c)
    if not np.array_equal(t[t], t[:, t]):
        a, b, c = np.argwhere(t[t] != t[:, t])[0]
        raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")
    inverse = np.empty(n, dtype=int)
    for a in range(n):
        hits = np.where(t[a] == identity)[0]
        if len(hits) != 1 or t[hits[0], a] != identity:
            raise GroupTableError(f"element {a} has no two-sided inverse")
        inverse[a] = hits[0]
    return FiniteGroup(order=n, table=t, identity=identity, inverse=inverse)


def cyclic_group(k: int) -> FiniteGroup:
    """Z_k with elements 0..k-1 under addition mod k."""
    if k < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(k)
    return FiniteGroup(
        order=k,
        table=(idx[:, None] + idx[None, :]) % k,
        identity=0,
        inverse=(-idx) % k,
    )


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)
