"""Golden data for the two-outcome, three-phase ratchet groupoid.

The multiplication table and the characteristic-function values below
are frozen reference data for C_{2,3}; tests compare library output
against them rather than recomputing through the code under test.
Composition is row∘column ("first column, then row"); None marks an
undefined (non-composable) pair.
"""

import numpy as np

# name -> (target label, register power, source label)
TRIPLES = {
    "1+": ("+", 0, "+"), "s+": ("+", 1, "+"), "s2+": ("+", 2, "+"),
    "a1": ("+", 1, "-"), "a2": ("+", 2, "-"), "a3": ("+", 0, "-"),
    "1-": ("-", 0, "-"), "s-": ("-", 1, "-"), "s2-": ("-", 2, "-"),
    "b1": ("-", 1, "+"), "b2": ("-", 2, "+"), "b3": ("-", 0, "+"),
}

ROW_ORDER = ["1+", "s+", "s2+", "b1", "b2", "b3", "1-", "s-", "s2-", "a1", "a2", "a3"]
COL_ORDER = ["1+", "s+", "s2+", "a1", "a2", "a3", "1-", "s-", "s2-", "b1", "b2", "b3"]

_ = None
TABLE = {
    "1+":  ["1+", "s+", "s2+", "a1", "a2", "a3", _, _, _, _, _, _],
    "s+":  ["s+", "s2+", "1+", "a2", "a3", "a1", _, _, _, _, _, _],
    "s2+": ["s2+", "1+", "s+", "a3", "a1", "a2", _, _, _, _, _, _],
    "b1":  ["b1", "b2", "b3", "s2-", "1-", "s-", _, _, _, _, _, _],
    "b2":  ["b2", "b3", "b1", "1-", "s-", "s2-", _, _, _, _, _, _],
    "b3":  ["b3", "b1", "b2", "s-", "s2-", "1-", _, _, _, _, _, _],
    "1-":  [_, _, _, _, _, _, "1-", "s-", "s2-", "b1", "b2", "b3"],
    "s-":  [_, _, _, _, _, _, "s-", "s2-", "1-", "b2", "b3", "b1"],
    "s2-": [_, _, _, _, _, _, "s2-", "1-", "s-", "b3", "b1", "b2"],
    "a1":  [_, _, _, _, _, _, "a1", "a2", "a3", "s2+", "1+", "s+"],
    "a2":  [_, _, _, _, _, _, "a2", "a3", "a1", "1+", "s+", "s2+"],
    "a3":  [_, _, _, _, _, _, "a3", "a1", "a2", "s+", "s2+", "1+"],
}


def golden_compose(row_name, col_name):
    """row∘column from the frozen table, or None when starred."""
    return TABLE[row_name][COL_ORDER.index(col_name)]


def golden_inverse(name):
    """Two-sided inverse found by exhaustive search of the frozen table."""
    y, _p, x = TRIPLES[name]
    unit_t, unit_s = ("1+" if y == "+" else "1-"), ("1+" if x == "+" else "1-")
    hits = [
        other for other in TRIPLES
        if golden_compose(name, other) == unit_t and golden_compose(other, name) == unit_s
    ]
    assert len(hits) == 1, (name, hits)
    return hits[0]


def golden_phi(s, delta):
    """Word-consistent factorizable extension of phi(a1)=e^{is},
    phi(b1)=e^{i(delta-s)}; requires e^{3i delta} = 1."""
    e = lambda th: complex(np.exp(1j * th))
    return {
        "1+": e(0), "s+": e(2 * delta), "s2+": e(delta),
        "a1": e(s), "a2": e(s + 2 * delta), "a3": e(s + delta),
        "1-": e(0), "s-": e(2 * delta), "s2-": e(delta),
        "b1": e(delta - s), "b2": e(-s), "b3": e(2 * delta - s),
    }


def golden_convolve(f, h):
    """Convolution over the frozen table: name-indexed dicts in and out."""
    out = {}
    for na, ca in f.items():
        for nb, cb in h.items():
            nc = golden_compose(na, nb)
            if nc is not None:
                out[nc] = out.get(nc, 0j) + ca * cb
    return out


RATCHET_H_NAMES = ["a1", "a2", "a3", "b1", "b2", "b3"]


def closed_form_ratchet_u(t):
    """The known closed form of exp(ith) for the all-hops Hamiltonian."""
    c = {}
    for n in ("1+", "s+", "s2+", "1-", "s-", "s2-"):
        c[n] = (np.cos(3 * t) - 1) / 3
    for n in RATCHET_H_NAMES:
        c[n] = 1j * np.sin(3 * t) / 3
    c["1+"] += 1.0
    c["1-"] += 1.0
    return c


def closed_form_qubit_u(t):
    return {
        "1+": np.cos(t / 2), "1-": np.cos(t / 2),
        "a2": 1j * np.sin(t / 2), "b1": 1j * np.sin(t / 2),
    }
