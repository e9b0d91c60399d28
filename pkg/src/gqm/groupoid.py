"""Finite groupoids of selective measurements.

A transition is an arrow (target, register label, source) between
outcomes. Composition is partial and read right to left: ``a ∘ b``
means "first b, then a", defined exactly when source(a) == target(b).
Every transition has an inverse and every outcome carries a unit.

Groupoids are built either from explicit composition tables (validated
strictly at load) or algebraically: pair groupoids, cyclic groupoids
C_{n,k}, and closures of group-labeled quivers. Labeled transitions are
canonically ordered by (target, source, label), and duplicate words
collapse onto one transition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, cyclic_group, trivial_group

UNDEFINED = -1


@dataclass(frozen=True)
class Outcome:
    id: int
    label: str


@dataclass(frozen=True)
class Transition:
    """A selective measurement: takes outcome ``source`` to outcome
    ``target`` while acting on the inner register by ``label``."""

    id: int
    source: int
    target: int
    label: int

    def triple(self) -> tuple[int, int, int]:
        return (self.target, self.label, self.source)


@dataclass(frozen=True)
class AxiomViolation:
    kind: str  # closure | associativity | unit | inverse | reversibility
    detail: str


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[AxiomViolation, ...]
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


class GroupoidAxiomError(ValueError):
    """Raised when strict construction finds axiom violations."""

    def __init__(self, report: AxiomReport):
        self.report = report
        first = report.violations[0]
        more = len(report.violations) - 1
        suffix = f" (+{more} more)" if more else ""
        super().__init__(f"{first.kind}: {first.detail}{suffix}")


class FiniteGroupoid:
    """Outcomes, transitions, and the partial composition structure.

    Immutable after construction. ``compose_table[a, b]`` holds the id
    of a∘b, or -1 where the pair is not composable.
    """

    def __init__(
        self,
        outcomes: list[Outcome] | tuple[Outcome, ...],
        transitions: list[Transition] | tuple[Transition, ...],
        compose_table: np.ndarray,
        inverse_table: np.ndarray,
        unit_table: np.ndarray,
        group: FiniteGroup | None = None,
        validate: bool = True,
    ):
        self.outcomes = tuple(outcomes)
        self.transitions = tuple(transitions)
        self.group = group
        self.compose_table = np.asarray(compose_table, dtype=int)
        self.inverse_table = np.asarray(inverse_table, dtype=int)
        self.unit_table = np.asarray(unit_table, dtype=int)

        n = len(self.transitions)
        labels = [o.label for o in self.outcomes]
        if len(set(labels)) != len(labels):
            raise ValueError("outcome labels must be unique")
        if [o.id for o in self.outcomes] != list(range(len(self.outcomes))):
            raise ValueError("outcome ids must be dense 0..|Omega|-1")
        if [t.id for t in self.transitions] != list(range(n)):
            raise ValueError("transition ids must be dense 0..|G|-1")
        if self.compose_table.shape != (n, n):
            raise ValueError("compose table shape must be |G| x |G|")

        self.source = np.array([t.source for t in self.transitions], dtype=int)
        self.target = np.array([t.target for t in self.transitions], dtype=int)
        n_out = len(self.outcomes)
        if n and not (
            0 <= self.source.min() and self.source.max() < n_out
            and 0 <= self.target.min() and self.target.max() < n_out
        ):
            raise ValueError("transition endpoints must be outcome ids")
        self._outcome_by_label = {o.label: o for o in self.outcomes}
        self._by_triple = {t.triple(): t for t in self.transitions}
        if len(self._by_triple) != n:
            raise ValueError("(target, label, source) triples must be unique")

        self.target_fibers = [
            np.where(self.target == x.id)[0] for x in self.outcomes
        ]
        self.source_fibers = [
            np.where(self.source == x.id)[0] for x in self.outcomes
        ]
        # composable pairs, flattened once for convolution and checking
        left, right = np.nonzero(self.compose_table >= 0)
        self.pair_left = left
        self.pair_right = right
        self.pair_result = self.compose_table[left, right]

        if validate:
            report = check_axioms(self)
            if not report.ok:
                raise GroupoidAxiomError(report)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    def outcome(self, label: str) -> Outcome:
        try:
            return self._outcome_by_label[label]
        except KeyError:
            raise KeyError(f"unknown outcome label {label!r}") from None

    def transition(self, target: int, label: int, source: int) -> Transition:
        """Look up a transition by its (target, label, source) triple."""
        try:
            return self._by_triple[(target, label, source)]
        except KeyError:
            raise KeyError(f"no transition ({target}, {label}, {source})") from None

    def compose(self, a: Transition | int, b: Transition | int) -> Transition | None:
        """a∘b ("first b, then a"), or None when not composable."""
        cid = self.compose_table[_tid(a), _tid(b)]
        return None if cid < 0 else self.transitions[cid]

    def inverse(self, a: Transition | int) -> Transition:
        return self.transitions[self.inverse_table[_tid(a)]]

    def unit(self, x: Outcome | int) -> Transition:
        xid = x.id if isinstance(x, Outcome) else x
        return self.transitions[self.unit_table[xid]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroupoid)
            and self.outcomes == other.outcomes
            and self.transitions == other.transitions
            and np.array_equal(self.compose_table, other.compose_table)
            and np.array_equal(self.inverse_table, other.inverse_table)
            and np.array_equal(self.unit_table, other.unit_table)
            and self.group == other.group
        )

    def __repr__(self) -> str:
        return (
            f"FiniteGroupoid(|Omega|={self.n_outcomes}, |G|={self.n_transitions})"
        )


@dataclass(frozen=True)
class Quiver:
    """Generating transitions over outcomes, labeled in a finite group."""

    outcomes: tuple[Outcome, ...]
    generators: tuple[Transition, ...]
    group: FiniteGroup
    names: tuple[str, ...]

    def __post_init__(self):
        n_out = len(self.outcomes)
        if [o.id for o in self.outcomes] != list(range(n_out)):
            raise ValueError("outcome ids must be dense 0..|Omega|-1")
        if len(set(o.label for o in self.outcomes)) != n_out:
            raise ValueError("outcome labels must be unique")
        if len(self.names) != len(self.generators):
            raise ValueError("one name per generator required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        seen = set()
        for t in self.generators:
            if not (0 <= t.source < n_out and 0 <= t.target < n_out):
                raise ValueError(f"generator {t.id} endpoint not a declared outcome")
            if not (0 <= t.label < self.group.order):
                raise ValueError(f"generator {t.id} label not a group element")
            if t.triple() in seen:
                raise ValueError(f"duplicate generator triple {t.triple()}")
            seen.add(t.triple())


def make_quiver(
    outcome_labels,
    group: FiniteGroup,
    generators,
    names=None,
) -> Quiver:
    """Assemble a quiver from labels and (source_label, target_label, label) triples."""
    outcomes = tuple(Outcome(i, str(lab)) for i, lab in enumerate(outcome_labels))
    by_label = {o.label: o.id for o in outcomes}
    gens = []
    for i, (src, tgt, lab) in enumerate(generators):
        if src not in by_label or tgt not in by_label:
            raise ValueError(f"generator {i} endpoint not a declared outcome")
        gens.append(Transition(i, by_label[src], by_label[tgt], int(lab)))
    if names is None:
        names = tuple(f"g{i}" for i in range(len(gens)))
    return Quiver(outcomes, tuple(gens), group, tuple(names))


def _tid(t: Transition | int) -> int:
    return t.id if isinstance(t, Transition) else int(t)


def _from_triples(
    outcomes: tuple[Outcome, ...],
    group: FiniteGroup,
    triples,
    validate: bool = False,
) -> FiniteGroupoid:
    """Build a groupoid from a closed set of (target, label, source) triples.

    The set must contain every unit (x, e, x), be closed under label
    inversion and under the composition rule
    (y2,g2,x2)∘(y1,g1,x1) = (y2, g2*g1, x1) when x2 == y1.
    """
    triples = sorted(set(triples), key=lambda t: (t[0], t[2], t[1]))
    index = {tr: i for i, tr in enumerate(triples)}
    n = len(triples)
    transitions = [
        Transition(i, source=tr[2], target=tr[0], label=tr[1])
        for i, tr in enumerate(triples)
    ]

    unit_table = np.empty(len(outcomes), dtype=int)
    for o in outcomes:
        u = (o.id, group.identity, o.id)
        if u not in index:
            raise ValueError(f"transition set lacks the unit of outcome {o.label!r}")
        unit_table[o.id] = index[u]

    # dense (target, label, source) -> id lookup for vectorized table building
    lut = np.full((len(outcomes), group.order, len(outcomes)), UNDEFINED, dtype=int)
    Y = np.array([tr[0] for tr in triples], dtype=int)
    L = np.array([tr[1] for tr in triples], dtype=int)
    X = np.array([tr[2] for tr in triples], dtype=int)
    lut[Y, L, X] = np.arange(n)

    inverse_table = lut[X, group.inverse[L], Y]
    if np.any(inverse_table < 0):
        i = int(np.argmax(inverse_table < 0))
        raise ValueError(f"transition set is not closed under inversion at {triples[i]}")

    composable = X[:, None] == Y[None, :]
    labels = group.table[L[:, None], L[None, :]]
    results = lut[Y[:, None], labels, X[None, :]]
    if np.any(composable & (results < 0)):
        a, b = np.argwhere(composable & (results < 0))[0]
        raise ValueError(
            f"transition set is not closed under composition at {triples[a]}∘{triples[b]}"
        )
    compose_table = np.where(composable, results, UNDEFINED)

    return FiniteGroupoid(
        outcomes, transitions, compose_table, inverse_table, unit_table,
        group=group, validate=validate,
    )


def from_compose_table(
    outcome_labels,
    transitions,
    compose_table,
    group: FiniteGroup | None = None,
) -> FiniteGroupoid:
    """Load a groupoid from an explicit composition table, strictly.

    ``transitions`` is a sequence of (source_label, target_label, label)
    triples; ``compose_table`` entries are transition ids or None for
    undefined. Units and inverses are derived from the table; any axiom
    failure raises GroupoidAxiomError instead of loading lazily.
    """
    outcomes = tuple(Outcome(i, str(lab)) for i, lab in enumerate(outcome_labels))
    by_label = {o.label: o.id for o in outcomes}
    trs = []
    for i, (src, tgt, lab) in enumerate(transitions):
        if src not in by_label or tgt not in by_label:
            raise ValueError(f"transition {i} endpoint not a declared outcome")
        trs.append(Transition(i, by_label[src], by_label[tgt], int(lab)))
    n = len(trs)
    ct = np.array(
        [[UNDEFINED if e is None else int(e) for e in row] for row in compose_table],
        dtype=int,
    )
    if ct.shape != (n, n):
        raise ValueError("compose table shape must be |G| x |G|")
    if ct.min() < UNDEFINED or ct.max() >= n:
        raise ValueError("compose table entries must be transition ids or null")

    unit_table = np.full(len(outcomes), UNDEFINED, dtype=int)
    for t in trs:
        if t.source == t.target and ct[t.id, t.id] == t.id:
            xs = np.nonzero([u.source == t.source for u in trs])[0]
            ys = np.nonzero([u.target == t.target for u in trs])[0]
            if np.all(ct[xs, t.id] == xs) and np.all(ct[t.id, ys] == ys):
                if unit_table[t.source] != UNDEFINED:
                    raise GroupoidAxiomError(AxiomReport((AxiomViolation(
                        "unit", f"outcome {outcomes[t.source].label!r} has two units"),)))
                unit_table[t.source] = t.id
    missing = [o.label for o in outcomes if unit_table[o.id] == UNDEFINED]
    if missing:
        raise GroupoidAxiomError(AxiomReport(tuple(
            AxiomViolation("unit", f"outcome {lab!r} has no unit") for lab in missing)))

    inverse_table = np.full(n, UNDEFINED, dtype=int)
    for t in trs:
        for b in range(n):
            if (
                ct[t.id, b] == unit_table[t.target]
                and ct[b, t.id] == unit_table[t.source]
            ):
                inverse_table[t.id] = b
                break
        else:
            raise GroupoidAxiomError(AxiomReport((AxiomViolation(
                "inverse", f"transition {t.id} has no two-sided inverse"),)))

    return FiniteGroupoid(
        outcomes, trs, ct, inverse_table, unit_table, group=group, validate=True
    )


def pair_groupoid(n: int, labels=None) -> FiniteGroupoid:
    """All ordered pairs (y, x) over n outcomes; (z,y)∘(y,x) = (z,x)."""
    if n < 1:
        raise ValueError("pair groupoid needs at least one outcome")
    if labels is None:
        labels = [str(i) for i in range(n)]
    outcomes = tuple(Outcome(i, str(lab)) for i, lab in enumerate(labels))
    triples = [(y, 0, x) for y in range(n) for x in range(n)]
    return _from_triples(outcomes, trivial_group(), triples)


def cyclic_groupoid(n_outcomes: int, k: int, labels=None) -> FiniteGroupoid:
    """C_{n,k}: all transitions (y, sigma^j, x) with a Z_k inner register."""
    if n_outcomes < 1 or k < 1:
        raise ValueError("cyclic groupoid needs n_outcomes >= 1 and k >= 1")
    if labels is None:
        labels = [str(i) for i in range(n_outcomes)]
    outcomes = tuple(Outcome(i, str(lab)) for i, lab in enumerate(labels))
    triples = [
        (y, j, x)
        for y in range(n_outcomes)
        for x in range(n_outcomes)
        for j in range(k)
    ]
    return _from_triples(outcomes, cyclic_group(k), triples)


def generate_from_quiver(q: Quiver) -> FiniteGroupoid:
    """Close the quiver under composition and inversion.

    Every outcome keeps its unit even when no generator touches it.
    Finiteness is guaranteed by the finite label group: the closure
    lives inside outcomes x group x outcomes.
    """
    grp = q.group
    triples = {(o.id, grp.identity, o.id) for o in q.outcomes}
    for t in q.generators:
        triples.add((t.target, t.label, t.source))
        triples.add((t.source, grp.inv(t.label), t.target))
    while True:
        new = set()
        for (y2, g2, x2) in triples:
            for (y1, g1, x1) in triples:
                if x2 == y1:
                    c = (y2, grp.mul(g2, g1), x1)
                    if c not in triples:
                        new.add(c)
        if not new:
            break
        triples |= new
    return _from_triples(q.outcomes, grp, triples)


def is_irreducible(q: Quiver, g: FiniteGroupoid) -> dict[str, bool]:
    """For each generator: can it be written as a composition of two
    quiver elements? Maps generator name -> True when it cannot."""
    gen_ids = [g.transition(t.target, t.label, t.source).id for t in q.generators]
    result = {}
    for name, gid in zip(q.names, gen_ids):
        reducible = any(
            g.compose_table[a, b] == gid
            for a in gen_ids
            for b in gen_ids
        )
        result[name] = not reducible
    return result


def check_axioms(g: FiniteGroupoid, max_violations: int = 1000) -> AxiomReport:
    """Exhaustively verify the groupoid axioms; violations go in the report.

    Checked: composability/closure (defined iff source matches target,
    endpoint coherence of results), associativity on all composable
    triples, unit laws, inverse laws, and reversibility (inverse is a
    bijection). An empty report means a valid groupoid.
    """
    out: list[AxiomViolation] = []
    truncated = False

    def add(kind: str, detail: str) -> bool:
        nonlocal truncated
        if len(out) >= max_violations:
            truncated = True
            return False
        out.append(AxiomViolation(kind, detail))
        return True

    n = g.n_transitions
    ct = g.compose_table
    name = _short_name(g)

    # table sanity; everything after guards against out-of-range entries
    ok_range = (ct >= UNDEFINED) & (ct < n)
    for a, b in np.argwhere(~ok_range):
        add("closure", f"entry ({name(a)}, {name(b)}) is not a transition id")
    defined = ok_range & (ct >= 0)

    # composability: defined iff s(a) == t(b); endpoints of results coherent
    should = g.source[:, None] == g.target[None, :]
    for a, b in np.argwhere(defined & ~should):
        if not add("closure", f"{name(a)}∘{name(b)} defined but sources/targets do not match"):
            break
    for a, b in np.argwhere(~defined & should & ok_range):
        if not add("closure", f"{name(a)}∘{name(b)} composable but undefined"):
            break
    for a, b in np.argwhere(defined):
        c = ct[a, b]
        if g.target[c] != g.target[a] or g.source[c] != g.source[b]:
            if not add(
                "closure",
                f"{name(a)}∘{name(b)} = {name(c)} has wrong endpoints",
            ):
                break

    # associativity over all composable triples, grouped by the middle factor
    for b in range(n):
        As = np.nonzero(defined[:, b])[0]
        Cs = np.nonzero(defined[b, :])[0]
        if len(As) == 0 or len(Cs) == 0:
            continue
        ab = ct[As, b]   # defined by selection, so valid row indices
        bc = ct[b, Cs]
        lhs = ct[ab[:, None], Cs[None, :]]
        rhs = ct[As[:, None], bc[None, :]]
        bad = (lhs != rhs) | (lhs < 0) | (rhs < 0)
        for i, j in np.argwhere(bad):
            if not add(
                "associativity",
                f"({name(As[i])}∘{name(b)})∘{name(Cs[j])} != {name(As[i])}∘({name(b)}∘{name(Cs[j])})",
            ):
                break

    # units
    if len(g.unit_table) != g.n_outcomes:
        add("unit", "one unit per outcome required")
    for o in g.outcomes:
        u = int(g.unit_table[o.id])
        if not (0 <= u < n) or g.source[u] != o.id or g.target[u] != o.id:
            add("unit", f"unit of outcome {o.label!r} is not a loop at it")
            continue
        for a in np.nonzero(g.source == o.id)[0]:
            if ct[a, u] != a:
                add("unit", f"{name(a)}∘{name(u)} != {name(a)}")
        for a in np.nonzero(g.target == o.id)[0]:
            if ct[u, a] != a:
                add("unit", f"{name(u)}∘{name(a)} != {name(a)}")

    # inverses
    for a in range(n):
        b = int(g.inverse_table[a])
        if not (0 <= b < n):
            add("inverse", f"inverse of {name(a)} is not a transition id")
            continue
        ut = int(g.unit_table[g.target[a]]) if g.target[a] < g.n_outcomes else UNDEFINED
        us = int(g.unit_table[g.source[a]]) if g.source[a] < g.n_outcomes else UNDEFINED
        if ct[a, b] != ut:
            add("inverse", f"{name(a)}∘{name(b)} is not the unit at its target")
        if ct[b, a] != us:
            add("inverse", f"{name(b)}∘{name(a)} is not the unit at its source")

    # reversibility: inversion must be a bijection of G
    inv = g.inverse_table
    if len(inv) != n or len(set(inv.tolist())) != n:
        add("reversibility", "inverse map is not a bijection of the transitions")

    return AxiomReport(tuple(out), truncated=truncated)


def _short_name(g: FiniteGroupoid):
    def name(i: int) -> str:
        t = g.transitions[int(i)]
        y = g.outcomes[t.target].label if t.target < g.n_outcomes else "?"
        x = g.outcomes[t.source].label if t.source < g.n_outcomes else "?"
        return f"{y}|{t.label}|{x}"

    return name


def transition_name(g: FiniteGroupoid, t: Transition | int) -> str:
    """Canonical display name target|label|source, e.g. ``+|1|-``."""
    return _short_name(g)(_tid(t))
