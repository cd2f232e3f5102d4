"""Deterministic Muller automata and their transition-matrix monoid.

A Muller automaton accepts an infinite word when the set of states visited
infinitely often belongs to its family of accepting sets.  The matrix of a
finite factor w records, per state pair (p, q) with a run p ->w q, one
coordinate for each accepting set F_i describing how the run sits inside F_i:

    0        some state of the run (endpoints included) lies outside F_i
    1        the run's states cover F_i exactly
    P        the run stays inside F_i but covers only P, a proper subset
    neutral  identity coordinate (empty factor only)

Matrix product composes runs coordinate-wise; the monoid generated by the
letter matrices is finite, and the automaton is counter-free exactly when
every element M satisfies M^n = M^(n+1) for some n.
"""

import itertools


BOT = None  # matrix entry for "no run"


class _Neutral:
    """Identity coordinate; only the empty factor's matrix carries it."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "neutral"


NEUTRAL = _Neutral()


class EntryAlgebraError(Exception):
    """A sum or product fell outside the entry algebra.

    With deterministic automata every row holds at most one non-bot entry per
    reachable target, so sums only ever merge bot with a value or a value with
    itself; this error firing means a machine invariant was broken upstream.
    """


def compose_coordinate(x, y, muller_set):
    """Compose two per-set coordinates of consecutive runs."""
    if x is NEUTRAL:
        return y
    if y is NEUTRAL:
        return x
    if x == 0 or y == 0:
        return 0
    if x == 1 and y == 1:
        return 1
    if x == 1 or y == 1:
        # a full cover concatenated with an inside part still covers
        return 1
    union = x | y
    return 1 if union == muller_set else union


def compose_entries(e1, e2, muller_sets):
    if e1 is BOT or e2 is BOT:
        return BOT
    return tuple(
        compose_coordinate(x, y, fi) for x, y, fi in zip(e1, e2, muller_sets)
    )


def add_entries(e1, e2):
    if e1 is BOT:
        return e2
    if e2 is BOT:
        return e1
    if e1 == e2:
        return e1
    raise EntryAlgebraError("incompatible entries %r and %r" % (e1, e2))


def run_coordinate(states_of_run, muller_set):
    """Coordinate for a concrete non-empty run (endpoints included)."""
    if not states_of_run <= muller_set:
        return 0
    if states_of_run == muller_set:
        return 1
    return frozenset(states_of_run)


class TransitionMatrix:
    """Square matrix over state pairs, entries bot or coordinate tuples.

    Stored sparsely as rows: {p: {q: entry}}, with bot entries omitted.
    Instances are compared and hashed by value.
    """

    __slots__ = ("states", "muller_sets", "rows", "_key")

    def __init__(self, states, muller_sets, rows):
        self.states = tuple(states)
        self.muller_sets = tuple(muller_sets)
        self.rows = rows
        self._key = None

    def entry(self, p, q):
        return self.rows.get(p, {}).get(q, BOT)

    def key(self):
        if self._key is None:
            self._key = frozenset(
                (p, q, e) for p, row in self.rows.items() for q, e in row.items()
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        rows = {}
        for p, row in self.rows.items():
            acc = {}
            for r, e1 in row.items():
                for q, e2 in other.rows.get(r, {}).items():
                    e = compose_entries(e1, e2, self.muller_sets)
                    acc[q] = add_entries(acc.get(q, BOT), e)
            if acc:
                rows[p] = acc
        return TransitionMatrix(self.states, self.muller_sets, rows)

    def __repr__(self):
        parts = []
        for p in self.states:
            for q in self.states:
                e = self.entry(p, q)
                if e is not BOT:
                    parts.append("%s->%s:%s" % (p, q, _fmt_entry(e)))
        return "TransitionMatrix(%s)" % ", ".join(parts)


def _fmt_entry(e):
    def fmt(c):
        if c is NEUTRAL:
            return "~"
        if isinstance(c, frozenset):
            return "{%s}" % ",".join(sorted(map(str, c)))
        return str(c)

    return "(%s)" % ",".join(fmt(c) for c in e)


def identity_matrix(states, muller_sets):
    diag = tuple(NEUTRAL for _ in muller_sets)
    return TransitionMatrix(states, muller_sets, {q: {q: diag} for q in states})


class Dma:
    """Deterministic Muller automaton with a total transition function."""

    def __init__(self, states, alphabet, initial, delta, muller_sets):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.initial = initial
        self.delta = dict(delta)
        self.muller_sets = tuple(frozenset(m) for m in muller_sets)
        if initial not in self.states:
            raise ValueError("initial state %r not a state" % (initial,))
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise ValueError("delta is not total: missing (%r, %r)" % (q, a))
                if self.delta[(q, a)] not in self.states:
                    raise ValueError("delta leaves the state set at (%r, %r)" % (q, a))
        for m in self.muller_sets:
            if not m <= set(self.states):
                raise ValueError("Muller set %r contains non-states" % (set(m),))

    def step(self, q, a):
        return self.delta[(q, a)]

    def run_factor(self, q, factor):
        """(end state, set of states of the run, endpoints included)."""
        seen = {q}
        for a in factor:
            q = self.delta[(q, a)]
            seen.add(q)
        return q, seen

    def accepts(self, word, start=None):
        """Muller acceptance on an ultimately periodic word."""
        q = self.initial if start is None else start
        q, _ = self.run_factor(q, word.prefix)
        # find the lasso on period boundaries
        boundary = {q: 0}
        order = [q]
        while True:
            q2, _ = self.run_factor(q, word.period)
            if q2 in boundary:
                entry = boundary[q2]
                break
            boundary[q2] = len(order)
            order.append(q2)
            q = q2
        infinitely_often = set()
        q = order[entry]
        while True:
            q2, seen = self.run_factor(q, word.period)
            infinitely_often |= seen
            q = q2
            if q == order[entry]:
                break
        return frozenset(infinitely_often) in set(self.muller_sets)


def letter_matrix(dma, a):
    rows = {}
    for p in dma.states:
        q = dma.delta[(p, a)]
        entry = tuple(run_coordinate({p, q}, fi) for fi in dma.muller_sets)
        rows[p] = {q: entry}
    return TransitionMatrix(dma.states, dma.muller_sets, rows)


def matrix_of_word(dma, factor):
    """Transition matrix of a finite factor (product of letter matrices)."""
    m = identity_matrix(dma.states, dma.muller_sets)
    for a in factor:
        m = m * letter_matrix(dma, a)
    return m


def matrix_of_word_direct(dma, factor):
    """Same matrix computed from concrete runs; oracle for the product."""
    rows = {}
    for p in dma.states:
        q, seen = dma.run_factor(p, factor)
        if factor:
            entry = tuple(run_coordinate(seen, fi) for fi in dma.muller_sets)
        else:
            entry = tuple(NEUTRAL for _ in dma.muller_sets)
        rows[p] = {q: entry}
    return TransitionMatrix(dma.states, dma.muller_sets, rows)


class CapExceeded(Exception):
    pass


class Monoid:
    """A generated matrix monoid with shortest generating words.

    elements maps each matrix to its shortlex-least generating word (the empty
    word names the identity).
    """

    def __init__(self, elements, identity):
        self.elements = elements
        self.identity = identity

    def __len__(self):
        return len(self.elements)

    def shortest_words(self):
        return sorted(self.elements.values(), key=lambda w: (len(w), w))


def generate_monoid(generators, identity, cap=10 ** 6):
    """Close letter matrices under product, breadth-first by word length.

    generators: {letter: matrix}.  Raises CapExceeded past cap elements.
    """
    elements = {identity: ""}
    frontier = [(identity, "")]
    letters = sorted(generators)
    while frontier:
        new_frontier = []
        for m, w in frontier:
            for a in letters:
                m2 = m * generators[a]
                if m2 not in elements:
                    if len(elements) >= cap:
                        raise CapExceeded("monoid exceeded %d elements" % cap)
                    elements[m2] = w + a
                    new_frontier.append((m2, w + a))
        frontier = new_frontier
    return Monoid(elements, identity)


def dma_monoid(dma, cap=10 ** 6):
    gens = {a: letter_matrix(dma, a) for a in dma.alphabet}
    return generate_monoid(gens, identity_matrix(dma.states, dma.muller_sets), cap)


def power_cycle_length(m):
    """Length of the cycle the powers of m eventually enter."""
    seen = {}
    cur = m
    k = 1
    while cur not in seen:
        seen[cur] = k
        cur = cur * m
        k += 1
    return k - seen[cur]


def aperiodicity_witness(monoid):
    """Shortlex-least generating word of a non-stabilizing element, or None.

    None means every element satisfies M^n = M^(n+1) for some n, i.e. the
    monoid is counter-free.
    """
    for m, w in sorted(monoid.elements.items(), key=lambda kv: (len(kv[1]), kv[1])):
        if power_cycle_length(m) != 1:
            return w
    return None


def is_aperiodic(dma, cap=10 ** 6):
    """(verdict, witness): witness is a word whose matrix powers cycle."""
    w = aperiodicity_witness(dma_monoid(dma, cap))
    return (w is None), w
