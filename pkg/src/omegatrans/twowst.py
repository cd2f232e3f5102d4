"""Deterministic two-way transducers on ultimately periodic words.

The head starts on the first letter and may move both ways; a left end
marker sits at position 0.  Every transition emits an output fragment.  A
word is accepted when the head escapes to the right forever and the set of
states visited infinitely often is one of the accepting sets.  Transitions
may be guarded: by the state a lookbehind DFA reaches on the strict prefix,
and by acceptance of the strict suffix from a chosen state of a lookahead
Muller automaton.

Factors of a word are summarized by crossing behaviors: for each of the
four enter/exit side combinations, the deterministic partial map from entry
state to exit state, together with the visited-state coordinate per
accepting set.  Behaviors compose, which gives the transition monoid of the
machine and its aperiodicity test.
"""

from .muller import (
    TransitionMatrix,
    aperiodicity_witness,
    compose_entries,
    dma_monoid,
    generate_monoid,
    identity_matrix,
    matrix_of_word,
    run_coordinate,
)
from .sst import PAD, NotInDomain
from .words import UPWord

MARK = "⊢"
LEFT, STAY, RIGHT = -1, 0, 1


class Dfa:
    """Total deterministic automaton, used for lookbehind guards."""

    def __init__(self, states, alphabet, initial, delta):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.initial = initial
        self.delta = dict(delta)
        if initial not in self.states:
            raise ValueError("initial state %r not a state" % (initial,))
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise ValueError("delta is not total: missing (%r, %r)" % (q, a))
                if self.delta[(q, a)] not in self.states:
                    raise ValueError("delta leaves the state set at (%r, %r)" % (q, a))

    def step(self, q, a):
        return self.delta[(q, a)]

    def run(self, factor, start=None):
        q = self.initial if start is None else start
        for a in factor:
            q = self.delta[(q, a)]
        return q


class TwoWst:
    """Two-way transducer with optional look-around guards.

    delta maps (state, behind, letter, ahead) to (state', output, move).
    behind is a lookbehind state or None for "any"; ahead is a lookahead
    state or None.  letter is an input letter or the end marker MARK.  A
    guarded transition applies when the lookbehind automaton reaches behind
    on the strict prefix and the lookahead automaton accepts the strict
    suffix starting from ahead.
    """

    def __init__(self, states, alphabet, initial, delta, muller_sets,
                 lookahead=None, lookbehind=None):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.initial = initial
        self.delta = dict(delta)
        self.muller_sets = tuple(
            sorted(
                (frozenset(m) for m in muller_sets),
                key=lambda m: tuple(sorted(map(str, m))),
            )
        )
        self.lookahead = lookahead
        self.lookbehind = lookbehind
        if initial not in self.states:
            raise ValueError("initial state %r not a state" % (initial,))
        for m in self.muller_sets:
            if not m <= set(self.states):
                raise ValueError("accepting set %r contains non-states" % (set(m),))
        self._by_qa = {}
        for (q, r, a, p), value in self.delta.items():
            if q not in self.states:
                raise ValueError("transition from unknown state %r" % (q,))
            if a != MARK and a not in self.alphabet:
                raise ValueError("transition on unknown letter %r" % (a,))
            if r is not None:
                if lookbehind is None:
                    raise ValueError("lookbehind guard %r without a lookbehind automaton" % (r,))
                if r not in lookbehind.states:
                    raise ValueError("unknown lookbehind state %r" % (r,))
            if p is not None:
                if lookahead is None:
                    raise ValueError("lookahead guard %r without a lookahead automaton" % (p,))
                if p not in lookahead.states:
                    raise ValueError("unknown lookahead state %r" % (p,))
            q2, out, move = value
            if q2 not in self.states:
                raise ValueError("transition into unknown state %r" % (q2,))
            if move not in (LEFT, STAY, RIGHT):
                raise ValueError("move must be -1, 0 or 1, got %r" % (move,))
            if not isinstance(out, str):
                raise ValueError("output must be a string, got %r" % (out,))
            self._by_qa.setdefault((q, a), []).append((r, p, value))

    def applicable(self, q, letter, behind, ahead_ok):
        """The unique transition for this configuration, or None.

        ahead_ok maps a lookahead state to the suffix-acceptance verdict.
        """
        found = None
        for r, p, value in self._by_qa.get((q, letter), ()):
            if r is not None and r != behind:
                continue
            if p is not None and not ahead_ok(p):
                continue
            if found is not None:
                raise ValueError(
                    "ambiguous guards in state %r at letter %r" % (q, letter)
                )
            found = value
        return found


class _WordContext:
    """Per-position guard data of one word: letter, lookbehind state and
    lookahead verdicts.  All of it is eventually periodic in the position;
    entry_pos/cycle_len bound the stable part used for loop detection."""

    def __init__(self, t, word):
        self.t = t
        self.word = word
        lp = len(word.prefix)
        plen = len(word.period)
        b = t.lookbehind
        bs = [b.initial if b else None] * 2  # positions 0 and 1
        for pos in range(1, lp + 1):
            prev = bs[pos]
            bs.append(b.step(prev, word.letter_at(pos)) if b else None)
        # bs[pos] is now defined for 0 .. lp+1; continue into the period
        # until (position class, lookbehind state) repeats
        seen = {}
        pos = lp + 1
        while True:
            key = ((pos - lp - 1) % plen, bs[pos])
            if key in seen:
                self.entry_pos = seen[key]
                self.cycle_len = pos - seen[key]
                break
            seen[key] = pos
            bs.append(b.step(bs[pos], word.letter_at(pos)) if b else None)
            pos += 1
        self._bs = bs
        self._ahead = {}

    def letter(self, pos):
        return MARK if pos == 0 else self.word.letter_at(pos)

    def b_state(self, pos):
        if pos < len(self._bs):
            return self._bs[pos]
        folded = self.entry_pos + (pos - self.entry_pos) % self.cycle_len
        return self._bs[folded]

    def suffix_word(self, pos):
        """The strict suffix after pos, as a word of its own."""
        lp = len(self.word.prefix)
        period = self.word.period
        if pos < lp:
            return UPWord(self.word.prefix[pos:], period)
        r = (pos - lp) % len(period)
        return UPWord("", period[r:] + period[:r])

    def ahead_ok(self, pos, p):
        w = self.suffix_word(pos)
        key = (p, w.prefix, w.period)
        if key not in self._ahead:
            self._ahead[key] = self.t.lookahead.accepts(w, start=p)
        return self._ahead[key]

    def transition(self, q, pos):
        return self.t.applicable(
            q,
            self.letter(pos),
            self.b_state(pos),
            lambda p: self.ahead_ok(pos, p),
        )


def run_2wst(t, word, k, max_steps=200000):
    """First k output letters of t on word, ⊥-padded when output stays finite.

    Raises NotInDomain when the head does not escape to the right (the run
    jams or treads in place) or when the states visited forever are not an
    accepting set.
    """
    ctx = _WordContext(t, word)
    stable, cycle = ctx.entry_pos, ctx.cycle_len
    trace = [(t.initial, 1)]
    outs = []
    literal = {(t.initial, 1)}
    hits = {}
    accepting = set(t.muller_sets)
    for _ in range(max_steps):
        q, pos = trace[-1]
        picked = ctx.transition(q, pos)
        if picked is None:
            raise NotInDomain(
                frozenset(),
                "stuck: no transition applies in state %r at position %d" % (q, pos),
            )
        q2, out, move = picked
        pos2 = pos + move
        if pos2 < 0:
            raise NotInDomain(frozenset(), "stuck: the head fell off the left end")
        outs.append(out)
        cfg = (q2, pos2)
        if cfg in literal:
            raise NotInDomain(
                frozenset(),
                "stuck: the head treads in place in state %r at position %d" % cfg,
            )
        literal.add(cfg)
        trace.append(cfg)
        if pos2 < stable:
            continue
        key = (q2, (pos2 - stable) % cycle)
        for t1, p1 in hits.get(key, ()):
            if pos2 > p1 and min(pp for _, pp in trace[t1:]) >= stable:
                # rightward traveling loop: the tail repeats this segment
                # shifted further and further right
                loop_states = frozenset(s for s, _ in trace[t1:-1])
                if loop_states not in accepting:
                    raise NotInDomain(
                        loop_states,
                        "rejected: states visited forever {%s} are not accepting"
                        % ",".join(sorted(map(str, loop_states))),
                    )
                pre = "".join(outs[:t1])
                loop_out = "".join(outs[t1:])
                if not loop_out:
                    return pre[:k].ljust(k, PAD)
                while len(pre) < k:
                    pre += loop_out
                return pre[:k]
        hits.setdefault(key, []).append((len(trace) - 1, pos2))
    raise ValueError("no traveling loop within %d steps" % max_steps)


def reaches(t, word, q, x, q2, y, max_steps=200000):
    """Does the run from state q at position x reach state q2 at position y?"""
    ctx = _WordContext(t, word)
    stable, cycle = ctx.entry_pos, ctx.cycle_len
    target = (q2, y)
    trace = [(q, x)]
    literal = {(q, x)}
    hits = {}
    for _ in range(max_steps):
        cur = trace[-1]
        if cur == target:
            return True
        picked = ctx.transition(*cur)
        if picked is None:
            return False
        s2, _, move = picked
        pos2 = cur[1] + move
        if pos2 < 0:
            return False
        cfg = (s2, pos2)
        if cfg in literal:
            return False
        literal.add(cfg)
        trace.append(cfg)
        if pos2 < stable:
            continue
        key = (s2, (pos2 - stable) % cycle)
        for t1, p1 in hits.get(key, ()):
            if pos2 > p1 and min(pp for _, pp in trace[t1:]) >= stable:
                # the tail repeats trace[t1:] shifted by multiples of delta
                delta = pos2 - p1
                for s, p in trace[t1:]:
                    if s == q2 and y >= p + delta and (y - p) % delta == 0:
                        return True
                return False
        hits.setdefault(key, []).append((len(trace) - 1, pos2))
    raise ValueError("no traveling loop within %d steps" % max_steps)


def _entry_tuple(t, states_of_run):
    return tuple(run_coordinate(states_of_run, m) for m in t.muller_sets)


def anchored_behavior(t, factor, continuation, max_steps=100000):
    """Crossing behavior of a factor placed at the very start of a word.

    The factor occupies positions 1..len(factor), with the end marker at 0
    and continuation as the rest of the word.  Returns (enter_left,
    enter_right): maps from (entry state, exit state) to the visited-state
    coordinate tuple, for runs entering on the first (resp. last) letter
    and leaving to the right of the factor.
    """
    if not factor:
        raise ValueError("the factor must be non-empty")
    word = UPWord(factor + continuation.prefix, continuation.period)
    ctx = _WordContext(t, word)
    m = len(factor)
    tables = []
    for start in (1, m):
        table = {}
        for q in t.states:
            seen_cfg = set()
            states = {q}
            cur, pos = q, start
            for _ in range(max_steps):
                if pos == m + 1:
                    table[(q, cur)] = _entry_tuple(t, states)
                    break
                if (cur, pos) in seen_cfg:
                    break
                seen_cfg.add((cur, pos))
                picked = ctx.transition(cur, pos)
                if picked is None:
                    break
                cur, _, move = picked
                pos += move
                states.add(cur)
                if pos < 0:
                    break
            else:
                raise ValueError("crossing did not resolve within %d steps" % max_steps)
        tables.append(table)
    return tables[0], tables[1]


def realizable_contexts(a, cap=10 ** 6):
    """Acceptance vectors of ultimately periodic continuations of a.

    A context is the set of states from which the rest of the input is
    accepted; continuations inducing the same vector are indistinguishable
    by lookahead guards.  Enumerated over lasso words built from shortest
    representatives of a's transition monoid.
    """
    words_ = sorted(dma_monoid(a, cap).elements.values(), key=lambda w: (len(w), w))
    out = set()
    for u in words_:
        for v in words_:
            if not v:
                continue
            w = UPWord(u, v)
            out.add(frozenset(s for s in a.states if a.accepts(w, start=s)))
    return sorted(out, key=lambda c: tuple(sorted(map(str, c))))


def _machine_contexts(t):
    if t.lookahead is None:
        return (None,)
    if not hasattr(t, "_rcontexts"):
        t._rcontexts = tuple(realizable_contexts(t.lookahead))
    return t._rcontexts


def _behind_domain(t):
    if t.lookbehind is None:
        return (None,)
    return tuple(sorted(t.lookbehind.states, key=str))


class TwowstElement:
    """Monoid element of a two-way machine on some factor.

    Carries the lookbehind state map, the lookahead state map and letter
    matrix, and for every (lookbehind entry state, right context) pair the
    four crossing quadrants as coordinate matrices.
    """

    __slots__ = ("t", "eta_b", "eta_a", "m_a", "tables", "_key")

    def __init__(self, t, eta_b, eta_a, m_a, tables):
        self.t = t
        self.eta_b = eta_b
        self.eta_a = eta_a
        self.m_a = m_a
        self.tables = tables
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (
                frozenset(self.eta_b.items()) if self.eta_b else None,
                frozenset(self.eta_a.items()) if self.eta_a else None,
                self.m_a.key() if self.m_a is not None else None,
                frozenset(
                    (e, c, side, quads[side].key())
                    for (e, c), quads in self.tables.items()
                    for side in ("ll", "lr", "rl", "rr")
                ),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, TwowstElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        return compose_behaviors(self, other)


def identity_element(t):
    ident = identity_matrix(t.states, t.muller_sets)
    empty = TransitionMatrix(t.states, t.muller_sets, {})
    tables = {
        (e, c): {"ll": empty, "lr": ident, "rl": ident, "rr": empty}
        for e in _behind_domain(t)
        for c in _machine_contexts(t)
    }
    b = t.lookbehind
    a = t.lookahead
    return TwowstElement(
        t,
        {s: s for s in b.states} if b else {},
        {s: s for s in a.states} if a else {},
        identity_matrix(a.states, a.muller_sets) if a else None,
        tables,
    )


def element_of_word(t, factor):
    """Pure crossing element of an interior factor (no end marker).

    Position 0 means "exited on the left", position len(factor)+1 "exited
    on the right"; runs that jam or loop inside the factor leave their
    entry state without an image.
    """
    if not factor:
        return identity_element(t)
    m = len(factor)
    a = t.lookahead
    b = t.lookbehind
    eta_b = {s: b.run(factor, s) for s in b.states} if b else {}
    eta_a = {s: a.run_factor(s, factor)[0] for s in a.states} if a else {}
    m_a = matrix_of_word(a, factor) if a else None
    tables = {}
    for e in _behind_domain(t):
        bs = {1: e}
        for pos in range(2, m + 1):
            bs[pos] = b.step(bs[pos - 1], factor[pos - 2]) if b else None
        for c in _machine_contexts(t):
            rows = {"ll": {}, "lr": {}, "rl": {}, "rr": {}}
            for enter, start in (("l", 1), ("r", m)):
                for q in t.states:
                    res = _cross_pure(t, factor, bs, c, q, start)
                    if res is None:
                        continue
                    exit_side, q2, states = res
                    rows[enter + exit_side].setdefault(q, {})[q2] = _entry_tuple(
                        t, states
                    )
            tables[(e, c)] = {
                side: TransitionMatrix(t.states, t.muller_sets, rows[side])
                for side in rows
            }
    return TwowstElement(t, eta_b, eta_a, m_a, tables)


def _cross_pure(t, factor, bs, c, q, pos):
    m = len(factor)
    seen = set()
    states = {q}
    while True:
        if pos == 0:
            return "l", q, states
        if pos == m + 1:
            return "r", q, states
        if (q, pos) in seen:
            return None
        seen.add((q, pos))

        def ahead_ok(p, _pos=pos):
            return t.lookahead.run_factor(p, factor[_pos:])[0] in c

        picked = t.applicable(q, factor[pos - 1], bs[pos], ahead_ok)
        if picked is None:
            return None
        q, _, move = picked
        pos += move
        states.add(q)


def _oplus(a, b):
    """Entry-wise union keeping a's entry on collisions."""
    rows = {p: dict(row) for p, row in a.rows.items()}
    for p, row in b.rows.items():
        tgt = rows.setdefault(p, {})
        for q, e in row.items():
            if q not in tgt:
                tgt[q] = e
    return TransitionMatrix(a.states, a.muller_sets, rows)


def _keep_first_product(a, b):
    rows = {}
    for p, row in a.rows.items():
        out = {}
        for q, e1 in row.items():
            for r, e2 in b.rows.get(q, {}).items():
                if r not in out:
                    out[r] = compose_entries(e1, e2, a.muller_sets)
        if out:
            rows[p] = out
    return TransitionMatrix(a.states, a.muller_sets, rows)


def _star(t, m):
    """Keep-first closure of bounce iterations; stabilizes within |Q|+2 rounds."""
    acc = identity_matrix(t.states, t.muller_sets)
    for _ in range(len(t.states) + 2):
        nxt = _oplus(acc, _keep_first_product(acc, m))
        if nxt.key() == acc.key():
            return acc
        acc = nxt
    raise ValueError("crossing closure did not stabilize")


def _combine_quadrants(t, a, b):
    """Quadrants of a factor split into a then b.

    Products are grouped so that the exit matrix is applied right after the
    bounce closure: the closure rows list one state per bounce count, and
    only the bounce at which the run truly exits contributes.
    """
    star_r = _star(t, b["ll"] * a["rr"])
    star_l = _star(t, a["rr"] * b["ll"])
    return {
        "ll": _oplus(a["ll"], a["lr"] * (star_r * (b["ll"] * a["rl"]))),
        "lr": a["lr"] * (star_r * b["lr"]),
        "rl": b["rl"] * (star_l * a["rl"]),
        "rr": _oplus(b["rr"], b["rl"] * (star_l * (a["rr"] * b["lr"]))),
    }


def compose_behaviors(x1, x2):
    t = x1.t
    a = t.lookahead
    eta_b = {s: x2.eta_b[v] for s, v in x1.eta_b.items()}
    eta_a = {s: x2.eta_a[v] for s, v in x1.eta_a.items()}
    m_a = x1.m_a * x2.m_a if x1.m_a is not None else None
    tables = {}
    for (e, c) in x1.tables:
        if c is None:
            c1 = None
        else:
            c1 = frozenset(p for p in a.states if x2.eta_a[p] in c)
        e2 = e if e is None else x1.eta_b[e]
        tables[(e, c)] = _combine_quadrants(t, x1.tables[(e, c1)], x2.tables[(e2, c)])
    return TwowstElement(t, eta_b, eta_a, m_a, tables)


def twowst_monoid(t, cap=10 ** 6):
    gens = {ch: element_of_word(t, ch) for ch in t.alphabet}
    return generate_monoid(gens, identity_element(t), cap)


def is_aperiodic_2wst(t, cap=10 ** 6):
    """(verdict, witness): witness is a word whose element powers cycle."""
    w = aperiodicity_witness(twowst_monoid(t, cap))
    return (w is None), w
