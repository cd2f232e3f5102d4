"""Built-in machines used by the tests, the demos, and the shipped files.

Each function builds a fresh machine; none keeps global state.  The star of
the collection is the mirror-copy transformation over {a, b, #}: a word
u1#u2#...#un# t (finitely many #s, t separator-free) maps to
rev(u1)u1#rev(u2)u2#...#rev(un)# t.  It is realized three ways (two-way
transducer, streaming transducer, first-order transducer) and drives the
cross-model agreement tests.
"""

import random

from .fologic import parse_formula
from .fot import Fot
from .muller import Dma
from .sst import Sst, analyze_run, parse_rhs
from .twowst import LEFT, MARK, RIGHT, TwoWst
from .words import UPWord


def settling_loops_dma():
    """Accepts words that settle into the b-loop at q or the a-loop at r.

    Which loop a tail can settle into depends on the parity of the letters
    read before it (a swaps q and t, b swaps r and t), so both letter matrices
    have powers that alternate forever: the canonical non-counter-free Muller
    automaton.
    """
    delta = {
        ("t", "a"): "q",
        ("t", "b"): "r",
        ("q", "a"): "t",
        ("q", "b"): "q",
        ("r", "a"): "r",
        ("r", "b"): "t",
    }
    return Dma(["q", "r", "t"], "ab", "t", delta, [{"q"}, {"r"}])


def _updates(variables, table):
    """{(q, a): "X := aXb; Y := ε"} -> parsed substitutions."""
    out = {}
    for key, text in table.items():
        subst = {}
        for part in text.split(";"):
            lhs, rhs = part.split(":=")
            subst[lhs.strip()] = parse_rhs(rhs, variables)
        out[key] = subst
    return out


def mirror_sst():
    """Streaming version of the mirror-copy transformation.

    x collects the finished blocks, y mirrors the current block (αyα), and z
    keeps a plain copy of it; at a separator the finished ūu# moves into x.
    The output rule xz covers words with finitely many separators: x holds
    the processed part, z the separator-free tail.
    """
    variables = ("x", "y", "z")
    delta = {}
    update = {}
    for alpha in "ab":
        delta[(1, alpha)] = 2
        delta[(2, alpha)] = 2
        rhs = "x := x; y := {0}y{0}; z := z{0}".format(alpha)
        update[(1, alpha)] = rhs
        update[(2, alpha)] = rhs
    delta[(1, "#")] = 1
    delta[(2, "#")] = 1
    update[(1, "#")] = "x := x#; y := ε; z := ε"
    update[(2, "#")] = "x := xy#; y := ε; z := ε"
    return Sst(
        [1, 2], "ab#", 1, delta, variables, _updates(variables, update), {(2,): ("x", "z")}
    )


def settling_loops_sst():
    """Copyful transducer on top of the settling-loops state graph.

    The b-loop at q runs Y := YX with X untouched, so over bb two copies of
    X's content land in Y: the standard example of a flow count reaching 2
    (not 1-bounded) while each single transition looks harmless.
    """
    variables = ("X", "Y")
    update = {
        ("t", "a"): "Y := aX",
        ("t", "b"): "X := bY",
        ("q", "a"): "X := bX",
        ("q", "b"): "Y := YX",
        ("r", "a"): "X := Xb",
        ("r", "b"): "X := X",
    }
    delta = {
        ("t", "a"): "q",
        ("t", "b"): "r",
        ("q", "a"): "t",
        ("q", "b"): "q",
        ("r", "a"): "r",
        ("r", "b"): "t",
    }
    return Sst(
        ["t", "q", "r"],
        "ab",
        "t",
        delta,
        variables,
        _updates(variables, update),
        {("q",): ("X", "Y"), ("r",): ("X",)},
    )


def output_graph_demo_sst():
    """Seven-step chain machine exercising every output-graph situation.

    Reading 123456 then z forever: X is built, thrown away (X := c at step 2)
    and rebuilt, Y is thrown away at the start and at the end, Z survives
    into the output through Y and X.  Gives useless columns, literal edges,
    and nested value paths on one short run.
    """
    variables = ("X", "Y", "Z")
    states = ["g%d" % i for i in range(7)] + ["gdead"]
    alphabet = "123456z"
    delta = {}
    for q in states:
        for a in alphabet:
            delta[(q, a)] = "gdead"
    for i in range(1, 7):
        delta[("g%d" % (i - 1), str(i))] = "g%d" % i
    delta[("g6", "z")] = "g6"
    update = {
        ("g0", "1"): "X := aXb; Y := aaa; Z := Zc",
        ("g1", "2"): "X := c; Y := Y; Z := dZc",
        ("g2", "3"): "X := X; Y := eYf; Z := Z",
        ("g3", "4"): "X := X; Y := Y; Z := dZc",
        ("g4", "5"): "X := X; Y := YbZc; Z := g",
        ("g5", "6"): "X := XY; Y := bZc; Z := g",
    }
    parsed = _updates(variables, update)
    for key in delta:
        if key not in parsed:
            if delta[key] == "gdead":
                parsed[key] = {x: () for x in variables}
            else:
                parsed[key] = {}
    return Sst(
        states,
        alphabet,
        "g0",
        delta,
        variables,
        parsed,
        {("g6",): ("X", "Z")},
    )


def last_letter_dma():
    """State v exactly after reading an a, u after a b (or initially).

    Accepts words with infinitely many a's and infinitely many b's; its
    transition monoid is counter-free.
    """
    delta = {
        ("u", "a"): "v",
        ("u", "b"): "u",
        ("v", "a"): "v",
        ("v", "b"): "u",
    }
    return Dma(["u", "v"], "ab", "u", delta, [{"u", "v"}])


def random_upword(rng, alphabet, max_prefix=2, max_period=2):
    prefix = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix)))
    period = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_period)))
    return UPWord(prefix, period)


def random_copyless_sst(rng, max_states=4, max_vars=3, alphabet="ab"):
    """Seeded generator of copyless transducers with a reachable output rule.

    Every variable is placed in at most one right-hand side per transition
    (or dropped), so the machines are copyless by construction.  The output
    rule is a single growing variable X over the set of states some sampled
    word visits forever, with the self-extension shape forced onto the
    transitions inside that set.
    """
    n = rng.randint(2, max_states)
    variables = ("X", "Y", "Z")[: rng.randint(1, max_vars)]
    states = list(range(n))
    delta = {}
    update = {}
    for q in states:
        for a in alphabet:
            delta[(q, a)] = rng.randrange(n)
            placed = {x: [] for x in variables}
            for v in variables:
                slot = rng.randrange(len(variables) + 1)
                if slot < len(variables):
                    placed[variables[slot]].append(v)
            subst = {}
            for x in variables:
                rng.shuffle(placed[x])
                items = []
                for v in placed[x]:
                    for _ in range(rng.randrange(2)):
                        items.append(("lit", rng.choice(alphabet)))
                    items.append(("var", v))
                for _ in range(rng.randrange(2)):
                    items.append(("lit", rng.choice(alphabet)))
                subst[x] = tuple(items)
            update[(q, a)] = subst
    bare = Sst(states, alphabet, 0, delta, variables, update, {})
    loop_set = analyze_run(bare, random_upword(rng, alphabet)).infinity
    for q in loop_set:
        for a in alphabet:
            if delta[(q, a)] in loop_set:
                subst = {
                    x: tuple(i for i in rhs if i != ("var", "X"))
                    for x, rhs in update[(q, a)].items()
                }
                subst["X"] = (("var", "X"),) + subst["X"]
                update[(q, a)] = subst
    return Sst(states, alphabet, 0, delta, variables, update, {loop_set: ("X",)})


def domain_words(t, rng, count, attempts=500, settle_cap=None, max_prefix=2, max_period=2):
    """Up to count distinct accepted words, found by rejection sampling."""
    out = []
    alphabet = "".join(t.alphabet)
    while len(out) < count and attempts > 0:
        attempts -= 1
        w = random_upword(rng, alphabet, max_prefix, max_period)
        ana = analyze_run(t, w)
        if not ana.in_domain:
            continue
        if settle_cap is not None and ana.settle_col > settle_cap:
            continue
        if all(w != seen for seen in out):
            out.append(w)
    return out

def mirror_lookahead_dma():
    """Suffix classifier for the mirror machine: y asks "is there a
    separator ahead", n asks "is the rest separator-free"; m and d are the
    sink verdicts the two questions resolve into."""
    delta = {}
    for st in "ymnd":
        for al in "ab":
            delta[(st, al)] = st
    delta[("y", "#")] = "m"
    delta[("n", "#")] = "d"
    delta[("m", "#")] = "m"
    delta[("d", "#")] = "d"
    return Dma("ymnd", "ab#", "y", delta, [{"m"}, {"n"}, {"m", "n"}])


def mirror_twowst():
    """Two-way version of the mirror-copy transformation.

    t scans rightward; while a separator is still ahead it stays silent, on
    the tail it copies.  At a separator the head turns around: p walks the
    block leftward emitting it reversed, q re-walks it verbatim, then the
    separator itself is emitted and t continues.
    """
    ahead = mirror_lookahead_dma()
    delta = {}
    for al in "ab":
        delta[("t", None, al, "y")] = ("t", "", RIGHT)
        delta[("t", None, al, "n")] = ("t", al, RIGHT)
        delta[("p", None, al, None)] = ("p", al, LEFT)
        delta[("q", None, al, None)] = ("q", al, RIGHT)
    delta[("t", None, "#", None)] = ("p", "", LEFT)
    delta[("p", None, "#", None)] = ("q", "", RIGHT)
    delta[("p", None, MARK, None)] = ("q", "", RIGHT)
    delta[("q", None, "#", None)] = ("t", "#", RIGHT)
    return TwoWst("tpq", "ab#", "t", delta, [{"t"}], lookahead=ahead)


def alternating_copier_twowst():
    """Copies a^ω while flipping between two states; its single letter
    element swaps them, so the machine is not counter-free."""
    delta = {
        ("e", None, "a", None): ("o", "a", RIGHT),
        ("o", None, "a", None): ("e", "a", RIGHT),
    }
    return TwoWst("eo", "a", "e", delta, [{"e", "o"}])


def plain_copier_twowst():
    """One state, always moving right, copying every letter."""
    delta = {("s", None, al, None): ("s", al, RIGHT) for al in "ab"}
    return TwoWst("s", "ab", "s", delta, [{"s"}])


def mirror_corpus(count=50, seed=20260825):
    """Deterministic sample of the mirror domain: finitely many separators.

    The hand-picked head pins down the shapes the tests reference by name
    (empty prefix, leading separator, doubled separator, separator inside
    the period's block structure); the rest is filled with seeded random
    block words so the corpus stays identical between runs.
    """
    words = [
        UPWord("", "a"),
        UPWord("", "ab"),
        UPWord("b", "ab"),
        UPWord("#", "a"),
        UPWord("##", "ba"),
        UPWord("a#", "b"),
        UPWord("ab#", "a"),
        UPWord("abbb#ba#", "ab"),
        UPWord("#a#", "b"),
        UPWord("ba#aa#b", "ba"),
        UPWord("aaa#b#", "ba"),
        UPWord("b#a#b#", "a"),
    ]
    rng = random.Random(seed)
    while len(words) < count:
        blocks = [
            "".join(rng.choice("ab") for _ in range(rng.randrange(4)))
            for _ in range(rng.randrange(4))
        ]
        prefix = "".join(block + "#" for block in blocks)
        tail = "".join(rng.choice("ab") for _ in range(rng.randrange(1, 4)))
        w = UPWord(prefix, tail)
        if all(w != seen for seen in words):
            words.append(w)
    return words


def mirror_fot():
    """The mirror-copy transformation as a first-order transducer.

    Copy 2 holds the reversed image of each separator-terminated block,
    copy 1 the verbatim image, copy 3 the separators and the eventually
    separator-free tail.  The order formulas generate the output order:
    within a block all copy-2 nodes (read backwards) precede all copy-1
    nodes (read forwards), and a block's separator closes it.
    """
    reach = "(E y. (x < y & L#(y)))"
    btw = "(E z. (L#(z) & ((x < z & z < y) | (y < z & z < x))))"
    labels = {}
    for g in "ab":
        block = "L%s(x) & !L#(x) & %s" % (g, reach)
        labels[(1, g)] = parse_formula(block)
        labels[(2, g)] = parse_formula(block)
    for g in "ab#":
        tail = "L%s(x) & (L#(x) | (!L#(x) & !%s))" % (g, reach)
        labels[(3, g)] = parse_formula(tail)
    order = {
        (1, 1): "x < y",
        (3, 3): "x < y",
        (2, 2): "(%s -> x < y) & (!%s -> y < x)" % (btw, btw),
        (1, 3): "L#(y) & x < y",
        (2, 3): "L#(y) & x < y",
        (3, 1): "L#(x) & x < y",
        (3, 2): "L#(x) & x < y",
        (1, 2): "x < y & %s" % btw,
        (2, 1): "(x < y & %s) | (!%s & (y < x | y = x))" % (btw, btw),
    }
    order = {pair: parse_formula(text) for pair, text in order.items()}
    dom = parse_formula("E x. A y. (x < y -> !L#(y))")
    return Fot("ab#", (1, 2, 3), dom, labels, order)
