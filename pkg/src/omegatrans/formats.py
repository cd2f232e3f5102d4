"""One text format family for every machine kind, selected by a `kind:` header.

A file is a sequence of `key: value` lines; blank lines and lines starting
with "#" are skipped.  The kinds:

    dma     states:/initial:/alphabet:/delta: q,a -> q'/muller: {q} {r}
    dfa     like dma without the muller line (used embedded, for lookbehind)
    sst     adds vars:, update: q,a: X := aXb; Y := YX, output: {q} -> x z
    sst-sf  four-part keys with "_" for an absent guard, optional start: lines
    2wst    trans: q, r, a, p -> q', "out", +1|0|-1 with the same "_" rule
    fot     alphabet:/copies:/dom:/pos: c,g: formula/ord: c,d: formula

2wst and sst-sf files may end with `lookbehind:` / `lookahead:` sections,
each holding an embedded dfa / dma block.  Identity update entries are left
out when printing and filled back in by the constructors when parsing, so
parse_machine_text(print_machine(m)) rebuilds m field for field.

The format spells states and variables as bare tokens (letters, digits and
_ @ .); machines whose states are structured values -- the conversion and
elimination results -- are printed through printable_machine, which renames
states to s0, s1, ... first.  All-digit tokens are read back as ints.
"""

import re

from .fologic import format_formula, parse_formula
from .fot import Fot
from .muller import Dma
from .sst import Sst, format_rhs, parse_rhs
from .twowst import LEFT, MARK, RIGHT, STAY, Dfa, TwoWst
from .words import parse_word

_TOKEN = re.compile(r"[A-Za-z0-9_@.]+\Z")

_SCALAR_KEYS = ("kind", "states", "initial", "alphabet", "vars", "copies", "dom")
_KNOWN_KEYS = _SCALAR_KEYS + (
    "delta", "update", "output", "start", "muller", "trans", "pos", "ord"
)


class FormatError(ValueError):
    """A machine or corpus file that does not follow the text format."""


def _fail(lineno, message):
    raise FormatError("line %d: %s" % (lineno, message))


def _split_sections(text):
    """(main, {section: lines}) with lines as (lineno, key, rest) triples."""
    buckets = {"main": []}
    current = "main"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("lookahead:", "lookbehind:"):
            name = line[:-1]
            if name in buckets:
                _fail(lineno, "duplicate %s section" % name)
            buckets[name] = []
            current = name
            continue
        if ":" not in line:
            _fail(lineno, "expected 'key: value', got %r" % line)
        key, rest = line.split(":", 1)
        key = key.strip()
        if key not in _KNOWN_KEYS:
            _fail(lineno, "unknown directive %r" % key)
        buckets[current].append((lineno, key, rest.strip()))
    main = buckets.pop("main")
    return main, buckets


def _collect(lines):
    fields = {}
    for lineno, key, rest in lines:
        if key in _SCALAR_KEYS and key in fields:
            _fail(lineno, "duplicate %r line" % key)
        fields.setdefault(key, []).append((lineno, rest))
    return fields


def _one(fields, key, lineno_hint=1):
    if key not in fields:
        _fail(lineno_hint, "missing %r line" % key)
    return fields[key][0]


def _token(text, lineno):
    text = text.strip()
    if not text:
        _fail(lineno, "empty name")
    return int(text) if text.isdigit() else text


def _guard_token(text, lineno):
    text = text.strip()
    return None if text == "_" else _token(text, lineno)


def _letter(text, lineno):
    text = text.strip()
    if len(text) != 1:
        _fail(lineno, "letters are single characters, got %r" % text)
    return text


def _state_set(text, lineno):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        _fail(lineno, "expected a {..} state set, got %r" % text)
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    return frozenset(_token(part, lineno) for part in inner.split(","))


def _split_arrow(text, lineno):
    parts = text.split("->")
    if len(parts) != 2:
        _fail(lineno, "expected exactly one '->' in %r" % text)
    return parts[0].strip(), parts[1].strip()


def _parse_header(fields):
    lineno, states_text = _one(fields, "states")
    states = [_token(part, lineno) for part in states_text.split()]
    lineno, initial_text = _one(fields, "initial")
    initial = _token(initial_text, lineno)
    lineno, alphabet = _one(fields, "alphabet")
    if not alphabet:
        _fail(lineno, "empty alphabet")
    return states, initial, alphabet


def _parse_delta2(fields, states, alphabet):
    delta = {}
    for lineno, rest in fields.get("delta", []):
        lhs, rhs = _split_arrow(rest, lineno)
        parts = lhs.split(",")
        if len(parts) != 2:
            _fail(lineno, "expected 'q,a' before '->', got %r" % lhs)
        key = (_token(parts[0], lineno), _letter(parts[1], lineno))
        if key in delta:
            _fail(lineno, "duplicate transition for %r" % (key,))
        delta[key] = _token(rhs, lineno)
    return delta


def _parse_muller(fields):
    sets = []
    for lineno, rest in fields.get("muller", []):
        for chunk in rest.split():
            sets.append(_state_set(chunk, lineno))
    return sets


def _parse_assignments(body, variables, lineno):
    subst = {}
    for part in body.split(";"):
        if ":=" not in part:
            _fail(lineno, "expected 'X := rhs' in %r" % part.strip())
        lhs, rhs = part.split(":=", 1)
        name = lhs.strip()
        if name in subst:
            _fail(lineno, "variable %r assigned twice" % name)
        subst[name] = parse_rhs(rhs, variables)
    return subst


def _parse_output(fields, variables):
    out = {}
    for lineno, rest in fields.get("output", []):
        lhs, rhs = _split_arrow(rest, lineno)
        key = _state_set(lhs, lineno)
        if key in out:
            _fail(lineno, "duplicate output rule for %r" % (set(key),))
        seq = tuple(rhs.split())
        for name in seq:
            if name not in variables:
                _fail(lineno, "unknown output variable %r" % name)
        out[key] = seq
    return out


def _parse_dma(fields):
    states, initial, alphabet = _parse_header(fields)
    return Dma(states, alphabet, initial, _parse_delta2(fields, states, alphabet),
               _parse_muller(fields))


def _parse_dfa(fields):
    states, initial, alphabet = _parse_header(fields)
    return Dfa(states, alphabet, initial, _parse_delta2(fields, states, alphabet))


def _parse_vars(fields):
    lineno, text = _one(fields, "vars")
    return tuple(text.split())


def _parse_sst(fields):
    states, initial, alphabet = _parse_header(fields)
    variables = _parse_vars(fields)
    delta = _parse_delta2(fields, states, alphabet)
    update = {}
    for lineno, rest in fields.get("update", []):
        if ":" not in rest:
            _fail(lineno, "expected 'q,a: assignments', got %r" % rest)
        keypart, body = rest.split(":", 1)
        parts = keypart.split(",")
        if len(parts) != 2:
            _fail(lineno, "expected 'q,a' before ':', got %r" % keypart)
        key = (_token(parts[0], lineno), _letter(parts[1], lineno))
        if key in update:
            _fail(lineno, "duplicate update for %r" % (key,))
        update[key] = _parse_assignments(body, variables, lineno)
    return Sst(states, alphabet, initial, delta, variables, update,
               _parse_output(fields, variables))


def _parse_guarded_key(keypart, lineno):
    parts = keypart.split(",")
    if len(parts) != 4:
        _fail(lineno, "expected 'q, r, a, p', got %r" % keypart)
    return (_token(parts[0], lineno), _guard_token(parts[1], lineno),
            _letter(parts[2], lineno), _guard_token(parts[3], lineno))


def _parse_sst_sf(fields, sections):
    from .constructions import SstSf

    states, initial, alphabet = _parse_header(fields)
    variables = _parse_vars(fields)
    delta = {}
    for lineno, rest in fields.get("delta", []):
        lhs, rhs = _split_arrow(rest, lineno)
        key = _parse_guarded_key(lhs, lineno)
        if key in delta:
            _fail(lineno, "duplicate transition for %r" % (key,))
        delta[key] = _token(rhs, lineno)
    update = {}
    for lineno, rest in fields.get("update", []):
        head, _, body = rest.partition(":")
        key = _parse_guarded_key(head, lineno)
        if key in update:
            _fail(lineno, "duplicate update for %r" % (key,))
        update[key] = _parse_assignments(body, variables, lineno)
    start_values = {}
    for lineno, rest in fields.get("start", []):
        if ":=" not in rest:
            _fail(lineno, "expected 'X := text', got %r" % rest)
        name, value = rest.split(":=", 1)
        value = value.strip()
        start_values[name.strip()] = "" if value == "ε" else value
    return SstSf(states, alphabet, initial, delta, variables, update,
                 _parse_output(fields, variables),
                 lookahead=sections.get("lookahead"),
                 lookbehind=sections.get("lookbehind"),
                 start_values=start_values or None)


_MOVES = {"+1": RIGHT, "1": RIGHT, "0": STAY, "-1": LEFT}


def _parse_2wst(fields, sections):
    states, initial, alphabet = _parse_header(fields)
    delta = {}
    for lineno, rest in fields.get("trans", []):
        lhs, rhs = _split_arrow(rest, lineno)
        parts = lhs.split(",")
        if len(parts) != 4:
            _fail(lineno, "expected 'q, r, a, p' before '->', got %r" % lhs)
        letter = parts[2].strip()
        if letter != MARK:
            letter = _letter(letter, lineno)
        key = (_token(parts[0], lineno), _guard_token(parts[1], lineno),
               letter, _guard_token(parts[3], lineno))
        first = rhs.find('"')
        last = rhs.rfind('"')
        if first < 0 or last == first:
            _fail(lineno, "expected a quoted output in %r" % rhs)
        state = _token(rhs[:first].rstrip().rstrip(","), lineno)
        move_text = rhs[last + 1:].lstrip().lstrip(",").strip()
        if move_text not in _MOVES:
            _fail(lineno, "move must be +1, 0 or -1, got %r" % move_text)
        if key in delta:
            _fail(lineno, "duplicate transition for %r" % (key,))
        delta[key] = (state, rhs[first + 1:last], _MOVES[move_text])
    return TwoWst(states, alphabet, initial, delta, _parse_muller(fields),
                  lookahead=sections.get("lookahead"),
                  lookbehind=sections.get("lookbehind"))


def _parse_fot(fields):
    lineno, alphabet = _one(fields, "alphabet")
    lineno, copies_text = _one(fields, "copies")
    if not copies_text.isdigit() or int(copies_text) < 1:
        _fail(lineno, "copies must be a positive count, got %r" % copies_text)
    copies = tuple(range(1, int(copies_text) + 1))
    lineno, dom_text = _one(fields, "dom")
    labels = {}
    for lineno, rest in fields.get("pos", []):
        head, _, body = rest.partition(":")
        parts = head.split(",")
        if len(parts) != 2 or not body:
            _fail(lineno, "expected 'c,g: formula', got %r" % rest)
        key = (int(parts[0]), _letter(parts[1], lineno))
        labels[key] = _parse_formula_at(body, lineno)
    order = {}
    for lineno, rest in fields.get("ord", []):
        head, _, body = rest.partition(":")
        parts = head.split(",")
        if len(parts) != 2 or not body:
            _fail(lineno, "expected 'c,d: formula', got %r" % rest)
        order[(int(parts[0]), int(parts[1]))] = _parse_formula_at(body, lineno)
    return Fot(alphabet, copies, _parse_formula_at(dom_text, lineno), labels, order)


def _parse_formula_at(text, lineno):
    try:
        return parse_formula(text)
    except ValueError as exc:
        _fail(lineno, "bad formula: %s" % exc)


def parse_machine_text(text):
    """Text in the format family -> validated machine of the header's kind."""
    main, section_lines = _split_sections(text)
    if not main or main[0][1] != "kind":
        _fail(main[0][0] if main else 1, "the first line must be 'kind: ...'")
    lineno, kind = main[0][0], main[0][2]
    fields = _collect(main[1:])
    if section_lines and kind not in ("2wst", "sst-sf"):
        _fail(lineno, "kind %r takes no look-around sections" % kind)
    sections = {}
    for name, lines in section_lines.items():
        sub = _collect(lines)
        sub_lineno, sub_kind = _one(sub, "kind", lines[0][0] if lines else 1)
        want = "dma" if name == "lookahead" else "dfa"
        if sub_kind != want:
            _fail(sub_lineno, "%s section must embed kind %r" % (name, want))
        sections[name] = _parse_dma(sub) if name == "lookahead" else _parse_dfa(sub)
    try:
        if kind == "dma":
            return _parse_dma(fields)
        if kind == "dfa":
            return _parse_dfa(fields)
        if kind == "sst":
            return _parse_sst(fields)
        if kind == "sst-sf":
            return _parse_sst_sf(fields, sections)
        if kind == "2wst":
            return _parse_2wst(fields, sections)
        if kind == "fot":
            return _parse_fot(fields)
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    _fail(lineno, "unknown kind %r" % kind)


def parse_machine(path):
    with open(path, encoding="utf-8") as handle:
        return parse_machine_text(handle.read())


def parse_corpus_text(text):
    words = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            words.append(parse_word(line))
        except ValueError as exc:
            _fail(lineno, str(exc))
    return words


def parse_corpus(path):
    with open(path, encoding="utf-8") as handle:
        return parse_corpus_text(handle.read())


def _is_token(name):
    return (isinstance(name, int) and name >= 0) or (
        isinstance(name, str) and bool(_TOKEN.match(name))
    )


def _token_map(names, prefix):
    """Identity for printable names, else prefix0, prefix1, ... by position."""
    as_text = [str(n) for n in names]
    if all(map(_is_token, names)) and len(set(as_text)) == len(as_text):
        return {n: n for n in names}
    return {n: "%s%d" % (prefix, i) for i, n in enumerate(names)}


def printable_machine(m):
    """The same machine with states/variables renamed to bare tokens.

    Machines built by hand already carry token names and come back
    unchanged (the identity renaming preserves every field); conversion and
    elimination results get s0, s1, ... states in state order.
    """
    from .constructions import SstSf

    if isinstance(m, Dma):
        ren = _token_map(m.states, "s")
        return Dma([ren[q] for q in m.states], m.alphabet, ren[m.initial],
                   {(ren[q], a): ren[q2] for (q, a), q2 in m.delta.items()},
                   [frozenset(ren[q] for q in P) for P in m.muller_sets])
    if isinstance(m, Dfa):
        ren = _token_map(m.states, "s")
        return Dfa([ren[q] for q in m.states], m.alphabet, ren[m.initial],
                   {(ren[q], a): ren[q2] for (q, a), q2 in m.delta.items()})
    if isinstance(m, Sst):
        ren = _token_map(m.states, "s")
        var = _token_map(m.variables, "v")
        rhs_ren = lambda rhs: tuple(
            (kind, var[v] if kind == "var" else v) for kind, v in rhs
        )
        return Sst(
            [ren[q] for q in m.states], m.alphabet, ren[m.initial],
            {(ren[q], a): ren[q2] for (q, a), q2 in m.delta.items()},
            [var[x] for x in m.variables],
            {(ren[q], a): {var[x]: rhs_ren(rhs) for x, rhs in subst.items()}
             for (q, a), subst in m.update.items()},
            {frozenset(ren[q] for q in P): tuple(var[x] for x in seq)
             for P, seq in m.F.items()},
        )
    if isinstance(m, SstSf):
        ren = _token_map(m.states, "s")
        var = _token_map(m.variables, "v")
        rhs_ren = lambda rhs: tuple(
            (kind, var[v] if kind == "var" else v) for kind, v in rhs
        )
        return SstSf(
            [ren[q] for q in m.states], m.alphabet, ren[m.initial],
            {(ren[q], r, a, p): ren[q2] for (q, r, a, p), q2 in m.delta.items()},
            [var[x] for x in m.variables],
            {(ren[q], r, a, p): {var[x]: rhs_ren(rhs) for x, rhs in subst.items()}
             for (q, r, a, p), subst in m.update.items()},
            {frozenset(ren[q] for q in P): tuple(var[x] for x in seq)
             for P, seq in m.output.items()},
            lookahead=m.lookahead, lookbehind=m.lookbehind,
            start_values={var[x]: v for x, v in m.start_values.items()},
        )
    if isinstance(m, TwoWst):
        ren = _token_map(m.states, "s")
        return TwoWst(
            [ren[q] for q in m.states], m.alphabet, ren[m.initial],
            {(ren[q], r, a, p): (ren[q2], out, move)
             for (q, r, a, p), (q2, out, move) in m.delta.items()},
            [frozenset(ren[q] for q in P) for P in m.muller_sets],
            lookahead=m.lookahead, lookbehind=m.lookbehind,
        )
    return m


def _fmt_set(P, state_order):
    members = sorted(P, key=lambda q: state_order[q])
    return "{%s}" % ",".join(str(q) for q in members)


def _fmt_rhs_checked(rhs, variables):
    text = format_rhs(rhs)
    if parse_rhs(text, variables) != tuple(rhs):
        raise ValueError(
            "right-hand side %r is ambiguous in the text format" % text
        )
    return text


def _fmt_assignments(subst, variables):
    parts = []
    for x in variables:
        rhs = subst.get(x, (("var", x),))
        if rhs == (("var", x),):
            continue
        parts.append("%s := %s" % (x, _fmt_rhs_checked(rhs, variables)))
    return "; ".join(parts)


def _header_lines(kind, m):
    return [
        "kind: %s" % kind,
        "states: %s" % " ".join(str(q) for q in m.states),
        "initial: %s" % m.initial,
        "alphabet: %s" % "".join(m.alphabet),
    ]


def _check_letters(alphabet):
    for a in alphabet:
        if len(a) != 1 or a in ',;:"{}' or a.isspace():
            raise ValueError("letter %r cannot be printed in the text format" % a)


def _print_dma(m, kind="dma"):
    _check_letters(m.alphabet)
    lines = _header_lines(kind, m)
    for q in m.states:
        for a in m.alphabet:
            lines.append("delta: %s,%s -> %s" % (q, a, m.delta[(q, a)]))
    if kind == "dma":
        order = {q: i for i, q in enumerate(m.states)}
        lines.append(
            "muller: %s" % " ".join(_fmt_set(P, order) for P in m.muller_sets)
        )
    return lines


def _print_sst(m):
    _check_letters(m.alphabet)
    order = {q: i for i, q in enumerate(m.states)}
    lines = _header_lines("sst", m)
    lines.append("vars: %s" % " ".join(m.variables))
    for q in m.states:
        for a in m.alphabet:
            lines.append("delta: %s,%s -> %s" % (q, a, m.delta[(q, a)]))
    for q in m.states:
        for a in m.alphabet:
            body = _fmt_assignments(m.update[(q, a)], m.variables)
            if body:
                lines.append("update: %s,%s: %s" % (q, a, body))
    for P in m.muller_sets:
        lines.append(
            "output: %s -> %s" % (_fmt_set(P, order), " ".join(m.F[P]))
        )
    return lines


def _guard(r):
    return "_" if r is None else str(r)


def _guarded_key_order(m):
    state_order = {q: i for i, q in enumerate(m.states)}
    letter_order = {a: i for i, a in enumerate(m.alphabet)}
    letter_order[MARK] = len(letter_order)

    def key(entry):
        q, r, a, p = entry
        return (state_order[q], letter_order[a], _guard(r), _guard(p))

    return key


def _print_sst_sf(m):
    _check_letters(m.alphabet)
    order = {q: i for i, q in enumerate(m.states)}
    lines = _header_lines("sst-sf", m)
    lines.append("vars: %s" % " ".join(m.variables))
    sort = _guarded_key_order(m)
    for key in sorted(m.delta, key=sort):
        q, r, a, p = key
        lines.append(
            "delta: %s, %s, %s, %s -> %s"
            % (q, _guard(r), a, _guard(p), m.delta[key])
        )
    for key in sorted(m.update, key=sort):
        body = _fmt_assignments(m.update[key], m.variables)
        if body:
            q, r, a, p = key
            lines.append(
                "update: %s, %s, %s, %s: %s" % (q, _guard(r), a, _guard(p), body)
            )
    for P in m.muller_sets:
        lines.append(
            "output: %s -> %s" % (_fmt_set(P, order), " ".join(m.output[P]))
        )
    for x in m.variables:
        if m.start_values.get(x, ""):
            lines.append("start: %s := %s" % (x, m.start_values[x]))
    lines.extend(_section_lines(m))
    return lines


def _section_lines(m):
    lines = []
    if m.lookbehind is not None:
        lines.append("lookbehind:")
        lines.extend(_print_dma(m.lookbehind, kind="dfa"))
    if m.lookahead is not None:
        lines.append("lookahead:")
        lines.extend(_print_dma(m.lookahead))
    return lines


_MOVE_TEXT = {RIGHT: "+1", STAY: "0", LEFT: "-1"}


def _print_2wst(m):
    _check_letters(m.alphabet)
    order = {q: i for i, q in enumerate(m.states)}
    lines = _header_lines("2wst", m)
    for key in sorted(m.delta, key=_guarded_key_order(m)):
        q, r, a, p = key
        q2, out, move = m.delta[key]
        if '"' in out:
            raise ValueError("output %r cannot be printed in the text format" % out)
        lines.append(
            'trans: %s, %s, %s, %s -> %s, "%s", %s'
            % (q, _guard(r), a, _guard(p), q2, out, _MOVE_TEXT[move])
        )
    lines.append(
        "muller: %s" % " ".join(_fmt_set(P, order) for P in m.muller_sets)
    )
    lines.extend(_section_lines(m))
    return lines


def _print_fot(m):
    _check_letters(m.alphabet)
    if m.copies != tuple(range(1, len(m.copies) + 1)):
        raise ValueError("only copies numbered 1..n can be printed")
    letter_order = {a: i for i, a in enumerate(m.alphabet)}
    lines = [
        "kind: fot",
        "alphabet: %s" % "".join(m.alphabet),
        "copies: %d" % len(m.copies),
        "dom: %s" % format_formula(m.domain),
    ]
    for c, a in sorted(m.labels, key=lambda k: (k[0], letter_order[k[1]])):
        lines.append("pos: %d,%s: %s" % (c, a, format_formula(m.labels[(c, a)])))
    for c, d in sorted(m.order):
        lines.append("ord: %d,%d: %s" % (c, d, format_formula(m.order[(c, d)])))
    return lines


def print_machine(m):
    """Deterministic text for a machine; parse_machine_text inverts it.

    Structured states and variables are renamed via printable_machine
    first, so the round trip reproduces the renamed machine.
    """
    from .constructions import SstSf

    m = printable_machine(m)
    if isinstance(m, Dma):
        lines = _print_dma(m)
    elif isinstance(m, Dfa):
        lines = _print_dma(m, kind="dfa")
    elif isinstance(m, SstSf):
        lines = _print_sst_sf(m)
    elif isinstance(m, Sst):
        lines = _print_sst(m)
    elif isinstance(m, TwoWst):
        lines = _print_2wst(m)
    elif isinstance(m, Fot):
        lines = _print_fot(m)
    else:
        raise TypeError("no text format for %s" % type(m).__name__)
    return "\n".join(lines) + "\n"
