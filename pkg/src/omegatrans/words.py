"""Ultimately periodic infinite words.

An infinite word is represented as ``prefix . period^omega`` where both parts
are ordinary Python strings of single-character letters.  Every word is kept in
a canonical form so that structural equality coincides with equality of the
infinite words themselves:

* the period is primitive (not a proper power of a shorter word), and
* the prefix is as short as possible (a prefix ending with the same letter the
  period ends with can shed that letter by rotating the period).

Positions are 1-based throughout: position i carries the i-th letter.
"""


class UPWord:
    """An ultimately periodic word u . v^omega in canonical form."""

    __slots__ = ("prefix", "period")

    def __init__(self, prefix, period):
        if not period:
            raise ValueError("period must be non-empty")
        period = _primitive_root(period)
        # Shift letters from the end of the prefix into the period whenever the
        # prefix's last letter equals the period's last letter: u.l (l v')^w and
        # u (v' l)^w are the same word when l closes the period.
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        self.prefix = prefix
        self.period = period

    def __eq__(self, other):
        if not isinstance(other, UPWord):
            return NotImplemented
        return self.prefix == other.prefix and self.period == other.period

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __repr__(self):
        return "UPWord(%r, %r)" % (self.prefix, self.period)

    def __str__(self):
        return format_word(self)

    def letters(self):
        """Set of letters that actually occur in the word."""
        return set(self.prefix) | set(self.period)

    def letter_at(self, i):
        """Letter at 1-based position i."""
        if i < 1:
            raise IndexError("positions are 1-based, got %d" % i)
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.period[(i - len(self.prefix) - 1) % len(self.period)]

    def prefix_of(self, n):
        """The first n letters as a plain string."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        rest = n - len(self.prefix)
        reps = rest // len(self.period) + 1
        return self.prefix + (self.period * reps)[:rest]

    def suffix(self, j):
        """The word with the first j letters removed (j >= 0)."""
        if j < 0:
            raise IndexError("cannot drop a negative number of letters")
        if j <= len(self.prefix):
            return UPWord(self.prefix[j:], self.period)
        r = (j - len(self.prefix)) % len(self.period)
        return UPWord("", self.period[r:] + self.period[:r])


def _primitive_root(v):
    """Shortest w with v = w^k.  Classic trick: search v in (v+v) from index 1."""
    i = (v + v).find(v, 1)
    if i < len(v):
        return v[:i]
    return v


def first_divergence(w1, w2):
    """First 1-based position where two words differ, or None if equal.

    Canonical forms make equality decidable, so the scan is bounded by the
    point after which both words are in lockstep periodic behavior.
    """
    if w1 == w2:
        return None
    bound = max(len(w1.prefix), len(w2.prefix)) + _lcm(len(w1.period), len(w2.period))
    for i in range(1, bound + 1):
        if w1.letter_at(i) != w2.letter_at(i):
            return i
    # Two ultimately periodic words agreeing past the common prefix plus one
    # lcm of the periods are equal, contradicting the canonical-form check.
    raise AssertionError("canonical forms differ but no divergence found")


def _lcm(a, b):
    import math

    return a * b // math.gcd(a, b)


def distance(w1, w2):
    """Cantor-style distance: 1/2^j with j the first divergence, 0 if equal."""
    j = first_divergence(w1, w2)
    if j is None:
        return 0.0
    return 0.5 ** j


def parse_word(text):
    """Parse the PREFIX(PERIOD)^w notation.

    Letters are single characters; a backslash escapes a literal parenthesis or
    backslash.  Examples: ``ab#(a)^w``, ``(ab)^w``, ``\\((a)^w``.
    """
    if not text.endswith("^w"):
        raise ValueError("word must end with ^w: %r" % text)
    body = text[:-2]
    letters = []          # list of (char, escaped-flag)
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body):
                raise ValueError("dangling escape in %r" % text)
            letters.append((body[i + 1], True))
            i += 2
        else:
            letters.append((ch, False))
            i += 1
    opens = [k for k, (ch, esc) in enumerate(letters) if ch == "(" and not esc]
    if len(opens) != 1 or not letters or letters[-1] != (")", False):
        raise ValueError("expected PREFIX(PERIOD)^w, got %r" % text)
    k = opens[0]
    prefix = "".join(ch for ch, _ in letters[:k])
    period = "".join(ch for ch, _ in letters[k + 1:-1])
    closes = [j for j, (ch, esc) in enumerate(letters) if ch == ")" and not esc]
    if closes != [len(letters) - 1]:
        raise ValueError("unbalanced parentheses in %r" % text)
    if not period:
        raise ValueError("empty period in %r" % text)
    return UPWord(prefix, period)


def format_word(w):
    """Inverse of parse_word on canonical words."""
    esc = lambda s: "".join("\\" + c if c in "()\\" else c for c in s)
    return "%s(%s)^w" % (esc(w.prefix), esc(w.period))
