"""Finite binary words and eventually periodic binary sequences.

Words are plain ``str`` objects over the alphabet ``"01"``.  An
:class:`EPSeq` is the infinite stream ``pre + per + per + ...`` kept in a
canonical form so that equality of streams is equality of dataclasses.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import MalformedSequenceError, ParseError

Word = str

_LITERAL = re.compile(r"^([01]*)\(([01]*)\)$")
_DROP_BINARY = str.maketrans("", "", "01")


def check_word(w: Word) -> Word:
    if w.translate(_DROP_BINARY):
        raise MalformedSequenceError(f"not a binary word: {w!r}")
    return w


def primitive_root(w: Word) -> Word:
    """Shortest ``u`` with ``w == u * k``."""
    n = len(w)
    # the first nontrivial occurrence of w inside w+w gives the root length
    k = (w + w).find(w, 1)
    return w[:k] if 0 < k < n else w


def is_cyclic_shift(u: Word, v: Word) -> bool:
    """True iff ``v`` is a rotation of ``u`` (so ``u^inf`` and ``v^inf`` share an orbit)."""
    return len(u) == len(v) and v in u + u


@dataclass(frozen=True, order=False)
class EPSeq:
    """Eventually periodic binary sequence ``pre (per)^inf``.

    Always construct through :func:`canonicalize` / :meth:`EPSeq.make`;
    the raw constructor trusts its arguments.
    """

    pre: Word
    per: Word

    @classmethod
    def make(cls, pre: Word, per: Word) -> "EPSeq":
        return canonicalize(pre, per)

    @classmethod
    def parse(cls, text: str) -> "EPSeq":
        return parse_epseq(text)

    def __str__(self) -> str:
        return f"{self.pre}({self.per})"

    def __repr__(self) -> str:
        return f"EPSeq({str(self)!r})"

    @property
    def is_periodic(self) -> bool:
        return not self.pre

    def prefix(self, n: int) -> Word:
        """First ``n`` digits of the stream."""
        if n <= len(self.pre):
            return self.pre[:n]
        rest = n - len(self.pre)
        reps = -(-rest // len(self.per))
        return self.pre + (self.per * reps)[:rest]

    def __getitem__(self, i: int) -> int:
        # 0-based, matching str indexing; digit_at is the 1-based form
        if i < 0:
            raise IndexError(i)
        if i < len(self.pre):
            return int(self.pre[i])
        return int(self.per[(i - len(self.pre)) % len(self.per)])

    def shift(self, n: int = 1) -> "EPSeq":
        return shift(self, n)

    def orbit(self) -> list["EPSeq"]:
        """All distinct shifts ``sigma^n(self)``, n >= 0, in order of first appearance."""
        out = [shift(self, n) for n in range(len(self.pre))]
        out.extend(EPSeq("", self.per[k:] + self.per[:k]) for k in range(len(self.per)))
        return out

    def __lt__(self, other: "EPSeq") -> bool:
        return lex_compare(self, other) < 0

    def __le__(self, other: "EPSeq") -> bool:
        return lex_compare(self, other) <= 0

    def __gt__(self, other: "EPSeq") -> bool:
        return lex_compare(self, other) > 0

    def __ge__(self, other: "EPSeq") -> bool:
        return lex_compare(self, other) >= 0


def canonicalize(pre: Word, per: Word) -> EPSeq:
    """Canonical form: primitive period, shortest preperiod.

    >>> canonicalize("10", "10")
    EPSeq('(10)')
    >>> canonicalize("100", "010")
    EPSeq('10(001)')
    """
    check_word(pre)
    check_word(per)
    if not per:
        raise MalformedSequenceError("empty period")
    per = primitive_root(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1] + per[:-1]
    return EPSeq(pre, per)


def parse_epseq(text: str) -> EPSeq:
    """Parse the ``PRE(PER)`` literal, e.g. ``1000110001(110)``."""
    s = text.strip()
    for pos, ch in enumerate(s):
        if ch not in "01()":
            raise ParseError(f"unexpected character {ch!r}", pos)
    m = _LITERAL.match(s)
    if not m:
        raise ParseError(f"expected PRE(PER), got {s!r}", _first_bad_paren(s))
    if not m.group(2):
        raise ParseError("empty period", s.index("("))
    return canonicalize(m.group(1), m.group(2))


def _first_bad_paren(s: str) -> int:
    opened = s.find("(")
    if opened < 0:
        return len(s)
    closed = s.find(")", opened)
    if closed < 0:
        return len(s)
    return closed + 1 if closed + 1 < len(s) else opened


def digit_at(s: EPSeq, i: int) -> int:
    """``i``-th digit, 1-based."""
    if i < 1:
        raise IndexError("digit index is 1-based")
    return s[i - 1]


def shift(s: EPSeq, n: int = 1) -> EPSeq:
    if n < 0:
        raise ValueError("shift count must be >= 0")
    if n <= len(s.pre):
        # a suffix of a canonical preperiod keeps the form canonical
        return EPSeq(s.pre[n:], s.per)
    k = (n - len(s.pre)) % len(s.per)
    return EPSeq("", s.per[k:] + s.per[:k])


def agreement_horizon(a: EPSeq, b: EPSeq) -> int:
    """Digits after which agreeing streams agree forever."""
    return len(a.pre) + len(b.pre) + math.lcm(len(a.per), len(b.per))


def common_prefix_len(a: EPSeq, b: EPSeq) -> Optional[int]:
    """Number of leading digits shared by ``a`` and ``b``; ``None`` when equal."""
    if a == b:
        return None
    bound = agreement_horizon(a, b)
    n = 64
    while True:
        n = min(n, bound)
        x, y = a.prefix(n), b.prefix(n)
        if x != y:
            return next(i for i, (p, q) in enumerate(zip(x, y)) if p != q)
        if n == bound:
            # canonical forms differ yet streams agree to the horizon
            raise AssertionError(f"non-canonical EPSeq pair {a!r}, {b!r}")
        n *= 4


def lex_compare(a: EPSeq, b: EPSeq) -> int:
    """-1, 0 or 1 according to the lexicographic order of the streams."""
    x, y = a.prefix(64), b.prefix(64)
    if x != y:
        return -1 if x < y else 1
    k = common_prefix_len(a, b)
    if k is None:
        return 0
    return -1 if a[k] < b[k] else 1


def one_frequency(s: EPSeq) -> Fraction:
    """Limit frequency of the digit 1."""
    return Fraction(s.per.count("1"), len(s.per))


def substitute(s: EPSeq, one: Word, zero: Word) -> EPSeq:
    """Replace every 1 by ``one`` and every 0 by ``zero``."""
    table = {"1": one, "0": zero}
    return canonicalize(
        "".join(table[c] for c in s.pre), "".join(table[c] for c in s.per)
    )
