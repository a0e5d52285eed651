"""Renormalization of kneading invariants: the *-product, the quotient
operator R, minimal renormalization search and full factorization.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DomainError, NotRenormalizableError
from .kneading import KneadingInvariant, Verdict, validate
from .seqcore import EPSeq, Word, canonicalize, common_prefix_len, is_cyclic_shift, one_frequency, shift, substitute

log = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 64


class Kind(enum.Enum):
    PERIODIC = "Periodic"
    NON_PERIODIC = "NonPeriodic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RenormStep:
    wplus: Word
    wminus: Word

    @property
    def kind(self) -> Kind:
        return Kind.PERIODIC if is_cyclic_shift(self.wplus, self.wminus) else Kind.NON_PERIODIC

    @property
    def is_periodic(self) -> bool:
        return self.kind is Kind.PERIODIC

    @property
    def rotation_number(self) -> Optional[Fraction]:
        """Frequency of 1 in ``w+``; only meaningful for periodic steps."""
        if not self.is_periodic:
            return None
        return one_frequency(canonicalize("", self.wplus))

    def as_invariant(self) -> KneadingInvariant:
        return KneadingInvariant.periodic(self.wplus, self.wminus)

    def __str__(self) -> str:
        return f"({self.wplus},{self.wminus})"


@dataclass(frozen=True)
class Factorization:
    steps: tuple[RenormStep, ...]
    terminal: KneadingInvariant
    truncated: bool = False
    levels: tuple[KneadingInvariant, ...] = field(default=(), compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def level(self, i: int) -> KneadingInvariant:
        """``R^i K``; ``level(0)`` is the factorized invariant itself."""
        return self.levels[i]

    def recompose(self) -> KneadingInvariant:
        return recompose(self.steps, self.terminal)


def star_product(W: RenormStep, K: KneadingInvariant) -> KneadingInvariant:
    """Substitute ``1 -> w+`` and ``0 -> w-`` in both sequences of ``K``."""
    return KneadingInvariant(
        substitute(K.kplus, W.wplus, W.wminus),
        substitute(K.kminus, W.wplus, W.wminus),
    )


def recompose(steps: Iterable[RenormStep], terminal: KneadingInvariant) -> KneadingInvariant:
    K = terminal
    for W in reversed(tuple(steps)):
        K = star_product(W, K)
    return K


def compose_words(outer: RenormStep, inner: RenormStep) -> RenormStep:
    """The single step equivalent to applying ``inner`` and then ``outer``."""
    table = {"1": outer.wplus, "0": outer.wminus}
    return RenormStep(
        "".join(table[c] for c in inner.wplus),
        "".join(table[c] for c in inner.wminus),
    )


def _matches_at(s: EPSeq, pos: int, word: Word) -> bool:
    pre, per = s.pre, s.per
    i = 0
    n = len(word)
    while i < n:
        if pos < len(pre):
            take = min(n - i, len(pre) - pos)
            if not pre.startswith(word[i:i + take], pos):
                return False
        else:
            off = (pos - len(pre)) % len(per)
            take = min(n - i, len(per) - off)
            if not per.startswith(word[i:i + take], off):
                return False
        i += take
        pos += take
    return True


def parse_blocks(s: EPSeq, wplus: Word, wminus: Word) -> Optional[EPSeq]:
    """Greedy parse of ``s`` into blocks ``w+`` / ``w-``; returns the block stream.

    The block at each position is forced by the next digit, so a parse, when
    it exists, is unique.
    """
    pre_len, per_len = len(s.pre), len(s.per)
    seen: dict[int, int] = {}
    blocks: list[str] = []
    pos = 0
    while True:
        if pos >= pre_len:
            state = (pos - pre_len) % per_len
            if state in seen:
                start = seen[state]
                return canonicalize("".join(blocks[:start]), "".join(blocks[start:]))
            seen[state] = len(blocks)
        if s[pos] == 1:
            word, sym = wplus, "1"
        else:
            word, sym = wminus, "0"
        if not _matches_at(s, pos, word):
            return None
        blocks.append(sym)
        pos += len(word)
        if pos > pre_len:
            pos = pre_len + (pos - pre_len) % per_len


def _parse_pair(K: KneadingInvariant, W: RenormStep) -> Optional[KneadingInvariant]:
    qp = parse_blocks(K.kplus, W.wplus, W.wminus)
    if qp is None or qp.prefix(2) != "10":
        return None
    qm = parse_blocks(K.kminus, W.wplus, W.wminus)
    if qm is None or qm.prefix(2) != "01":
        return None
    return KneadingInvariant(qp, qm)


def quotient(K: KneadingInvariant, W: RenormStep) -> KneadingInvariant:
    """``RK``: map the blocks ``w+ -> 1``, ``w- -> 0``."""
    RK = _parse_pair(K, W)
    if RK is None:
        raise NotRenormalizableError(f"{K} does not parse into blocks of {W}")
    return RK


def _default_bound(K: KneadingInvariant) -> int:
    return max(len(s.pre) + 2 * len(s.per) for s in K)


def candidate_pairs(K: KneadingInvariant, max_len: Optional[int] = None) -> list[tuple[int, int]]:
    """Word-length pairs ``(r, l)`` compatible with ``k+ = w+ w- ...`` and ``k- = w- w+ ...``,
    in search order: ``max(r, l)``, then ``r + l``, then ``r``.
    """
    L = max_len if max_len is not None else _default_bound(K)
    kp, km = K
    out = []
    for r in range(2, L + 1):
        # w- must be a prefix of k+ after w+
        agree = common_prefix_len(shift(kp, r), km)
        top = L if agree is None else min(agree, L)
        wplus = kp.prefix(r)
        for l in range(2, top + 1):
            if _matches_at(km, l, wplus):
                out.append((r, l))
    out.sort(key=lambda rl: (max(rl), rl[0] + rl[1], rl[0]))
    return out


def find_minimal_renorm(K: KneadingInvariant, max_len: Optional[int] = None,
                        formal: bool = False) -> Optional[tuple[RenormStep, KneadingInvariant]]:
    """Shortest word pair renormalizing ``K`` together with the quotient ``RK``.

    With ``formal=True`` the admissibility of ``K`` is not required and the
    candidate filters on ``W`` and ``RK`` are skipped; this is what the metric
    uses on inputs that only satisfy the prefix constraints.
    """
    if formal:
        if K.prefix_problem() is not None:
            raise DomainError(K.prefix_problem())
    elif validate(K).verdict is Verdict.INVALID:
        raise DomainError(f"inadmissible kneading invariant {K}")
    for r, l in candidate_pairs(K, max_len):
        W = RenormStep(K.kplus.prefix(r), K.kminus.prefix(l))
        RK = _parse_pair(K, W)
        if RK is None:
            continue
        if not formal:
            if validate(W.as_invariant()).verdict is Verdict.INVALID:
                log.debug("rejecting %s for %s: inadmissible words", W, K)
                continue
            if validate(RK).verdict is Verdict.INVALID:
                log.debug("rejecting %s for %s: inadmissible quotient", W, K)
                continue
        return W, RK
    return None


def factorize(K: KneadingInvariant, max_steps: int = DEFAULT_MAX_STEPS,
              formal: bool = False) -> Factorization:
    """Factor ``K = W_1 * ... * W_m * K_terminal`` by repeated minimal renormalization."""
    steps: list[RenormStep] = []
    levels = [K]
    current = K
    while True:
        if len(steps) >= max_steps:
            return Factorization(tuple(steps), current, truncated=True, levels=tuple(levels))
        found = find_minimal_renorm(current, formal=formal)
        if found is None:
            return Factorization(tuple(steps), current, levels=tuple(levels))
        W, current = found
        steps.append(W)
        levels.append(current)


def is_prime(K: KneadingInvariant) -> bool:
    return find_minimal_renorm(K) is None


def same_steps(a: Sequence[RenormStep], b: Sequence[RenormStep]) -> int:
    """Length of the longest common prefix of two step lists."""
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n
