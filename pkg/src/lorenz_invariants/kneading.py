"""Kneading invariants, their admissibility test, and
itineraries of linear mod one maps ``T(x) = beta*x + alpha mod 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AmbiguousItineraryError, DomainError, ParseError
from .seqcore import EPSeq, canonicalize, lex_compare, parse_epseq, shift

EPS_C = 1e-9
DEFAULT_DEPTH = 4096
DEFAULT_WINDOW = 32

ABOVE = "above"
BELOW = "below"


class Verdict(enum.Enum):
    EXPANSIVE = "Expansive"
    ROTATIONAL = "Rotational"
    INVALID = "Invalid"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class KneadingInvariant:
    """The pair ``(k+, k-)`` of one-sided itineraries of the critical point."""

    kplus: EPSeq
    kminus: EPSeq

    @classmethod
    def parse(cls, text: str) -> "KneadingInvariant":
        return parse_invariant(text)

    @classmethod
    def periodic(cls, wplus: str, wminus: str) -> "KneadingInvariant":
        """``(wplus^inf, wminus^inf)``."""
        return cls(canonicalize("", wplus), canonicalize("", wminus))

    def __str__(self) -> str:
        return f"{self.kplus} {self.kminus}"

    def __iter__(self):
        return iter((self.kplus, self.kminus))

    @property
    def k0(self) -> EPSeq:
        """Itinerary of 0, ``sigma(k+)``."""
        return shift(self.kplus, 1)

    @property
    def k1(self) -> EPSeq:
        """Itinerary of 1, ``sigma(k-)``."""
        return shift(self.kminus, 1)

    @property
    def is_periodic(self) -> bool:
        return self.kplus.is_periodic and self.kminus.is_periodic

    def prefix_problem(self) -> Optional[str]:
        if self.kplus.prefix(2) != "10":
            return "k+ must start 10"
        if self.kminus.prefix(2) != "01":
            return "k- must start 01"
        return None


def parse_invariant(text: str) -> KneadingInvariant:
    """Parse ``"K+ K-"``, two whitespace-separated ``PRE(PER)`` literals."""
    parts = text.split()
    if len(parts) != 2:
        raise ParseError(f"expected two sequence literals, got {len(parts)}", 0)
    offset = text.index(parts[1], text.index(parts[0]) + len(parts[0]))
    kp = parse_epseq(parts[0])
    try:
        km = parse_epseq(parts[1])
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (at", 1)[0], offset + exc.position) from None
    return KneadingInvariant(kp, km)


@dataclass(frozen=True)
class Witness:
    n: int
    which: str  # "k+" or "k-"
    relation: str

    def __str__(self) -> str:
        return self.relation


@dataclass(frozen=True)
class Admissibility:
    verdict: Verdict
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.EXPANSIVE


def validate(K: KneadingInvariant) -> Admissibility:
    """Check ``s(k+) <= s^n(k+) < s(k-)`` and ``s(k+) < s^n(k-) <= s(k-)`` for all n.

    Only the distinct shifts of each eventually periodic sequence need checking.
    """
    problem = K.prefix_problem()
    if problem is not None:
        return Admissibility(Verdict.INVALID, Witness(0, "k+" if "k+" in problem else "k-", problem))
    lo, hi = K.k0, K.k1
    rotational: Optional[Witness] = None
    orbits = [("k+", K.kplus.orbit()), ("k-", K.kminus.orbit())]
    for n in range(max(len(o) for _, o in orbits)):
        for name, orbit in orbits:
            if n >= len(orbit):
                continue
            x = orbit[n]
            c_lo, c_hi = lex_compare(lo, x), lex_compare(x, hi)
            term = f"sigma^{n}({name})"
            if c_lo > 0:
                return Admissibility(Verdict.INVALID, Witness(n, name, f"{term} < sigma(k+)"))
            if c_hi > 0:
                return Admissibility(Verdict.INVALID, Witness(n, name, f"{term} > sigma(k-)"))
            if rotational is None:
                if name == "k+" and c_hi == 0:
                    rotational = Witness(n, name, f"{term} = sigma(k-)")
                elif name == "k-" and c_lo == 0:
                    rotational = Witness(n, name, f"{term} = sigma(k+)")
    if rotational is not None:
        return Admissibility(Verdict.ROTATIONAL, rotational)
    return Admissibility(Verdict.EXPANSIVE)


@dataclass(frozen=True)
class LmoParams:
    """Parameters of ``T(x) = beta*x + alpha mod 1`` with ``(beta, alpha)`` in the triangle."""

    beta: float
    alpha: float

    def __post_init__(self):
        if not (1.0 <= self.beta <= 2.0):
            raise DomainError(f"beta={self.beta} outside [1, 2]")
        if not (-1e-12 <= self.alpha <= 2.0 - self.beta + 1e-12):
            raise DomainError(f"alpha={self.alpha} outside [0, 2-beta]")

    @property
    def critical_point(self) -> float:
        return (1.0 - self.alpha) / self.beta

    def __call__(self, x: float) -> float:
        y = self.beta * x + self.alpha
        if x > self.critical_point:
            y -= 1.0
        return min(max(y, 0.0), 1.0)


def _itinerary(p: LmoParams, x: float, side: str, depth: int, eps: float):
    if side not in (ABOVE, BELOW):
        raise ValueError(f"side must be {ABOVE!r} or {BELOW!r}")
    beta, alpha = p.beta, p.alpha
    c = p.critical_point
    out = []
    hits = []
    for i in range(depth):
        if abs(x - c) <= eps:
            # one-sided limit through c: above lands on 0+, below on 1-
            hits.append(i)
            if side == ABOVE:
                out.append("1")
                x = 0.0
            else:
                out.append("0")
                x = 1.0
        elif x < c:
            out.append("0")
            x = min(beta * x + alpha, 1.0)
        else:
            out.append("1")
            x = max(beta * x + alpha - 1.0, 0.0)
    return "".join(out), hits


def itinerary(p: LmoParams, x: float, side: str = ABOVE, depth: int = DEFAULT_DEPTH,
              eps: float = EPS_C) -> str:
    """First ``depth`` symbols of the itinerary of ``x`` (symbol of ``x`` itself first).

    Iterates within ``eps`` of the critical point are resolved as exact hits of
    ``c`` approached from ``side``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    return _itinerary(p, x, side, depth, eps)[0]


def itineraries_batch(betas, alphas, x0: float, side: str, depth: int, eps: float = EPS_C):
    """Vectorised :func:`itinerary` over many parameter pairs.

    Returns ``(digits, first_hit)``: a ``uint8`` array of shape ``(n, depth)``
    and the index of the first critical hit per row (-1 if none).
    """
    betas = np.asarray(betas, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    c = (1.0 - alphas) / betas
    x = np.full(betas.shape, float(x0))
    digits = np.empty(betas.shape + (depth,), dtype=np.uint8)
    first_hit = np.full(betas.shape, -1, dtype=np.int64)
    reset = 0.0 if side == ABOVE else 1.0
    hit_symbol = 1 if side == ABOVE else 0
    for i in range(depth):
        hit = np.abs(x - c) <= eps
        upper = x >= c
        sym = np.where(hit, hit_symbol, upper).astype(np.uint8)
        digits[..., i] = sym
        np.copyto(first_hit, i, where=hit & (first_hit < 0))
        nxt = betas * x + alphas - upper
        x = np.where(hit, reset, np.clip(nxt, 0.0, 1.0))
    return digits, first_hit


def detect_period(digits: str, window: int = DEFAULT_WINDOW) -> Optional[tuple[int, int]]:
    """Find the eventual period of a finite digit stream by window matching.

    Returns ``(start, period)`` for the earliest position ``start + period`` at
    which a length-``window`` block repeats an earlier block, or ``None``.
    """
    n = len(digits) - window + 1
    if n < 2:
        return None
    if window <= 62:
        arr = np.frombuffer(digits.encode(), dtype=np.uint8) - ord("0")
        weights = np.left_shift(np.uint64(1), np.arange(window - 1, -1, -1, dtype=np.uint64))
        view = np.lib.stride_tricks.sliding_window_view(arr.astype(np.uint64), window)
        keys = (view * weights).sum(axis=1)
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        earlier = first[inverse.ravel()]
        repeats = np.nonzero(earlier < np.arange(n))[0]
        if repeats.size == 0:
            return None
        j = int(repeats[0])
        i = int(earlier[j])
        return i, j - i
    seen: dict[str, int] = {}
    for j in range(n):
        key = digits[j:j + window]
        if key in seen:
            return seen[key], j - seen[key]
        seen[key] = j
    return None


def sequence_from_digits(digits: str, window: int = DEFAULT_WINDOW) -> Optional[EPSeq]:
    found = detect_period(digits, window)
    if found is None:
        return None
    i, per = found
    return canonicalize(digits[:i], digits[i:i + per])


def kneading_from_params(p: LmoParams, depth: int = DEFAULT_DEPTH,
                         match_window: int = DEFAULT_WINDOW,
                         eps: float = EPS_C) -> Optional[KneadingInvariant]:
    """Kneading invariant of ``T_{beta,alpha}``, or ``None`` if no period is detected.

    ``k+ = 1 k(0)`` and ``k- = 0 k(1)`` with ``k(0)`` followed from above
    and ``k(1)`` from below.

    Raises :class:`AmbiguousItineraryError` when an orbit was resolved through
    a near-hit of ``c`` and the result is not an admissible invariant.
    """
    if depth < 2 * match_window:
        raise ValueError("depth must be at least twice the match window")
    d0, hits0 = _itinerary(p, 0.0, ABOVE, depth, eps)
    d1, hits1 = _itinerary(p, 1.0, BELOW, depth, eps)
    return _assemble(d0, d1, match_window, min(hits0 + hits1, default=-1))


def _assemble(d0: str, d1: str, window: int, first_hit: int) -> Optional[KneadingInvariant]:
    k0 = sequence_from_digits(d0, window)
    k1 = sequence_from_digits(d1, window)
    if k0 is None or k1 is None:
        return None
    K = KneadingInvariant(canonicalize("1" + k0.pre, k0.per), canonicalize("0" + k1.pre, k1.per))
    if first_hit >= 0 and validate(K).verdict is Verdict.INVALID:
        raise AmbiguousItineraryError("critical-point hit produced an inadmissible invariant", first_hit)
    return K


def reliable_horizon(beta: float, depth: int) -> int:
    """Number of leading itinerary symbols not swamped by float error growth."""
    if beta <= 1.0:
        return depth
    return max(1, min(depth, int(12.0 / math.log10(beta))))
