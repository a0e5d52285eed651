"""Complete conjugacy invariant, the renormalization metric, and region
tagging of points of the parameter triangle.
"""

from __future__ import annotations

import enum
import functools
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import AmbiguousItineraryError, DomainError
from .kneading import (ABOVE, BELOW, DEFAULT_DEPTH, DEFAULT_WINDOW, EPS_C, KneadingInvariant, LmoParams,
                       Verdict, _itinerary, itineraries_batch, reliable_horizon, sequence_from_digits,
                       validate)
from .param import alpha_from_kplus, solve_beta
from .renorm import DEFAULT_MAX_STEPS, factorize, same_steps
from .seqcore import canonicalize, common_prefix_len

log = logging.getLogger(__name__)

# rotation numbers at beta = 1 are recognised up to this denominator
MAX_ROTATION_DENOMINATOR = 1000
# a prefix needs this many symbols left to be renormalized again
MIN_PREFIX = 8


class Region(enum.Enum):
    ROTATION = "rotation"
    PRIME_PERIODIC = "prime_periodic"
    PRIME_EXPANSIVE = "prime_expansive"
    RENORMALIZABLE = "renormalizable"
    UNDETECTED = "undetected"
    AMBIGUOUS = "ambiguous"

    def __str__(self) -> str:
        return self.value

    @property
    def classified(self) -> bool:
        return self not in (Region.UNDETECTED, Region.AMBIGUOUS)


@dataclass(frozen=True)
class ParamPoint:
    beta: float
    alpha: Union[float, Fraction]
    region: Region

    def __post_init__(self):
        if self.region is Region.ROTATION:
            if self.beta != 1 or not isinstance(self.alpha, Fraction):
                raise DomainError("rotation points need beta = 1 and a rational alpha")

    def __str__(self) -> str:
        if isinstance(self.alpha, Fraction):
            return f"({self.beta}, {self.alpha}) {self.region}"
        return f"({self.beta:.6f}, {self.alpha:.6f}) {self.region}"


@dataclass(frozen=True)
class InvariantSequence:
    points: tuple[ParamPoint, ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def zero_entropy(self) -> bool:
        return all(pt.beta == 1 for pt in self.points)


@dataclass(frozen=True)
class Distance:
    """``value = 2^-p (1 + 2^-splus + 2^-sminus)``; ``None`` counts stand for infinity."""

    p: Optional[int]
    splus: Optional[int]
    sminus: Optional[int]
    value: float

    def __float__(self) -> float:
        return self.value


def _require_expansive(K: KneadingInvariant) -> None:
    adm = validate(K)
    if adm.verdict is not Verdict.EXPANSIVE:
        raise DomainError(f"{K} is {adm.verdict} ({adm.witness}), expected Expansive")


def prime_point(K: KneadingInvariant, tol: float = 1e-12) -> ParamPoint:
    """Parameters of a prime expansive invariant."""
    beta = solve_beta(K, tol)
    region = Region.PRIME_PERIODIC if K.is_periodic else Region.PRIME_EXPANSIVE
    return ParamPoint(beta, alpha_from_kplus(K, beta), region)


def invariant_sequence(K: KneadingInvariant, max_steps: int = DEFAULT_MAX_STEPS,
                       tol: float = 1e-12) -> InvariantSequence:
    """The ordered parameter pairs classifying ``K`` up to conjugacy."""
    _require_expansive(K)
    fac = factorize(K, max_steps)
    points = []
    for W in fac.steps:
        if W.is_periodic:
            points.append(ParamPoint(1, W.rotation_number, Region.ROTATION))
        else:
            pt = prime_point(W.as_invariant(), tol)
            points.append(ParamPoint(pt.beta, pt.alpha, Region.PRIME_PERIODIC))
    if not fac.truncated:
        points.append(prime_point(fac.terminal, tol))
    return InvariantSequence(tuple(points), fac.truncated)


def conjugate(K1: KneadingInvariant, K2: KneadingInvariant) -> bool:
    """Expansive maps are conjugate iff their canonical invariants coincide."""
    _require_expansive(K1)
    _require_expansive(K2)
    return K1 == K2


def _pow2(n: Optional[int]) -> float:
    return 0.0 if n is None else math.ldexp(1.0, -n)


@functools.lru_cache(maxsize=4096)
def _formal_factorization(K: KneadingInvariant, max_steps: int):
    return factorize(K, max_steps, formal=True)


def distance(K1: KneadingInvariant, K2: KneadingInvariant,
             max_steps: int = DEFAULT_MAX_STEPS) -> Distance:
    """Renormalization metric between two maps.

    ``p`` counts the leading renormalization steps shared by both maps and
    ``s+``, ``s-`` the agreement of the two ``p``-fold quotients.  The
    factorization is formal (prefix constraints only) so inputs need only
    start with ``10`` / ``01``.
    """
    for K in (K1, K2):
        if K.prefix_problem() is not None:
            raise DomainError(f"{K}: {K.prefix_problem()}")
    if K1 == K2:
        return Distance(None, None, None, 0.0)
    f1 = _formal_factorization(K1, max_steps)
    f2 = _formal_factorization(K2, max_steps)
    p = same_steps(f1.steps, f2.steps)
    L1, L2 = f1.level(p), f2.level(p)
    sp = common_prefix_len(L1.kplus, L2.kplus)
    sm = common_prefix_len(L1.kminus, L2.kminus)
    value = math.ldexp(1.0 + _pow2(sp) + _pow2(sm), -p)
    return Distance(p, sp, sm, value)


# ---------------------------------------------------------------- regions

@dataclass(frozen=True)
class RegionResult:
    region: Region
    m: int = 0
    detail: str = ""

    def __str__(self) -> str:
        if self.region is Region.RENORMALIZABLE:
            return f"{self.region}({self.m})"
        return str(self.region)


def _rotation(alpha: float) -> RegionResult:
    rho = Fraction(alpha).limit_denominator(MAX_ROTATION_DENOMINATOR)
    if abs(float(rho) - alpha) <= 1e-12:
        return RegionResult(Region.ROTATION, 0, str(rho))
    return RegionResult(Region.UNDETECTED, 0, "irrational rotation")


def _prefix_renorm(kp: str, km: str) -> Optional[tuple[str, str]]:
    """Minimal ``(w+, w-)`` whose blocks tile both finite prefixes; returns the quotients."""
    n = min(len(kp), len(km))
    cap = n // 4
    best = None
    for r in range(2, cap + 1):
        if best is not None and r > best[0][0]:
            break
        wp = kp[:r]
        # w- follows w+ in k+, so l is bounded by the agreement of k+[r:] with k-
        top = min(cap, len(os.path.commonprefix([kp[r:r + cap], km[:cap]])))
        for l in range(2, top + 1):
            key = (max(r, l), r + l, r)
            if best is not None and key >= best[0]:
                break
            if km[l:l + r] != wp:
                continue
            wm = km[:l]
            qp = _tile(kp, wp, wm)
            qm = _tile(km, wp, wm) if qp else None
            if qp and qm and qp.startswith("10") and qm.startswith("01"):
                best = (key, qp, qm)
    return None if best is None else (best[1], best[2])


def _tile(s: str, wp: str, wm: str) -> Optional[str]:
    # greedy block parse; a trailing partial block must agree with its word
    out = []
    pos = 0
    while pos < len(s):
        word, sym = (wp, "1") if s[pos] == "1" else (wm, "0")
        chunk = s[pos:pos + len(word)]
        if not word.startswith(chunk):
            return None
        if len(chunk) == len(word):
            out.append(sym)
        pos += len(word)
    return "".join(out)


def _prefix_levels(kp: str, km: str, max_steps: int) -> int:
    m = 0
    while m < max_steps and min(len(kp), len(km)) >= MIN_PREFIX:
        found = _prefix_renorm(kp, km)
        if found is None:
            break
        kp, km = found
        m += 1
    return m


def _confirmed(k, digits: str, h: int, window: int) -> bool:
    # the repeat that fixed the period must lie inside the trusted digits
    return len(k.pre) + len(k.per) + window <= h and k.prefix(h) == digits[:h]


def classify_orbits(beta: float, alpha: float, d0: str, d1: str, first_hit: int,
                    window: int = DEFAULT_WINDOW, max_steps: int = DEFAULT_MAX_STEPS) -> RegionResult:
    """Region from the itineraries ``d0`` of 0 (from above) and ``d1`` of 1 (from below).

    A detected period that holds over the reliable part of both orbits goes
    through the exact pipeline.  Otherwise the reliable prefixes are tested
    for block structure directly.
    """
    depth = len(d0)
    horizon = reliable_horizon(beta, depth)
    # after a critical hit the orbit restarts exactly, so every digit is trustworthy
    h = depth if 0 <= first_hit < horizon else horizon
    k0 = sequence_from_digits(d0, window)
    k1 = sequence_from_digits(d1, window) if k0 is not None else None
    if k1 is not None and _confirmed(k0, d0, h, window) and _confirmed(k1, d1, h, window):
        K = KneadingInvariant(canonicalize("1" + k0.pre, k0.per), canonicalize("0" + k1.pre, k1.per))
        verdict = validate(K).verdict
        if first_hit >= 0 and verdict is Verdict.INVALID:
            raise AmbiguousItineraryError("critical-point hit produced an inadmissible invariant", first_hit)
        if verdict is Verdict.EXPANSIVE:
            fac = factorize(K, max_steps)
            if fac.depth:
                return RegionResult(Region.RENORMALIZABLE, fac.depth, str(K))
            region = Region.PRIME_PERIODIC if K.is_periodic else Region.PRIME_EXPANSIVE
            return RegionResult(region, 0, str(K))
    if horizon < 2 * MIN_PREFIX:
        return RegionResult(Region.UNDETECTED, 0, f"prefix {horizon}")
    m = _prefix_levels("1" + d0[:horizon], "0" + d1[:horizon], max_steps)
    if m:
        return RegionResult(Region.RENORMALIZABLE, m, f"prefix {horizon}")
    return RegionResult(Region.PRIME_EXPANSIVE, 0, f"prefix {horizon}")


def region_of(p: LmoParams, depth: int = DEFAULT_DEPTH, window: int = DEFAULT_WINDOW,
              eps: float = EPS_C, max_steps: int = DEFAULT_MAX_STEPS) -> RegionResult:
    """Region of ``T_{beta,alpha}`` in the triangle; ambiguous itineraries propagate."""
    if p.beta == 1.0:
        return _rotation(p.alpha)
    d0, h0 = _itinerary(p, 0.0, ABOVE, depth, eps)
    d1, h1 = _itinerary(p, 1.0, BELOW, depth, eps)
    return classify_orbits(p.beta, p.alpha, d0, d1, min(h0 + h1, default=-1), window, max_steps)


def _digits(row) -> str:
    return row.tobytes().translate(_ASCII).decode()


_ASCII = bytes.maketrans(b"\x00\x01", b"01")


def classify_cells(betas, alphas, depth: int = DEFAULT_DEPTH, window: int = DEFAULT_WINDOW,
                   eps: float = EPS_C, max_steps: int = DEFAULT_MAX_STEPS) -> list[RegionResult]:
    """:func:`region_of` over many cells with vectorised itineraries.

    Ambiguous cells are reported as :attr:`Region.AMBIGUOUS` instead of raising.
    """
    betas = [float(b) for b in betas]
    alphas = [float(a) for a in alphas]
    out: list[Optional[RegionResult]] = [None] * len(betas)
    todo = []
    for i, (b, a) in enumerate(zip(betas, alphas)):
        LmoParams(b, a)  # domain check
        if b == 1.0:
            out[i] = _rotation(a)
        else:
            todo.append(i)
    if todo:
        bs = [betas[i] for i in todo]
        als = [alphas[i] for i in todo]
        D0, H0 = itineraries_batch(bs, als, 0.0, ABOVE, depth, eps)
        D1, H1 = itineraries_batch(bs, als, 1.0, BELOW, depth, eps)
        for k, i in enumerate(todo):
            hits = [int(h) for h in (H0[k], H1[k]) if h >= 0]
            try:
                out[i] = classify_orbits(betas[i], alphas[i], _digits(D0[k]), _digits(D1[k]),
                                         min(hits, default=-1), window, max_steps)
            except AmbiguousItineraryError as exc:
                out[i] = RegionResult(Region.AMBIGUOUS, 0, f"hit at iterate {exc.index}")
    return out
