"""Parameters (beta, alpha) of prime kneading invariants.

beta is ``1/z`` for the smallest root ``z`` in (0, 1) of the kneading series
``K(z) = sum_{i>=1} (b_i - a_i) z^(i-1)`` with ``b = k+`` and ``a = k-``.
alpha comes from the itinerary of 0 (or of 1) summed in base beta.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, NoRootError, UnsupportedError
from .kneading import KneadingInvariant, Verdict, validate
from .renorm import Factorization, Kind, RenormStep
from .seqcore import EPSeq, lex_compare

DEFAULT_TOL = 1e-12
SCAN_STEP = 1e-3
# |K(z)| below this at a local minimum counts as a double root
TOUCH_TOL = 1e-10


@dataclass(frozen=True)
class RationalSeries:
    """``head(z) + z^len(head) * tail(z) / (1 - z^len(tail))`` with integer coefficients."""

    head: tuple[int, ...]
    tail: tuple[int, ...]

    @property
    def tail_shift(self) -> int:
        return len(self.head)

    @property
    def tail_period(self) -> int:
        return len(self.tail)

    def coefficient(self, i: int) -> int:
        if i < len(self.head):
            return self.head[i]
        return self.tail[(i - len(self.head)) % len(self.tail)]

    def coefficients(self, n: int) -> list[int]:
        return [self.coefficient(i) for i in range(n)]

    def numerator(self) -> list[int]:
        """Coefficients (lowest degree first) of the numerator over ``1 - z^P``."""
        H, P = len(self.head), len(self.tail)
        out = [0] * (H + P)
        for i, c in enumerate(self.head):
            out[i] += c
            out[i + P] -= c
        for j, c in enumerate(self.tail):
            out[H + j] += c
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def denominator(self) -> list[int]:
        return [1] + [0] * (len(self.tail) - 1) + [-1]

    def __call__(self, z):
        H, P = len(self.head), len(self.tail)
        head = _horner(self.head, z)
        tail = _horner(self.tail, z)
        if isinstance(z, np.ndarray):
            return head + z ** H * tail / -np.expm1(P * np.log(z))
        return head + z ** H * tail / (-math.expm1(P * math.log(z))) if z > 0 else float(self.coefficient(0))

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        H = max(len(self.head), len(other.head))
        P = math.lcm(len(self.tail), len(other.tail))
        return RationalSeries(
            tuple(self.coefficient(i) - other.coefficient(i) for i in range(H)),
            tuple(self.coefficient(i) - other.coefficient(i) for i in range(H, H + P)),
        )


def _horner(coeffs: Sequence[int], z: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def digit_series(s: EPSeq) -> RationalSeries:
    """``sum_{i>=0} s_i z^i`` for the digits of ``s`` (0-based)."""
    return RationalSeries(tuple(int(c) for c in s.pre), tuple(int(c) for c in s.per))


def kz_series(K: KneadingInvariant) -> RationalSeries:
    """Kneading series ``K(z)`` as an exact rational function."""
    return digit_series(K.kplus) - digit_series(K.kminus)


def kz_value(K: KneadingInvariant, z: float) -> float:
    """``K(z)`` evaluated sequence by sequence (avoids the lcm of the two periods)."""
    return digit_series(K.kplus)(z) - digit_series(K.kminus)(z)


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def smallest_root(K: KneadingInvariant, tol: float = DEFAULT_TOL) -> float:
    """Smallest root of ``K(z)`` in (0, 1): grid scan, then bisection."""
    f = lambda z: kz_value(K, z)  # noqa: E731
    n = int(round(1.0 / SCAN_STEP))
    # close in on z = 1 for entropies near zero
    grid = np.concatenate([np.arange(1, n) / n, 1.0 - 10.0 ** -np.arange(4, 13)])
    vals = kz_value(K, grid)
    hits = np.flatnonzero(vals <= 0.0)
    end = int(hits[0]) if hits.size else len(grid)
    touch = _touching_root(K, grid[:end + 1], vals[:end + 1], tol)
    if touch is not None:
        return touch
    if not hits.size:
        raise NoRootError(f"K(z) has no sign change in (0, 1) for {K}")
    z = float(grid[end])
    if vals[end] == 0.0:
        return z
    return _bisect(f, float(grid[end - 1]) if end else 0.0, z, tol)


def _touching_root(K: KneadingInvariant, grid, vals, tol: float) -> Optional[float]:
    # a root of even multiplicity shows up as a grid local minimum that never
    # goes negative; it is a simple root of the numerator's derivative
    lows = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
    if not lows.size:
        return None
    num = kz_series(K).numerator()
    deriv = [i * c for i, c in enumerate(num)][1:]
    d = lambda z: _horner(deriv, z)  # noqa: E731
    for j in lows:
        lo, hi = float(grid[j - 1]), float(grid[j + 1])
        if d(lo) >= 0 or d(hi) <= 0:
            continue
        z = _bisect(d, lo, hi, tol)
        if abs(kz_value(K, z)) <= TOUCH_TOL:
            return z
    return None


def solve_beta(K: KneadingInvariant, tol: float = DEFAULT_TOL) -> float:
    """Slope ``beta = 1/z`` of the linear model of an expansive invariant."""
    if validate(K).verdict is not Verdict.EXPANSIVE:
        raise DomainError(f"solve_beta needs an expansive invariant, got {K}")
    return 1.0 / smallest_root(K, tol)


def scaled_digit_sum(s: EPSeq, beta: float) -> float:
    """``(beta - 1) * sum_{i>=1} s_i beta^-i`` in closed form."""
    if beta <= 1.0:
        raise DomainError(f"beta={beta} must exceed 1")
    bm1 = beta - 1.0
    x = 1.0 / beta
    H, P = len(s.pre), len(s.per)
    head = sum(x ** (i + 1) for i, c in enumerate(s.pre) if c == "1")
    tail = sum(x ** (j + 1) for j, c in enumerate(s.per) if c == "1")
    # (beta-1)/(1-beta^-P) without cancellation near beta = 1
    geom = bm1 / -math.expm1(-P * math.log1p(bm1))
    return bm1 * head + x ** H * tail * geom


def alpha_from_kplus(K: KneadingInvariant, beta: float) -> float:
    """``alpha = (beta-1) sum k_i(0) beta^-i`` with ``k(0) = sigma(k+)``."""
    return scaled_digit_sum(K.k0, beta)


def alpha_from_kminus(K: KneadingInvariant, beta: float) -> float:
    """``alpha = (beta-1) (sum k_i(1) beta^-i - 1)`` with ``k(1) = sigma(k-)``."""
    return scaled_digit_sum(K.k1, beta) - (beta - 1.0)


def rotation_limit_alpha(a: EPSeq, beta: float) -> float:
    """alpha(beta) for a rotational itinerary ``a`` of 0; tends to its rotation number as beta -> 1."""
    return scaled_digit_sum(a, beta)


def word_poly(w: str, z: float) -> float:
    return _horner([int(c) for c in w], z)


def _check_equal_periodic(W: RenormStep) -> int:
    if W.kind is not Kind.PERIODIC:
        raise UnsupportedError(f"{W} is not a periodic renormalization")
    if len(W.wplus) != len(W.wminus):
        raise UnsupportedError(f"{W}: words of unequal length")
    return len(W.wplus)


def _mean_kplus(steps: Sequence[RenormStep], RK: KneadingInvariant, z: float) -> float:
    # (K+(z) + K-(z)) / 2, which equals K+(z) at the root
    if not steps:
        return 0.5 * (digit_series(RK.kplus)(z) + digit_series(RK.kminus)(z))
    W = steps[0]
    n = _check_equal_periodic(W)
    zn = z ** n
    return (1.0 - z) * _mean_kplus(steps[1:], RK, zn) + word_poly(W.wminus, z) / (1.0 - zn)


def alpha_via_renorm(steps: Union[RenormStep, Sequence[RenormStep]], RK: KneadingInvariant,
                     z: float) -> float:
    """alpha of ``W_1 * ... * W_m * RK`` from the quotient data alone.

    Uses ``K+(z) = (1-z)/2 (RK+(z^n) + RK-(z^n)) + w-(z)/(1-z^n)`` level by
    level and then ``alpha = (1/z - 1)(K+(z) - 1)``; ``z`` must be ``1/beta``
    of the composed invariant.
    """
    if isinstance(steps, RenormStep):
        steps = (steps,)
    steps = tuple(steps)
    for W in steps:
        _check_equal_periodic(W)
    return (1.0 / z - 1.0) * (_mean_kplus(steps, RK, z) - 1.0)


def beta_star(factors: Union[Factorization, Sequence[RenormStep]], beta_terminal: float) -> float:
    """``beta_terminal ** (1 / prod l_i)`` for a chain of periodic renormalizations."""
    steps = factors.steps if isinstance(factors, Factorization) else tuple(factors)
    prod = 1
    for W in steps:
        if W.kind is not Kind.PERIODIC:
            raise UnsupportedError(f"not uniformly linearizable: {W} is a non-periodic renormalization")
        prod *= _check_equal_periodic(W)
    return beta_terminal ** (1.0 / prod)


def periodic_words_identity(W: RenormStep) -> bool:
    """True iff ``w+(z) - w-(z) == 1 - z`` as integer polynomials."""
    if W.kind is not Kind.PERIODIC:
        raise DomainError(f"{W} is not a periodic renormalization")
    n = max(len(W.wplus), len(W.wminus))
    diff = [int(a) - int(b) for a, b in zip(W.wplus.ljust(n, "0"), W.wminus.ljust(n, "0"))]
    return diff == [1, -1] + [0] * (n - 2)


@dataclass(frozen=True)
class TransitionMatrix:
    entries: np.ndarray
    labels: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()


def transition_matrix(K: KneadingInvariant) -> TransitionMatrix:
    """Markov partition matrix of a purely periodic expansive invariant.

    Partition points are the orbit points of ``k+`` and ``k-`` in lexicographic
    order.  The gap ``[k-, k+]`` collapses to the critical point; every other
    gap between consecutive points is a state, and state ``i`` leads to state
    ``j`` when the shifted endpoints of ``i`` enclose ``j``.
    """
    if not K.is_periodic:
        raise UnsupportedError("transition matrix requires purely periodic invariant")
    if validate(K).verdict is not Verdict.EXPANSIVE:
        raise DomainError(f"transition matrix needs an expansive invariant, got {K}")
    points = sorted(set(K.kplus.orbit()) | set(K.kminus.orbit()), key=functools.cmp_to_key(lex_compare))
    index = {p: i for i, p in enumerate(points)}
    gaps = [(i, i + 1) for i in range(len(points) - 1) if points[i] != K.kminus]
    state_of = {g[0]: s for s, g in enumerate(gaps)}
    A = np.zeros((len(gaps), len(gaps)), dtype=np.int64)
    for s, (i, j) in enumerate(gaps):
        lo, hi = index[points[i].shift(1)], index[points[j].shift(1)]
        for k in range(lo, hi):
            if k in state_of:
                A[s, state_of[k]] = 1
    labels = tuple(f"[{points[i]},{points[j]}]" for i, j in gaps)
    return TransitionMatrix(A, labels)


def spectral_radius(M: Union[TransitionMatrix, np.ndarray], tol: float = DEFAULT_TOL,
                    max_iter: int = 100_000) -> float:
    """Perron root by power iteration on ``M + I`` (aperiodic even when ``M`` is not).

    The min and max of ``(Bv)_i / v_i`` bracket the root for positive ``v``;
    iteration stops once the bracket is within ``tol``.
    """
    A = np.asarray(M.entries if isinstance(M, TransitionMatrix) else M, dtype=float)
    B = A + np.eye(A.shape[0])
    v = np.ones(A.shape[0])
    hi = float("inf")
    for _ in range(max_iter):
        w = B @ v
        # transient states decay away; bracket over the live ones
        live = v > 1e-30
        ratios = w[live] / v[live]
        lo, hi = ratios.min(), ratios.max()
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi) - 1.0
        v = w / w.max()
    # reducible matrices may never close the lower bound; the upper one converges
    return hi - 1.0
