import math
import random
from fractions import Fraction

import pytest

from lorenz_invariants.classify import (ParamPoint, Region, classify_cells, conjugate, distance,
                                        invariant_sequence, region_of)
from lorenz_invariants.errors import DomainError
from lorenz_invariants.kneading import KneadingInvariant, LmoParams
from lorenz_invariants.param import alpha_from_kplus, solve_beta
from lorenz_invariants.renorm import RenormStep, star_product
from randinv import random_invariant, random_periodic_step

K = KneadingInvariant.parse
PLASTIC = 1.3247179572447460

F = K("(10001) (01100)")
G = K("1000110001(110) 0110001100(01)")
H = K("10001(100) 01100(01)")


def test_prime_sequence():
    seq = invariant_sequence(K("(10) (011)"))
    (pt,) = seq.points
    assert pt.region is Region.PRIME_PERIODIC
    assert pt.beta == pytest.approx(1.3247, abs=5e-4)
    assert pt.alpha == pytest.approx(0.4302, abs=5e-5)


@pytest.mark.parametrize("text,rho", [("(100101) (0110)", Fraction(1, 2)),
                                      ("(100010010) (010100)", Fraction(1, 3))])
def test_composite_sequences(text, rho):
    rot, term = invariant_sequence(K(text)).points
    assert rot == ParamPoint(1, rho, Region.ROTATION)
    assert term.region is Region.PRIME_PERIODIC
    assert (term.beta, term.alpha) == pytest.approx((PLASTIC, 0.245122), abs=1e-6)


def test_full_shift_is_prime_expansive():
    (pt,) = invariant_sequence(K("1(0) 0(1)")).points
    assert pt.region is Region.PRIME_EXPANSIVE
    assert pt.beta == pytest.approx(2.0)


def test_nonperiodic_step_emits_its_parameters():
    W = RenormStep("10", "011")
    seq = invariant_sequence(star_product(W, K("(100) (01)")))
    first = seq.points[0]
    assert first.region is Region.PRIME_PERIODIC
    assert first.beta == pytest.approx(PLASTIC, abs=1e-9)
    assert first.alpha == pytest.approx(0.4301597, abs=1e-6)


def test_rotation_points_need_rational_alpha():
    with pytest.raises(DomainError):
        ParamPoint(1, 0.5, Region.ROTATION)


def test_sequence_prepends_periodic_step():
    rng = random.Random(21)
    for _ in range(50):
        Kx = random_invariant(rng)
        W = random_periodic_step(rng, prime=True)
        inner = invariant_sequence(Kx).points
        outer = invariant_sequence(star_product(W, Kx)).points
        assert outer[0] == ParamPoint(1, W.rotation_number, Region.ROTATION)
        assert outer[1:] == inner


def test_entropy_zero_only_with_rotations():
    seq = invariant_sequence(K("(100101) (0110)"))
    assert not seq.zero_entropy


def test_conjugacy():
    K1 = K("(10) (011)")
    assert conjugate(K1, K("10(10) (011)"))
    assert not conjugate(K1, K("(100) (01)"))
    assert not conjugate(K("(100101) (0110)"), K("(100010010) (010100)"))
    with pytest.raises(DomainError):
        conjugate(K1, K("(10) (01)"))


def test_metric_examples():
    d = distance(F, G)
    assert (d.p, d.splus, d.sminus) == (0, 11, 12)
    assert d.value == 1 + 2 ** -11 + 2 ** -12
    d = distance(F, H)
    assert (d.p, d.splus, d.sminus) == (1, 3, 3)
    assert d.value == 0.625
    assert distance(F, F).value == 0.0


def test_metric_rejects_bad_prefix():
    with pytest.raises(DomainError):
        distance(F, K("(01) (10)"))


def precise(text):
    Kx = K(text)
    b = solve_beta(Kx)
    return LmoParams(b, alpha_from_kplus(Kx, b))


def test_regions():
    assert region_of(LmoParams(1.0, 0.5)).region is Region.ROTATION
    assert region_of(LmoParams(1.0, 0.5)).detail == "1/2"
    assert region_of(precise("(10) (011)")).region is Region.PRIME_PERIODIC
    assert region_of(LmoParams(2.0, 0.0)).region is Region.PRIME_EXPANSIVE
    r = region_of(LmoParams(1.150964, 0.418876))
    assert (r.region, r.m) == (Region.RENORMALIZABLE, 1)
    r = region_of(precise("(100101) (0110)"))
    assert (r.region, r.m) == (Region.RENORMALIZABLE, 1)


def test_irrational_rotation_is_undetected():
    assert region_of(LmoParams(1.0, (math.sqrt(5) - 1) / 2)).region is Region.UNDETECTED


def test_batch_matches_single_cells():
    rng = random.Random(9)
    cells = [(b, rng.uniform(0, 2 - b)) for b in [rng.uniform(1.05, 1.95) for _ in range(40)]]
    cells += [(1.0, 0.25), (2.0, 0.0)]
    batch = classify_cells([c[0] for c in cells], [c[1] for c in cells])
    for (b, a), r in zip(cells, batch):
        assert r == region_of(LmoParams(b, a))
