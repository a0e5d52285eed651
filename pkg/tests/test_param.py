import math
import random

import numpy as np
import pytest

from lorenz_invariants.errors import DomainError, UnsupportedError
from lorenz_invariants.kneading import KneadingInvariant
from lorenz_invariants.param import (alpha_from_kminus, alpha_from_kplus, alpha_via_renorm, beta_star,
                                     kz_series, kz_value, periodic_words_identity, rotation_limit_alpha,
                                     solve_beta, spectral_radius, transition_matrix)
from lorenz_invariants.renorm import RenormStep, factorize
from lorenz_invariants.seqcore import EPSeq
from randinv import random_invariant

K = KneadingInvariant.parse

# real root of x^3 = x + 1
PLASTIC = 1.3247179572447460


def oracle_beta(Kx):
    # largest real root of the numerator polynomial, read off numpy.roots
    num = kz_series(Kx).numerator()
    roots = np.roots(num[::-1])
    zs = [r.real for r in roots if abs(r.imag) < 1e-7 and 0 < r.real < 1]
    return 1 / min(zs)


def oracle_alpha(s, beta, n=4000):
    # truncated series, no closed form
    return (beta - 1) * sum(s[i] * beta ** -(i + 1) for i in range(n))


@pytest.mark.parametrize("text", ["(10) (011)", "(100) (01)"])
def test_plastic_number(text):
    assert solve_beta(K(text)) == pytest.approx(PLASTIC, abs=1e-11)


def test_example_alphas():
    assert alpha_from_kplus(K("(10) (011)"), PLASTIC) == pytest.approx(0.4301597, abs=1e-7)
    assert alpha_from_kplus(K("(100) (01)"), PLASTIC) == pytest.approx(0.245122, abs=1e-6)
    # closed form beta / (beta + beta^2 + beta^3)
    b = PLASTIC
    assert alpha_from_kplus(K("(100) (01)"), b) == pytest.approx(b / (b + b * b + b ** 3), abs=1e-12)


def test_kz_series_is_exact():
    ser = kz_series(K("(10) (011)"))
    kp, km = K("(10) (011)")
    assert ser.coefficients(30) == [kp[i] - km[i] for i in range(30)]
    z = 0.6
    assert kz_value(K("(10) (011)"), z) == pytest.approx(ser(z), abs=1e-12)


def test_full_shift():
    assert solve_beta(K("1(0) 0(1)")) == pytest.approx(2.0, abs=1e-9)


def test_beta_against_polynomial_roots():
    rng = random.Random(5)
    for _ in range(100):
        Kx = random_invariant(rng, periodic=True, max_per=7)
        assert solve_beta(Kx) == pytest.approx(oracle_beta(Kx), abs=1e-8)


def test_alpha_against_truncated_series():
    rng = random.Random(6)
    for _ in range(100):
        Kx = random_invariant(rng)
        b = solve_beta(Kx)
        if b < 1.02:
            continue
        assert alpha_from_kplus(Kx, b) == pytest.approx(oracle_alpha(Kx.k0, b), abs=1e-10)
        assert alpha_from_kminus(Kx, b) == pytest.approx(alpha_from_kplus(Kx, b), abs=1e-9)


def test_renorm_recursion_and_beta_star():
    Kx = K("(100101) (0110)")
    fac = factorize(Kx)
    b = solve_beta(Kx)
    assert b == pytest.approx(PLASTIC ** 0.5, abs=1e-9)
    assert beta_star(fac, solve_beta(fac.terminal)) == pytest.approx(b, abs=1e-9)
    assert alpha_via_renorm(fac.steps, fac.terminal, 1 / b) == pytest.approx(alpha_from_kplus(Kx, b), abs=1e-12)


def test_beta_star_rejects_nonperiodic():
    with pytest.raises(UnsupportedError):
        beta_star([RenormStep("100", "01")], 1.3)


def test_words_identity():
    assert periodic_words_identity(RenormStep("10", "01"))
    assert periodic_words_identity(RenormStep("100", "010"))
    with pytest.raises(DomainError):
        periodic_words_identity(RenormStep("100", "01"))


EXPECTED_A1 = [[0, 1, 1], [1, 0, 0], [0, 1, 0]]
EXPECTED_A2 = [[0, 1, 0], [0, 0, 1], [1, 1, 0]]


@pytest.mark.parametrize("text,expected", [("(10) (011)", EXPECTED_A1), ("(100) (01)", EXPECTED_A2)])
def test_transition_matrices(text, expected):
    M = transition_matrix(K(text))
    assert M.tolist() == expected
    eig = max(abs(np.linalg.eigvals(np.array(expected, float))))
    assert spectral_radius(M) == pytest.approx(eig, abs=1e-9)


def test_matrix_radius_matches_beta_on_random_periodic():
    rng = random.Random(8)
    for _ in range(60):
        Kx = random_invariant(rng, periodic=True, max_per=7)
        M = transition_matrix(Kx)
        assert spectral_radius(M) == pytest.approx(solve_beta(Kx), abs=1e-6)


def test_matrix_rejects_nonperiodic():
    with pytest.raises(UnsupportedError, match="requires purely periodic invariant"):
        transition_matrix(K("1(0) 0(1)"))


def test_rotation_limit():
    a = EPSeq.parse("(01)")
    for k in range(1, 7):
        b = 1 + 10.0 ** -k
        assert rotation_limit_alpha(a, b) == pytest.approx(1 / (b + 1), abs=1e-12)


def test_solve_beta_requires_expansive():
    with pytest.raises(DomainError):
        solve_beta(K("(10) (01)"))


def test_double_root_is_found():
    # K(z) touches zero at its smallest root without changing sign
    Kx = K("10010(01) 01(10010)")
    assert solve_beta(Kx) == pytest.approx(oracle_beta(Kx), abs=1e-8)
