import numpy as np
import pytest

from cellkit.polynomials import PolyMap
from cellkit.weierstrass import (
    SearchFailed,
    default_schedule,
    find_weierstrass,
    gamma_floor,
    haar_unitary,
    rotated_polynomial,
    verify_exact,
    verify_sampled,
)


def bivariate(terms):
    return PolyMap(2, {tuple(e): complex(c) for e, c in terms.items()})


def test_gamma_floor_values():
    assert gamma_floor(1) == pytest.approx(0.75)
    assert gamma_floor(2) == pytest.approx(1 - 1 / 16)
    floors = [gamma_floor(d) for d in range(1, 9)]
    assert floors == sorted(floors)


def test_haar_unitary_is_unitary():
    rng = np.random.default_rng(5)
    for _ in range(5):
        U = haar_unitary(3, rng)
        assert np.max(np.abs(U.matrix @ U.matrix.conj().T - np.eye(3))) < 1e-12


def test_rotated_polynomial_exact():
    P = bivariate({(1, 0): 1.0, (0, 2): 2.0})
    rng = np.random.default_rng(1)
    U = haar_unitary(2, rng)
    c = np.array([0.3, -0.1j])
    Q = rotated_polynomial(P, c, U)
    y = np.array([[0.2 + 0.1j, -0.4j]])
    x = c + (U.matrix @ y.T).T
    assert Q.evaluate(y[:, 0], y[:, 1])[0] == pytest.approx(
        P.evaluate(x[:, 0], x[:, 1])[0], abs=1e-12
    )


def test_zero_section_identity_works():
    P = bivariate({(0, 1): 1.0})  # roots at w = 0 always
    res = find_weierstrass([0, 0], 1.0, P, seed=0)
    assert res.attempts_used == 1
    assert res.margin > 0
    assert np.max(np.abs(res.unitary.matrix - np.eye(2))) < 1e-12


def test_degenerate_projection_needs_rotation():
    P = bivariate({(1, 0): 1.0})  # no dependence on the last variable
    res = find_weierstrass([0, 0], 1.0, P, seed=0)
    assert res.margin > 0
    assert verify_sampled(res, P, n_base=2000) > 0


def test_hyperbola_instance():
    P = bivariate({(1, 1): 1.0, (0, 0): -1 / 16})
    res = find_weierstrass([0, 0], 1.0, P, seed=3)
    assert res.gap >= 0.5
    m = verify_sampled(res, P, n_base=10000)
    assert m > 0
    r = np.hypot(res.base_radius, res.last_radius)
    assert r <= 1.0 + 1e-12
    assert min(res.radii) >= (1 - res.gap) * 1.0 - 1e-12


def test_sandwich_radii():
    P = bivariate({(0, 1): 1.0, (2, 0): 1.0})
    res = find_weierstrass([0, 0], 2.0, P, seed=1)
    assert min(res.radii) >= (1 - res.gap) * 2.0 - 1e-12
    assert res.base_radius ** 2 + res.last_radius ** 2 <= 4.0 + 1e-9


def test_random_degree6_success_rate():
    rng = np.random.default_rng(42)
    for i in range(12):
        terms = {}
        for a in range(4):
            for b in range(4):
                if a + b <= 6 and rng.random() < 0.5:
                    terms[(a, b)] = rng.standard_normal() + 1j * rng.standard_normal()
        if not terms:
            terms[(1, 0)] = 1.0
        P = bivariate(terms)
        res = find_weierstrass([0, 0], 1.0, P, seed=i)
        assert res.gap >= 0.5
        assert verify_sampled(res, P, n_base=2000, seed=100 + i) > 0


def test_exact_mode_low_degree():
    rng = np.random.default_rng(7)
    for i in range(6):
        terms = {}
        for a in range(4):
            for b in range(4):
                if a + b <= 3 and rng.random() < 0.6:
                    terms[(a, b)] = rng.standard_normal() + 1j * rng.standard_normal()
        if not terms:
            terms[(0, 1)] = 1.0
        P = bivariate(terms)
        res = find_weierstrass([0, 0], 1.0, P, seed=50 + i, gamma_schedule=[0.8, 0.7, 0.6, 0.5])
        assert verify_exact(res, P)


def test_schedule_shape():
    s = default_schedule(2)
    assert s == sorted(s, reverse=True)
    assert min(s) >= 0.5
    assert gamma_floor(2) in s


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        find_weierstrass([0, 0], 1.0, PolyMap(2, {(0, 0): 0.0}))
