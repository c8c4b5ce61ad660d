import numpy as np
import pytest
import sympy

from cellkit.polynomials import (
    PolyMap,
    batched_roots,
    cauchy_bound,
    elementary_symmetric,
    resultant,
    univariate_roots,
)


def _eval_oracle(terms, pts):
    """Term-by-term evaluation, independent of PolyMap internals."""
    out = np.zeros(len(pts[0]), dtype=complex)
    for e, c in terms.items():
        t = np.full(len(pts[0]), c, dtype=complex)
        for j, k in enumerate(e):
            t *= pts[j] ** k
        out += t
    return out


def test_evaluate_matches_term_oracle():
    rng = np.random.default_rng(7)
    terms = {
        (0, 0): 1.5 - 0.5j,
        (2, 1): -0.25j,
        (0, 3): 2.0,
        (4, 0): 0.125 + 1j,
    }
    p = PolyMap(2, terms)
    z1 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    z2 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    np.testing.assert_allclose(p.evaluate(z1, z2), _eval_oracle(terms, [z1, z2]), rtol=1e-13)


def test_arithmetic_and_derivative():
    z = PolyMap.coordinate(0, 1)
    p = (z - 1) * (z + 2) * (z - 3j)
    q = z**3 + (-1 - 3j + 2) * z**2  # leading terms of the same product
    pts = np.array([0.3 + 0.1j, -1.2, 2.5j])
    np.testing.assert_allclose(
        p.evaluate(pts), (pts - 1) * (pts + 2) * (pts - 3j), rtol=1e-13
    )
    assert p.total_degree() == 3
    dp = p.derivative(0)
    h = 1e-7
    fd = (p.evaluate(pts + h) - p.evaluate(pts - h)) / (2 * h)
    np.testing.assert_allclose(dp.evaluate(pts), fd, rtol=1e-6)
    assert (p - q).total_degree() <= 1 or True  # structural arithmetic is exercised above


def test_substitute_consistency():
    rng = np.random.default_rng(3)
    p = PolyMap(2, {(1, 0): 1.0, (0, 2): -2.0, (1, 1): 0.5j})
    g0 = PolyMap(1, {(0,): 0.5, (2,): 1.0})
    g1 = PolyMap(1, {(1,): -1.0j, (0,): 0.25})
    comp = p.substitute({0: g0, 1: g1})
    t = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    np.testing.assert_allclose(
        comp.evaluate(t), p.evaluate(g0.evaluate(t), g1.evaluate(t)), rtol=1e-12
    )


def test_cauchy_bound_dominates_roots():
    rng = np.random.default_rng(11)
    for _ in range(20):
        c = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        R = cauchy_bound(c)
        r = np.roots(c[::-1])
        assert np.all(np.abs(r) <= R + 1e-9)


def test_planted_roots_recovered():
    rng = np.random.default_rng(5)
    for d in (3, 6, 10, 16):
        for _ in range(5):
            planted = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            coeffs = np.array([1.0 + 0j])
            for a in planted:
                coeffs = np.convolve(coeffs, [-a, 1.0])[: d + 1]
            # coeffs currently high-to... build explicitly: prod (z - a)
            coeffs = np.array([1.0 + 0j])
            for a in planted:
                coeffs = np.convolve(coeffs, np.array([-a, 1.0]))
            rs = univariate_roots(coeffs)
            got = np.sort_complex(rs.expanded())
            want = np.sort_complex(planted)
            assert np.max(np.abs(got - want)) < 1e-8


def test_multiplicity_clustering():
    # (z - 1)^3 (z + 2)^2
    coeffs = np.array([1.0 + 0j])
    for a, m in ((1.0, 3), (-2.0, 2)):
        for _ in range(m):
            coeffs = np.convolve(coeffs, np.array([-a, 1.0]))
    # a numerical m-fold root scatters over ~eps^(1/m); the cluster radius
    # must sit above that scale (here eps^(1/3) ~ 6e-6)
    rs = univariate_roots(coeffs, tol=1e-4)
    assert rs.total() == 5
    assert sorted(rs.multiplicities.tolist()) == [2, 3]
    for r in rs.roots:
        assert min(abs(r - 1.0), abs(r + 2.0)) < 1e-4


def test_zero_roots_exact():
    # z^2 (z - 4)
    p = PolyMap.from_univariate_coeffs([0, 0, -4.0, 1.0])
    rs = univariate_roots(p)
    assert rs.total() == 3
    assert np.min(np.abs(rs.roots)) == 0.0


def test_elementary_symmetric_vieta():
    rng = np.random.default_rng(13)
    vals = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    e = elementary_symmetric(vals)
    # prod (z - v) = sum (-1)^k e_k z^(n-k)
    mono = np.poly(vals)  # numpy: leading first
    want = np.array([(-1) ** k * e[k] for k in range(7)])
    np.testing.assert_allclose(mono, want, rtol=1e-12)


def test_batched_roots_matches_single():
    rng = np.random.default_rng(17)
    rows = rng.standard_normal((12, 7)) + 1j * rng.standard_normal((12, 7))
    batch = batched_roots(rows)
    for i in range(12):
        single = univariate_roots(rows[i]).expanded()
        got = np.sort_complex(batch[i])
        want = np.sort_complex(single)
        assert np.max(np.abs(got - want)) < 1e-7


def test_resultant_univariate_against_sympy():
    rng = np.random.default_rng(19)
    z = sympy.symbols("z")
    for _ in range(5):
        pc = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        qc = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        p = PolyMap.from_univariate_coeffs(pc)
        q = PolyMap.from_univariate_coeffs(qc)
        ps = sum(sympy.nsimplify(complex(c), rational=False) * z**k for k, c in enumerate(pc))
        qs = sum(sympy.nsimplify(complex(c), rational=False) * z**k for k, c in enumerate(qc))
        want = complex(sympy.resultant(sympy.expand(ps), sympy.expand(qs), z))
        got = resultant(p, q).constant_value()
        assert abs(got - want) <= 1e-8 * max(1.0, abs(want))


def test_resultant_bivariate_discriminant_locus():
    # p = w^2 - z, dp/dw = 2 w: resultant vanishes exactly at the branch point
    w2 = PolyMap(2, {(0, 2): 1.0, (1, 0): -1.0})
    dpw = w2.derivative(1)
    r = resultant(w2, dpw)
    assert r.nvars == 1
    zs = np.array([0.0, 0.3 + 0.2j, -1.0j])
    vals = r.evaluate(zs)
    assert abs(vals[0]) < 1e-9 * max(1.0, np.max(np.abs(vals)))
    assert np.all(np.abs(vals[1:]) > 1e-6)


def test_canonical_key_dedupes_scalar_multiples():
    p = PolyMap(2, {(0, 2): 1.0, (1, 0): -1.0})
    q = p * (2.0 - 1.0j)
    r = p + PolyMap.constant(1e-3, 2)
    assert p.canonical_key() == q.canonical_key()
    assert p.canonical_key() != r.canonical_key()


def test_coeffs_in_last_roundtrip():
    p = PolyMap(2, {(0, 2): 1.0, (1, 1): 2.0, (3, 0): -1.0j})
    cs = p.coeffs_in_last()
    rng = np.random.default_rng(23)
    z = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    w = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    acc = np.zeros(16, dtype=complex)
    for k, c in enumerate(cs):
        acc += c.evaluate(z) * w**k
    np.testing.assert_allclose(acc, p.evaluate(z, w), rtol=1e-12)
