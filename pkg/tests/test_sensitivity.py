import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_mobius, rand_poly, rand_unitary
from mobius_sense import _kernels_py, kernels
from mobius_sense.eigensolve import chordal_distance, eigentriples, eigenvectors
from mobius_sense.mobius import (
    Mobius2x2,
    ProjPoint,
    cayley_plus,
    identity,
    map_eigenvalue,
    mobius_transform,
    push_eigenvalue,
    reversal_matrix,
)
from mobius_sense.polycore import HomMatrixPolynomial, poly_inf_norm
from mobius_sense.sensitivity import (
    S_k,
    Y_k,
    Z_k,
    analyze,
    analyze_backward,
    backward_error,
    bounds_backward,
    bounds_backward_sharp,
    bounds_cond,
    bounds_cond_sharp,
    cond_at,
    cond_stewart_sun,
    illcond_profile,
    quotient_backward,
    quotient_exact,
    rho_factors,
)

SCHEMES = ("a", "p", "r")


def scalar_pencil(lam):
    return HomMatrixPolynomial.scalar([-lam, 1])


class TestConditionNumber:
    def test_alpha_beta_at_zero(self):
        P = HomMatrixPolynomial.scalar([0, 1, 0])
        t = eigenvectors(P, ProjPoint(0, 1))
        assert cond_stewart_sun(P, t, "a") == pytest.approx(1)

    @pytest.mark.parametrize("lam", [0, 0.5, 2 - 1j, 30])
    def test_scalar_pencil_closed_form(self, lam):
        P = scalar_pencil(lam)
        t = eigenvectors(P, ProjPoint(lam, 1))
        expected = (1 + abs(lam)) / (1 + abs(lam) ** 2)
        assert cond_stewart_sun(P, t, "a") == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("lam", [0.3, 1 + 1j, -4])
    def test_perturbation_consistency(self, lam):
        rng = np.random.default_rng(7)
        eps = 1e-6
        kappa = (1 + abs(lam)) / (1 + abs(lam) ** 2)
        th = rng.uniform(0, 2 * np.pi, (10_000, 2))
        e = eps * np.exp(1j * th)
        moved = max(chordal_distance(ProjPoint(lam, 1), ProjPoint(lam - e0, 1 + e1)) for e0, e1 in e)
        assert 0.2 * kappa * eps <= moved <= 1.05 * kappa * eps

    def test_representative_invariance(self, rng):
        P = rand_poly(rng, 3, 3)
        for t in eigentriples(P):
            s = complex(*rng.standard_normal(2)) * 5
            for sch in SCHEMES:
                k1 = cond_stewart_sun(P, t, sch)
                k2 = cond_at(P, t.value.scaled(s), t.x, t.y, sch)
                assert k2 == pytest.approx(k1, rel=1e-12)

    def test_polynorm_scaling(self, rng):
        P = rand_poly(rng, 3, 2)
        for t in eigentriples(P):
            assert cond_stewart_sun(P, t, "p") == pytest.approx(
                poly_inf_norm(P) * cond_stewart_sun(P, t, "a"), rel=1e-14)

    def test_zero_weight_sum_is_inf(self):
        P = HomMatrixPolynomial([np.eye(2), np.zeros((2, 2)), np.diag([1.0, 2.0])])
        t = eigenvectors(P, ProjPoint(1, 0))
        assert cond_at(P, ProjPoint(1, 0), t.x, t.y, "r", weights=[1.0, 0.0, 0.0]) == math.inf

    def test_infinite_record_is_flagged(self):
        # B_0 = B_1 = 0: coefficientwise weights vanish on every eigenvalue at (0, 1)
        P = HomMatrixPolynomial([np.zeros((1, 1)), np.zeros((1, 1)), np.ones((1, 1))])
        recs = analyze(identity(), P, "r")
        assert recs and all(r.kappa_P == math.inf and not r.simple_flag for r in recs)


class TestBackwardError:
    def test_alpha_beta(self):
        P = HomMatrixPolynomial.scalar([0, 1, 0])
        e = 1e-3 + 2e-3j
        val = backward_error(P, [1.0], "right", ProjPoint(e, 1), "a")
        assert val == pytest.approx(abs(e) / (1 + abs(e) + abs(e) ** 2), rel=1e-13)

    def test_exact_pair(self, rng):
        P = rand_poly(rng, 4, 2)
        for t in eigentriples(P):
            assert backward_error(P, t.x, "right", t.value, "p") <= 1e-8
            assert backward_error(P, t.y, "left", t.value, "p") <= 1e-8

    def test_representative_invariance(self, rng):
        P = rand_poly(rng, 3, 3)
        x = rng.standard_normal(3) + 0j
        v = ProjPoint(0.3, 1 - 1j)
        for sch in SCHEMES:
            a = backward_error(P, x, "right", v, sch)
            b = backward_error(P, x, "right", v.scaled(-2 + 7j), sch)
            assert b == pytest.approx(a, rel=1e-12)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            backward_error(scalar_pencil(1), [0.0], "right", ProjPoint(1, 1), "a")

    def test_bad_side(self):
        with pytest.raises(ValueError):
            backward_error(scalar_pencil(1), [1.0], "up", ProjPoint(1, 1), "a")


class TestQuotients:
    def test_identity(self, rng):
        P = rand_poly(rng, 3, 3)
        for t in eigentriples(P):
            for sch in SCHEMES:
                assert quotient_exact(identity(), P, P, t.value, sch) == pytest.approx(1)
                assert quotient_backward(identity(), P, P, t.value, sch) == pytest.approx(1)

    def test_direct_ratio(self, rng):
        for _ in range(20):
            P = rand_poly(rng, int(rng.integers(1, 5)), int(rng.integers(1, 6)))
            A = rand_unitary(rng)
            Pt = mobius_transform(A, P)
            for t in eigentriples(P):
                if t.flagged:
                    continue
                tt = eigenvectors(Pt, map_eigenvalue(A, t.value))
                for sch in SCHEMES:
                    ratio = cond_stewart_sun(Pt, tt, sch) / cond_stewart_sun(P, t, sch)
                    assert quotient_exact(A, P, Pt, t.value, sch) == pytest.approx(ratio, rel=1e-6)

    def test_representative_invariance(self, rng):
        P = rand_poly(rng, 2, 4)
        A = rand_mobius(rng)
        Pt = mobius_transform(A, P)
        v = ProjPoint(0.2 - 1j, 0.7)
        for sch in SCHEMES:
            q = quotient_exact(A, P, Pt, v, sch)
            assert quotient_exact(A, P, Pt, v.scaled(1e3j), sch) == pytest.approx(q, rel=1e-12)
            qb = quotient_backward(A, P, Pt, v, sch)
            assert quotient_backward(A, P, Pt, v.scaled(-1e-3), sch) == pytest.approx(qb, rel=1e-12)

    def test_backward_direct_ratio_any_vector(self, rng):
        P = rand_poly(rng, 3, 3)
        A = rand_mobius(rng)
        Pt = mobius_transform(A, P)
        g = ProjPoint(0.4 + 0.1j, -1.2)
        pushed = push_eigenvalue(A, g)
        for _ in range(3):
            x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            for sch in SCHEMES:
                for side in ("right", "left"):
                    r = backward_error(P, x, side, pushed, sch) / backward_error(Pt, x, side, g, sch)
                    assert quotient_backward(A, P, Pt, g, sch) == pytest.approx(r, rel=1e-10)

    def test_absolute_quadratic_window(self, rng):
        P = rand_poly(rng, 3, 2)
        A = rand_mobius(rng)
        Pt = mobius_transform(A, P)
        for t in eigentriples(P):
            q = quotient_exact(A, P, Pt, t.value, "a")
            assert A.inv_norm_inf / (12 * A.norm_inf) <= q <= 12 * A.inv_norm_inf / A.norm_inf
            assert 1 / (6 * abs(A.det)) <= q <= 6 / abs(A.det)


class TestRho:
    def test_unit(self):
        assert rho_factors(HomMatrixPolynomial([np.eye(2)] * 3)) == (1.0, True)

    def test_large_middle(self):
        P = HomMatrixPolynomial([np.eye(2), 1e3 * np.eye(2), np.eye(2)])
        assert rho_factors(P)[0] == pytest.approx(1e3)

    def test_undefined(self):
        P = HomMatrixPolynomial([np.zeros((2, 2)), np.eye(2)])
        rho, ok = rho_factors(P)
        assert not ok and rho == math.inf
        lo, hi = bounds_cond(identity(), P, P, "r")
        assert math.isnan(lo) and math.isnan(hi)


class TestBounds:
    def test_constants(self):
        assert S_k(2) == 12 and Z_k(2) == 72 and Y_k(2) == 18
        assert Z_k(3) == 4 * 16 * 3

    def test_polynorm_cayley_quadratic(self, rng):
        P = rand_poly(rng, 2, 2)
        lo, hi = bounds_cond(cayley_plus(), P, P, "p")
        assert lo == pytest.approx(1 / 144) and hi == pytest.approx(144)

    def test_absolute_reversal_pencil(self, rng):
        P = rand_poly(rng, 2, 1)
        assert bounds_cond(reversal_matrix(), P, P, "a") == pytest.approx((0.5, 2))
        assert bounds_backward(reversal_matrix(), P, P, "a") == pytest.approx((0.5, 2))

    def test_backward_polynorm(self, rng):
        P = rand_poly(rng, 2, 2)
        assert bounds_backward(cayley_plus(), P, P, "p") == pytest.approx((1 / 72, 72))

    @pytest.mark.parametrize("k", [2, 3, 6])
    def test_sharp_identity(self, rng, k):
        P = rand_poly(rng, 2, k)
        lo, hi = bounds_cond_sharp(identity(), ProjPoint(0.3, 1), k, P, P, "a")
        assert lo == pytest.approx(1 / (2 * (k + 1))) and hi == pytest.approx(2 * (k + 1))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 7), scheme=st.sampled_from(SCHEMES))
    def test_sandwich(self, seed, k, scheme):
        rng = np.random.default_rng(seed)
        P = rand_poly(rng, 2, k)
        A = rand_mobius(rng, cond_max=1e3)
        Pt = mobius_transform(A, P)
        for r in analyze(A, P, scheme, Pt):
            assert r.sandwich_ok()
        for r in analyze_backward(A, P, scheme, Pt):
            assert r.sandwich_ok()

    def test_backward_sharp_absolute(self, rng):
        A = rand_mobius(rng)
        P = rand_poly(rng, 2, 3)
        g = ProjPoint(1, 0.2)
        lo, hi = bounds_backward_sharp(A, g, 3, P, P, "a")
        r = g.norm(np.inf) / push_eigenvalue(A, g).norm(np.inf)
        assert lo == pytest.approx(r**3 / 4) and hi == pytest.approx(4 * r**3)


class TestProfile:
    def test_quadratic_is_inverse_det(self, rng):
        A = rand_mobius(rng)
        P = rand_poly(rng, 2, 2)
        for v in (ProjPoint(1, 0), ProjPoint(0.3, 2j)):
            assert illcond_profile(A, v, 2, P, P)["a"] == pytest.approx(1 / abs(A.det))

    def test_identity(self, rng):
        P = rand_poly(rng, 2, 3)
        prof = illcond_profile(identity(), ProjPoint(1, 2), 3, P, P)
        assert prof["a"] == pytest.approx(1) and prof["p"] == pytest.approx(1)

    def test_envelope(self, rng):
        for _ in range(10):
            k = int(rng.integers(1, 5))
            P = rand_poly(rng, 2, k)
            A = rand_mobius(rng)
            Pt = mobius_transform(A, P)
            for t in eigentriples(P):
                pred = illcond_profile(A, t.value, k, P, Pt)["a"]
                q = quotient_exact(A, P, Pt, t.value, "a")
                f = 2.0 * (k + 1) if k > 1 else 2.0
                assert pred / f <= q <= pred * f


def test_records_match_between_backends(rng, monkeypatch):
    P = rand_poly(rng, 3, 3)
    A = rand_mobius(rng)
    ref = analyze(A, P, "r")
    for name in ("mobius_coeff_matrix", "horner_hom", "abs_power_sum"):
        monkeypatch.setattr(kernels, name, getattr(_kernels_py, name))
    pure = analyze(A, P, "r")
    assert len(ref) == len(pure)
    for a, b in zip(ref, pure):
        assert b.q_exact == pytest.approx(a.q_exact, rel=1e-10)
        assert b.kappa_P == pytest.approx(a.kappa_P, rel=1e-8)
