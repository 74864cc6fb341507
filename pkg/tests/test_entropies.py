import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperrotor.entropies import (
    QuadratureSpec,
    ScalarResult,
    entropic_moment_quadrature,
    fisher_numeric,
    shannon_entropy,
)
from hyperrotor.linearization import entropic_moment_exact
from hyperrotor.measures import fisher_closed
from hyperrotor.quantum_state import HyperState

# 40-digit references from an independent mpmath integration of |Y|^2
SHANNON_REF = {
    (10, 3): 2.120652660890816105066261894933697665244,
    (5, 0): 2.004577699071424258700246772680532160001,
    (20, 20): 1.375790414819881596302368075175072025091,
    (30, 29): 1.438656732527418780638073050474408393654,
}


class TestSpecs:
    @pytest.mark.parametrize(
        "kw", [dict(initial_nodes=4), dict(max_nodes=64), dict(rel_tol=0.0), dict(refinement="bisect")]
    )
    def test_quadrature_spec_validation(self, kw):
        with pytest.raises(ValueError):
            QuadratureSpec(**kw)

    def test_scalar_result(self):
        r = ScalarResult(1, 0, "exact")
        assert r.as_dict() == {"value": 1.0, "error": 0.0, "method": "exact"}
        assert ScalarResult(1.0, 0.1, "quadrature", converged=False).as_dict()["converged"] is False
        with pytest.raises(ValueError):
            ScalarResult(1.0, 0.0, "guess")
        with pytest.raises(ValueError):
            ScalarResult(1.0, -1.0, "exact")


class TestMomentsQuadrature:
    @pytest.mark.parametrize(
        "d,mu,q,ref",
        [
            (3, (10, 3), 2.5, 0.06458874661071122061258772696246944240664),
            (3, (6, 0), 2.5, 0.1440558496585161649913260967766041592274),
            (4, (3, 1, 0), 1.5, 0.3889941011167482187103278600177044000331),
            (3, (80, 0), 2, 0.340808385671796191119070601130113927391),
        ],
    )
    def test_references(self, d, mu, q, ref):
        r = entropic_moment_quadrature(HyperState(d, mu), q)
        assert r.method == "quadrature" and r.converged
        assert r.value == pytest.approx(ref, rel=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(
        d=st.integers(3, 5),
        l=st.integers(0, 12),
        q=st.integers(2, 4),
        data=st.data(),
    )
    def test_agrees_with_exact(self, d, l, q, data):
        mu = [l]
        for _ in range(d - 3):
            mu.append(data.draw(st.integers(0, mu[-1])))
        mu.append(data.draw(st.integers(-mu[-1], mu[-1])))
        s = HyperState(d, mu)
        assert entropic_moment_quadrature(s, q).value == pytest.approx(entropic_moment_exact(s, q).linear, rel=1e-10)

    def test_normalisation(self):
        for mu in [(0, 0), (7, 2), (40, 40), (80, 1)]:
            assert entropic_moment_quadrature(HyperState(3, mu), 1.0).value == pytest.approx(1.0, abs=1e-12)

    def test_non_convergence_is_flagged(self):
        spec = QuadratureSpec(initial_nodes=8, max_nodes=16, rel_tol=1e-15)
        r = entropic_moment_quadrature(HyperState(3, (40, 3)), 2.5, spec)
        assert not r.converged
        assert r.abs_error > 0

    def test_order_domain(self):
        with pytest.raises(ValueError):
            entropic_moment_quadrature(HyperState(3, (1, 0)), 0.0)


class TestShannon:
    def test_closed_forms(self):
        assert shannon_entropy(HyperState(3, (0, 0))).value == pytest.approx(math.log(4 * math.pi), rel=1e-14)
        assert shannon_entropy(HyperState(3, (1, 0))).value == pytest.approx(
            math.log(4 * math.pi / 3) + 2 / 3, rel=1e-13
        )
        assert shannon_entropy(HyperState(2, (5,))).value == pytest.approx(math.log(2 * math.pi))

    @pytest.mark.parametrize("lm", sorted(SHANNON_REF))
    def test_references(self, lm):
        r = shannon_entropy(HyperState(3, lm))
        assert r.value == pytest.approx(SHANNON_REF[lm], rel=1e-11)
        assert r.abs_error < 1e-9

    def test_error_never_zero(self):
        assert shannon_entropy(HyperState(3, (1, 0))).abs_error > 0

    def test_bounded_by_uniform(self):
        # no density on S^(D-1) beats the uniform one
        for d, mu in [(3, (6, 2)), (4, (3, 3, -1)), (5, (2, 1, 1, 0))]:
            s = HyperState(d, mu)
            area = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
            assert shannon_entropy(s).value < math.log(area)


class TestFisherNumeric:
    @pytest.mark.parametrize(
        "d,mu,expected",
        [(3, (1, 0), 8), (3, (2, 1), 14), (4, (1, 0, 0), 12), (4, (3, 2, 1), 44), (5, (3, 2, 1, -1), 54), (5, (2, 2, 0, 0), 40)],
    )
    def test_values(self, d, mu, expected):
        r = fisher_numeric(HyperState(d, mu))
        assert r.value == pytest.approx(expected, rel=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(l=st.integers(0, 15), m=st.integers(-15, 15))
    def test_matches_closed_form_d3(self, l, m):
        if abs(m) > l:
            return
        s = HyperState(3, (l, m))
        assert fisher_numeric(s).value == pytest.approx(fisher_closed(s).value, rel=1e-9, abs=1e-9)

    def test_needs_polar_angle(self):
        with pytest.raises(ValueError):
            fisher_numeric(HyperState(2, (1,)))
