import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperrotor.linearization import UnsupportedOrderError
from hyperrotor.measures import (
    complexity_fisher_renyi,
    complexity_fisher_shannon,
    complexity_lmc,
    disequilibrium,
    entropic_moment,
    fisher_closed,
    measure_report,
    renyi_entropy,
    renyi_power_entropy,
    tsallis_entropy,
)
from hyperrotor.quantum_state import HyperState
from hyperrotor.special_functions import DomainError

RHO10 = HyperState(3, (1, 0))
RHO00 = HyperState(3, (0, 0))


@st.composite
def states(draw, d_max=5, l_max=10):
    d = draw(st.integers(2, d_max))
    if d == 2:
        return HyperState(2, (draw(st.integers(-l_max, l_max)),))
    mu = [draw(st.integers(0, l_max))]
    for _ in range(d - 3):
        mu.append(draw(st.integers(0, mu[-1])))
    mu.append(draw(st.integers(-mu[-1], mu[-1])))
    return HyperState(d, mu)


class TestFisher:
    @pytest.mark.parametrize(
        "d,mu,expected",
        [(3, (1, 0), 8), (3, (0, 0), 0), (3, (5, 5), 10), (3, (5, -5), 10), (4, (1, 0, 0), 12), (2, (7,), 0), (6, (0, 0, 0, 0, 0), 0)],
    )
    def test_closed_form(self, d, mu, expected):
        r = fisher_closed(HyperState(d, mu))
        assert r.value == expected and r.method == "closed-form"

    def test_d3_reduces_to_4l_plus_2_minus_2m(self):
        for l in range(12):
            for m in range(l + 1):
                assert fisher_closed(HyperState(3, (l, m))).value == 4 * l * (l + 1) - 2 * m * (2 * l + 1)


class TestAnchors:
    def test_moments(self):
        assert disequilibrium(RHO10).value == pytest.approx(9 / (20 * math.pi), rel=1e-14)
        assert entropic_moment(RHO00, 5).value == pytest.approx((4 * math.pi) ** -4, rel=1e-14)

    def test_lmc(self):
        assert complexity_lmc(RHO10).value == pytest.approx(0.6 * math.exp(2 / 3), rel=1e-12)

    def test_fisher_shannon(self):
        expected = 8 * math.exp(2 * (math.log(4 * math.pi / 3) + 2 / 3) / 3) / (2 * math.pi * math.e)
        assert complexity_fisher_shannon(RHO10).value == pytest.approx(expected, rel=1e-12)

    def test_fisher_renyi(self):
        r2 = math.log(20 * math.pi / 9)
        j2 = math.exp(2 * r2 / 3) / (2 * math.pi * math.e)
        assert renyi_entropy(RHO10, 2).value == pytest.approx(r2, rel=1e-14)
        assert renyi_power_entropy(RHO10, 2).value == pytest.approx(j2, rel=1e-14)
        assert complexity_fisher_renyi(RHO10, 2).value == pytest.approx(8 * j2, rel=1e-14)

    def test_tsallis(self):
        assert tsallis_entropy(RHO10, 2).value == pytest.approx(1 - 9 / (20 * math.pi), rel=1e-14)


class TestOrders:
    def test_q1_rejected(self):
        with pytest.raises(ValueError, match="Shannon"):
            renyi_entropy(RHO10, 1)
        with pytest.raises(ValueError):
            tsallis_entropy(RHO10, 1.0)

    @pytest.mark.parametrize("q", [0, -0.5])
    def test_non_positive(self, q):
        with pytest.raises(DomainError):
            renyi_entropy(RHO10, q)
        with pytest.raises(DomainError):
            entropic_moment(RHO10, q)

    def test_path_selection(self):
        assert entropic_moment(RHO10, 2).method == "exact"
        assert entropic_moment(RHO10, 2.5).method == "quadrature"
        assert entropic_moment(RHO10, 2, path="quadrature").method == "quadrature"
        with pytest.raises(UnsupportedOrderError):
            entropic_moment(RHO10, 2.5, path="exact")
        with pytest.raises(ValueError):
            entropic_moment(RHO10, 2, path="fast")


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(states())
    def test_renyi_non_increasing(self, s):
        qs = [0.5, 0.9999, 1.0001, 1.5, 2, 3, 4]
        vals = [renyi_entropy(s, q).value for q in qs]
        for a, b in zip(vals, vals[1:]):
            assert b <= a + 1e-9

    @settings(max_examples=40, deadline=None)
    @given(states())
    def test_lmc_at_least_one(self, s):
        assert complexity_lmc(s).value >= 1 - 1e-10

    @settings(max_examples=30, deadline=None)
    @given(states(), st.sampled_from([0.5, 1.5, 2.0, 3.0]))
    def test_tsallis_renyi_relation(self, s, q):
        r = renyi_entropy(s, q).value
        t = tsallis_entropy(s, q).value
        assert t == pytest.approx(-math.expm1((1 - q) * r) / (q - 1), rel=1e-10, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(states())
    def test_mirror_invariance(self, s):
        m = s.mirrored()
        assert complexity_fisher_shannon(s).value == complexity_fisher_shannon(m).value
        assert complexity_lmc(s).value == complexity_lmc(m).value

    @pytest.mark.parametrize("s", [HyperState(2, (3,)), HyperState(2, (0,)), HyperState(4, (0, 0, 0)), HyperState(6, (0,) * 5)])
    def test_uniform(self, s):
        assert complexity_lmc(s).value == pytest.approx(1.0, abs=1e-12)
        assert complexity_fisher_shannon(s).value == 0.0
        assert complexity_fisher_renyi(s, 2).value == 0.0


class TestReport:
    def test_structure(self):
        rep = measure_report(RHO10, [1, 2, 2.5])
        d = rep.as_dict()
        assert set(d) == {"state", "fisher", "shannon", "renyi", "tsallis", "disequilibrium", "c_fs", "c_fr", "c_lmc"}
        assert set(d["renyi"]) == {"1", "2", "2.5"}
        assert d["fisher"]["value"] == 8.0
        assert d["c_fr"]["1"] == d["c_fs"]
        assert rep.converged
        for r in rep.results():
            assert set(r.as_dict()) >= {"value", "error", "method"}

    def test_forced_path(self):
        rep = measure_report(HyperState(4, (3, 2, 0)), [2, 3], path="quadrature")
        assert rep.renyi[2.0].method == "quadrature"
        exact = measure_report(HyperState(4, (3, 2, 0)), [2, 3])
        assert rep.renyi[3.0].value == pytest.approx(exact.renyi[3.0].value, rel=1e-10)
