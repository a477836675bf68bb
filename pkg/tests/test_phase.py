import numpy as np
import pytest

from oscdecay import phase as ph
from oscdecay.errors import DomainError, HypothesisError


def test_power_sum_orders_and_constants():
    p = ph.power_sum([(1, 4), (1, 2)], dimension=1)
    assert (p.m1, p.m2) == (2.0, 4.0)
    assert p.terms == ((1.0, 2.0), (1.0, 4.0))
    e = p.ellipticity
    assert e.d1 == 4.0 and e.d2p == 2.0
    assert e.d1 * p.r0 ** (p.m2 - 1) <= e.d2 * p.R0 ** (p.m1 - 1)


@pytest.mark.parametrize("terms", [[], [(1, 1)], [(1, 2), (1, 2)], [(-1, 2), (1, 4)], [(1, 2), (0, 4)]])
def test_power_sum_rejects_bad_terms(terms):
    with pytest.raises(HypothesisError):
        ph.power_sum(terms)


def test_radii_must_be_ordered():
    with pytest.raises(HypothesisError):
        ph.pure_power(2, r0=2.0, R0=1.0)


def test_monomial_requires_odd_degree():
    assert ph.monomial_odd_1d(3).degree == 3
    for k in (2, 1, 4.5):
        with pytest.raises(HypothesisError):
            ph.monomial_odd_1d(k)


def test_eval_grad_hessian_match_finite_differences():
    p = ph.power_sum([(1, 2), (0.5, 3)], dimension=2)
    xi = np.array([0.7, -1.1])
    h = 1e-6
    g = ph.grad_phase(p, xi)
    fd = np.array([(ph.eval_phase(p, xi + h * e) - ph.eval_phase(p, xi - h * e)) / (2 * h)
                   for e in np.eye(2)])
    assert np.allclose(g, fd, rtol=1e-7)
    H = np.array([[(ph.grad_phase(p, xi + h * e)[j] - ph.grad_phase(p, xi - h * e)[j]) / (2 * h)
                   for j in range(2)] for e in np.eye(2)])
    assert ph.hessian_det(p, xi) == pytest.approx(np.linalg.det(H), rel=1e-6)


def test_derivatives_undefined_at_origin():
    p = ph.pure_power(2.5, dimension=2)
    assert ph.eval_phase(p, [0.0, 0.0]) == 0.0
    with pytest.raises(DomainError):
        ph.grad_phase(p, [0.0, 0.0])


def test_dict_round_trip():
    for p in (ph.power_sum([(2, 4), (1, 2)], 3), ph.pure_power(2.5, 2, 3.0), ph.monomial_odd_1d(5)):
        q = ph.from_dict(p.to_dict())
        assert q.to_dict() == p.to_dict()
        assert q.terms == p.terms


def test_ellipticity_holds_for_power_sum():
    rep = ph.verify_ellipticity(ph.power_sum([(1, 2), (1, 3)], dimension=2))
    assert rep.holds, rep.violations[:3]
    # single power: gradient ratio is exactly m * A on every shell
    rep = ph.verify_ellipticity(ph.pure_power(3, dimension=3, coefficient=2.0))
    assert rep.outer["gradient_min"] == pytest.approx(6.0)
    assert rep.outer["gradient_max"] == pytest.approx(6.0)


def test_ellipticity_flags_degenerate_phase():
    # a(xi) = xi_1^2 + xi_2^4 has a degenerate Hessian direction at large |xi|
    val = lambda x: x[..., 0] ** 2 + x[..., 1] ** 4
    grad = lambda x: np.stack([2 * x[..., 0], 4 * x[..., 1] ** 3], axis=-1)

    def hess(x):
        out = np.zeros(x.shape + (2,))
        out[..., 0, 0] = 2
        out[..., 1, 1] = 12 * x[..., 1] ** 2
        return out

    p = ph.custom(val, grad, hess, 2, 2, 4)
    rep = ph.verify_ellipticity(p)
    assert not rep.holds
    assert any(v["quantity"] in ("gradient", "hessian_det") for v in rep.violations)
