"""High-level estimator API tests."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dyadcov import (
    DyadicRegression,
    EstimatorKind,
    complete_dyads,
    estimate_variances,
    fit_ols,
    jk_variance,
    meat_dn,
    sandwich,
    var_iid,
)

from helpers import random_dataset


ALL_NAMES = [
    "IID", "White", "OneWay1", "OneWay2", "TwoWay",
    "Dyadic", "DNDyadic", "DNDyadicNoDC", "JK", "JKNoDC",
]


def test_estimate_variances_covers_all_kinds():
    rng = np.random.default_rng(20)
    ds = random_dataset(rng, n=10, k=3)
    fit = fit_ols(ds)
    out = estimate_variances(ds, fit, "all", bandwidth=2)
    assert [kind.value for kind in out] == ALL_NAMES
    for kind, est in out.items():
        assert est.kind is kind
        assert est.V.shape == (3, 3)
        assert_allclose(est.V, est.V.T, atol=0)


def test_estimate_variances_matches_direct_construction():
    rng = np.random.default_rng(21)
    ds = random_dataset(rng, n=9, k=2)
    fit = fit_ols(ds)
    out = estimate_variances(ds, fit, "all", bandwidth=3)
    assert_allclose(out[EstimatorKind.IID].V, var_iid(fit, ds.m).V, rtol=0, atol=0)
    direct = sandwich(
        fit.gram_inv, meat_dn(fit.scores, ds.dyads, ds.n, 3), EstimatorKind.DN_DYADIC
    )
    assert_allclose(out[EstimatorKind.DN_DYADIC].V, direct.V, rtol=0, atol=0)
    jk = jk_variance(ds, fit, 3)
    assert_allclose(out[EstimatorKind.JACKKNIFE].V, jk.V, rtol=0, atol=0)
    assert_allclose(out[EstimatorKind.JACKKNIFE_NODC].V, jk.V0, rtol=0, atol=0)


def test_estimate_variances_requires_bandwidth_only_when_needed():
    rng = np.random.default_rng(22)
    ds = random_dataset(rng, n=8, k=2)
    fit = fit_ols(ds)
    out = estimate_variances(ds, fit, "white,dyadic")
    assert set(out) == {EstimatorKind.WHITE, EstimatorKind.DYADIC}
    with pytest.raises(ValueError, match="bandwidth"):
        estimate_variances(ds, fit, "dndyadic")


def test_fit_from_arrays():
    rng = np.random.default_rng(23)
    ds = random_dataset(rng, n=12, k=3)
    model = DyadicRegression(bandwidth=2).fit(ds.X, ds.y, dyads=ds.dyads)
    assert model.n_nodes_ == 12
    assert model.n_dyads_ == ds.m
    assert model.n_features_in_ == 3
    assert_allclose(model.coef_, fit_ols(ds).beta_hat, rtol=1e-12)
    assert set(model.variances_) == set(ALL_NAMES)
    assert model.bandwidth_used_ == 2
    assert model.bandwidth_selection_ is None


def test_fit_selects_bandwidth_when_unset():
    rng = np.random.default_rng(24)
    ds = random_dataset(rng, n=14, k=2)
    model = DyadicRegression(estimators="dndyadic").fit_dataset(ds)
    sel = model.bandwidth_selection_
    assert sel is not None
    assert model.bandwidth_used_ == sel.L  # sigma_l = 1 keeps the raw selection
    assert model.variances_["DNDyadic"].bandwidth == model.bandwidth_used_


def test_sigma_l_rescales_the_selected_bandwidth():
    rng = np.random.default_rng(25)
    ds = random_dataset(rng, n=14, k=2)
    base = DyadicRegression(estimators="jk").fit_dataset(ds)
    doubled = DyadicRegression(estimators="jk", sigma_l=2.0).fit_dataset(ds)
    assert doubled.bandwidth_used_ == max(1, int(np.floor(2.0 * base.bandwidth_selection_.L + 0.5)))


def test_bandwidth_none_without_bandwidth_kinds():
    rng = np.random.default_rng(26)
    ds = random_dataset(rng, n=10, k=2)
    model = DyadicRegression(estimators="white,twoway").fit_dataset(ds)
    assert model.bandwidth_used_ is None
    assert model.variances_["White"].bandwidth is None


def test_predict_and_not_fitted():
    rng = np.random.default_rng(27)
    ds = random_dataset(rng, n=10, k=2)
    model = DyadicRegression(estimators="white")
    with pytest.raises(NotFittedError):
        model.predict(ds.X)
    model.fit_dataset(ds)
    assert_allclose(model.predict(ds.X), ds.X @ model.coef_, rtol=0, atol=0)


def test_contrast_test_index_and_vector_agree():
    rng = np.random.default_rng(28)
    ds = random_dataset(rng, n=11, k=3)
    model = DyadicRegression(bandwidth=2).fit_dataset(ds)
    by_index = model.contrast_test(3, kind="Dyadic")
    vec = np.array([0.0, 0.0, 1.0])
    by_vector = model.contrast_test(vec, kind="Dyadic")
    assert by_index == by_vector
    assert by_index.estimate == pytest.approx(model.coef_[2])


def test_contrast_test_validates_inputs():
    rng = np.random.default_rng(29)
    ds = random_dataset(rng, n=9, k=2)
    model = DyadicRegression(estimators="white").fit_dataset(ds)
    with pytest.raises(ValueError, match="not computed"):
        model.contrast_test(1, kind="JK")
    with pytest.raises(ValueError, match="outside"):
        model.contrast_test(5, kind="White")


def test_psd_fix_reaches_the_sandwiches():
    # This draw produces an indefinite DN meat at bandwidth 4.
    rng = np.random.default_rng(0)
    ds = random_dataset(rng, n=8, k=2)
    plain = DyadicRegression(bandwidth=4).fit_dataset(ds).variances_["DNDyadic"]
    assert plain.min_eigenvalue < 0
    assert not plain.psd_fixed
    fixed = DyadicRegression(bandwidth=4, psd_fix=True).fit_dataset(ds).variances_["DNDyadic"]
    assert fixed.psd_fixed
    assert fixed.min_eigenvalue == pytest.approx(plain.min_eigenvalue)
    assert np.linalg.eigvalsh(fixed.V)[0] >= -1e-12
    assert not np.allclose(fixed.V, plain.V)


def test_sklearn_params_round_trip():
    model = DyadicRegression(estimators="white,jk", bandwidth=3, sigma_l=1.5, psd_fix=True)
    params = model.get_params()
    assert params == {
        "estimators": "white,jk",
        "bandwidth": 3,
        "sigma_l": 1.5,
        "psd_fix": True,
    }
    twin = clone(model)
    assert twin.get_params() == params
    model.set_params(bandwidth=1)
    assert model.bandwidth == 1


def test_fit_rejects_bad_shapes():
    model = DyadicRegression(estimators="white")
    X = np.ones((3, 1))
    dyads = complete_dyads(3)
    with pytest.raises(ValueError):
        model.fit(X, np.ones((3, 2)), dyads=dyads)
    with pytest.raises(ValueError):
        model.fit(X, np.ones(3), dyads=np.array([[1, 1], [1, 2], [2, 3]]))


def test_explicit_bandwidth_validation():
    rng = np.random.default_rng(31)
    ds = random_dataset(rng, n=8, k=2)
    with pytest.raises(ValueError, match="at least 1"):
        DyadicRegression(bandwidth=0).fit_dataset(ds)


def test_dyadic_and_dn_agree_at_bandwidth_one():
    rng = np.random.default_rng(32)
    ds = random_dataset(rng, n=10, k=2)
    model = DyadicRegression(bandwidth=1).fit_dataset(ds)
    assert_allclose(
        model.variances_["DNDyadic"].V, model.variances_["Dyadic"].V, rtol=0, atol=0
    )
