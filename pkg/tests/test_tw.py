import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from largest_root import tw
from largest_root.errors import DomainError
from largest_root.tw import TW1Table, default_table, tw1_cdf, tw1_pvalue, tw1_quantile, use_table

from .oracles.painleve import tw1_cdf_painleve


@pytest.mark.parametrize(
    "s, expected",
    [(-3.90, 0.01), (-3.18, 0.05), (-2.78, 0.10), (-1.91, 0.30), (-1.27, 0.50),
     (-0.59, 0.70), (0.45, 0.90), (0.98, 0.95), (2.02, 0.99)],
)
def test_reference_percentiles(s, expected):
    assert tw1_cdf(s) == pytest.approx(expected, abs=1e-3)


def test_critical_value():
    assert tw1_quantile(0.95) == pytest.approx(0.97932, abs=1e-4)
    assert tw1_quantile(0.95) == pytest.approx(0.98, abs=0.01)


def test_agrees_with_painleve_oracle():
    s = np.linspace(-6.0, 5.0, 221)
    ours = np.array([tw1_cdf(x) for x in s])
    np.testing.assert_allclose(ours, tw1_cdf_painleve(s), atol=1e-7)


def test_strictly_increasing_scan():
    s = np.arange(-12.0, 8.0, 1e-3)
    f = np.array([tw1_cdf(x) for x in s])
    assert np.all(np.diff(f) >= 0)
    assert np.all((f >= 0) & (f <= 1))
    inner = (s > -7.0) & (s < 6.0)
    assert np.all(np.diff(f[inner]) > 0)


def test_tails():
    assert tw1_cdf(-20.0) == pytest.approx(1e-12, rel=1e-12)
    assert tw1_cdf(-10.0) < 1e-4
    assert tw1_cdf(10.0) > 1 - 1e-4
    assert tw1_cdf(20.0) == pytest.approx(1.0, abs=1e-12)
    assert tw1_cdf(-np.inf) == 0.0
    assert tw1_cdf(np.inf) == 1.0
    assert tw1_pvalue(np.inf) == 0.0


def test_nan_rejected():
    with pytest.raises(DomainError):
        tw1_cdf(float("nan"))


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(p):
    with pytest.raises(DomainError):
        tw1_quantile(p)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-9, 0.99999))
def test_quantile_round_trip(p):
    assert tw1_cdf(tw1_quantile(p)) == pytest.approx(p, abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.floats(-8.0, 5.0), st.floats(0.0, 1.0))
def test_monotone(a, d):
    assert tw1_cdf(a + d) >= tw1_cdf(a)


def test_pvalue_complements_cdf():
    for s in (-2.0, 0.0, 0.97932, 3.0):
        assert tw1_pvalue(s) == pytest.approx(1.0 - tw1_cdf(s), abs=1e-15)


def test_table_override(tmp_path):
    path = tmp_path / "t.csv"
    s = np.linspace(-5, 5, 101)
    f = 1 / (1 + np.exp(-s))  # logistic stand-in
    np.savetxt(path, np.column_stack([s, f]), delimiter=",", header="s,cdf", comments="")
    table = TW1Table.from_csv(path)
    assert tw1_cdf(0.0, table) == pytest.approx(0.5, abs=1e-12)
    try:
        use_table(table)
        assert tw1_quantile(0.5) == pytest.approx(0.0, abs=1e-8)
    finally:
        use_table(None)
    assert tw.active_table() is default_table()
    assert tw1_quantile(0.5) == pytest.approx(-1.27, abs=5e-3)


def test_table_rejects_non_monotone():
    with pytest.raises(ValueError):
        TW1Table(np.arange(5.0), np.array([0.1, 0.2, 0.2, 0.3, 0.4]))
