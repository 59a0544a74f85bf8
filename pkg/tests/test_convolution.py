"""Kernel algebra: structure, sampling routes, atomic convolution."""

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from kendall_walks import (
    AlphaConv,
    Dirac,
    FiniteMixture,
    Kendall,
    MaxConv,
    ParameterError,
    Pareto,
    RngStream,
    SupportError,
    SymmetricConv,
    SymPareto,
    WeakKendall,
    convolve_atomic,
    convolve_sample,
    kendall_kernel_sample,
    kernel,
    kernel_sample,
    ks_statistic,
    ks_two_sample,
    nstep_delta1_cdf,
    parse_convolution,
    phi,
    scale,
)
from kendall_walks.verify import KS_COEFF

locs = st.floats(min_value=0.01, max_value=50.0, allow_nan=False)
alphas = st.sampled_from([0.5, 1.0, 2.0])


def _band(n):
    return 3.0 * KS_COEFF / np.sqrt(n)


def test_kendall_kernel_structure():
    km = kernel(Kendall(1.0), 1.0, 2.0)
    assert km.atom_weight == 0.5
    assert km.atom_location == 2.0
    assert km.pareto_weight == 0.5
    assert km.pareto_scale == 2.0
    assert km.pareto_order == 2.0
    assert km.symmetric is False
    half = kernel(Kendall(0.5), 1.0, 2.0)
    z = (0.5) ** 0.5
    assert abs(half.atom_weight - (1 - z)) < 1e-15
    assert abs(half.pareto_weight - z) < 1e-15
    assert half.pareto_order == 1.0


def test_kernel_equal_atoms_always_switch():
    km = kernel(Kendall(1.0), 3.0, 3.0)
    assert km.atom_weight == 0.0
    assert km.pareto_weight == 1.0
    assert km.pareto_scale == 3.0


def test_kernel_zero_inputs_degenerate():
    # both masses at the origin collapse the kernel to a point law
    assert kernel(Kendall(1.0), 0.0, 0.0) == Dirac(0.0)
    assert kernel(WeakKendall(1.0), 0.0, 0.0) == Dirac(0.0)


@given(a=locs, b=locs, alpha=alphas)
def test_kernel_commutes(a, b, alpha):
    assert kernel(Kendall(alpha), a, b) == kernel(Kendall(alpha), b, a)
    assert kernel(WeakKendall(min(alpha, 1.0)), a, b) == kernel(
        WeakKendall(min(alpha, 1.0)), b, a
    )


@given(a=locs, b=locs, c=st.floats(min_value=0.1, max_value=10.0), alpha=alphas)
@settings(max_examples=40, deadline=None)
def test_kernel_scale_equivariance(a, b, c, alpha):
    km = scale(kernel(Kendall(alpha), a, b), c)
    want = kernel(Kendall(alpha), c * a, c * b)
    assert abs(km.atom_weight - want.atom_weight) < 1e-12
    assert abs(km.atom_location - want.atom_location) < 1e-9
    assert abs(km.pareto_scale - want.pareto_scale) < 1e-9
    assert km.pareto_order == want.pareto_order


def test_kernel_law_mixes_atom_and_tail():
    law = kernel(Kendall(1.0), 1.0, 2.0).law()
    assert law.atoms() == ((2.0, 0.5),)
    xs = np.array([1.5, 2.0, 3.0, 8.0])
    want = 0.5 * (xs >= 2.0) + 0.5 * Pareto(2.0, scale=2.0).cdf(xs)
    assert np.max(np.abs(law.cdf(xs) - want)) < 1e-14


def test_convolve_atomic_unit_atoms_give_pareto():
    law = convolve_atomic(Kendall(1.0), Dirac(1.0), Dirac(1.0))
    assert law == Pareto(2.0, scale=1.0)
    xs = np.geomspace(0.5, 20.0, 30)
    assert np.max(np.abs(law.cdf(xs) - nstep_delta1_cdf(2, 1.0, xs))) < 1e-14


def test_convolve_atomic_multiplicative_transform():
    alpha = 1.0
    law1 = FiniteMixture(((0.5, Dirac(1.0)), (0.5, Dirac(3.0))))
    law2 = Dirac(2.0)
    out = convolve_atomic(Kendall(alpha), law1, law2)
    t = np.linspace(0.01, 2.0, 50)
    lhs = phi(out, alpha, t)
    rhs = phi(law1, alpha, t) * phi(law2, alpha, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_convolve_atomic_rejects_continuous_parts():
    with pytest.raises(SupportError):
        convolve_atomic(Kendall(1.0), Pareto(2.0), Dirac(1.0))


def test_kendall_kernel_sample_statistics():
    gen = RngStream(5, 0).generator
    n = 40000
    vals = kendall_kernel_sample(1.0, np.ones(n), np.full(n, 2.0), gen)
    stay = vals == 2.0
    assert abs(np.mean(stay) - 0.5) < 3 * 0.5 / np.sqrt(n)
    tail = vals[~stay]
    assert ks_statistic(tail, Pareto(2.0, scale=2.0).cdf) <= _band(tail.size)


def test_weak_kernel_modulus_matches_kendall():
    gen1 = RngStream(6, 0).generator
    gen2 = RngStream(6, 1).generator
    n = 40000
    weak = kernel_sample(WeakKendall(1.0), np.ones(n), np.full(n, -2.0), gen1)
    kend = kendall_kernel_sample(1.0, np.ones(n), np.full(n, 2.0), gen2)
    assert ks_two_sample(np.abs(weak), kend) <= 3 * KS_COEFF * np.sqrt(2.0 / n)
    assert abs(np.mean(np.sign(weak))) < 3 / np.sqrt(n)


def test_kernel_sample_dispatch_exact_kinds():
    gen = RngStream(7, 0).generator
    x = np.array([1.0, 3.0])
    y = np.array([2.0, 2.0])
    assert np.array_equal(kernel_sample(MaxConv(), x, y, gen), np.array([2.0, 3.0]))
    got = kernel_sample(AlphaConv(2.0), x, y, gen)
    assert np.max(np.abs(got - np.sqrt(x**2 + y**2))) < 1e-15
    sym = kernel_sample(SymmetricConv(), np.ones(4000), np.full(4000, 2.0), gen)
    assert set(np.unique(sym)) == {1.0, 3.0}
    assert abs(np.mean(sym == 3.0) - 0.5) < 3 * 0.5 / np.sqrt(4000)


def test_convolve_sample_two_unit_steps():
    rng = RngStream(8, 0)
    n = 100000
    vals = convolve_sample(Kendall(1.0), Dirac(1.0), Dirac(1.0), rng, size=n)
    assert ks_statistic(vals, lambda x: nstep_delta1_cdf(2, 1.0, x)) <= _band(n)


def test_convolve_sample_atomic_mixture_target():
    rng = RngStream(9, 0)
    n = 100000
    vals = convolve_sample(Kendall(1.0), Dirac(1.0), Dirac(2.0), rng, size=n)
    law = kernel(Kendall(1.0), 1.0, 2.0).law()
    assert ks_statistic(vals, law.cdf, atoms=law.atoms()) <= _band(n)


def test_convolve_sample_support_validation():
    with pytest.raises(SupportError):
        convolve_sample(Kendall(1.0), SymPareto(2.0), Dirac(1.0), RngStream(0, 0))


def test_parse_convolution_names():
    assert parse_convolution("kendall", 1.0) == Kendall(1.0)
    assert parse_convolution("weak-kendall", 0.7) == WeakKendall(0.7)
    assert parse_convolution("weak_kendall", 0.7) == WeakKendall(0.7)
    assert parse_convolution("max", 1.0) == MaxConv()
    assert parse_convolution("alpha-conv", 2.0) == AlphaConv(2.0)
    assert parse_convolution("symmetric_conv", 1.0) == SymmetricConv()
    with pytest.raises(ParameterError):
        parse_convolution("planar", 1.0)
    with pytest.raises(ParameterError):
        parse_convolution("weak-kendall", 1.5)
    with pytest.raises(ParameterError):
        parse_convolution("kendall", -1.0)
