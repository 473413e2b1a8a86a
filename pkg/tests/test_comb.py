"""Lacunary comb norms: the two spaces separate in opposite directions."""

import math

import numpy as np
import pytest

from lptorus import DiracCombSpec, build_cutoffs, dirac_comb_norms
from lptorus.comb import kernel_multiplier


def test_kernel_recovers_the_profiles():
    # the materialized kernels transform back to the radial profiles at the
    # lacunary radii the comb uses
    cut = build_cutoffs()
    for omega, q in ((1.0, 0), (2.0, 0), (2.0, 1), (1.0, -1), (0.5, -1)):
        exact = float(cut.phi(omega / 2.0**q)) if q >= 0 else float(cut.chi(omega))
        assert kernel_multiplier(omega, q, cut) == pytest.approx(exact, abs=1e-7)


def test_spec_validation():
    with pytest.raises(ValueError):
        DiracCombSpec((1.0,))
    assert DiracCombSpec.harmonic(5).J == 5
    assert DiracCombSpec.kronecker(3).coefficients[4] == pytest.approx(1.0 / 6.0)


def test_zero_comb(grid32):
    b01, blog = dirac_comb_norms(DiracCombSpec((0.0, 0.0, 0.0)))
    assert b01 == 0.0 and blog == 0.0


def test_only_one_dimensional():
    with pytest.raises(ValueError):
        dirac_comb_norms(DiracCombSpec.harmonic(4), dim=2)


def test_harmonic_partial_sum_tracks_coefficient_sum():
    # the block sup norms re-sum the |a_j| with total weight one, so the
    # partial sum should match sum_{j <= J} 1/(j+3) to kernel accuracy
    for J in (6, 12):
        b01, _ = dirac_comb_norms(DiracCombSpec.harmonic(J))
        coeff_sum = sum(1.0 / (j + 3.0) for j in range(-1, J + 1))
        assert b01 == pytest.approx(coeff_sum, rel=1e-4)


def test_harmonic_weighted_sup_frozen_value():
    # sup is attained at the lowest block: (q+3)|_{q=-1} = 2 times
    # chi(1/2) a_{-1} + chi(1) a_0 with chi(1) computed from the bump by hand
    lo, hi = math.exp(-7.0 / 3.0), math.exp(-7.0 / 4.0)
    chi1 = hi / (lo + hi)
    expected = 2.0 * (0.5 + chi1 / 3.0)
    for J in (8, 20):
        _, blog = dirac_comb_norms(DiracCombSpec.harmonic(J))
        assert blog == pytest.approx(expected, rel=1e-4)


def test_harmonic_growth_and_stability():
    js = list(range(8, 21))
    b01, blog = [], []
    for J in js:
        a, b = dirac_comb_norms(DiracCombSpec.harmonic(J))
        b01.append(a)
        blog.append(b)
    assert all(x < y for x, y in zip(b01, b01[1:]))
    spread = (max(blog) - min(blog)) / min(blog)
    assert spread < 0.25
    slope = np.polyfit(np.log(js), b01, 1)[0]
    assert slope >= 0.5


def test_kronecker_inverse_k():
    values = {}
    for k in (2, 4, 8):
        b01, blog = dirac_comb_norms(DiracCombSpec.kronecker(k))
        values[k] = b01
        assert b01 == pytest.approx(1.0 / (3.0 + k), rel=1e-4)
        assert 0.3 < blog < 1.5  # roughly constant in k
    scaled = [k * v for k, v in values.items()]
    mid = np.mean(scaled)
    assert max(abs(s - mid) / mid for s in scaled) < 0.30
