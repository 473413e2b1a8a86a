"""Transforms, differential operators, projection, heat flow, dealiasing, IO."""

import numpy as np
import pytest

from lptorus import (
    Field,
    FieldFormatError,
    Grid,
    dealiased_product,
    divergence,
    gradient,
    heat_propagate,
    helmholtz_project,
    read_field,
    single_mode,
    taylor_green,
    write_field,
)
from lptorus.besov import INF, lp_norm
from lptorus.ensembles import random_field
from lptorus.spectral import spectral_l2_norm, to_physical, to_spectral


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("points", [16, 32])
def test_round_trip(dim, points, rng):
    if dim == 3 and points > 16:
        points = 16
    grid = Grid(dim, points)
    f = random_field(grid, rng)
    back = to_physical(grid, to_spectral(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-12 * np.max(np.abs(f.values))


def test_round_trip_n64(rng):
    grid = Grid(2, 64)
    f = random_field(grid, rng)
    back = to_physical(grid, to_spectral(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-12


def test_constant_field_is_pure_dc(grid32):
    f = Field(grid32, np.full((1, 32, 32), 3.25))
    coeffs = f.spectral.copy()
    assert abs(coeffs[0, 0, 0] - 3.25) < 1e-13
    coeffs[0, 0, 0] = 0.0
    assert np.max(np.abs(coeffs)) < 1e-13


def test_single_cosine_two_conjugate_coefficients(grid32):
    f = single_mode(grid32, (3, 5))
    c = f.spectral[0]
    assert abs(c[3, 5] - 0.5) < 1e-13
    assert abs(c[-3, -5] - 0.5) < 1e-13
    c = c.copy()
    c[3, 5] = c[-3, -5] = 0.0
    assert np.max(np.abs(c)) < 1e-13


def test_hermitian_symmetry(grid32, rng):
    f = random_field(grid32, rng)
    c = f.spectral[0]
    flipped = np.roll(np.flip(c, axis=0), 1, axis=0)
    flipped = np.roll(np.flip(flipped, axis=1), 1, axis=1)
    assert np.max(np.abs(c - np.conj(flipped))) < 1e-14


@pytest.mark.parametrize("dim,points", [(1, 64), (2, 32), (3, 16)])
def test_parseval(dim, points, rng):
    grid = Grid(dim, points)
    f = random_field(grid, rng)
    grid_norm = lp_norm(f, 2.0)
    assert abs(grid_norm - spectral_l2_norm(f)) < 1e-12 * grid_norm


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(0, 32)
    with pytest.raises(ValueError):
        Grid(2, 24)  # not a power of two
    with pytest.raises(ValueError):
        Grid(2, 32, period=-1.0)


def test_field_shape_validation(grid32):
    with pytest.raises(ValueError):
        Field(grid32, np.zeros((1, 16, 16)))


# -- differential operators -------------------------------------------------


def test_gradient_of_sine(grid32):
    f = single_mode(grid32, (1, 0), phase=-np.pi / 2)  # sin x
    g = gradient(f)
    expected = single_mode(grid32, (1, 0))  # cos x
    assert np.max(np.abs(g.values[0] - expected.values[0])) < 1e-12
    assert np.max(np.abs(g.values[1])) < 1e-12


def test_divergence_of_curl_form_field(grid32):
    # (d_y psi, -d_x psi) is exactly divergence-free
    psi = single_mode(grid32, (2, 3))
    gy = gradient(psi)
    u = Field(grid32, np.stack([gy.values[1], -gy.values[0]]))
    assert np.max(np.abs(divergence(u).values)) < 1e-12


def test_gradient_requires_scalar(grid32):
    with pytest.raises(ValueError):
        gradient(taylor_green(grid32))


def test_divergence_requires_vector(grid32):
    with pytest.raises(ValueError):
        divergence(single_mode(grid32, (1, 0)))


# -- Helmholtz projection ----------------------------------------------------


def test_projection_fixes_divergence_free(grid32):
    u = taylor_green(grid32, 1.7)
    pu = helmholtz_project(u)
    assert np.max(np.abs(pu.values - u.values)) < 1e-12


def test_projection_fixes_sin_swap_field(grid32):
    # u = (sin y, sin x) has zero divergence
    sy = single_mode(grid32, (0, 1), phase=-np.pi / 2)
    sx = single_mode(grid32, (1, 0), phase=-np.pi / 2)
    u = Field(grid32, np.stack([sy.values[0], sx.values[0]]))
    assert np.max(np.abs(divergence(u).values)) < 1e-12
    pu = helmholtz_project(u)
    assert np.max(np.abs(pu.values - u.values)) < 1e-12


def test_projection_annihilates_gradients(grid32):
    psi = single_mode(grid32, (2, 1), 0.8)
    grad = gradient(psi)
    assert np.max(np.abs(helmholtz_project(grad).values)) < 1e-12


def test_projection_idempotent(grid32, rng):
    u = random_field(grid32, rng, components=2)
    once = helmholtz_project(u)
    twice = helmholtz_project(once)
    assert np.max(np.abs(twice.values - once.values)) < 1e-12
    assert np.max(np.abs(divergence(once).values)) < 1e-12 * lp_norm(u, 2.0)


def test_projection_identity_on_mean(grid32):
    u = Field(grid32, np.stack([np.full((32, 32), 1.5), np.full((32, 32), -0.5)]))
    pu = helmholtz_project(u)
    assert np.max(np.abs(pu.values - u.values)) < 1e-14


def test_projection_wrong_components(grid32):
    with pytest.raises(ValueError):
        helmholtz_project(single_mode(grid32, (1, 0)))


# -- heat propagator ----------------------------------------------------------


def test_heat_t0_identity(grid32, rng):
    f = random_field(grid32, rng)
    assert heat_propagate(f, 0.0) is f


def test_heat_negative_t(grid32, rng):
    with pytest.raises(ValueError):
        heat_propagate(random_field(grid32, rng), -0.1)


def test_heat_eigenmode(grid32):
    f = single_mode(grid32, (3, 4))
    t = 0.07
    out = heat_propagate(f, t)
    assert np.max(np.abs(out.values - np.exp(-25 * t) * f.values)) < 1e-12


def test_heat_semigroup_composition(grid32, rng):
    f = random_field(grid32, rng)
    s, t = 0.013, 0.21
    a = heat_propagate(heat_propagate(f, t), s)
    b = heat_propagate(f, s + t)
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_heat_l2_monotone(grid32, rng):
    f = random_field(grid32, rng)
    norms = [lp_norm(heat_propagate(f, t), 2.0) for t in (0.0, 0.01, 0.1, 0.5, 1.0)]
    assert all(a >= b - 1e-12 for a, b in zip(norms, norms[1:]))


def test_heat_sup_contracts_on_smooth_fields(grid32, rng):
    f = random_field(grid32, rng)
    sup0 = lp_norm(f, INF)
    for t in (1e-3, 1e-2, 0.1, 1.0):
        assert lp_norm(heat_propagate(f, t), INF) <= sup0 * (1 + 1e-12)


# -- dealiased products -------------------------------------------------------


def test_product_of_two_modes_exact_convolution(grid32):
    # cos(a.x) cos(b.x) = [cos((a+b).x) + cos((a-b).x)] / 2
    f = single_mode(grid32, (3, 2))
    g = single_mode(grid32, (5, -1))
    prod = dealiased_product(f, g)
    expected = 0.5 * (single_mode(grid32, (8, 1)) + single_mode(grid32, (-2, 3)))
    assert np.max(np.abs(prod.values - expected.values)) < 1e-12


def test_high_mode_product_does_not_alias(grid32):
    # naive products of |k| = 12 modes would alias at N = 32; sum mode k = 24
    # exceeds Nyquist and must simply be dropped, leaving the difference mode
    f = single_mode(grid32, (12, 0))
    prod = dealiased_product(f, f)
    expected = 0.5 * Field(grid32, np.ones((1, 32, 32)))
    assert np.max(np.abs(prod.values - expected.values)) < 1e-12


def test_product_broadcasting(grid32, rng):
    scalar = random_field(grid32, rng)
    vector = random_field(grid32, rng, components=2)
    prod = dealiased_product(scalar, vector)
    assert prod.components == 2
    comp = dealiased_product(scalar, vector.component(1))
    assert np.max(np.abs(prod.values[1] - comp.values[0])) < 1e-13


def test_product_grid_mismatch(grid32, grid64, rng):
    with pytest.raises(ValueError):
        dealiased_product(random_field(grid32, rng), random_field(grid64, rng))


# -- field file format --------------------------------------------------------


def test_field_file_round_trip(tmp_path, grid32, rng):
    f = random_field(grid32, rng, components=2)
    path = tmp_path / "f.lpfld"
    write_field(path, f)
    g = read_field(path)
    assert g.grid == f.grid
    assert g.components == 2
    assert np.array_equal(g.values, f.values)


def test_field_file_header_is_ascii_line(tmp_path, grid32):
    path = tmp_path / "f.lpfld"
    write_field(path, taylor_green(grid32))
    header = path.read_bytes().split(b"\n", 1)[0]
    assert header == b"LPFLD1 2 2 32 6.283185307179586"


@pytest.mark.parametrize(
    "header,expect",
    [
        (b"NOPE 2 1 32 6.28\n", "magic"),
        (b"LPFLD1 x 1 32 6.28\n", "dim"),
        (b"LPFLD1 2 y 32 6.28\n", "components"),
        (b"LPFLD1 2 1 31 6.28\n", "points"),
        (b"LPFLD1 2 1 32 zzz\n", "period"),
        (b"LPFLD1 2 1 32\n", "header"),
    ],
)
def test_field_file_errors_name_offending_field(tmp_path, header, expect):
    path = tmp_path / "bad.lpfld"
    path.write_bytes(header + b"\x00" * 16)
    with pytest.raises(FieldFormatError) as err:
        read_field(path)
    assert err.value.field == expect


def test_field_file_payload_size_checked(tmp_path, grid32):
    path = tmp_path / "short.lpfld"
    path.write_bytes(b"LPFLD1 2 1 32 6.283185307179586\n" + b"\x00" * 100)
    with pytest.raises(FieldFormatError) as err:
        read_field(path)
    assert err.value.field == "payload"
