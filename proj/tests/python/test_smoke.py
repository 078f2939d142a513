import math

import numpy as np
import pytest

import cstomo


def small_config():
    c = cstomo.ScanConfig()
    c.R = 0.125
    c.r_m = 0.14
    c.r_M = 1.8
    c.r_M_star = 1.8
    c.N = 4
    c.N_alpha = 9
    c.N_beta = 5
    c.N_p = 16
    c.N_r = 16
    c.N_gamma = 16
    c.N_psi = 32
    c.lambda_ = 0.01
    c.validate()
    return c


def test_harmonics():
    assert cstomo.ylm(0, 0, 0.3, 1.2) == pytest.approx(1 / math.sqrt(4 * math.pi))
    assert cstomo.assoc_legendre(1, 1, 0.0) == pytest.approx(-1.0)
    grid = cstomo.SphereGrid(6, 7)
    rng = np.random.default_rng(2)
    coeffs = np.zeros(49, dtype=complex)
    for l in range(7):
        coeffs[cstomo.packed_index(l, 0)] = rng.normal()
        for m in range(1, l + 1):
            v = complex(rng.normal(), rng.normal())
            coeffs[cstomo.packed_index(l, m)] = v
            coeffs[cstomo.packed_index(l, -m)] = (-1) ** m * np.conj(v)
    samples = grid.inverse_real(coeffs)
    assert samples.shape == (grid.n_phi * grid.n_theta,)
    assert np.max(np.abs(grid.forward(samples) - coeffs)) < 1e-10


def test_kernel():
    R = 0.125
    for l in (0, 3, 9):
        assert cstomo.kernel_direct(1.3, 0.7, l, R) == pytest.approx(cstomo.kernel_expanded(1.3, 0.7, l, R), abs=1e-9)
    for r0 in cstomo.diagonal_roots(4, R, 0.14, 1.8):
        assert abs(cstomo.kernel_diagonal(r0, 4, R)) < 1e-10
        assert cstomo.gradient_ratio(r0, 4, R) == pytest.approx(2.0, abs=1e-3)


def test_pipeline(tmp_path):
    c = small_config()
    spec = cstomo.default_phantom(8, c.R)
    assert len(spec.balls) == 2 and spec.has_crack
    phantom = cstomo.make_phantom(spec)
    assert phantom.array().shape == (8, 8, 8)

    data = cstomo.project(phantom, c)
    assert data.array().shape == (16, 9, 5)
    noisy, eps = cstomo.add_noise(data, 20.0, 4)
    assert eps == pytest.approx(10.0)

    matrices = cstomo.assemble_all(c)
    assert len(matrices.A) == c.N + 1
    assert matrices.A[0].shape == (16, 16)
    volume = cstomo.reconstruct(data, matrices, c, spec.geometry)
    assert volume.array().shape == (8, 8, 8)
    assert cstomo.nmse(phantom, phantom) == 0.0
    assert cstomo.nmse(phantom, volume) > 0.0

    path = tmp_path / "v.t3v"
    cstomo.write_volume(path, volume)
    assert np.array_equal(cstomo.read_volume(path).array(), volume.array())


def test_volume_arrays_and_errors():
    values = np.arange(24, dtype=float).reshape(2, 3, 4)
    v = cstomo.Volume.from_array(values, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    assert v.geometry.dims == [4, 3, 2]
    assert np.array_equal(v.array(), values)
    other = cstomo.Volume.from_array(np.zeros((2, 2, 2)), (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        cstomo.nmse(v, other)
    with pytest.raises(ValueError):
        cstomo.nmse(other, v)
    with pytest.raises(ArithmeticError):
        cstomo.tikhonov_solve(np.zeros((3, 3)), np.ones(3), 0.0)


def test_coefficient_oracle():
    p = np.linspace(0.5, 1.5, 5)
    out = cstomo.coeff_forward_1d(lambda r: 1.0, 0, list(p), 0.125)
    assert len(out) == 5 and all(v > 0 for v in out)
