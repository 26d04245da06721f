import numpy as np
import pytest

from reach_geo.domain.errors import DimensionError, DomainError, SingularFrameError
from reach_geo.infrastructure.models.regularity import build_matrices, classify, holonomy_image, left_kernel


@pytest.fixture(params=[64, 128])
def grid(request):
    return np.linspace(0.0, 1.0, request.param)


def test_x3_integral_curves_are_singular(grid):
    result = classify(build_matrices("x3-integral", grid))
    assert result.is_singular
    assert result.kernel_dimension == 2
    assert result.min_witness_norm >= 1e-6


def test_engel_x2_curves_are_singular(grid):
    assert classify(build_matrices("engel-x2", grid)).is_singular


def test_kx2_jx3_witness_matches_closed_form(grid):
    result = classify(build_matrices("kx2-jx3", grid, k=1.0, j=np.cos(grid), v=1.0))
    assert result.is_singular
    assert result.constraint_residual <= 1e-8
    # a testemunha é definida a menos de escala
    witness = result.witness / result.witness[:, 1:2]
    expected = np.column_stack([np.cos(grid), np.ones_like(grid), -np.sin(grid)])
    np.testing.assert_allclose(witness, expected, atol=1e-6)


def test_admissible_family_is_regular(grid):
    result = classify(build_matrices("admissible", grid, k=0.4, j=-0.7, v=1.3, a=0.2))
    assert result.verdict == "regular"
    assert result.witness is None
    assert result.solution_norm <= 1e-10
    assert result.constraint_residual > 1e-8


def test_restricted_interval():
    s = np.linspace(0.0, 1.0, 65)
    matrices = build_matrices("kx2-jx3", s, k=1.0, j=np.cos(s), v=1.0)
    result = classify(matrices, interval=(0.0, 0.5))
    assert result.is_singular
    assert len(result.witness) == 33
    with pytest.raises(DomainError):
        classify(matrices, interval=(0.2, 0.201))


def test_zero_speed_is_rejected():
    with pytest.raises(SingularFrameError):
        build_matrices("kx2-jx3", np.linspace(0.0, 1.0, 8), k=1.0, j=1.0, v=0.0)


def test_missing_sample_is_rejected():
    with pytest.raises(DomainError):
        build_matrices("admissible", np.linspace(0.0, 1.0, 8), k=1.0, j=1.0, v=1.0)


def test_unknown_family():
    with pytest.raises(DomainError):
        build_matrices("x4-integral", np.linspace(0.0, 1.0, 8))


def test_non_uniform_grid_is_rejected():
    with pytest.raises(DimensionError):
        classify(build_matrices("x3-integral", [0.0, 0.1, 0.3, 1.0]))


def test_left_kernel():
    kernel = left_kernel(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]))
    assert kernel.shape == (2, 3)
    np.testing.assert_allclose(kernel[:, 1], 0.0, atol=1e-15)


def test_holonomy_image_of_x3_integral_curve(grid):
    horizontal = np.tile([1.0, 0.0, 0.0], (len(grid), 1))
    image = holonomy_image(build_matrices("x3-integral", grid), horizontal)
    np.testing.assert_allclose(image, np.column_stack([np.zeros_like(grid), -grid, np.zeros_like(grid)]),
                               atol=1e-12)


def test_holonomy_image_shape_check():
    s = np.linspace(0.0, 1.0, 8)
    with pytest.raises(DimensionError):
        holonomy_image(build_matrices("x3-integral", s), np.ones((8, 2)))


def test_constant_kx2_jx3_has_no_witness(grid):
    # com j/k constante, ΛA = 0 fixa λ1 e Λ' = ΛB força λ3 = 0 e depois λ1 = λ2 = 0
    matrices = build_matrices("kx2-jx3", grid, k=1.0, j=2.0, v=1.0)
    np.testing.assert_allclose(matrices.A[0][:, 0], [-1.0, 2.0, 0.0])
    result = classify(matrices)
    assert result.verdict == "regular"
    assert result.witness is None
    assert result.kernel_dimension == 2
    assert result.constraint_residual > 1e-8


def test_kx2_jx3_witness_needs_oscillating_ratio(grid):
    # testemunha exige (j/k)'' = −(j/k) para k = v = 1
    result = classify(build_matrices("kx2-jx3", grid, k=1.0, j=2.0 * np.cos(grid), v=1.0))
    assert result.is_singular
    witness = result.witness / result.witness[:, 1:2]
    np.testing.assert_allclose(witness[:, 0], 2.0 * np.cos(grid), atol=1e-6)
