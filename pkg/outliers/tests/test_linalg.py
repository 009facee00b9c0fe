"""
Unit tests for the dense numerical primitives.
"""
import math

import numpy as np
import pytest

from outliers.exceptions import DegenerateSampleError, DomainError, NotPositiveDefiniteError
from outliers.linalg import (
    RobustEstimate,
    as_data_matrix,
    chi2_cdf,
    chi2_quantile,
    cholesky_factor,
    log_det_pd,
    mahalanobis_sq,
    mahalanobis_sq_rows,
    sample_covariance,
    sample_mean,
)
from outliers.simulation import ar_covariance


def cofactor_det(M):
    """Determinant by Laplace expansion along the first row."""
    size = len(M)
    if size == 1:
        return M[0][0]
    total = 0.0
    for j in range(size):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * cofactor_det(minor)
    return total


def random_spd(rng, p):
    A = rng.standard_normal((p, p))
    return A @ A.T + p * np.eye(p)


@pytest.mark.unit
class TestDataMatrix:
    """Test cases for data matrix validation."""

    def test_accepts_nested_lists(self):
        """Test a list of rows becomes a float matrix."""
        X = as_data_matrix([[1, 2], [3, 4]])
        assert X.dtype == np.float64
        assert X.shape == (2, 2)

    @pytest.mark.parametrize('values', [
        [1.0, 2.0],
        np.zeros((0, 3)),
        [[1.0, np.nan]],
        [[np.inf, 0.0]],
    ])
    def test_rejects_invalid_input(self, values):
        """Test 1-D, empty and non-finite inputs are domain errors."""
        with pytest.raises(DomainError):
            as_data_matrix(values)


@pytest.mark.unit
class TestMeanAndCovariance:
    """Test cases for sample_mean and sample_covariance."""

    def test_mean_midpoint(self):
        """Test the mean of two points is their midpoint."""
        np.testing.assert_array_equal(sample_mean(np.array([[0.0, 0.0], [2.0, 2.0]])), [1.0, 1.0])

    def test_mean_single_row(self):
        """Test the mean of one row is the row itself."""
        np.testing.assert_array_equal(sample_mean(np.array([[3.0, -1.0]])), [3.0, -1.0])

    def test_mean_symmetric_rows(self):
        """Test symmetric rows average to the origin."""
        X = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        np.testing.assert_array_equal(sample_mean(X), [0.0, 0.0])

    def test_covariance_divides_by_count(self):
        """Test two points give [[1,1],[1,1]] under the divide-by-n convention."""
        cov = sample_covariance(np.array([[0.0, 0.0], [2.0, 2.0]]))
        np.testing.assert_allclose(cov, [[1.0, 1.0], [1.0, 1.0]])

    def test_covariance_of_identical_rows_is_zero(self):
        """Test identical rows have a zero covariance."""
        cov = sample_covariance(np.tile([1.5, -2.0, 3.0], (5, 1)))
        np.testing.assert_array_equal(cov, np.zeros((3, 3)))

    def test_covariance_hand_computed(self):
        """Test a hand-computed diagonal covariance."""
        X = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0]])
        np.testing.assert_allclose(sample_covariance(X), [[0.5, 0.0], [0.0, 2.0]], atol=1e-15)

    def test_covariance_needs_two_rows(self):
        """Test a single observation is a degenerate sample."""
        with pytest.raises(DegenerateSampleError):
            sample_covariance(np.array([[1.0, 2.0]]))

    def test_covariance_exactly_symmetric_and_psd(self):
        """Test stored entries are symmetric and a tiny ridge makes the matrix factorable."""
        rng = np.random.default_rng(3)
        for p in (2, 5, 9):
            cov = sample_covariance(rng.standard_normal((4, p)))
            assert np.array_equal(cov, cov.T)
            ridge = 1e-12 * np.trace(cov)
            np.linalg.cholesky(cov + ridge * np.eye(p))


@pytest.mark.unit
class TestLogDeterminant:
    """Test cases for log_det_pd and cholesky_factor."""

    @pytest.mark.parametrize('p', [1, 3, 7])
    def test_identity(self, p):
        """Test the identity has log-determinant 0."""
        assert log_det_pd(np.eye(p)) == 0.0

    def test_diagonal(self):
        """Test diag(2, 3) has log-determinant ln 6."""
        assert log_det_pd(np.diag([2.0, 3.0])) == pytest.approx(math.log(6.0), rel=1e-12)

    def test_equicorrelation(self):
        """Test the p=3, rho=0.5 equicorrelation matrix has determinant 0.5."""
        assert log_det_pd(ar_covariance(3, 0.5)) == pytest.approx(math.log(0.5), rel=1e-12)

    def test_matches_cofactor_expansion(self):
        """Test exp(log_det) agrees with a cofactor determinant oracle."""
        rng = np.random.default_rng(17)
        for p in range(1, 7):
            M = random_spd(rng, p)
            expected = cofactor_det(M.tolist())
            assert math.exp(log_det_pd(M)) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize('M', [
        np.zeros((2, 2)),
        np.array([[1.0, 2.0], [2.0, 1.0]]),
        np.array([[1.0, 1.0], [1.0, 1.0]]),
    ])
    def test_not_positive_definite(self, M):
        """Test singular and indefinite matrices are rejected."""
        with pytest.raises(NotPositiveDefiniteError):
            log_det_pd(M)

    def test_near_singular_is_rejected(self):
        """Test a pivot below the rank tolerance counts as singular."""
        M = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
        with pytest.raises(NotPositiveDefiniteError):
            cholesky_factor(M)

    def test_wide_scale_range_is_positive_definite(self):
        """Test diag(1e8, 1e-8) is accepted with log-determinant 0."""
        assert log_det_pd(np.diag([1e8, 1e-8])) == pytest.approx(0.0, abs=1e-12)

    def test_rescaled_near_singular_still_rejected(self):
        """Test rescaling the variables of a near-singular matrix keeps it singular."""
        M = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
        D = np.diag([1e6, 1e-6])
        with pytest.raises(NotPositiveDefiniteError):
            cholesky_factor(D @ M @ D)

    def test_factor_reproduces_matrix(self):
        """Test L L^T reproduces the input."""
        M = random_spd(np.random.default_rng(5), 4)
        L = cholesky_factor(M)
        np.testing.assert_allclose(L @ L.T, M, rtol=1e-12)
        assert np.allclose(np.triu(L, 1), 0.0)


@pytest.mark.unit
class TestMahalanobis:
    """Test cases for squared Mahalanobis distances."""

    def test_identity_scatter_is_euclidean(self):
        """Test an identity scatter gives the squared Euclidean norm."""
        assert mahalanobis_sq([3.0, 4.0], [0.0, 0.0], np.eye(2)) == pytest.approx(25.0, abs=1e-12)

    def test_zero_at_location(self):
        """Test the distance vanishes at the location."""
        mu = np.array([1.0, -2.0, 0.5])
        assert mahalanobis_sq(mu, mu, ar_covariance(3, 0.3)) == 0.0

    def test_one_dimensional_scaling(self):
        """Test Sigma = 4 and offset 2 give distance 1."""
        assert mahalanobis_sq([2.0], [0.0], [[4.0]]) == pytest.approx(1.0)

    def test_affine_invariance(self):
        """Test distances are unchanged by an invertible affine map."""
        rng = np.random.default_rng(23)
        for p in (2, 4, 6):
            x, mu, b = rng.standard_normal((3, p))
            S = random_spd(rng, p)
            A = rng.standard_normal((p, p)) + 3 * np.eye(p)
            before = mahalanobis_sq(x, mu, S)
            after = mahalanobis_sq(A @ x + b, A @ mu + b, A @ S @ A.T)
            assert after == pytest.approx(before, rel=1e-8)

    def test_affine_invariance_under_unit_change(self):
        """Test a diagonal map spanning eight orders of magnitude keeps the distance."""
        x, mu = np.array([1.5, -0.5]), np.array([0.25, 0.75])
        A = np.diag([1e4, 1e-4])
        before = mahalanobis_sq(x, mu, np.eye(2))
        assert mahalanobis_sq(A @ x, A @ mu, A @ np.eye(2) @ A.T) == pytest.approx(before, rel=1e-8)

    def test_dimension_mismatch(self):
        """Test mismatched dimensions are domain errors."""
        with pytest.raises(DomainError):
            mahalanobis_sq([1.0, 2.0], [0.0], np.eye(2))

    def test_singular_scatter(self):
        """Test a singular scatter is not positive definite."""
        with pytest.raises(NotPositiveDefiniteError):
            mahalanobis_sq([1.0, 2.0], [0.0, 0.0], np.zeros((2, 2)))

    def test_rows_match_single_distance(self):
        """Test the batched form agrees with the per-row form."""
        rng = np.random.default_rng(29)
        X = rng.standard_normal((12, 3))
        mu = rng.standard_normal(3)
        S = random_spd(rng, 3)
        batched = mahalanobis_sq_rows(X, mu, S)
        expected = [mahalanobis_sq(row, mu, S) for row in X]
        np.testing.assert_allclose(batched, expected, rtol=1e-12)


@pytest.mark.unit
class TestChiSquaredQuantile:
    """Test cases for chi2_quantile."""

    def test_df2_closed_form(self):
        """Test df=2 matches -2 ln(1 - prob)."""
        assert chi2_quantile(2, 0.95) == pytest.approx(-2.0 * math.log(0.05), rel=1e-8)
        assert chi2_quantile(2, 0.95) == pytest.approx(5.99146, abs=1e-5)

    def test_df1(self):
        """Test the familiar 95% point for one degree of freedom."""
        assert chi2_quantile(1, 0.95) == pytest.approx(3.84146, abs=1e-5)

    @pytest.mark.parametrize('df', [1, 2, 10, 500])
    def test_prob_zero(self, df):
        """Test prob=0 gives 0."""
        assert chi2_quantile(df, 0.0) == 0.0

    @pytest.mark.parametrize('df', [1, 3, 30, 1000])
    def test_inverts_cdf(self, df):
        """Test the quantile is an inverse of the CDF."""
        q = chi2_quantile(df, 0.99)
        assert chi2_cdf(q, df) == pytest.approx(0.99, abs=1e-9)

    def test_increasing_in_prob_and_df(self):
        """Test monotonicity on a grid of probabilities and degrees of freedom."""
        probs = [0.01, 0.1, 0.5, 0.9, 0.95, 0.999]
        for df in (1, 2, 5, 20):
            values = [chi2_quantile(df, prob) for prob in probs]
            assert all(a < b for a, b in zip(values, values[1:]))
        for prob in probs:
            values = [chi2_quantile(df, prob) for df in (1, 2, 5, 20, 100)]
            assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize('df, prob', [
        (2, 1.0),
        (2, -0.1),
        (0, 0.5),
        (2.5, 0.5),
        (True, 0.5),
    ])
    def test_domain_errors(self, df, prob):
        """Test invalid df or prob raise domain errors."""
        with pytest.raises(DomainError):
            chi2_quantile(df, prob)


@pytest.mark.unit
class TestRobustEstimate:
    """Test cases for RobustEstimate."""

    def test_from_sample_restricts_variables(self):
        """Test the estimate lives on the requested variables with df equal to their count."""
        rng = np.random.default_rng(31)
        X = rng.standard_normal((30, 5))
        estimate = RobustEstimate.from_sample(X, (1, 3))
        assert estimate.variables == (1, 3)
        assert estimate.df == 2
        np.testing.assert_allclose(estimate.location, X[:, [1, 3]].mean(axis=0))

    def test_distances_use_selected_columns(self):
        """Test distances of an estimate on a subset of variables."""
        estimate = RobustEstimate(location=[0.0, 0.0], scatter=np.eye(2), variables=(0, 2))
        X = np.array([[3.0, 100.0, 4.0], [0.0, -5.0, 0.0]])
        np.testing.assert_allclose(estimate.distances(X), [25.0, 0.0])

    def test_rejects_unsorted_variables(self):
        """Test variables must be strictly increasing."""
        with pytest.raises(DomainError):
            RobustEstimate(location=[0.0, 0.0], scatter=np.eye(2), variables=(2, 1))

    def test_rejects_asymmetric_scatter(self):
        """Test an asymmetric scatter is a domain error."""
        with pytest.raises(DomainError):
            RobustEstimate(location=[0.0, 0.0], scatter=[[1.0, 0.1], [0.0, 1.0]], variables=(0, 1))

    def test_rejects_singular_scatter(self):
        """Test a singular scatter is not positive definite."""
        with pytest.raises(NotPositiveDefiniteError):
            RobustEstimate(location=[0.0, 0.0], scatter=np.ones((2, 2)), variables=(0, 1))

    def test_rejects_shape_mismatch(self):
        """Test location length must match the variable count."""
        with pytest.raises(DomainError):
            RobustEstimate(location=[0.0], scatter=np.eye(2), variables=(0, 1))

    def test_rejects_variable_out_of_range(self):
        """Test distances fail when the data lacks an estimate variable."""
        estimate = RobustEstimate(location=[0.0, 0.0], scatter=np.eye(2), variables=(0, 4))
        with pytest.raises(DomainError):
            estimate.distances(np.zeros((3, 3)))
