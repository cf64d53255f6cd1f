#include "leontief/growth.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <thread>

namespace leontief {

namespace {

constexpr double kRouteTol = 1e-10;

// Shared column-parallel evaluation of R = H^T T where T = G H. Each worker
// owns a disjoint column range and the per-column order is fixed, so the
// result is bitwise independent of the thread count.
Matrix transpose_product(const Matrix& h, const Matrix& t, int threads) {
	int n = static_cast<int>(h.rows());
	Matrix r(n, n);
	int workers = std::max(1, resolve_threads(threads));
	if (workers == 1 || n < 128) {
		r.noalias() = h.transpose() * t;
		return r;
	}
	std::vector<std::thread> pool;
	int chunk = (n + workers - 1) / workers;
	for (int w = 0; w < workers; ++w) {
		int begin = w * chunk;
		int end = std::min(n, begin + chunk);
		if (begin >= end) break;
		pool.emplace_back([&, begin, end]() {
			r.middleCols(begin, end - begin).noalias() =
			    h.transpose() * t.middleCols(begin, end - begin);
		});
	}
	for (auto& th : pool) th.join();
	return r;
}

}  // namespace

Matrix real_returns(const PriceSeries& series, Deflator deflator, const Vector* theta) {
	Matrix out = series.returns;
	for (int t = 0; t < series.periods(); ++t) {
		double rho;
		if (deflator == Deflator::wage) {
			rho = series.wage_growth(t);
		} else {
			if (theta == nullptr || theta->size() != out.cols())
				throw DomainError("cpi deflator needs GDP shares");
			rho = theta->dot(out.row(t).transpose());
		}
		out.row(t).array() -= rho;
	}
	return out;
}

Vector predict_returns(const LeontiefInverse& H, const Vector& gamma) {
	if (gamma.size() != H.H.rows()) throw DomainError("gamma size mismatch");
	return -(H.H.transpose() * gamma);
}

Vector expected_return_given_L(double gamma_bar, const Vector& L) {
	return -gamma_bar * L;
}

GrowthPrediction predict_growth(const CoefficientSystem& cs, const Vector& gamma) {
	if (gamma.size() != cs.size()) throw DomainError("gamma size mismatch");
	GrowthPrediction out;
	out.gamma_tilde = cs.eta.dot(gamma);
	Vector L = output_multipliers(cs);
	out.L_bar = cs.theta.dot(L);
	out.g = out.gamma_tilde * out.L_bar;
	out.g_via_theta_H = cs.theta.dot(solve_leontief(cs, gamma, true));
	out.g_via_domar = domar_weights(cs).dot(gamma);

	double spread = std::max({std::abs(out.g - out.g_via_theta_H),
	                          std::abs(out.g - out.g_via_domar),
	                          std::abs(out.g_via_theta_H - out.g_via_domar)});
	out.route_spread = spread;
	out.closed = spread <= kRouteTol * std::max(1.0, std::abs(out.g));
	return out;
}

double hulten_check(const CoefficientSystem& cs, const Vector& gamma) {
	if (gamma.size() != cs.size()) throw DomainError("gamma size mismatch");
	// Domar weights straight from stored shares: M_i / Y = eta_i O / Y.
	Vector domar_data = cs.eta * (cs.gross_output / cs.gdp);
	Vector L = output_multipliers(cs);
	return std::abs(cs.eta.dot(gamma) * cs.theta.dot(L) - domar_data.dot(gamma));
}

Vector estimate_productivity(const CoefficientSystem& cs, const Vector& real_r) {
	if (real_r.size() != cs.size()) throw DomainError("return vector size mismatch");
	return cs.A.transpose() * real_r - real_r;
}

ReturnDecomposition decompose_returns(const CoefficientSystem& cs, const Vector& real_r,
                                      const Vector& gamma) {
	if (real_r.size() != cs.size() || gamma.size() != cs.size())
		throw DomainError("vector size mismatch");
	ReturnDecomposition out;
	out.direct = -gamma;
	out.inherited = cs.A.transpose() * real_r;  // sum_j r_j a_ji
	return out;
}

Matrix predict_covariances(const LeontiefInverse& H, const Matrix& G, int threads) {
	int n = static_cast<int>(H.H.rows());
	if (G.rows() != n || G.cols() != n) throw DomainError("covariance size mismatch");
	double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
	if (asym > 1e-10) throw DomainError("gamma covariance must be symmetric");
	Eigen::SelfAdjointEigenSolver<Matrix> eigen(0.5 * (G + G.transpose()),
	                                            Eigen::EigenvaluesOnly);
	double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
	if (eigen.eigenvalues().minCoeff() < -1e-10 * scale)
		throw DomainError("gamma covariance must be positive semidefinite");
	Matrix t = G * H.H;
	return transpose_product(H.H, t, threads);
}

Matrix predict_covariances(const LeontiefInverse& H, const Vector& diag_G, int threads) {
	int n = static_cast<int>(H.H.rows());
	if (diag_G.size() != n) throw DomainError("covariance size mismatch");
	if ((diag_G.array() < 0).any())
		throw DomainError("gamma variances must be nonnegative");
	Matrix t = diag_G.asDiagonal() * H.H;
	return transpose_product(H.H, t, threads);
}

Matrix estimate_gamma_covariance(const ProductivitySeries& series, bool diagonal_only) {
	int t_count = series.periods();
	int n = static_cast<int>(series.gamma.cols());
	if (t_count < 2) throw DomainError("need at least two periods for a covariance");
	Matrix centered = series.gamma.rowwise() - series.gamma.colwise().mean();
	if (diagonal_only) {
		Matrix out = Matrix::Zero(n, n);
		out.diagonal() = centered.array().square().colwise().sum() / (t_count - 1);
		return out;
	}
	return (centered.transpose() * centered) / (t_count - 1);
}

double correlation_of_summand(double sigma_x, double sigma_y, double cov) {
	if (sigma_x <= 0 || sigma_y <= 0)
		throw DomainError("standard deviations must be positive");
	if (std::abs(cov) > sigma_x * sigma_y)
		throw DomainError("covariance inconsistent with the standard deviations");
	double var_z = sigma_x * sigma_x + sigma_y * sigma_y + 2.0 * cov;
	if (var_z <= 0) throw DomainError("sum has no variance");
	return (sigma_x + cov / sigma_x) / std::sqrt(var_z);
}

}  // namespace leontief
