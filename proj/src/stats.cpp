#include "leontief/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace leontief {

namespace {

double t_test_p(double t_stat, double dof) {
	if (!std::isfinite(t_stat)) return 0.0;
	boost::math::students_t dist(dof);
	return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t_stat)));
}

}  // namespace

RegressionResult ols(const Vector& x, const Vector& y,
                     const std::vector<Vector>& extra_covariates) {
	int n = static_cast<int>(x.size());
	if (y.size() != n) throw DomainError("x and y must have the same length");
	int k = 2 + static_cast<int>(extra_covariates.size());
	if (n <= k) throw DomainError("need more observations than coefficients");

	Matrix design(n, k);
	design.col(0).setOnes();
	design.col(1) = x;
	std::vector<std::string> names{"intercept", "x"};
	for (size_t c = 0; c < extra_covariates.size(); ++c) {
		if (extra_covariates[c].size() != n)
			throw DomainError("covariate length mismatch");
		design.col(2 + static_cast<int>(c)) = extra_covariates[c];
		names.push_back("covariate_" + std::to_string(c + 1));
	}

	Eigen::ColPivHouseholderQR<Matrix> qr(design);
	qr.setThreshold(1e-10);
	if (qr.rank() < k) {
		// columns permuted to the back by the pivoting are the dependent ones
		std::ostringstream msg;
		msg << "design matrix is rank deficient; collinear columns:";
		auto perm = qr.colsPermutation().indices();
		for (int c = qr.rank(); c < k; ++c) msg << " " << names[perm(c)];
		throw DomainError(msg.str());
	}

	Vector beta = qr.solve(y);
	Vector residuals = y - design * beta;
	double rss = residuals.squaredNorm();
	double tss = (y.array() - y.mean()).matrix().squaredNorm();
	double dof = n - k;
	double sigma2 = rss / dof;
	Matrix xtx_inv = (design.transpose() * design).ldlt().solve(Matrix::Identity(k, k));

	RegressionResult out;
	out.n = n;
	out.intercept = beta(0);
	out.slope = beta(1);
	out.r_squared = tss > 0 ? 1.0 - rss / tss : 0.0;
	for (int c = 0; c < k; ++c) {
		double se = std::sqrt(std::max(sigma2 * xtx_inv(c, c), 0.0));
		double p = se > 0 ? t_test_p(beta(c) / se, dof) : 0.0;
		out.coefficients.push_back(beta(c));
		out.std_errors.push_back(se);
		out.p_values.push_back(p);
	}
	out.p_value_slope = out.p_values[1];
	return out;
}

Correlation pearson(const Vector& x, const Vector& y) {
	int n = static_cast<int>(x.size());
	if (y.size() != n) throw DomainError("x and y must have the same length");
	if (n < 3) throw DomainError("need at least 3 observations");
	Vector xc = x.array() - x.mean();
	Vector yc = y.array() - y.mean();
	double denom = xc.norm() * yc.norm();
	if (denom == 0) throw DomainError("zero variance input");
	Correlation out;
	out.n = n;
	out.r = xc.dot(yc) / denom;
	double r2 = std::min(out.r * out.r, 1.0);
	if (r2 >= 1.0) {
		out.p_value = 0.0;
	} else {
		double t_stat = out.r * std::sqrt((n - 2) / (1.0 - r2));
		out.p_value = t_test_p(t_stat, n - 2);
	}
	return out;
}

std::vector<Bin> bin_means(const Vector& x, const Vector& y, int target_bin_size) {
	int n = static_cast<int>(x.size());
	if (y.size() != n) throw DomainError("x and y must have the same length");
	if (n == 0) throw DomainError("no data to bin");
	if (target_bin_size < 1) throw DomainError("bin size must be at least 1");

	// canonical order: sort the pairs, so tied x cannot leak input order
	std::vector<std::pair<double, double>> pts(n);
	for (int i = 0; i < n; ++i) pts[i] = {x(i), y(i)};
	std::sort(pts.begin(), pts.end());

	int full = n / target_bin_size;
	int remainder = n % target_bin_size;
	int bins = full;
	if (full == 0 || remainder * 2 >= target_bin_size) bins += (remainder > 0);
	if (bins == 0) bins = 1;

	std::vector<Bin> out;
	int begin = 0;
	for (int b = 0; b < bins; ++b) {
		int end = (b == bins - 1) ? n : begin + target_bin_size;
		int count = end - begin;
		double cx = 0.0, my = 0.0;
		for (int i = begin; i < end; ++i) {
			cx += pts[i].first;
			my += pts[i].second;
		}
		cx /= count;
		my /= count;
		double ss = 0.0;
		for (int i = begin; i < end; ++i) {
			double d = pts[i].second - my;
			ss += d * d;
		}
		Bin bin;
		bin.center = cx;
		bin.mean_y = my;
		bin.count = count;
		bin.stderr_y = count > 1 ? std::sqrt(ss / (count - 1) / count) : 0.0;
		out.push_back(bin);
		begin = end;
	}
	return out;
}

NormalizeResult center_normalize_by_group(const Vector& values,
                                          const std::vector<std::string>& groups) {
	int n = static_cast<int>(values.size());
	if (static_cast<int>(groups.size()) != n)
		throw DomainError("group labels must match value count");

	std::map<std::string, std::vector<int>> members;
	for (int i = 0; i < n; ++i) members[groups[i]].push_back(i);

	NormalizeResult out;
	out.values = Vector::Constant(n, std::nan(""));
	for (const auto& [label, idx] : members) {
		double mean = 0.0;
		for (int i : idx) mean += values(i);
		mean /= idx.size();
		double ss = 0.0;
		for (int i : idx) ss += (values(i) - mean) * (values(i) - mean);
		double sd = idx.size() > 1 ? std::sqrt(ss / (idx.size() - 1)) : 0.0;
		if (sd == 0.0) {
			out.excluded_groups.push_back(label);
			continue;
		}
		for (int i : idx) out.values(i) = (values(i) - mean) / sd;
	}
	return out;
}

Ar1Forecast ar1_forecast(const Vector& gamma_first, const Vector& gamma_second,
                         const Vector* covariate_L) {
	std::vector<Vector> extras;
	if (covariate_L) extras.push_back(*covariate_L);
	RegressionResult fit;
	try {
		fit = ols(gamma_first, gamma_second, extras);
	} catch (const DomainError& e) {
		throw DomainError(std::string(e.what()) +
		                  "; with a degenerate regressor fall back to the intercept-only mean forecast");
	}

	Ar1Forecast out;
	out.a_hat = fit.intercept;
	out.b_hat = fit.slope;
	out.gamma_next = (fit.intercept + fit.slope * gamma_second.array()).matrix();
	if (covariate_L) {
		out.c_hat = fit.coefficients[2];
		out.gamma_next += *out.c_hat * *covariate_L;
	}
	return out;
}

}  // namespace leontief
