#pragma once

#include <optional>

#include "leontief/common.hpp"

namespace leontief {

// Least squares of y on [1, x, extra covariates]. slope / p_value_slope
// refer to x; coefficients holds (intercept, x, extras...) with matching
// two-sided t-test p-values (exact t CDF, n - k dof).
struct RegressionResult {
	double slope = 0.0;
	double intercept = 0.0;
	double r_squared = 0.0;
	double p_value_slope = 1.0;
	int n = 0;
	std::vector<double> coefficients;
	std::vector<double> p_values;
	std::vector<double> std_errors;
};

RegressionResult ols(const Vector& x, const Vector& y,
                     const std::vector<Vector>& extra_covariates = {});

// Pearson correlation with the t-transform p-value (n - 2 dof).
struct Correlation {
	double r = 0.0;
	double p_value = 1.0;
	int n = 0;
};

Correlation pearson(const Vector& x, const Vector& y);

struct Bin {
	double center = 0.0;  // mean x within the bin
	double mean_y = 0.0;
	double stderr_y = 0.0;
	int count = 0;
};

// Sorts by (x, y) and cuts contiguous bins of target_bin_size; a remainder
// shorter than half the target is absorbed into the last bin, otherwise it
// forms its own. Permutation-invariant in the input order.
std::vector<Bin> bin_means(const Vector& x, const Vector& y, int target_bin_size);

struct NormalizeResult {
	Vector values;  // NaN for members of excluded groups
	std::vector<std::string> excluded_groups;  // zero within-group variance
};

// (v - group mean) / group sample std per group. Idempotent on the kept
// groups up to floating point.
NormalizeResult center_normalize_by_group(const Vector& values,
                                          const std::vector<std::string>& groups);

// Fit gamma_II = a + b gamma_I (+ c L), then forecast a + b gamma_II (+ c L).
struct Ar1Forecast {
	double a_hat = 0.0;
	double b_hat = 0.0;
	std::optional<double> c_hat;
	Vector gamma_next;  // forecast for the following period
};

Ar1Forecast ar1_forecast(const Vector& gamma_first, const Vector& gamma_second,
                         const Vector* covariate_L = nullptr);

}  // namespace leontief
