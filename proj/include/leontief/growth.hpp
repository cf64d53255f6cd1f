#pragma once

#include "leontief/multipliers.hpp"

namespace leontief {

// Productivity improvement rates per period (T x N, column order matches
// the industries vector). gamma_i is the rate at which industry i's input
// requirements per unit output fall.
struct ProductivitySeries {
	std::vector<IndustryId> industries;
	Matrix gamma;  // T x N
	int periods() const { return static_cast<int>(gamma.rows()); }
};

// Long-format CSV country,industry,period,gamma; periods sorted, full
// coverage required. Column order is taken from `industries`.
ProductivitySeries load_productivity_series(const std::string& path,
                                            const std::vector<IndustryId>& industries);

enum class Deflator { wage, cpi };

// r = r' - rho * 1. Under cpi the deflator is theta . r' per period.
Matrix real_returns(const PriceSeries& series, Deflator deflator = Deflator::wage,
                    const Vector* theta = nullptr);

// Real price returns implied by productivity improvements: r = -H^T gamma.
// Each unit of money spent on i keeps propagating upstream, so i inherits
// every supplier's improvement weighted by H.
Vector predict_returns(const LeontiefInverse& H, const Vector& gamma);

// Cross-sectional expectation when gamma is i.i.d. with mean gamma_bar.
Vector expected_return_given_L(double gamma_bar, const Vector& L);

struct GrowthPrediction {
	double g = 0.0;            // aggregate real GDP growth rate
	double gamma_tilde = 0.0;  // output-weighted mean improvement eta . gamma
	double L_bar = 0.0;        // theta-weighted mean multiplier
	double g_via_theta_H = 0.0;  // theta . (H^T gamma), solve route
	double g_via_domar = 0.0;    // domar . gamma, Hulten route
	bool closed = true;          // routes agree within tolerance
	double route_spread = 0.0;   // max pairwise gap between the three routes
};

// g = gamma_tilde * L_bar, cross-checked against theta.H^T gamma and
// domar.gamma. For closed economies the three agree to 1e-10; open tables
// set closed = false and report the spread instead of asserting.
GrowthPrediction predict_growth(const CoefficientSystem& cs, const Vector& gamma);

// Residual |gamma_tilde * L_bar - sum_i (M_i / Y) gamma_i| with M_i / Y
// taken from stored shares (eta_i O / Y), a solve-free data route.
double hulten_check(const CoefficientSystem& cs, const Vector& gamma);

// Dual estimate gamma_hat = (A^T - I) r; exact left inverse of
// predict_returns.
Vector estimate_productivity(const CoefficientSystem& cs, const Vector& real_r);

struct ReturnDecomposition {
	Vector direct;     // -gamma
	Vector inherited;  // sum_j r_j a_ji, supplier returns passed through
};

// r_i = direct_i + inherited_i when r = predict_returns(H, gamma).
ReturnDecomposition decompose_returns(const CoefficientSystem& cs, const Vector& real_r,
                                      const Vector& gamma);

// R = H^T G H for symmetric PSD G (checked to 1e-10). The diagonal overload
// computes R_ij = sum_m H_mi d_m H_mj without materialising G. Column
// blocks may be computed in parallel; the per-column order is fixed so
// results do not depend on the tiling.
Matrix predict_covariances(const LeontiefInverse& H, const Matrix& G, int threads = 1);
Matrix predict_covariances(const LeontiefInverse& H, const Vector& diag_G, int threads = 1);

// Unbiased covariance of per-period gamma draws (divisor T - 1).
// diagonal_only keeps just per-industry variances.
Matrix estimate_gamma_covariance(const ProductivitySeries& series, bool diagonal_only = true);

// Correlation of X with Z = X + Y given standard deviations and covariance:
// rho_ZX = (sigma_X + cov/sigma_X) / sqrt(sigma_X^2 + sigma_Y^2 + 2 cov).
// Equal variances with zero covariance give 1/sqrt(2).
double correlation_of_summand(double sigma_x, double sigma_y, double cov);

}  // namespace leontief
