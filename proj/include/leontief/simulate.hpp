#pragma once

#include "leontief/growth.hpp"

namespace leontief {

// wage_numeraire pins w = 1 (so rho = 0); gdp_numeraire pins the GDP
// deflator, the theta-weighted geometric price index of final goods, at 1
// and lets the wage float. Real quantities agree across the two.
enum class Numeraire { wage_numeraire, gdp_numeraire };

// Physical technology plus prices at time t. Household expenditure shares
// theta_i = c_i p_i / w stay fixed across steps (homothetic households);
// consumption per unit labor is re-derived from them after each re-pricing.
struct EconomyState {
	PhysicalSystem physical;
	double t = 0.0;
	Numeraire normalization = Numeraire::wage_numeraire;

	Vector expenditure_shares() const;  // theta implied by (c, p, w)
};

EconomyState make_state(const CoefficientSystem& cs,
                        Numeraire normalization = Numeraire::wage_numeraire);

// Piecewise-constant coefficient decay rates. Columns 0..N-1 hold gamma_ij
// (input good j of industry i), column N holds the labor rate gamma_iL.
class ShockSchedule {
public:
	ShockSchedule() = default;
	explicit ShockSchedule(Matrix constant_rates);
	ShockSchedule(std::vector<double> breakpoints, std::vector<Matrix> rates);

	// Uniform rate gamma_i over all inputs of i (Hicks-neutral improvement).
	static ShockSchedule uniform(const Vector& gamma_by_industry);
	static ShockSchedule uniform(int n, double gamma);

	const Matrix& rates_at(double t) const;
	int size() const;

private:
	std::vector<double> breakpoints_;  // rates_[k] applies on [breakpoints_[k], next)
	std::vector<Matrix> rates_;
};

// Industry improvement rate implied by a rate matrix at the current input
// mix: gamma_i = sum_j gamma_ij a_ji + gamma_iL l~_i.
Vector industry_gamma(const CoefficientSystem& cs, const Matrix& rates);

// Money-side coefficients implied by the current state.
CoefficientSystem money_coefficients(const EconomyState& state);

// One step of length dt: coefficients decay exactly (phi *= exp(-gamma dt)),
// prices re-solve from p = Phi p + l w under the active numeraire, and
// consumption is re-derived from the fixed expenditure shares. Keeps the
// equilibrium residual and household budget w = c.p at solver precision.
EconomyState step(const EconomyState& state, const ShockSchedule& schedule, double dt);

// Per-step diagnostics; row k covers the step from times[k] to times[k+1].
// Model quantities are evaluated at the step start, so realized figures
// trail them by the first-order discretisation error.
struct Trajectory {
	std::vector<IndustryId> industries;
	std::vector<double> times;        // steps + 1 entries
	Matrix prices;                    // (steps + 1) x N
	std::vector<double> wages;        // steps + 1
	std::vector<double> log_real_gdp; // steps + 1, starts at 0
	std::vector<double> L_bar;        // steps + 1
	std::vector<double> gamma_tilde;  // steps + 1
	Matrix realized_returns;          // steps x N, d log(p/w) / dt
	Matrix model_returns;             // steps x N, -H^T gamma at step start
	std::vector<double> realized_growth;  // steps, per-year rate
	std::vector<double> model_growth;     // steps, gamma_tilde * L_bar at step start
	int steps() const { return static_cast<int>(realized_growth.size()); }
};

Trajectory run(const EconomyState& initial, const ShockSchedule& schedule, double horizon,
               double dt);

// Cobb-Douglas production with exponent rows beta (N x (N+1), rows sum to
// 1) and prefactor growth rates gamma: expenditure shares equal beta and
// stay constant while prices move. Drives the general simulator with the
// implied decay schedule gamma_ij = r_j - r_i and measures the share drift;
// recovered_gamma applies the dual estimator to realized returns.
struct CobbDouglasCheck {
	double max_share_drift = 0.0;
	Vector realized_return_rate;  // mean d log p / dt over the horizon
	Vector recovered_gamma;
};

CobbDouglasCheck cobb_douglas_check(const Matrix& beta, const Vector& gamma, double horizon,
                                    double dt);

}  // namespace leontief
