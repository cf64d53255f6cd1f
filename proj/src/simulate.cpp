#include "leontief/simulate.hpp"

#include <cmath>

namespace leontief {

namespace {

constexpr double kSpectralMargin = 1e-10;

Vector solve_prices_per_wage(const Matrix& phi, const Vector& labor) {
	if (spectral_radius(phi) >= 1.0 - kSpectralMargin)
		throw SingularityError("I - Phi became singular after the coefficient update");
	int n = static_cast<int>(phi.rows());
	Matrix ia = Matrix::Identity(n, n) - phi;
	Vector q = ia.partialPivLu().solve(labor);
	q += ia.partialPivLu().solve(labor - ia * q);  // one refinement pass
	if ((q.array() <= 0).any())
		throw NumericError("price solve produced a nonpositive price");
	return q;
}

}  // namespace

Vector EconomyState::expenditure_shares() const {
	return physical.consumption.cwiseProduct(physical.prices) / physical.wage;
}

EconomyState make_state(const CoefficientSystem& cs, Numeraire normalization) {
	EconomyState state;
	state.physical = to_physical(cs, Vector::Ones(cs.size()), 1.0);
	state.t = 0.0;
	state.normalization = normalization;
	return state;
}

ShockSchedule::ShockSchedule(Matrix constant_rates)
    : breakpoints_{0.0}, rates_{std::move(constant_rates)} {
	if (rates_[0].cols() != rates_[0].rows() + 1)
		throw DomainError("rate matrix must be N x (N+1)");
}

ShockSchedule::ShockSchedule(std::vector<double> breakpoints, std::vector<Matrix> rates)
    : breakpoints_(std::move(breakpoints)), rates_(std::move(rates)) {
	if (breakpoints_.empty() || breakpoints_.size() != rates_.size())
		throw DomainError("need one rate matrix per breakpoint");
	for (size_t k = 1; k < breakpoints_.size(); ++k)
		if (breakpoints_[k] <= breakpoints_[k - 1])
			throw DomainError("breakpoints must increase");
	for (const auto& m : rates_)
		if (m.cols() != m.rows() + 1 || m.rows() != rates_[0].rows())
			throw DomainError("rate matrices must all be N x (N+1)");
}

ShockSchedule ShockSchedule::uniform(const Vector& gamma_by_industry) {
	int n = static_cast<int>(gamma_by_industry.size());
	Matrix rates(n, n + 1);
	for (int i = 0; i < n; ++i) rates.row(i).setConstant(gamma_by_industry(i));
	return ShockSchedule(std::move(rates));
}

ShockSchedule ShockSchedule::uniform(int n, double gamma) {
	return ShockSchedule(Matrix::Constant(n, n + 1, gamma));
}

const Matrix& ShockSchedule::rates_at(double t) const {
	if (rates_.empty()) throw DomainError("empty shock schedule");
	size_t k = rates_.size() - 1;
	while (k > 0 && breakpoints_[k] > t) --k;
	return rates_[k];
}

int ShockSchedule::size() const {
	return rates_.empty() ? 0 : static_cast<int>(rates_[0].rows());
}

Vector industry_gamma(const CoefficientSystem& cs, const Matrix& rates) {
	int n = cs.size();
	if (rates.rows() != n || rates.cols() != n + 1)
		throw DomainError("rate matrix size mismatch");
	Vector gamma(n);
	for (int i = 0; i < n; ++i) {
		// expenditure-share weights: a_ji for input goods, l~_i for labor
		double acc = rates(i, n) * cs.labor_share(i);
		for (int j = 0; j < n; ++j) acc += rates(i, j) * cs.A(j, i);
		gamma(i) = acc;
	}
	return gamma;
}

CoefficientSystem money_coefficients(const EconomyState& state) {
	return from_physical(state.physical);
}

EconomyState step(const EconomyState& state, const ShockSchedule& schedule, double dt) {
	if (dt <= 0) throw DomainError("dt must be positive");
	int n = static_cast<int>(state.physical.industries.size());
	const Matrix& rates = schedule.rates_at(state.t);
	if (rates.rows() != n) throw DomainError("schedule size does not match the economy");

	Vector theta = state.expenditure_shares();

	EconomyState next = state;
	next.physical.Phi =
	    state.physical.Phi.cwiseProduct((-dt * rates.leftCols(n)).array().exp().matrix());
	next.physical.labor =
	    state.physical.labor.cwiseProduct((-dt * rates.col(n)).array().exp().matrix());

	Vector q = solve_prices_per_wage(next.physical.Phi, next.physical.labor);
	if (state.normalization == Numeraire::wage_numeraire) {
		next.physical.wage = 1.0;
		next.physical.prices = q;
	} else {
		// pin the GDP deflator: theta-weighted geometric price index = 1
		double log_scale = -theta.dot(q.array().log().matrix());
		double scale = std::exp(log_scale);
		next.physical.wage = scale;
		next.physical.prices = scale * q;
	}
	next.physical.consumption =
	    next.physical.wage * theta.cwiseQuotient(next.physical.prices);
	next.t = state.t + dt;
	check_physical(next.physical, 1e-10);
	return next;
}

Trajectory run(const EconomyState& initial, const ShockSchedule& schedule, double horizon,
               double dt) {
	if (horizon <= 0 || dt <= 0) throw DomainError("horizon and dt must be positive");
	int steps = static_cast<int>(std::llround(horizon / dt));
	if (steps < 1) steps = 1;

	int n = static_cast<int>(initial.physical.industries.size());
	Trajectory traj;
	traj.industries = initial.physical.industries;
	traj.prices = Matrix::Zero(steps + 1, n);
	traj.realized_returns = Matrix::Zero(steps, n);
	traj.model_returns = Matrix::Zero(steps, n);

	EconomyState state = initial;
	auto record_state = [&](const EconomyState& s, int k) {
		CoefficientSystem cs = money_coefficients(s);
		Vector L = output_multipliers(cs);
		Vector gamma = industry_gamma(cs, schedule.rates_at(s.t));
		traj.times.push_back(s.t);
		traj.prices.row(k) = s.physical.prices.transpose();
		traj.wages.push_back(s.physical.wage);
		traj.L_bar.push_back(cs.theta.dot(L));
		traj.gamma_tilde.push_back(cs.eta.dot(gamma));
		return cs;
	};

	CoefficientSystem cs = record_state(state, 0);
	traj.log_real_gdp.push_back(0.0);
	for (int k = 0; k < steps; ++k) {
		Vector gamma = industry_gamma(cs, schedule.rates_at(state.t));
		Vector r_model = -solve_leontief(cs, gamma, true);
		traj.model_returns.row(k) = r_model.transpose();
		traj.model_growth.push_back(traj.gamma_tilde[k] * traj.L_bar[k]);

		Vector theta = state.expenditure_shares();
		Vector log_real_before =
		    (state.physical.prices / state.physical.wage).array().log().matrix();
		state = step(state, schedule, dt);
		Vector log_real_after =
		    (state.physical.prices / state.physical.wage).array().log().matrix();

		Vector realized = (log_real_after - log_real_before) / dt;
		traj.realized_returns.row(k) = realized.transpose();
		traj.realized_growth.push_back(-theta.dot(realized));
		traj.log_real_gdp.push_back(traj.log_real_gdp.back() - theta.dot(log_real_after - log_real_before));
		cs = record_state(state, k + 1);
	}
	return traj;
}

CobbDouglasCheck cobb_douglas_check(const Matrix& beta, const Vector& gamma, double horizon,
                                    double dt) {
	int n = static_cast<int>(beta.rows());
	if (beta.cols() != n + 1) throw DomainError("beta must be N x (N+1)");
	if (gamma.size() != n) throw DomainError("gamma size mismatch");
	if ((beta.array() < 0).any()) throw DomainError("beta entries must be nonnegative");
	for (int i = 0; i < n; ++i)
		if (std::abs(beta.row(i).sum() - 1.0) > 1e-12)
			throw DomainError("beta rows must sum to 1 (constant returns)");

	// Exponents equal expenditure shares, so the money-side coefficients are
	// the transposed goods block and the labor column.
	CoefficientSystem cs;
	for (int i = 0; i < n; ++i) cs.industries.push_back({"", "cd" + std::to_string(i)});
	cs.A = beta.leftCols(n).transpose();
	cs.labor_share = beta.col(n);
	cs.theta = Vector::Constant(n, 1.0 / n);
	cs.gdp = 1.0;
	Vector m = solve_leontief(cs, cs.theta, false);
	cs.gross_output = m.sum();
	cs.eta = m / cs.gross_output;
	check_coefficients(cs, 1e-12);

	// Competitive Cobb-Douglas input demand keeps shares at beta while the
	// physical coefficients decay at gamma_ij = r_j - r_i (labor: -r_i).
	LeontiefInverse H = leontief_inverse(cs);
	Vector r = predict_returns(H, gamma);
	Matrix rates(n, n + 1);
	for (int i = 0; i < n; ++i) {
		for (int j = 0; j < n; ++j) rates(i, j) = r(j) - r(i);
		rates(i, n) = -r(i);
	}
	ShockSchedule schedule(rates);

	EconomyState state = make_state(cs);
	int steps = static_cast<int>(std::llround(horizon / dt));
	if (steps < 1) steps = 1;

	CobbDouglasCheck check;
	Vector log_p0 = state.physical.prices.array().log().matrix();
	for (int k = 0; k < steps; ++k) {
		state = step(state, schedule, dt);
		CoefficientSystem current = money_coefficients(state);
		double drift = (current.A - cs.A).cwiseAbs().maxCoeff();
		drift = std::max(drift,
		                 (current.labor_share - cs.labor_share).cwiseAbs().maxCoeff());
		check.max_share_drift = std::max(check.max_share_drift, drift);
	}
	Vector log_p1 =
	    (state.physical.prices / state.physical.wage).array().log().matrix();
	check.realized_return_rate = (log_p1 - log_p0) / (steps * dt);
	check.recovered_gamma = estimate_productivity(cs, check.realized_return_rate);
	return check;
}

}  // namespace leontief
