#include "leontief/coefficients.hpp"

#include <cmath>
#include <sstream>

namespace leontief {

void check_coefficients(const CoefficientSystem& cs, double tol) {
	int n = cs.size();
	if (cs.A.rows() != n || cs.A.cols() != n || cs.labor_share.size() != n ||
	    cs.theta.size() != n || cs.eta.size() != n)
		throw ValidationError("coefficient system has inconsistent dimensions");
	if ((cs.A.array() < 0).any() || (cs.labor_share.array() < 0).any())
		throw ValidationError("coefficients must be nonnegative");
	Vector col_sums = cs.A.colwise().sum().transpose() + cs.labor_share;
	for (int j = 0; j < n; ++j)
		if (std::abs(col_sums(j) - 1.0) > tol) {
			std::ostringstream msg;
			msg << "column " << cs.industries[j].label() << " sums to " << col_sums(j)
			    << ", expected 1";
			throw ValidationError(msg.str());
		}
	if (std::abs(cs.theta.sum() - 1.0) > tol) throw ValidationError("theta must sum to 1");
	if (std::abs(cs.eta.sum() - 1.0) > tol) throw ValidationError("eta must sum to 1");
}

void check_physical(const PhysicalSystem& ps, double price_rel_tol) {
	int n = static_cast<int>(ps.industries.size());
	if (ps.Phi.rows() != n || ps.Phi.cols() != n || ps.labor.size() != n ||
	    ps.consumption.size() != n || ps.prices.size() != n)
		throw ValidationError("physical system has inconsistent dimensions");
	if ((ps.prices.array() <= 0).any() || ps.wage <= 0)
		throw ValidationError("prices and wage must be positive");
	Vector lhs = ps.prices;
	Vector rhs = ps.Phi * ps.prices + ps.labor * ps.wage;
	double gap = (lhs - rhs).cwiseAbs().maxCoeff() / ps.prices.cwiseAbs().maxCoeff();
	if (gap > price_rel_tol)
		throw ValidationError("prices do not satisfy p = Phi p + l w (gap " +
		                      std::to_string(gap) + ")");
	double budget = std::abs(ps.consumption.dot(ps.prices) - ps.wage) / ps.wage;
	if (budget > price_rel_tol)
		throw ValidationError("household budget w = c.p violated (gap " +
		                      std::to_string(budget) + ")");
}

CoefficientSystem build_coefficients(const IOTable& table) {
	int n = table.size();
	Vector output = gross_output(table);
	for (int j = 0; j < n; ++j)
		if (output(j) <= 0.0)
			throw ValidationError("industry " + table.industries[j].label() +
			                      " has zero gross output");

	CoefficientSystem cs;
	cs.industries = table.industries;
	cs.A = table.intermediate_flows * output.cwiseInverse().asDiagonal();
	cs.labor_share = table.labor_payments.cwiseQuotient(output);
	cs.gdp = table.final_demand.sum();
	cs.gross_output = output.sum();
	if (cs.gdp <= 0.0) throw ValidationError("table has no final demand");
	cs.theta = table.final_demand / cs.gdp;
	cs.eta = output / cs.gross_output;
	check_coefficients(cs, 1e-12);
	return cs;
}

PhysicalSystem to_physical(const CoefficientSystem& cs, const Vector& prices, double wage) {
	int n = cs.size();
	if (prices.size() != n) throw DomainError("price vector size mismatch");
	if ((prices.array() <= 0).any() || wage <= 0)
		throw DomainError("prices and wage must be positive");

	PhysicalSystem ps;
	ps.industries = cs.industries;
	// phi_ij = a_ji p_i / p_j: the similarity transform P A^T P^-1
	ps.Phi = prices.asDiagonal() * cs.A.transpose() * prices.cwiseInverse().asDiagonal();
	ps.labor = cs.labor_share.cwiseProduct(prices) / wage;
	ps.consumption = wage * cs.theta.cwiseQuotient(prices);
	ps.prices = prices;
	ps.wage = wage;
	check_physical(ps, 1e-10);
	return ps;
}

CoefficientSystem from_physical(const PhysicalSystem& ps) {
	int n = static_cast<int>(ps.industries.size());
	CoefficientSystem cs;
	cs.industries = ps.industries;
	cs.A = ps.prices.asDiagonal() * ps.Phi.transpose() * ps.prices.cwiseInverse().asDiagonal();
	cs.labor_share = ps.wage * ps.labor.cwiseQuotient(ps.prices);
	Vector expenditure = ps.consumption.cwiseProduct(ps.prices);
	double total = expenditure.sum();
	if (total <= 0) throw ValidationError("household expenditures vanish");
	cs.theta = expenditure / total;

	// Money gross outputs solve M = A M + theta Y with nominal GDP w per
	// unit labor; eta and O follow.
	Vector y = cs.theta * ps.wage;
	Matrix ia = Matrix::Identity(n, n) - cs.A;
	Vector m = ia.partialPivLu().solve(y);
	cs.gdp = ps.wage;
	cs.gross_output = m.sum();
	cs.eta = m / cs.gross_output;
	check_coefficients(cs, 1e-10);
	return cs;
}

}  // namespace leontief
