#include "leontief/multipliers.hpp"

namespace leontief {

Vector output_multipliers(const CoefficientSystem& cs) {
	return solve_leontief(cs, Vector::Ones(cs.size()), true);
}

double average_output_multiplier(const CoefficientSystem& cs, const Vector& L) {
	if (L.size() != cs.size()) throw DomainError("multiplier vector size mismatch");
	return cs.theta.dot(L);
}

Vector domar_weights(const CoefficientSystem& cs) {
	return solve_leontief(cs, cs.theta, false);
}

MultiplierReport multiplier_report(const CoefficientSystem& cs, bool by_country) {
	MultiplierReport report;
	report.industries = cs.industries;
	report.L = output_multipliers(cs);
	report.L_bar = average_output_multiplier(cs, report.L);
	report.domar = domar_weights(cs);
	report.O_over_Y = cs.gross_output / cs.gdp;
	report.discrepancy = std::abs(report.L_bar - report.O_over_Y);
	report.open_economy = report.discrepancy > 1e-9 * std::max(1.0, report.L_bar);

	if (by_country) {
		std::map<std::string, std::pair<double, double>> acc;  // sum theta*L, sum theta
		for (int i = 0; i < cs.size(); ++i) {
			auto& slot = acc[cs.industries[i].country];
			slot.first += cs.theta(i) * report.L(i);
			slot.second += cs.theta(i);
		}
		for (const auto& [country, sums] : acc)
			if (sums.second > 0) report.by_country[country] = sums.first / sums.second;
	}
	return report;
}

}  // namespace leontief
