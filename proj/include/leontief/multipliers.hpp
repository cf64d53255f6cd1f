#pragma once

#include <map>

#include "leontief/linops.hpp"

namespace leontief {

// L_i is the total intermediate production triggered per unit of final
// demand for i, equivalently the mean absorbing-walk length from i.
struct MultiplierReport {
	std::vector<IndustryId> industries;
	Vector L;           // output multipliers
	double L_bar = 0.0; // theta-weighted average
	Vector domar;       // (I - A)^-1 theta, gross output per unit GDP
	double O_over_Y = 0.0;
	bool open_economy = false;  // set when theta.L and O/Y disagree
	double discrepancy = 0.0;   // |theta.L - O/Y|
	std::map<std::string, double> by_country;  // per-country renormalised averages
};

// L = (I - A^T)^-1 1, satisfying L_i = 1 + sum_j L_j a_ji.
Vector output_multipliers(const CoefficientSystem& cs);

// theta-weighted mean; equals O/Y for closed economies.
double average_output_multiplier(const CoefficientSystem& cs, const Vector& L);

// Domar weights (I - A)^-1 theta; equal M/Y under balance.
Vector domar_weights(const CoefficientSystem& cs);

MultiplierReport multiplier_report(const CoefficientSystem& cs, bool by_country = false);

}  // namespace leontief
