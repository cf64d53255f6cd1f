#pragma once

#include <sstream>
#include <string>

#include "leontief/coefficients.hpp"
#include "leontief/iotable.hpp"
#include "leontief/synthetic.hpp"

namespace leontief::testing {

inline LoadResult load_csv(const std::string& text, const LoadOptions& options = {}) {
	std::istringstream in(text);
	return load_iotable(in, options, "<test>");
}

inline CoefficientSystem coeffs_of(const IOTable& table) { return build_coefficients(table); }

inline CoefficientSystem chain_coeffs(double labor_share_a = 0.4) {
	return build_coefficients(synthetic::chain(labor_share_a));
}

inline CoefficientSystem random_coeffs(int n, std::uint64_t seed, int countries = 1) {
	return build_coefficients(synthetic::random_closed_economy(n, seed, countries));
}

}  // namespace leontief::testing
