#pragma once

#include "leontief/multipliers.hpp"

namespace leontief {

// Maps each fine industry to a coarse group. Valid maps are surjective onto
// 0..group_count-1 with no empty group.
struct AggregationMap {
	std::vector<int> group_of;        // size = fine industry count
	std::vector<IndustryId> groups;   // coarse labels
	int group_count() const { return static_cast<int>(groups.size()); }
};

void check_aggregation_map(const AggregationMap& map, int fine_count);

// Group by (country, leading `digits` of the industry code). digits = 0
// merges each country into one node.
AggregationMap prefix_digit_map(const IOTable& table, int digits);

// CSV with header fine,coarse; fine entries are CC:IND labels.
AggregationMap load_aggregation_map(const std::string& path, const IOTable& table);

// Sums flows within groups (self-flows included), final demand and labor
// alike. Conserves total output and GDP exactly; closed-economy L_bar is
// invariant because absorbing-walk lengths only relabel states.
IOTable aggregate(const IOTable& table, const AggregationMap& map);

// Zeroes cross-country intermediate flows only; household purchases are
// untouched even across borders. Balance is not preserved, so the result is
// flagged non-strict and coefficients must be rebuilt from the new
// expenditure totals.
IOTable zero_international_trade(const IOTable& table);

// Import shares epsilon(b, c): fraction of country c's input expenditures
// redirected to country b. Zero diagonal; column sums must stay below 1.
struct TradePerturbation {
	std::vector<std::string> countries;
	Matrix epsilon;  // C x C
};

struct OpenWorld {
	CoefficientSystem world;       // block matrix A + S(epsilon)
	Vector closed_L_bar;           // per-country L_bar before opening
	Vector first_order_L_bar;      // closed value + first-order correction
};

// Couples closed per-country systems: column block c becomes
// (1 - sum_b eps_bc) A_c domestically and eps_bc A_c for imports from b,
// leaving every column total (and so labor shares) unchanged. The
// first-order prediction is L_bar_c + sum_b eps_bc theta_c . H_c A_c^T
// (L_b - L_c); identical countries cancel it exactly.
OpenWorld open_trade_perturbation(const std::vector<CoefficientSystem>& countries,
                                  const TradePerturbation& perturbation);

}  // namespace leontief
