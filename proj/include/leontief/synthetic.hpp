#pragma once

#include "leontief/iotable.hpp"

namespace leontief {
namespace synthetic {

// a sells to households and buys from b; b pays only labor. With
// labor_share_a = 0 every unit spent on a passes through b, giving
// multipliers (2, 1).
IOTable chain(double labor_share_a = 0.4, int year = 2000);

// Two industries selling straight to households; all multipliers are 1.
IOTable flat(int year = 2000);

// chain with labor_share_a = 0: the two-node production line used by the
// worked return examples.
IOTable production_line(int year = 2000);

// Balanced closed economy with random sparse input structure. Column sums
// of A land in [0.2, 0.9], so labor shares stay at least 0.1 and the
// spectral radius is bounded away from 1. countries > 1 spreads industries
// round-robin over country codes C0, C1, ...
IOTable random_closed_economy(int n, std::uint64_t seed, int countries = 1);

// Single-country table with hierarchical numeric industry codes (6 digits),
// for prefix-aggregation sweeps.
IOTable hierarchical_economy(int n, std::uint64_t seed);

}  // namespace synthetic
}  // namespace leontief
