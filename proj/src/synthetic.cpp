#include "leontief/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "leontief/rng.hpp"

namespace leontief {
namespace synthetic {

namespace {

IOTable from_parts(std::vector<IndustryId> ids, Matrix flows, Vector final_demand,
                   Vector labor, int year) {
	IOTable table;
	table.industries = std::move(ids);
	table.intermediate_flows = std::move(flows);
	table.final_demand = std::move(final_demand);
	table.labor_payments = std::move(labor);
	table.year = year;
	table.strict = true;
	return table;
}

}  // namespace

IOTable chain(double labor_share_a, int year) {
	if (labor_share_a < 0.0 || labor_share_a >= 1.0)
		throw DomainError("labor share must lie in [0, 1)");
	// households spend 1 on a; a spends (1 - labor_share_a) on b
	Matrix flows = Matrix::Zero(2, 2);
	flows(1, 0) = 1.0 - labor_share_a;  // payment from a to b
	Vector y(2), labor(2);
	y << 1.0, 0.0;
	labor << labor_share_a, 1.0 - labor_share_a;
	return from_parts({{"", "a"}, {"", "b"}}, flows, y, labor, year);
}

IOTable flat(int year) {
	Matrix flows = Matrix::Zero(2, 2);
	Vector y(2), labor(2);
	y << 0.5, 0.5;
	labor << 0.5, 0.5;
	return from_parts({{"", "a"}, {"", "b"}}, flows, y, labor, year);
}

IOTable production_line(int year) { return chain(0.0, year); }

IOTable random_closed_economy(int n, std::uint64_t seed, int countries) {
	if (n < 1) throw DomainError("need at least one industry");
	if (countries < 1 || countries > n) throw DomainError("bad country count");
	CounterRng rng(seed, 0x7ab1e5);

	std::vector<IndustryId> ids;
	for (int i = 0; i < n; ++i) {
		std::string country = countries == 1 ? "" : "C" + std::to_string(i % countries);
		std::string code = "i" + std::string(i < 10 ? "0" : "") + std::to_string(i);
		ids.push_back({country, code});
	}
	std::sort(ids.begin(), ids.end());

	// Column sums of A land in [0.2, 0.9]; the leftover is the labor share,
	// so the spectral radius stays at most 0.9.
	Matrix a = Matrix::Zero(n, n);
	for (int j = 0; j < n; ++j) {
		int suppliers = 1 + static_cast<int>(rng.next_index(std::min(n, 6)));
		Vector weights = Vector::Zero(n);
		for (int s = 0; s < suppliers; ++s)
			weights(rng.next_index(n)) += 0.1 + rng.next_double();
		double target = 0.2 + 0.7 * rng.next_double();
		a.col(j) = weights * (target / weights.sum());
	}
	Vector labor_share = (1.0 - a.colwise().sum().array()).matrix();

	Vector final_demand(n);
	for (int i = 0; i < n; ++i) final_demand(i) = 0.1 + rng.next_double();

	// Balanced flows follow from the money fixed point M = A M + Y.
	Matrix ia = Matrix::Identity(n, n) - a;
	Vector m = ia.partialPivLu().solve(final_demand);
	Matrix flows = a * m.asDiagonal();
	Vector labor = labor_share.cwiseProduct(m);
	return from_parts(std::move(ids), std::move(flows), std::move(final_demand),
	                  std::move(labor), 2000);
}

IOTable hierarchical_economy(int n, std::uint64_t seed) {
	IOTable base = random_closed_economy(n, seed, 1);
	// 6-digit codes sharing prefixes: sector (2) / subsector (2) / detail (2)
	for (int i = 0; i < n; ++i) {
		int sector = i % 3, sub = (i / 3) % 4, detail = i;
		char code[8];
		std::snprintf(code, sizeof(code), "%02d%02d%02d", 10 + sector, sub, detail % 100);
		base.industries[i] = {"", code};
	}
	std::vector<int> order(n);
	for (int i = 0; i < n; ++i) order[i] = i;
	std::sort(order.begin(), order.end(), [&](int x, int y) {
		return base.industries[x] < base.industries[y];
	});
	IOTable out = base;
	for (int i = 0; i < n; ++i) {
		out.industries[i] = base.industries[order[i]];
		out.final_demand(i) = base.final_demand(order[i]);
		out.labor_payments(i) = base.labor_payments(order[i]);
		for (int j = 0; j < n; ++j)
			out.intermediate_flows(i, j) = base.intermediate_flows(order[i], order[j]);
	}
	return out;
}

}  // namespace synthetic
}  // namespace leontief
