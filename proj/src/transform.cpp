#include "leontief/transform.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace leontief {

void check_aggregation_map(const AggregationMap& map, int fine_count) {
	if (static_cast<int>(map.group_of.size()) != fine_count)
		throw ValidationError("aggregation map size does not match industry count");
	int g = map.group_count();
	if (g == 0) throw ValidationError("aggregation map has no groups");
	std::vector<int> members(g, 0);
	for (int v : map.group_of) {
		if (v < 0 || v >= g) throw ValidationError("aggregation map group index out of range");
		++members[v];
	}
	for (int k = 0; k < g; ++k)
		if (members[k] == 0)
			throw ValidationError("aggregation group " + map.groups[k].label() + " is empty");
	std::set<IndustryId> labels(map.groups.begin(), map.groups.end());
	if (static_cast<int>(labels.size()) != g)
		throw ValidationError("aggregation group labels must be unique");
}

AggregationMap prefix_digit_map(const IOTable& table, int digits) {
	if (digits < 0) throw DomainError("digits must be nonnegative");
	AggregationMap map;
	map.group_of.resize(table.size());
	std::map<IndustryId, int> index;
	for (int i = 0; i < table.size(); ++i) {
		const auto& id = table.industries[i];
		std::string prefix = id.code.substr(0, static_cast<size_t>(digits));
		IndustryId group{id.country, prefix.empty() ? "ALL" : prefix};
		auto [it, inserted] = index.emplace(group, map.group_count());
		if (inserted) map.groups.push_back(group);
		map.group_of[i] = it->second;
	}
	return map;
}

AggregationMap load_aggregation_map(const std::string& path, const IOTable& table) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	std::string line;
	if (!std::getline(in, line)) throw ParseError(path + ": empty file");
	if (!line.empty() && line.back() == '\r') line.pop_back();
	if (line != "fine,coarse") throw ParseError(path + ": expected header fine,coarse");

	std::map<std::string, std::string> coarse_of;
	int lineno = 1;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		auto comma = line.find(',');
		if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
			throw ParseError(path + ":" + std::to_string(lineno) + ": expected 2 fields");
		coarse_of[line.substr(0, comma)] = line.substr(comma + 1);
	}

	AggregationMap map;
	map.group_of.resize(table.size());
	std::map<IndustryId, int> index;
	for (int i = 0; i < table.size(); ++i) {
		auto it = coarse_of.find(table.industries[i].label());
		if (it == coarse_of.end())
			throw ValidationError(path + ": industry " + table.industries[i].label() +
			                      " is unmapped");
		IndustryId group = parse_industry_id(it->second);
		auto [slot, inserted] = index.emplace(group, map.group_count());
		if (inserted) map.groups.push_back(group);
		map.group_of[i] = slot->second;
	}
	return map;
}

IOTable aggregate(const IOTable& table, const AggregationMap& map) {
	check_aggregation_map(map, table.size());
	int g = map.group_count();

	// Output industries stay sorted, so remap group indices through the
	// sorted order of their labels.
	std::vector<int> order(g);
	for (int k = 0; k < g; ++k) order[k] = k;
	std::sort(order.begin(), order.end(),
	          [&](int a, int b) { return map.groups[a] < map.groups[b]; });
	std::vector<int> rank(g);
	for (int k = 0; k < g; ++k) rank[order[k]] = k;

	IOTable out;
	out.industries.resize(g);
	for (int k = 0; k < g; ++k) out.industries[rank[k]] = map.groups[k];
	out.intermediate_flows = Matrix::Zero(g, g);
	out.final_demand = Vector::Zero(g);
	out.labor_payments = Vector::Zero(g);
	out.year = table.year;
	out.strict = table.strict;

	for (int i = 0; i < table.size(); ++i) {
		int gi = rank[map.group_of[i]];
		out.final_demand(gi) += table.final_demand(i);
		out.labor_payments(gi) += table.labor_payments(i);
		for (int j = 0; j < table.size(); ++j)
			out.intermediate_flows(gi, rank[map.group_of[j]]) += table.intermediate_flows(i, j);
	}
	return out;
}

IOTable zero_international_trade(const IOTable& table) {
	IOTable out = table;
	bool changed = false;
	for (int i = 0; i < table.size(); ++i)
		for (int j = 0; j < table.size(); ++j) {
			if (table.industries[i].country == table.industries[j].country) continue;
			if (out.intermediate_flows(i, j) != 0.0) changed = true;
			out.intermediate_flows(i, j) = 0.0;
		}
	// Household purchases stay, including cross-border ones; the table no
	// longer balances when anything was removed.
	if (changed) out.strict = false;
	return out;
}

OpenWorld open_trade_perturbation(const std::vector<CoefficientSystem>& countries,
                                  const TradePerturbation& perturbation) {
	int c_count = static_cast<int>(countries.size());
	if (c_count == 0) throw DomainError("need at least one country");
	if (static_cast<int>(perturbation.countries.size()) != c_count ||
	    perturbation.epsilon.rows() != c_count || perturbation.epsilon.cols() != c_count)
		throw DomainError("perturbation size does not match country count");

	const Matrix& eps = perturbation.epsilon;
	if ((eps.array() < 0).any()) throw DomainError("import shares must be nonnegative");
	for (int c = 0; c < c_count; ++c) {
		if (eps(c, c) != 0.0) throw DomainError("epsilon diagonal must be zero");
		if (eps.col(c).sum() >= 1.0) {
			std::ostringstream msg;
			msg << "import shares into " << perturbation.countries[c]
			    << " sum to " << eps.col(c).sum() << ", must stay below 1";
			throw DomainError(msg.str());
		}
	}
	int n = countries[0].size();
	for (int c = 1; c < c_count; ++c)
		if (countries[c].size() != n) {
			std::ostringstream msg;
			msg << "industry counts differ: " << perturbation.countries[0] << " has " << n
			    << ", " << perturbation.countries[c] << " has " << countries[c].size();
			throw DomainError(msg.str());
		}

	OpenWorld out;
	out.closed_L_bar = Vector::Zero(c_count);
	out.first_order_L_bar = Vector::Zero(c_count);
	std::vector<Vector> multipliers(c_count);
	for (int c = 0; c < c_count; ++c) {
		multipliers[c] = output_multipliers(countries[c]);
		out.closed_L_bar(c) = countries[c].theta.dot(multipliers[c]);
	}
	for (int c = 0; c < c_count; ++c) {
		double corrected = out.closed_L_bar(c);
		for (int b = 0; b < c_count; ++b) {
			if (b == c || eps(b, c) == 0.0) continue;
			Vector gap = countries[c].A.transpose() * (multipliers[b] - multipliers[c]);
			corrected += eps(b, c) * countries[c].theta.dot(solve_leontief(countries[c], gap, true));
		}
		out.first_order_L_bar(c) = corrected;
	}

	// Column block c of the world matrix keeps country c's coefficients; only
	// the supplying country is reassigned, so column sums and labor shares
	// are untouched.
	CoefficientSystem world;
	world.A = Matrix::Zero(c_count * n, c_count * n);
	world.labor_share = Vector::Zero(c_count * n);
	world.theta = Vector::Zero(c_count * n);
	world.eta = Vector::Zero(c_count * n);
	for (int c = 0; c < c_count; ++c) {
		double domestic = 1.0 - eps.col(c).sum();
		for (int b = 0; b < c_count; ++b) {
			double share = b == c ? domestic : eps(b, c);
			if (share != 0.0)
				world.A.block(b * n, c * n, n, n) = share * countries[c].A;
		}
		world.labor_share.segment(c * n, n) = countries[c].labor_share;
		world.theta.segment(c * n, n) = countries[c].theta * countries[c].gdp;
		world.eta.segment(c * n, n) = countries[c].eta * countries[c].gross_output;
		world.gdp += countries[c].gdp;
		world.gross_output += countries[c].gross_output;
		for (const auto& id : countries[c].industries)
			world.industries.push_back({perturbation.countries[c], id.code});
	}
	world.theta /= world.gdp;
	world.eta /= world.gross_output;
	check_coefficients(world, 1e-12);
	out.world = std::move(world);
	return out;
}

}  // namespace leontief
