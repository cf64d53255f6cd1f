#include "leontief/iotable.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "leontief/growth.hpp"

namespace leontief {

namespace {

constexpr const char* kFinal = "FINAL";
constexpr const char* kLabor = "LABOR";

std::vector<std::string> split_line(const std::string& line) {
	std::vector<std::string> fields;
	std::string field;
	for (char ch : line) {
		if (ch == ',') {
			fields.push_back(field);
			field.clear();
		} else if (ch != '\r') {
			field.push_back(ch);
		}
	}
	fields.push_back(field);
	return fields;
}

[[noreturn]] void parse_fail(const std::string& name, int lineno, const std::string& what) {
	throw ParseError(name + ":" + std::to_string(lineno) + ": " + what);
}

double parse_value(const std::string& field, const std::string& name, int lineno) {
	const char* begin = field.data();
	const char* end = begin + field.size();
	double value = 0.0;
	auto [ptr, ec] = std::from_chars(begin, end, value);
	if (ec != std::errc() || ptr != end || field.empty())
		parse_fail(name, lineno, "bad numeric value '" + field + "'");
	if (!std::isfinite(value)) parse_fail(name, lineno, "non-finite value '" + field + "'");
	return value;
}

long parse_int(const std::string& field, const std::string& name, int lineno) {
	const char* begin = field.data();
	const char* end = begin + field.size();
	long value = 0;
	auto [ptr, ec] = std::from_chars(begin, end, value);
	if (ec != std::errc() || ptr != end || field.empty())
		parse_fail(name, lineno, "bad integer '" + field + "'");
	return value;
}

bool read_logical_line(std::istream& in, std::string& line) {
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		return true;
	}
	return false;
}

// Raw long-format rows grouped by kind, still keyed by node names.
struct RawTable {
	std::map<std::pair<std::string, std::string>, double> flows;  // (seller, buyer)
	std::map<std::string, double> final_demand;
	std::map<std::string, double> labor;
	std::set<std::string> names;
	int year = 0;
};

RawTable parse_long(std::istream& in, const std::string& name) {
	std::string line;
	if (!read_logical_line(in, line)) parse_fail(name, 1, "empty file");
	if (split_line(line) != std::vector<std::string>{"source", "target", "value", "year"})
		parse_fail(name, 1, "expected header source,target,value,year");

	RawTable raw;
	bool have_year = false;
	int lineno = 1;
	while (read_logical_line(in, line)) {
		++lineno;
		auto fields = split_line(line);
		if (fields.size() != 4) parse_fail(name, lineno, "expected 4 fields");
		const std::string& source = fields[0];
		const std::string& target = fields[1];
		double value = parse_value(fields[2], name, lineno);
		long year = parse_int(fields[3], name, lineno);
		if (have_year && year != raw.year)
			parse_fail(name, lineno, "multiple years in one table");
		raw.year = static_cast<int>(year);
		have_year = true;

		if (source == kFinal) parse_fail(name, lineno, "FINAL may only appear as target");
		if (target == kLabor) parse_fail(name, lineno, "LABOR may only appear as source");
		if (source == kLabor && target == kFinal)
			parse_fail(name, lineno, "LABOR,FINAL cell is not a flow");
		if (source == kLabor) {
			raw.labor[target] += value;
			raw.names.insert(target);
		} else if (target == kFinal) {
			raw.final_demand[source] += value;
			raw.names.insert(source);
		} else {
			raw.flows[{source, target}] += value;
			raw.names.insert(source);
			raw.names.insert(target);
		}
	}
	if (raw.names.empty()) parse_fail(name, lineno, "no industries");
	return raw;
}

// Missing labor rows become NaN so cleaning can distinguish "no data"
// (imputed from the balance residual) from an explicit zero.
IOTable assemble(const RawTable& raw) {
	IOTable table;
	for (const auto& n : raw.names) table.industries.push_back(parse_industry_id(n));
	std::sort(table.industries.begin(), table.industries.end());
	int n = table.size();
	std::map<std::string, int> index;
	for (int i = 0; i < n; ++i) index[table.industries[i].label()] = i;

	table.intermediate_flows = Matrix::Zero(n, n);
	table.final_demand = Vector::Zero(n);
	table.labor_payments = Vector::Constant(n, std::nan(""));
	for (const auto& [key, value] : raw.flows)
		table.intermediate_flows(index.at(key.first), index.at(key.second)) = value;
	for (const auto& [key, value] : raw.final_demand) table.final_demand(index.at(key)) = value;
	for (const auto& [key, value] : raw.labor) table.labor_payments(index.at(key)) = value;
	table.year = raw.year;
	return table;
}

void erase_index(Vector& v, int k) {
	Vector out(v.size() - 1);
	out.head(k) = v.head(k);
	out.tail(v.size() - 1 - k) = v.tail(v.size() - 1 - k);
	v = std::move(out);
}

void erase_row_col(Matrix& m, int k) {
	int n = static_cast<int>(m.rows());
	Matrix out(n - 1, n - 1);
	out.topLeftCorner(k, k) = m.topLeftCorner(k, k);
	out.topRightCorner(k, n - 1 - k) = m.topRightCorner(k, n - 1 - k);
	out.bottomLeftCorner(n - 1 - k, k) = m.bottomLeftCorner(n - 1 - k, k);
	out.bottomRightCorner(n - 1 - k, n - 1 - k) = m.bottomRightCorner(n - 1 - k, n - 1 - k);
	m = std::move(out);
}

}  // namespace

std::string format_value(double v) {
	// shortest decimal that parses back to the same double
	char buf[40];
	auto res = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, res.ptr);
}

IndustryId parse_industry_id(const std::string& name) {
	auto pos = name.find(':');
	if (pos == std::string::npos) return {"", name};
	return {name.substr(0, pos), name.substr(pos + 1)};
}

int IOTable::index_of(const IndustryId& id) const {
	auto it = std::lower_bound(industries.begin(), industries.end(), id);
	if (it == industries.end() || !(*it == id)) return -1;
	return static_cast<int>(it - industries.begin());
}

Vector gross_output(const IOTable& table) {
	return table.intermediate_flows.colwise().sum().transpose() + table.labor_payments;
}

Vector balance_residuals(const IOTable& table) {
	Vector expenditure = gross_output(table);
	Vector revenue = table.intermediate_flows.rowwise().sum() + table.final_demand;
	Vector out(table.size());
	for (int i = 0; i < table.size(); ++i) {
		double scale = std::max(expenditure(i), revenue(i));
		out(i) = scale > 0 ? std::abs(expenditure(i) - revenue(i)) / scale : 0.0;
	}
	return out;
}

LoadResult clean_iotable(IOTable raw, const LoadOptions& options) {
	CleaningReport report;
	int n = raw.size();

	auto clean_cell = [&](double& cell, bool intermediate, int seller) {
		if (cell >= 0.0) return;
		switch (options.policy) {
			case CleaningPolicy::reject:
				throw ValidationError("negative entry with policy=reject");
			case CleaningPolicy::clamp:
				cell = 0.0;
				++report.clamped_entries;
				break;
			case CleaningPolicy::net:
				if (intermediate) {
					raw.final_demand(seller) += cell;
					++report.netted_entries;
				} else {
					++report.netted_entries;
				}
				cell = 0.0;
				break;
		}
	};

	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) clean_cell(raw.intermediate_flows(i, j), true, i);
	for (int i = 0; i < n; ++i) clean_cell(raw.final_demand(i), false, i);
	for (int i = 0; i < n; ++i)
		if (!std::isnan(raw.labor_payments(i))) clean_cell(raw.labor_payments(i), false, i);

	// Labor imputation from the balance residual for industries without a
	// labor row; under the labor-compensation reading only a fraction of the
	// residual is household income and the rest leaves the loop.
	for (int i = 0; i < n; ++i) {
		if (!std::isnan(raw.labor_payments(i))) continue;
		double revenue = raw.intermediate_flows.row(i).sum() + raw.final_demand(i);
		double spent = raw.intermediate_flows.col(i).sum();
		double residual = std::max(revenue - spent, 0.0);
		double share = options.labor == LaborInterpretation::value_added
		                   ? 1.0
		                   : options.assumed_labor_fraction;
		raw.labor_payments(i) = share * residual;
		if (residual > 0.0) report.imputed_labor.push_back(raw.industries[i].label());
	}

	if (options.drop_zero_expenditure) {
		for (int i = raw.size() - 1; i >= 0; --i) {
			double expenditure = raw.intermediate_flows.col(i).sum() + raw.labor_payments(i);
			if (expenditure > 0.0) continue;
			report.dropped_industries.push_back(raw.industries[i].label());
			erase_row_col(raw.intermediate_flows, i);
			erase_index(raw.final_demand, i);
			erase_index(raw.labor_payments, i);
			raw.industries.erase(raw.industries.begin() + i);
		}
		std::reverse(report.dropped_industries.begin(), report.dropped_industries.end());
	}
	if (raw.size() == 0) throw ValidationError("no industries left after cleaning");

	Vector residuals = balance_residuals(raw);
	int worst = 0;
	report.max_balance_residual = residuals.maxCoeff(&worst);
	report.worst_balance_industry = raw.industries[worst].label();
	raw.strict = report.max_balance_residual <= options.balance_rel_tol;
	if (options.strict_balance && !raw.strict) {
		std::vector<int> order(raw.size());
		for (int i = 0; i < raw.size(); ++i) order[i] = i;
		std::sort(order.begin(), order.end(),
		          [&](int a, int b) { return residuals(a) > residuals(b); });
		std::ostringstream msg;
		msg << "table does not balance within " << options.balance_rel_tol << "; worst:";
		for (int k = 0; k < std::min<int>(3, raw.size()); ++k)
			msg << " " << raw.industries[order[k]].label() << " (" << residuals(order[k]) << ")";
		throw ValidationError(msg.str());
	}

	return {std::move(raw), std::move(report)};
}

LoadResult load_iotable(std::istream& in, const LoadOptions& options, const std::string& name) {
	return clean_iotable(assemble(parse_long(in, name)), options);
}

LoadResult load_iotable(const std::string& path, const LoadOptions& options) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	return load_iotable(in, options, path);
}

LoadResult load_iotable_matrix(const std::string& path, const LoadOptions& options) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	std::string line;
	if (!read_logical_line(in, line) || line.rfind("# year=", 0) != 0)
		parse_fail(path, 1, "expected '# year=YYYY' line");
	int year = static_cast<int>(parse_int(line.substr(7), path, 1));

	if (!read_logical_line(in, line)) parse_fail(path, 2, "missing header row");
	auto header = split_line(line);
	if (header.size() < 2 || !header[0].empty())
		parse_fail(path, 2, "header must start with an empty cell");
	std::vector<std::string> buyers(header.begin() + 1, header.end());

	RawTable raw;
	raw.year = year;
	int lineno = 2;
	while (read_logical_line(in, line)) {
		++lineno;
		auto fields = split_line(line);
		if (fields.size() != buyers.size() + 1)
			parse_fail(path, lineno, "row width does not match header");
		const std::string& seller = fields[0];
		if (seller == kFinal) parse_fail(path, lineno, "FINAL may only appear as a column");
		for (size_t j = 0; j < buyers.size(); ++j) {
			double value = parse_value(fields[j + 1], path, lineno);
			const std::string& buyer = buyers[j];
			if (buyer == kLabor) parse_fail(path, lineno, "LABOR may only appear as a row");
			if (seller == kLabor && buyer == kFinal) {
				if (value != 0.0) parse_fail(path, lineno, "LABOR,FINAL cell must be zero");
				continue;
			}
			if (seller == kLabor) {
				raw.labor[buyer] += value;
				raw.names.insert(buyer);
			} else if (buyer == kFinal) {
				raw.final_demand[seller] += value;
				raw.names.insert(seller);
			} else {
				raw.flows[{seller, buyer}] += value;
				raw.names.insert(seller);
				raw.names.insert(buyer);
			}
		}
	}
	if (raw.names.empty()) parse_fail(path, lineno, "no industries");
	return clean_iotable(assemble(raw), options);
}

void write_iotable(const IOTable& table, std::ostream& out) {
	out << "source,target,value,year\n";
	std::map<std::pair<std::string, std::string>, double> cells;
	for (int i = 0; i < table.size(); ++i) {
		for (int j = 0; j < table.size(); ++j) {
			double v = table.intermediate_flows(i, j);
			if (v != 0.0)
				cells[{table.industries[i].label(), table.industries[j].label()}] = v;
		}
		if (table.final_demand(i) != 0.0)
			cells[{table.industries[i].label(), kFinal}] = table.final_demand(i);
		// labor rows are kept even at zero: a missing row would read back as
		// "labor unknown" and trigger imputation
		cells[{kLabor, table.industries[i].label()}] = table.labor_payments(i);
	}
	for (const auto& [key, value] : cells)
		out << key.first << ',' << key.second << ',' << format_value(value) << ',' << table.year
		    << '\n';
}

void write_iotable(const IOTable& table, const std::string& path) {
	std::ofstream out(path);
	if (!out) throw Error(path + ": cannot open for writing");
	write_iotable(table, out);
}

void write_iotable_matrix(const IOTable& table, std::ostream& out) {
	out << "# year=" << table.year << '\n';
	for (int j = 0; j < table.size(); ++j) out << ',' << table.industries[j].label();
	out << ',' << kFinal << '\n';
	for (int i = 0; i < table.size(); ++i) {
		out << table.industries[i].label();
		for (int j = 0; j < table.size(); ++j)
			out << ',' << format_value(table.intermediate_flows(i, j));
		out << ',' << format_value(table.final_demand(i)) << '\n';
	}
	out << kLabor;
	for (int j = 0; j < table.size(); ++j) out << ',' << format_value(table.labor_payments(j));
	out << ',' << format_value(0.0) << '\n';
}

namespace {

// Shared long-series reader: country,industry,period,<value>; one reserved
// industry name may carry a per-period scalar (wage growth).
struct SeriesData {
	Matrix values;   // T x N
	Vector special;  // T
	bool has_special = false;
};

SeriesData load_series(const std::string& path, const std::vector<IndustryId>& industries,
                       const std::string& value_header, const std::string& special_name) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	std::string line;
	if (!read_logical_line(in, line)) parse_fail(path, 1, "empty file");
	std::vector<std::string> expected{"country", "industry", "period", value_header};
	if (split_line(line) != expected)
		parse_fail(path, 1, "expected header country,industry,period," + value_header);

	std::map<IndustryId, int> index;
	for (size_t i = 0; i < industries.size(); ++i)
		index[industries[i]] = static_cast<int>(i);

	std::map<long, std::pair<std::map<int, double>, std::optional<double>>> by_period;
	int lineno = 1;
	while (read_logical_line(in, line)) {
		++lineno;
		auto fields = split_line(line);
		if (fields.size() != 4) parse_fail(path, lineno, "expected 4 fields");
		long period = parse_int(fields[2], path, lineno);
		double value = parse_value(fields[3], path, lineno);
		if (!special_name.empty() && fields[1] == special_name) {
			auto& slot = by_period[period].second;
			if (slot) parse_fail(path, lineno, "duplicate " + special_name + " row");
			slot = value;
			continue;
		}
		IndustryId id{fields[0], fields[1]};
		auto it = index.find(id);
		if (it == index.end())
			parse_fail(path, lineno, "unknown industry '" + id.label() + "'");
		auto [cell, inserted] = by_period[period].first.emplace(it->second, value);
		if (!inserted) parse_fail(path, lineno, "duplicate entry for '" + id.label() + "'");
	}
	if (by_period.empty()) parse_fail(path, lineno, "no data rows");

	SeriesData data;
	int t_count = static_cast<int>(by_period.size());
	int n = static_cast<int>(industries.size());
	data.values = Matrix::Zero(t_count, n);
	data.special = Vector::Zero(t_count);
	int t = 0;
	for (const auto& [period, entry] : by_period) {
		if (static_cast<int>(entry.first.size()) != n)
			throw ValidationError(path + ": period " + std::to_string(period) +
			                      " does not cover every industry");
		for (const auto& [col, value] : entry.first) data.values(t, col) = value;
		if (entry.second) {
			data.special(t) = *entry.second;
			data.has_special = true;
		} else if (data.has_special) {
			throw ValidationError(path + ": period " + std::to_string(period) + " lacks a " +
			                      special_name + " row");
		}
		++t;
	}
	return data;
}

}  // namespace

PriceSeries load_price_series(const std::string& path,
                              const std::vector<IndustryId>& industries) {
	SeriesData data = load_series(path, industries, "return", "WAGE");
	PriceSeries series;
	series.industries = industries;
	series.returns = std::move(data.values);
	series.wage_growth = data.has_special ? std::move(data.special)
	                                      : Vector::Zero(series.returns.rows());
	return series;
}

ProductivitySeries load_productivity_series(const std::string& path,
                                            const std::vector<IndustryId>& industries) {
	SeriesData data = load_series(path, industries, "gamma", "");
	ProductivitySeries series;
	series.industries = industries;
	series.gamma = std::move(data.values);
	return series;
}

}  // namespace leontief
