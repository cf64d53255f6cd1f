#pragma once

#include <iosfwd>
#include <optional>

#include "leontief/common.hpp"

namespace leontief {

// Industry key. Node names in files are "CC:IND"; a bare name (no colon)
// gets an empty country code. Reserved node names: FINAL (household
// purchases, target only) and LABOR (household income, source only).
struct IndustryId {
	std::string country;
	std::string code;

	std::string label() const { return country.empty() ? code : country + ":" + code; }
	friend bool operator==(const IndustryId&, const IndustryId&) = default;
	friend auto operator<=>(const IndustryId&, const IndustryId&) = default;
};

IndustryId parse_industry_id(const std::string& name);

// Money-flow table for one year. intermediate_flows(i, j) is the payment
// from industry j to industry i, so column j holds j's input purchases and
// row i holds i's intermediate sales. All stored flows are nonnegative;
// negative raw entries must have been cleaned before construction.
struct IOTable {
	std::vector<IndustryId> industries;  // sorted by (country, code)
	Matrix intermediate_flows;           // N x N
	Vector final_demand;                 // household purchases per industry
	Vector labor_payments;               // payments to households per industry
	int year = 0;
	bool strict = true;  // false after transforms that break row/column balance

	int size() const { return static_cast<int>(industries.size()); }
	int index_of(const IndustryId& id) const;  // -1 when absent
};

// Per-period log price returns r' (T x N, column order = table industries)
// plus wage growth rho per period. Real returns are r' - rho * 1.
struct PriceSeries {
	std::vector<IndustryId> industries;
	Matrix returns;      // T x N, no NaN after ingestion
	Vector wage_growth;  // T
	int periods() const { return static_cast<int>(returns.rows()); }
};

enum class CleaningPolicy { reject, clamp, net };
enum class LaborInterpretation { value_added, labor_compensation };

struct LoadOptions {
	CleaningPolicy policy = CleaningPolicy::clamp;
	LaborInterpretation labor = LaborInterpretation::value_added;
	// Industries with no LABOR row get labor imputed from the balance
	// residual; under labor_compensation only this fraction of it.
	double assumed_labor_fraction = 0.5;
	bool strict_balance = false;  // reject tables whose accounts do not balance
	bool drop_zero_expenditure = true;
	double balance_rel_tol = 1e-9;
};

struct CleaningReport {
	int clamped_entries = 0;     // negatives clamped to zero
	int netted_entries = 0;      // negatives folded into final demand
	std::vector<std::string> dropped_industries;  // zero total expenditure
	std::vector<std::string> imputed_labor;       // industries with labor filled from residual
	double max_balance_residual = 0.0;            // relative, post-cleaning
	std::string worst_balance_industry;
	bool balanced(double tol = 1e-9) const { return max_balance_residual <= tol; }
};

struct LoadResult {
	IOTable table;
	CleaningReport report;
};

// Long-format CSV with header source,target,value,year.
LoadResult load_iotable(const std::string& path, const LoadOptions& options = {});
LoadResult load_iotable(std::istream& in, const LoadOptions& options = {},
                        const std::string& name = "<stream>");

// Dense schema: rows = sellers plus a trailing LABOR row, columns = buyers
// plus a trailing FINAL column.
LoadResult load_iotable_matrix(const std::string& path, const LoadOptions& options = {});

// Writers emit sorted keys and shortest-round-trip values, so equal tables
// produce byte-identical files and reload without loss. Zero cells are
// omitted from the long format, except labor rows (absence means unknown).
void write_iotable(const IOTable& table, std::ostream& out);
void write_iotable(const IOTable& table, const std::string& path);
void write_iotable_matrix(const IOTable& table, std::ostream& out);

// Column sums of intermediate flows plus labor payments: total expenditure,
// equal under balance to row sums plus final demand.
Vector gross_output(const IOTable& table);

// Relative balance gap |revenue - expenditure| / max(1, expenditure) per industry.
Vector balance_residuals(const IOTable& table);

// Applies cleaning, imputation, dropping and balance checks to an in-memory
// table; loaders are thin parsers over this.
LoadResult clean_iotable(IOTable raw, const LoadOptions& options);

// Long-format series country,industry,period,value; reserved industry name
// WAGE carries per-period wage growth. Periods are sorted numerically and
// every industry must cover every period.
PriceSeries load_price_series(const std::string& path, const std::vector<IndustryId>& industries);

}  // namespace leontief
