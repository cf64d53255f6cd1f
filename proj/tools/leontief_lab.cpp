#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "leontief/coefficients.hpp"
#include "leontief/growth.hpp"
#include "leontief/iotable.hpp"
#include "leontief/linops.hpp"
#include "leontief/multipliers.hpp"
#include "leontief/simulate.hpp"
#include "leontief/stats.hpp"
#include "leontief/synthetic.hpp"
#include "leontief/transform.hpp"

namespace {

using namespace leontief;

struct GlobalOptions {
	std::string policy = "clamp";
	bool strict = false;
	int threads = 0;  // 0: LEONTIEF_LAB_THREADS or 1
	std::string out_path;
};

LoadOptions load_options(const GlobalOptions& global) {
	LoadOptions options;
	if (global.policy == "clamp")
		options.policy = CleaningPolicy::clamp;
	else if (global.policy == "reject")
		options.policy = CleaningPolicy::reject;
	else
		options.policy = CleaningPolicy::net;
	options.strict_balance = global.strict;
	return options;
}

// Tables ship in two schemas; the dense one is recognisable by its pragma.
LoadResult load_table(const std::string& path, const GlobalOptions& global) {
	std::ifstream probe(path);
	if (!probe) throw ParseError(path + ": cannot open");
	std::string first;
	std::getline(probe, first);
	probe.close();
	if (first.rfind("# year=", 0) == 0) return load_iotable_matrix(path, load_options(global));
	return load_iotable(path, load_options(global));
}

void report_cleaning(const CleaningReport& report, std::ostream& err) {
	if (report.clamped_entries > 0)
		err << "note: clamped " << report.clamped_entries << " negative entries\n";
	if (report.netted_entries > 0)
		err << "note: netted " << report.netted_entries << " negative entries\n";
	for (const auto& name : report.dropped_industries)
		err << "note: dropped zero-expenditure industry " << name << "\n";
	for (const auto& name : report.imputed_labor)
		err << "note: imputed labor payments for " << name << "\n";
}

// Data goes to --out or stdout; diagnostics always go to stderr.
class OutputTarget {
public:
	explicit OutputTarget(const std::string& path) {
		if (path.empty()) return;
		file_.open(path);
		if (!file_) throw Error(path + ": cannot open for writing");
	}
	std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
	std::ofstream file_;
};

std::string fmt(double v) { return format_value(v); }

// ---- coeffs ---------------------------------------------------------------

void run_coeffs(const std::string& table_path, const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	CoefficientSystem cs = build_coefficients(loaded.table);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "quantity,seller,buyer,value\n";
	for (int j = 0; j < cs.size(); ++j)
		for (int i = 0; i < cs.size(); ++i)
			if (cs.A(i, j) != 0.0)
				out << "A," << cs.industries[i].label() << ',' << cs.industries[j].label()
				    << ',' << fmt(cs.A(i, j)) << '\n';
	for (int j = 0; j < cs.size(); ++j)
		out << "labor_share,," << cs.industries[j].label() << ',' << fmt(cs.labor_share(j))
		    << '\n';
	for (int i = 0; i < cs.size(); ++i)
		out << "theta," << cs.industries[i].label() << ",," << fmt(cs.theta(i)) << '\n';
	for (int i = 0; i < cs.size(); ++i)
		out << "eta," << cs.industries[i].label() << ",," << fmt(cs.eta(i)) << '\n';
	out << "gdp,,," << fmt(cs.gdp) << '\n';
	out << "gross_output,,," << fmt(cs.gross_output) << '\n';
}

// ---- multipliers ----------------------------------------------------------

struct MultiplierOptions {
	std::string method = "solve";
	long walks = 100000;
	std::uint64_t seed = 0;
	double tol = 1e-10;
	bool by_country = false;
	bool plot_data = false;
};

void run_multipliers(const std::string& table_path, const MultiplierOptions& opts,
                     const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	CoefficientSystem cs = build_coefficients(loaded.table);
	int n = cs.size();

	Vector L(n);
	Vector walk_stderr = Vector::Zero(n);
	if (opts.method == "solve") {
		L = output_multipliers(cs);
	} else if (opts.method == "series") {
		L = neumann_series_oracle(cs, Vector::Ones(n), true, opts.tol);
	} else {
		int threads = resolve_threads(global.threads);
		for (int i = 0; i < n; ++i) {
			// distinct deterministic stream per start industry
			std::uint64_t stream_seed = opts.seed + 0x9e3779b97f4a7c15ULL * (i + 1);
			WalkStats stats = random_walk_path_length(cs, i, opts.walks, stream_seed, threads);
			L(i) = stats.mean_length;
			walk_stderr(i) = stats.stderr_mean;
		}
	}

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();

	if (opts.plot_data) {
		out << "industry,L,gross_output\n";
		for (int i = 0; i < n; ++i)
			out << cs.industries[i].label() << ',' << fmt(L(i)) << ','
			    << fmt(cs.eta(i) * cs.gross_output) << '\n';
		return;
	}

	out << "# method=" << opts.method;
	if (opts.method == "walk") out << ", walks=" << opts.walks << ", seed=" << opts.seed;
	out << '\n';
	out << "series,key,value\n";
	for (int i = 0; i < n; ++i)
		out << "L," << cs.industries[i].label() << ',' << fmt(L(i)) << '\n';
	if (opts.method == "walk")
		for (int i = 0; i < n; ++i)
			out << "stderr," << cs.industries[i].label() << ',' << fmt(walk_stderr(i)) << '\n';

	double l_bar = average_output_multiplier(cs, L);
	out << "L_bar,," << fmt(l_bar) << '\n';
	out << "O_over_Y,," << fmt(cs.gross_output / cs.gdp) << '\n';
	if (opts.by_country) {
		MultiplierReport report = multiplier_report(cs, true);
		for (const auto& [country, value] : report.by_country)
			out << "L_bar," << (country.empty() ? "(none)" : country) << ',' << fmt(value)
			    << '\n';
	}
}

// ---- predict / covariance --------------------------------------------------

struct PredictOptions {
	std::string what;  // returns | growth | covariance
	std::string gamma_path;
	bool full_covariance = false;
};

void run_predict(const std::string& table_path, const PredictOptions& opts,
                 const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	CoefficientSystem cs = build_coefficients(loaded.table);
	ProductivitySeries series = load_productivity_series(opts.gamma_path, cs.industries);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();

	if (opts.what == "returns") {
		LeontiefInverse inv = leontief_inverse(cs);
		out << "period,industry,r\n";
		for (int t = 0; t < series.periods(); ++t) {
			Vector r = predict_returns(inv, series.gamma.row(t).transpose());
			for (int i = 0; i < cs.size(); ++i)
				out << (t + 1) << ',' << cs.industries[i].label() << ',' << fmt(r(i)) << '\n';
		}
	} else if (opts.what == "growth") {
		out << "period,g,gamma_tilde,L_bar\n";
		for (int t = 0; t < series.periods(); ++t) {
			GrowthPrediction pred = predict_growth(cs, series.gamma.row(t).transpose());
			if (!pred.closed)
				std::cerr << "note: period " << (t + 1) << " growth routes disagree by "
				          << pred.route_spread << " (open table?)\n";
			out << (t + 1) << ',' << fmt(pred.g) << ',' << fmt(pred.gamma_tilde) << ','
			    << fmt(pred.L_bar) << '\n';
		}
	} else {
		LeontiefInverse inv = leontief_inverse(cs);
		Matrix G = estimate_gamma_covariance(series, !opts.full_covariance);
		int threads = resolve_threads(global.threads);
		Matrix R = opts.full_covariance
		               ? predict_covariances(inv, G, threads)
		               : predict_covariances(inv, Vector(G.diagonal()), threads);
		out << "row,col,value\n";
		for (int i = 0; i < cs.size(); ++i)
			for (int j = 0; j < cs.size(); ++j)
				out << cs.industries[i].label() << ',' << cs.industries[j].label() << ','
				    << fmt(R(i, j)) << '\n';
	}
}

// ---- estimate ---------------------------------------------------------------

void run_estimate(const std::string& table_path, const std::string& prices_path,
                  const std::string& deflator, const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	CoefficientSystem cs = build_coefficients(loaded.table);
	PriceSeries series = load_price_series(prices_path, cs.industries);

	Matrix r = deflator == "cpi"
	               ? real_returns(series, Deflator::cpi, &cs.theta)
	               : real_returns(series, Deflator::wage);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "period,industry,r,gamma_hat\n";
	for (int t = 0; t < series.periods(); ++t) {
		Vector rt = r.row(t).transpose();
		Vector gamma_hat = estimate_productivity(cs, rt);
		for (int i = 0; i < cs.size(); ++i)
			out << (t + 1) << ',' << cs.industries[i].label() << ',' << fmt(rt(i)) << ','
			    << fmt(gamma_hat(i)) << '\n';
	}
}

// ---- aggregate / close-trade / perturb --------------------------------------

void run_aggregate(const std::string& table_path, int digits, const std::string& map_path,
                   const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	AggregationMap map = map_path.empty() ? prefix_digit_map(loaded.table, digits)
	                                      : load_aggregation_map(map_path, loaded.table);
	IOTable coarse = aggregate(loaded.table, map);
	std::cerr << "note: " << loaded.table.size() << " industries -> " << coarse.size()
	          << " groups\n";
	OutputTarget target(global.out_path);
	write_iotable(coarse, target.stream());
}

void run_close_trade(const std::string& table_path, const GlobalOptions& global) {
	LoadResult loaded = load_table(table_path, global);
	report_cleaning(loaded.report, std::cerr);
	IOTable severed = zero_international_trade(loaded.table);
	OutputTarget target(global.out_path);
	write_iotable(severed, target.stream());
}

std::string country_label(const IOTable& table, const std::string& path, size_t index) {
	std::string code = table.industries.empty() ? "" : table.industries.front().country;
	for (const auto& id : table.industries)
		if (id.country != code) code.clear();
	if (!code.empty()) return code;
	// fall back to the file stem
	auto slash = path.find_last_of('/');
	std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
	auto dot = stem.find_last_of('.');
	if (dot != std::string::npos) stem = stem.substr(0, dot);
	return stem.empty() ? "country" + std::to_string(index) : stem;
}

Matrix load_epsilon_file(const std::string& path, const std::vector<std::string>& countries) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	std::string line;
	if (!std::getline(in, line) || line != "exporter,importer,share")
		throw ParseError(path + ": expected header exporter,importer,share");
	auto index_of = [&](const std::string& name) {
		for (size_t c = 0; c < countries.size(); ++c)
			if (countries[c] == name) return static_cast<int>(c);
		throw ParseError(path + ": unknown country " + name);
	};
	int c_count = static_cast<int>(countries.size());
	Matrix eps = Matrix::Zero(c_count, c_count);
	while (std::getline(in, line)) {
		if (line.empty()) continue;
		std::istringstream row(line);
		std::string exporter, importer, share;
		if (!std::getline(row, exporter, ',') || !std::getline(row, importer, ',') ||
		    !std::getline(row, share, ','))
			throw ParseError(path + ": expected 3 fields");
		eps(index_of(exporter), index_of(importer)) = std::stod(share);
	}
	return eps;
}

void run_perturb(const std::vector<std::string>& table_paths, double epsilon,
                 const std::string& epsilon_path, const GlobalOptions& global) {
	std::vector<CoefficientSystem> systems;
	std::vector<std::string> countries;
	for (size_t k = 0; k < table_paths.size(); ++k) {
		LoadResult loaded = load_table(table_paths[k], global);
		report_cleaning(loaded.report, std::cerr);
		std::string label = country_label(loaded.table, table_paths[k], k);
		while (std::find(countries.begin(), countries.end(), label) != countries.end())
			label += "'";
		countries.push_back(label);
		systems.push_back(build_coefficients(loaded.table));
	}

	TradePerturbation perturbation;
	perturbation.countries = countries;
	int c_count = static_cast<int>(countries.size());
	if (!epsilon_path.empty()) {
		perturbation.epsilon = load_epsilon_file(epsilon_path, countries);
	} else {
		perturbation.epsilon = Matrix::Constant(c_count, c_count, epsilon);
		perturbation.epsilon.diagonal().setZero();
	}

	OpenWorld open = open_trade_perturbation(systems, perturbation);
	MultiplierReport exact = multiplier_report(open.world, true);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "country,closed_L_bar,first_order_L_bar,exact_L_bar\n";
	for (int c = 0; c < c_count; ++c)
		out << countries[c] << ',' << fmt(open.closed_L_bar(c)) << ','
		    << fmt(open.first_order_L_bar(c)) << ',' << fmt(exact.by_country.at(countries[c]))
		    << '\n';
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
	std::string economy = "chain";
	double gamma = 0.02;
	std::string gamma_path;
	double years = 1.0;
	double dt = 1.0 / 64.0;
	std::string numeraire = "wage";
};

CoefficientSystem pick_economy(const std::string& economy, const GlobalOptions& global) {
	if (economy == "chain") return build_coefficients(synthetic::chain());
	if (economy == "flat") return build_coefficients(synthetic::flat());
	if (economy == "line") return build_coefficients(synthetic::production_line());
	LoadResult loaded = load_table(economy, global);
	report_cleaning(loaded.report, std::cerr);
	return build_coefficients(loaded.table);
}

void run_simulate(const SimulateOptions& opts, const GlobalOptions& global) {
	CoefficientSystem cs = pick_economy(opts.economy, global);
	Numeraire numeraire = opts.numeraire == "gdp" ? Numeraire::gdp_numeraire
	                                              : Numeraire::wage_numeraire;
	ShockSchedule schedule =
	    opts.gamma_path.empty()
	        ? ShockSchedule::uniform(cs.size(), opts.gamma)
	        : ShockSchedule::uniform(Vector(
	              load_productivity_series(opts.gamma_path, cs.industries).gamma.row(0)
	                  .transpose()));

	Trajectory traj = run(make_state(cs, numeraire), schedule, opts.years, opts.dt);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "t,series,value\n";
	auto emit = [&](double t, const std::string& series, double value) {
		out << fmt(t) << ',' << series << ',' << fmt(value) << '\n';
	};
	for (size_t k = 0; k < traj.times.size(); ++k) {
		double t = traj.times[k];
		for (int i = 0; i < cs.size(); ++i)
			emit(t, "price." + traj.industries[i].label(), traj.prices(k, i));
		emit(t, "wage", traj.wages[k]);
		emit(t, "log_real_gdp", traj.log_real_gdp[k]);
		emit(t, "L_bar", traj.L_bar[k]);
		emit(t, "gamma_tilde", traj.gamma_tilde[k]);
		if (k < traj.times.size() - 1) {
			emit(t, "realized_growth", traj.realized_growth[k]);
			emit(t, "model_growth", traj.model_growth[k]);
		}
	}
}

// ---- regress / bin / normalize ----------------------------------------------

// Tidy numeric CSV: named header, one row per observation.
struct TidyTable {
	std::vector<std::string> columns;
	std::vector<Vector> data;  // column major

	int column(const std::string& name) const {
		for (size_t c = 0; c < columns.size(); ++c)
			if (columns[c] == name) return static_cast<int>(c);
		return -1;
	}
};

TidyTable load_tidy_numeric(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw ParseError(path + ": cannot open");
	std::string line;
	if (!std::getline(in, line)) throw ParseError(path + ": empty file");
	if (!line.empty() && line.back() == '\r') line.pop_back();

	TidyTable table;
	std::istringstream header(line);
	std::string cell;
	while (std::getline(header, cell, ',')) table.columns.push_back(cell);
	if (table.columns.empty()) throw ParseError(path + ": no columns");

	std::vector<std::vector<double>> columns(table.columns.size());
	int lineno = 1;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		std::istringstream row(line);
		for (size_t c = 0; c < columns.size(); ++c) {
			if (!std::getline(row, cell, ','))
				throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
				                 std::to_string(columns.size()) + " fields");
			try {
				columns[c].push_back(std::stod(cell));
			} catch (const std::exception&) {
				throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" +
				                 cell + "'");
			}
		}
	}
	for (auto& column : columns) {
		Vector v(static_cast<int>(column.size()));
		for (size_t i = 0; i < column.size(); ++i) v(static_cast<int>(i)) = column[i];
		table.data.push_back(std::move(v));
	}
	return table;
}

void run_regress(const std::string& data_path, const GlobalOptions& global) {
	TidyTable table = load_tidy_numeric(data_path);
	int xi = table.column("x"), yi = table.column("y");
	if (xi < 0 || yi < 0) throw ParseError(data_path + ": need columns named x and y");
	std::vector<Vector> extras;
	std::vector<std::string> extra_names;
	for (size_t c = 0; c < table.columns.size(); ++c) {
		if (static_cast<int>(c) == xi || static_cast<int>(c) == yi) continue;
		extras.push_back(table.data[c]);
		extra_names.push_back(table.columns[c]);
	}

	RegressionResult fit = ols(table.data[xi], table.data[yi], extras);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "# n=" << fit.n << ", slope=" << fmt(fit.slope) << ", p=" << fmt(fit.p_value_slope)
	    << ", r_squared=" << fmt(fit.r_squared) << '\n';
	out << "term,coefficient,std_error,p_value\n";
	std::vector<std::string> names{"intercept", "x"};
	names.insert(names.end(), extra_names.begin(), extra_names.end());
	for (size_t c = 0; c < names.size(); ++c)
		out << names[c] << ',' << fmt(fit.coefficients[c]) << ',' << fmt(fit.std_errors[c])
		    << ',' << fmt(fit.p_values[c]) << '\n';
}

void run_bin(const std::string& data_path, int target_size, const GlobalOptions& global) {
	TidyTable table = load_tidy_numeric(data_path);
	int xi = table.column("x"), yi = table.column("y");
	if (xi < 0 || yi < 0) throw ParseError(data_path + ": need columns named x and y");
	std::vector<Bin> bins = bin_means(table.data[xi], table.data[yi], target_size);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "# n=" << table.data[xi].size() << ", bins=" << bins.size()
	    << ", target=" << target_size << '\n';
	out << "center,mean_y,stderr_y,count\n";
	for (const Bin& bin : bins)
		out << fmt(bin.center) << ',' << fmt(bin.mean_y) << ',' << fmt(bin.stderr_y) << ','
		    << bin.count << '\n';
}

void run_normalize(const std::string& data_path, const GlobalOptions& global) {
	std::ifstream in(data_path);
	if (!in) throw ParseError(data_path + ": cannot open");
	std::string line;
	if (!std::getline(in, line)) throw ParseError(data_path + ": empty file");
	if (!line.empty() && line.back() == '\r') line.pop_back();
	if (line != "group,value")
		throw ParseError(data_path + ": expected header group,value");

	std::vector<std::string> groups;
	std::vector<double> raw;
	int lineno = 1;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		auto comma = line.find(',');
		if (comma == std::string::npos)
			throw ParseError(data_path + ":" + std::to_string(lineno) + ": expected 2 fields");
		groups.push_back(line.substr(0, comma));
		try {
			raw.push_back(std::stod(line.substr(comma + 1)));
		} catch (const std::exception&) {
			throw ParseError(data_path + ":" + std::to_string(lineno) + ": bad number");
		}
	}
	Vector values(static_cast<int>(raw.size()));
	for (size_t i = 0; i < raw.size(); ++i) values(static_cast<int>(i)) = raw[i];

	NormalizeResult result = center_normalize_by_group(values, groups);

	OutputTarget target(global.out_path);
	std::ostream& out = target.stream();
	out << "# n=" << values.size() << ", excluded=";
	for (size_t k = 0; k < result.excluded_groups.size(); ++k)
		out << (k ? ";" : "") << result.excluded_groups[k];
	out << '\n';
	out << "group,value,normalized\n";
	for (int i = 0; i < values.size(); ++i) {
		out << groups[i] << ',' << fmt(values(i)) << ',';
		if (!std::isnan(result.values(i))) out << fmt(result.values(i));
		out << '\n';
	}
}

// ---- demo ---------------------------------------------------------------------

// End-to-end identity checks on the toy economies; any violation fails the run.
class DemoRunner {
public:
	explicit DemoRunner(std::ostream& out) : out_(out) {}

	bool check(const std::string& name, bool ok, const std::string& detail) {
		out_ << (ok ? "ok   " : "FAIL ") << name << ": " << detail << '\n';
		failed_ |= !ok;
		return ok;
	}
	bool failed() const { return failed_; }

private:
	std::ostream& out_;
	bool failed_ = false;
};

void demo_chain(DemoRunner& demo) {
	CoefficientSystem cs = build_coefficients(synthetic::chain(0.4));
	Vector L = output_multipliers(cs);
	double l_bar = average_output_multiplier(cs, L);
	demo.check("chain multipliers", std::abs(L(0) - 1.6) < 1e-10 && std::abs(L(1) - 1.0) < 1e-10,
	           "L = (" + fmt(L(0)) + ", " + fmt(L(1)) + ")");
	demo.check("chain average", std::abs(l_bar - 1.6) < 1e-10, "L_bar = " + fmt(l_bar));

	GrowthPrediction pred = predict_growth(cs, Vector::Constant(2, 0.01));
	demo.check("chain growth amplification",
	           std::abs(pred.g / pred.gamma_tilde - 1.6) < 1e-10,
	           "g/gamma_tilde = " + fmt(pred.g / pred.gamma_tilde));
}

void demo_flat(DemoRunner& demo) {
	CoefficientSystem cs = build_coefficients(synthetic::flat());
	Vector L = output_multipliers(cs);
	double l_bar = average_output_multiplier(cs, L);
	demo.check("flat average", std::abs(l_bar - 1.0) < 1e-10, "L_bar = " + fmt(l_bar));

	GrowthPrediction pred = predict_growth(cs, Vector::Constant(2, 0.01));
	demo.check("flat growth equals improvement", std::abs(pred.g - 0.01) < 1e-10,
	           "g = " + fmt(pred.g));
}

void demo_line(DemoRunner& demo) {
	CoefficientSystem cs = build_coefficients(synthetic::production_line());
	LeontiefInverse inv = leontief_inverse(cs);
	Vector downstream(2), upstream(2), even(2);
	downstream << 0.0, 0.02;
	upstream << 0.02, 0.0;
	even << 0.01, 0.01;

	double g_down = predict_growth(cs, downstream).g;
	double g_up = predict_growth(cs, upstream).g;
	double g_even = predict_growth(cs, even).g;
	demo.check("line growth is location-free",
	           std::abs(g_down - 0.02) < 1e-10 && std::abs(g_up - 0.02) < 1e-10 &&
	               std::abs(g_even - 0.02) < 1e-10,
	           "g = (" + fmt(g_down) + ", " + fmt(g_up) + ", " + fmt(g_even) + ")");

	Vector r = predict_returns(inv, even);
	demo.check("line returns split by position",
	           std::abs(r(0) + 0.02) < 1e-10 && std::abs(r(1) + 0.01) < 1e-10,
	           "r = (" + fmt(r(0)) + ", " + fmt(r(1)) + ")");
}

void demo_aggregation(DemoRunner& demo) {
	IOTable fine = synthetic::random_closed_economy(24, 2024);
	double fine_L_bar = multiplier_report(build_coefficients(fine)).L_bar;
	AggregationMap map;
	map.group_of.resize(24);
	for (int i = 0; i < 24; ++i) map.group_of[i] = i % 5;
	for (int k = 0; k < 5; ++k) map.groups.push_back({"", "g" + std::to_string(k)});
	double coarse_L_bar = multiplier_report(build_coefficients(aggregate(fine, map))).L_bar;
	demo.check("aggregation leaves the average multiplier",
	           std::abs(coarse_L_bar - fine_L_bar) < 1e-9,
	           "fine " + fmt(fine_L_bar) + " vs coarse " + fmt(coarse_L_bar));
}

void demo_trade(DemoRunner& demo) {
	CoefficientSystem base = build_coefficients(synthetic::random_closed_economy(10, 7));
	TradePerturbation perturbation;
	perturbation.countries = {"AA", "BB"};
	perturbation.epsilon = Matrix::Zero(2, 2);
	perturbation.epsilon(0, 1) = 0.05;
	perturbation.epsilon(1, 0) = 0.05;
	OpenWorld open = open_trade_perturbation({base, base}, perturbation);
	double correction =
	    (open.first_order_L_bar - open.closed_L_bar).cwiseAbs().maxCoeff();
	MultiplierReport exact = multiplier_report(open.world, true);
	double gap = std::abs(exact.by_country.at("AA") - open.closed_L_bar(0)) +
	             std::abs(exact.by_country.at("BB") - open.closed_L_bar(1));
	demo.check("identical countries trade symmetrically",
	           correction == 0.0 && gap < 1e-9,
	           "first-order correction " + fmt(correction) + ", exact gap " + fmt(gap));
}

int run_demo(const std::string& which, const GlobalOptions& global) {
	OutputTarget target(global.out_path);
	DemoRunner demo(target.stream());
	if (which == "all" || which == "chain") demo_chain(demo);
	if (which == "all" || which == "flat") demo_flat(demo);
	if (which == "all" || which == "line") demo_line(demo);
	if (which == "all") {
		demo_aggregation(demo);
		demo_trade(demo);
	}
	return demo.failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"Production-network growth toolkit: multipliers, price returns, and growth"
	             " identities from money-flow tables"};
	app.require_subcommand(1);

	GlobalOptions global;
	app.add_option("--policy", global.policy, "Negative-entry cleaning policy")
	    ->check(CLI::IsMember({"clamp", "reject", "net"}))
	    ->capture_default_str();
	app.add_flag("--strict", global.strict, "Reject tables whose accounts do not balance");
	app.add_option("--threads", global.threads,
	               "Worker cap (0: LEONTIEF_LAB_THREADS or 1)");
	app.add_option("--out", global.out_path, "Write data to this file instead of stdout");

	auto add_sub = [&](const std::string& name, const std::string& desc) {
		CLI::App* sub = app.add_subcommand(name, desc);
		sub->fallthrough();
		return sub;
	};

	// coeffs
	std::string coeffs_table;
	CLI::App* coeffs = add_sub("coeffs", "Input coefficients, labor, GDP and output shares");
	coeffs->add_option("table", coeffs_table, "Money-flow table CSV")->required();

	// multipliers
	std::string mult_table;
	MultiplierOptions mult;
	CLI::App* multipliers = add_sub("multipliers", "Output multipliers and Domar weights");
	multipliers->add_option("table", mult_table, "Money-flow table CSV")->required();
	multipliers->add_option("--method", mult.method, "Computation path")
	    ->check(CLI::IsMember({"solve", "series", "walk"}))
	    ->capture_default_str();
	multipliers->add_option("--walks", mult.walks, "Walks per industry (walk method)")
	    ->capture_default_str();
	multipliers->add_option("--seed", mult.seed, "Random seed (walk method)")
	    ->capture_default_str();
	multipliers->add_option("--tol", mult.tol, "Series truncation tolerance")
	    ->capture_default_str();
	multipliers->add_flag("--by-country", mult.by_country, "Add per-country averages");
	multipliers->add_flag("--emit-plot-data", mult.plot_data,
	                      "Emit industry,L,gross_output triples");

	// predict + covariance alias
	std::string predict_table;
	PredictOptions predict;
	CLI::App* predict_cmd = add_sub("predict", "Model predictions from a table and rates");
	predict_cmd->add_option("what", predict.what, "returns | growth | covariance")
	    ->required()
	    ->check(CLI::IsMember({"returns", "growth", "covariance"}));
	predict_cmd->add_option("table", predict_table, "Money-flow table CSV")->required();
	predict_cmd->add_option("--gamma", predict.gamma_path, "Improvement-rate series CSV")
	    ->required();
	predict_cmd->add_flag("--full", predict.full_covariance,
	                      "Use the full gamma covariance, not just variances");

	std::string cov_table;
	PredictOptions cov;
	cov.what = "covariance";
	CLI::App* covariance = add_sub("covariance", "Return covariance prediction");
	covariance->add_option("table", cov_table, "Money-flow table CSV")->required();
	covariance->add_option("--gamma", cov.gamma_path, "Improvement-rate series CSV")
	    ->required();
	covariance->add_flag("--full", cov.full_covariance,
	                     "Use the full gamma covariance, not just variances");

	// estimate
	std::string est_table, est_prices, est_deflator = "wage";
	CLI::App* estimate = add_sub("estimate", "Real returns and dual productivity estimates "
	                                         "from observed prices");
	estimate->add_option("table", est_table, "Money-flow table CSV")->required();
	estimate->add_option("--prices", est_prices, "Price-return series CSV")->required();
	estimate->add_option("--deflator", est_deflator, "wage | cpi")
	    ->check(CLI::IsMember({"wage", "cpi"}))
	    ->capture_default_str();

	// aggregate
	std::string agg_table, agg_map;
	int agg_digits = 0;
	CLI::App* agg = add_sub("aggregate", "Merge industries by code prefix or explicit map");
	agg->add_option("table", agg_table, "Money-flow table CSV")->required();
	CLI::Option* digits_opt = agg->add_option("--digits", agg_digits,
	                                          "Group by leading code digits (0: one group "
	                                          "per country)");
	agg->add_option("--map", agg_map, "Aggregation map CSV (fine,coarse)")->excludes(digits_opt);

	// close-trade
	std::string close_table;
	CLI::App* close_trade = add_sub("close-trade", "Zero cross-country intermediate flows");
	close_trade->add_option("table", close_table, "Money-flow table CSV")->required();

	// perturb
	std::vector<std::string> perturb_tables;
	double perturb_eps = 0.0;
	std::string perturb_eps_file;
	CLI::App* perturb = add_sub("perturb", "Open closed economies with small import shares");
	perturb->add_option("tables", perturb_tables, "Per-country closed tables")
	    ->required()
	    ->expected(2, -1);
	CLI::Option* eps_opt =
	    perturb->add_option("--epsilon", perturb_eps, "Uniform import share");
	perturb->add_option("--epsilon-file", perturb_eps_file,
	                    "Import shares CSV (exporter,importer,share)")
	    ->excludes(eps_opt);

	// simulate
	SimulateOptions sim;
	CLI::App* simulate = add_sub("simulate", "Run the growth trajectory simulator");
	simulate->add_option("--economy", sim.economy, "chain | flat | line | table path")
	    ->capture_default_str();
	simulate->add_option("--gamma", sim.gamma, "Uniform improvement rate")
	    ->capture_default_str();
	simulate->add_option("--gamma-file", sim.gamma_path,
	                     "Per-industry improvement rates CSV (first period)");
	simulate->add_option("--years", sim.years, "Horizon in years")->capture_default_str();
	simulate->add_option("--dt", sim.dt, "Step size in years")->capture_default_str();
	simulate->add_option("--numeraire", sim.numeraire, "wage | gdp")
	    ->check(CLI::IsMember({"wage", "gdp"}))
	    ->capture_default_str();

	// regress / bin / normalize
	std::string regress_data;
	CLI::App* regress = add_sub("regress", "OLS of y on x plus any extra columns");
	regress->add_option("data", regress_data, "CSV with columns x,y[,covariates...]")
	    ->required();

	std::string bin_data;
	int bin_size = 45;
	CLI::App* bin = add_sub("bin", "Contiguous bin means of y over sorted x");
	bin->add_option("data", bin_data, "CSV with columns x,y")->required();
	bin->add_option("--size", bin_size, "Target points per bin")->capture_default_str();

	std::string normalize_data;
	CLI::App* normalize = add_sub("normalize", "Center and scale values within groups");
	normalize->add_option("data", normalize_data, "CSV with columns group,value")->required();

	// demo
	std::string demo_which = "all";
	CLI::App* demo = add_sub("demo", "Run the built-in identity checks");
	demo->add_option("which", demo_which, "all | chain | flat | line")
	    ->check(CLI::IsMember({"all", "chain", "flat", "line"}))
	    ->capture_default_str();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		if (app.got_subcommand(coeffs)) {
			run_coeffs(coeffs_table, global);
		} else if (app.got_subcommand(multipliers)) {
			run_multipliers(mult_table, mult, global);
		} else if (app.got_subcommand(predict_cmd)) {
			run_predict(predict_table, predict, global);
		} else if (app.got_subcommand(covariance)) {
			run_predict(cov_table, cov, global);
		} else if (app.got_subcommand(estimate)) {
			run_estimate(est_table, est_prices, est_deflator, global);
		} else if (app.got_subcommand(agg)) {
			if (agg_map.empty() && digits_opt->count() == 0)
				throw DomainError("aggregate needs --digits or --map");
			run_aggregate(agg_table, agg_digits, agg_map, global);
		} else if (app.got_subcommand(close_trade)) {
			run_close_trade(close_table, global);
		} else if (app.got_subcommand(perturb)) {
			if (perturb_eps_file.empty() && eps_opt->count() == 0)
				throw DomainError("perturb needs --epsilon or --epsilon-file");
			run_perturb(perturb_tables, perturb_eps, perturb_eps_file, global);
		} else if (app.got_subcommand(simulate)) {
			run_simulate(sim, global);
		} else if (app.got_subcommand(regress)) {
			run_regress(regress_data, global);
		} else if (app.got_subcommand(bin)) {
			run_bin(bin_data, bin_size, global);
		} else if (app.got_subcommand(normalize)) {
			run_normalize(normalize_data, global);
		} else if (app.got_subcommand(demo)) {
			return run_demo(demo_which, global);
		}
	} catch (const Error& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
	return 0;
}
