#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "leontief/multipliers.hpp"
#include "leontief/transform.hpp"
#include "test_support.hpp"

using namespace leontief;

TEST_CASE("merging the chain folds the flow into a self-loop") {
	IOTable chain = synthetic::chain(0.4);
	AggregationMap map;
	map.group_of = {0, 0};
	map.groups = {{"", "all"}};
	IOTable merged = aggregate(chain, map);

	REQUIRE(merged.size() == 1);
	CHECK(merged.intermediate_flows(0, 0) == 0.6);
	CHECK(merged.final_demand(0) == 1.0);
	CHECK(merged.labor_payments(0) == 1.0);
	CHECK(merged.year == chain.year);

	// totals survive bit for bit on this two-row sum
	CHECK(gross_output(merged).sum() == gross_output(chain).sum());
	CHECK(merged.final_demand.sum() == chain.final_demand.sum());

	// the average multiplier ignores the relabelling
	double before = multiplier_report(build_coefficients(chain)).L_bar;
	double after = multiplier_report(build_coefficients(merged)).L_bar;
	CHECK(after == doctest::Approx(before).epsilon(1e-12));
	CHECK(after == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("aggregation conserves totals and the average multiplier") {
	for (std::uint64_t seed : {301u, 302u, 303u}) {
		IOTable fine = synthetic::random_closed_economy(30, seed);
		double fine_L_bar = multiplier_report(build_coefficients(fine)).L_bar;

		for (int groups : {2, 7, 15}) {
			AggregationMap map;
			map.group_of.resize(30);
			for (int i = 0; i < 30; ++i) map.group_of[i] = i % groups;
			for (int k = 0; k < groups; ++k)
				map.groups.push_back({"", "g" + std::to_string(k)});

			IOTable coarse = aggregate(fine, map);
			REQUIRE(coarse.size() == groups);
			// conserved up to summation order
			CHECK(gross_output(coarse).sum() ==
			      doctest::Approx(gross_output(fine).sum()).epsilon(1e-14));
			CHECK(coarse.final_demand.sum() ==
			      doctest::Approx(fine.final_demand.sum()).epsilon(1e-14));
			CHECK(coarse.labor_payments.sum() ==
			      doctest::Approx(fine.labor_payments.sum()).epsilon(1e-14));

			double coarse_L_bar = multiplier_report(build_coefficients(coarse)).L_bar;
			CHECK(coarse_L_bar == doctest::Approx(fine_L_bar).epsilon(1e-9));
		}
	}
}

TEST_CASE("code-prefix maps coarsen stepwise without moving the average") {
	IOTable fine = synthetic::hierarchical_economy(30, 99);
	double fine_L_bar = multiplier_report(build_coefficients(fine)).L_bar;

	int last_groups = fine.size() + 1;
	for (int digits : {6, 4, 2, 0}) {
		AggregationMap map = prefix_digit_map(fine, digits);
		check_aggregation_map(map, fine.size());
		CHECK(map.group_count() <= last_groups);
		last_groups = map.group_count();

		IOTable coarse = aggregate(fine, map);
		double L_bar = multiplier_report(build_coefficients(coarse)).L_bar;
		CHECK(L_bar == doctest::Approx(fine_L_bar).epsilon(1e-9));
	}
	CHECK(prefix_digit_map(fine, 0).group_count() == 1);
}

TEST_CASE("aggregation maps are validated") {
	AggregationMap map;
	map.group_of = {0, 0};
	map.groups = {{"", "g0"}, {"", "g1"}};  // g1 is empty
	CHECK_THROWS_AS(check_aggregation_map(map, 2), ValidationError);

	map.group_of = {0, 2};  // out of range
	CHECK_THROWS_AS(check_aggregation_map(map, 2), ValidationError);

	map.group_of = {0, 1, 0};  // wrong length
	CHECK_THROWS_AS(check_aggregation_map(map, 2), ValidationError);

	map.group_of = {0, 1};
	map.groups = {{"", "same"}, {"", "same"}};  // duplicate labels
	CHECK_THROWS_AS(check_aggregation_map(map, 2), ValidationError);

	map.groups = {{"", "g0"}, {"", "g1"}};
	check_aggregation_map(map, 2);  // now fine
}

TEST_CASE("aggregation maps load from csv") {
	IOTable chain = synthetic::chain(0.4);
	std::string path = "/tmp/leontief_test_map.csv";
	{
		std::ofstream out(path);
		out << "fine,coarse\na,all\nb,all\n";
	}
	AggregationMap map = load_aggregation_map(path, chain);
	CHECK(map.group_count() == 1);
	CHECK(aggregate(chain, map).intermediate_flows(0, 0) == 0.6);

	{
		std::ofstream out(path);
		out << "fine,coarse\na,all\n";  // b unmapped
	}
	CHECK_THROWS_AS(load_aggregation_map(path, chain), ValidationError);
	std::remove(path.c_str());
}

TEST_CASE("zeroing international trade leaves domestic structure intact") {
	IOTable world = synthetic::random_closed_economy(16, 12, 2);
	IOTable severed = zero_international_trade(world);

	for (int i = 0; i < world.size(); ++i) {
		for (int j = 0; j < world.size(); ++j) {
			bool cross = world.industries[i].country != world.industries[j].country;
			if (cross)
				CHECK(severed.intermediate_flows(i, j) == 0.0);
			else
				CHECK(severed.intermediate_flows(i, j) == world.intermediate_flows(i, j));
		}
	}
	// households keep importing: only intermediate linkages are cut
	CHECK((severed.final_demand - world.final_demand).cwiseAbs().maxCoeff() == 0.0);
	CHECK((severed.labor_payments - world.labor_payments).cwiseAbs().maxCoeff() == 0.0);
	CHECK_FALSE(severed.strict);

	// a single-country table has nothing to cut
	IOTable domestic = synthetic::random_closed_economy(10, 5);
	IOTable same = zero_international_trade(domestic);
	CHECK((same.intermediate_flows - domestic.intermediate_flows).cwiseAbs().maxCoeff() == 0.0);
	CHECK(same.strict == domestic.strict);
}

TEST_CASE("identical countries make trade exposure a wash") {
	CoefficientSystem base = testing::random_coeffs(8, 21);
	std::vector<CoefficientSystem> countries = {base, base};

	TradePerturbation perturbation;
	perturbation.countries = {"AA", "BB"};
	perturbation.epsilon = Matrix::Zero(2, 2);
	perturbation.epsilon(0, 1) = 0.05;
	perturbation.epsilon(1, 0) = 0.02;

	OpenWorld open = open_trade_perturbation(countries, perturbation);
	CHECK(open.closed_L_bar(0) == doctest::Approx(open.closed_L_bar(1)).epsilon(1e-12));
	// L_b = L_c termwise, so the first-order correction vanishes identically
	CHECK((open.first_order_L_bar - open.closed_L_bar).cwiseAbs().maxCoeff() == 0.0);

	// and the exact coupled system agrees: rerouting between clones changes nothing
	check_coefficients(open.world, 1e-12);
	MultiplierReport report = multiplier_report(open.world, true);
	CHECK(report.by_country.at("AA") == doctest::Approx(open.closed_L_bar(0)).epsilon(1e-12));
	CHECK(report.by_country.at("BB") == doctest::Approx(open.closed_L_bar(1)).epsilon(1e-12));
}

TEST_CASE("small import shares move the average multiplier at second order") {
	std::vector<CoefficientSystem> countries = {
	    testing::random_coeffs(6, 71),
	    testing::random_coeffs(6, 72),
	};

	Vector errors(4);
	Vector epsilons(4);
	int k = 0;
	for (double eps : {0.01, 0.02, 0.04, 0.08}) {
		TradePerturbation perturbation;
		perturbation.countries = {"AA", "BB"};
		perturbation.epsilon = Matrix::Zero(2, 2);
		perturbation.epsilon(0, 1) = eps;
		perturbation.epsilon(1, 0) = eps;

		OpenWorld open = open_trade_perturbation(countries, perturbation);
		MultiplierReport exact = multiplier_report(open.world, true);
		double err = std::abs(exact.by_country.at("AA") - open.first_order_L_bar(0)) +
		             std::abs(exact.by_country.at("BB") - open.first_order_L_bar(1));
		REQUIRE(err > 0.0);
		errors(k) = std::log(err);
		epsilons(k) = std::log(eps);
		++k;
	}
	// log-log slope of the residual: quadratic in the import share
	double slope = (errors(3) - errors(0)) / (epsilons(3) - epsilons(0));
	CHECK(slope >= 1.9);
}

TEST_CASE("a country without intermediate inputs is inert under rerouting") {
	// rerouting moves input expenditure, of which a flat economy has none;
	// the chain's supplier has the same multiplier at home and abroad, so
	// here the first-order prediction is not just close but exact
	std::vector<CoefficientSystem> countries = {
	    build_coefficients(synthetic::flat()),
	    testing::chain_coeffs(0.4),
	};
	for (double eps : {0.01, 0.08}) {
		TradePerturbation perturbation;
		perturbation.countries = {"FF", "CC"};
		perturbation.epsilon = Matrix::Zero(2, 2);
		perturbation.epsilon(0, 1) = eps;
		perturbation.epsilon(1, 0) = eps;

		OpenWorld open = open_trade_perturbation(countries, perturbation);
		CHECK(open.first_order_L_bar(0) == open.closed_L_bar(0));
		CHECK(open.first_order_L_bar(1) == open.closed_L_bar(1));
		MultiplierReport exact = multiplier_report(open.world, true);
		CHECK(exact.by_country.at("FF") == doctest::Approx(1.0).epsilon(1e-12));
		CHECK(exact.by_country.at("CC") == doctest::Approx(1.6).epsilon(1e-12));
	}
}

TEST_CASE("trade perturbations are validated") {
	CoefficientSystem a = testing::random_coeffs(6, 61);
	CoefficientSystem b = testing::random_coeffs(6, 62);

	TradePerturbation perturbation;
	perturbation.countries = {"AA", "BB"};
	perturbation.epsilon = Matrix::Zero(2, 2);

	TradePerturbation bad = perturbation;
	bad.epsilon(0, 0) = 0.1;  // self-import
	CHECK_THROWS_AS(open_trade_perturbation({a, b}, bad), DomainError);

	bad = perturbation;
	bad.epsilon(0, 1) = 1.0;  // column sum not below one
	CHECK_THROWS_AS(open_trade_perturbation({a, b}, bad), DomainError);

	bad = perturbation;
	bad.epsilon(1, 0) = -0.01;
	CHECK_THROWS_AS(open_trade_perturbation({a, b}, bad), DomainError);

	CoefficientSystem small = testing::random_coeffs(5, 63);
	CHECK_THROWS_AS(open_trade_perturbation({a, small}, perturbation), DomainError);

	CHECK_THROWS_AS(open_trade_perturbation({a}, perturbation), DomainError);
}
