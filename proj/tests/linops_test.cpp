#include <doctest.h>

#include "leontief/linops.hpp"
#include "leontief/rng.hpp"
#include "test_support.hpp"

using namespace leontief;

TEST_CASE("chain inverse matches the closed form") {
	CoefficientSystem cs = testing::chain_coeffs(0.4);
	LeontiefInverse inv = leontief_inverse(cs);
	CHECK(inv.H(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(inv.H(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
	CHECK(inv.H(1, 0) == doctest::Approx(0.6).epsilon(1e-12));
	CHECK(inv.H(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(inv.source_hash == coefficient_hash(cs));
	CHECK(inv.source_hash != 0);
}

TEST_CASE("symmetric two-loop inverse matches the closed form") {
	// a and b buy half of their expenditure from each other
	std::string csv =
	    "source,target,value,year\n"
	    "LABOR,a,0.5,2000\n"
	    "LABOR,b,0.5,2000\n"
	    "a,FINAL,0.5,2000\n"
	    "b,FINAL,0.5,2000\n"
	    "a,b,0.5,2000\n"
	    "b,a,0.5,2000\n";
	CoefficientSystem cs = build_coefficients(testing::load_csv(csv).table);
	REQUIRE(cs.A(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
	REQUIRE(cs.A(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
	LeontiefInverse inv = leontief_inverse(cs);
	CHECK(inv.H(0, 0) == doctest::Approx(1.0 / 0.75).epsilon(1e-12));
	CHECK(inv.H(0, 1) == doctest::Approx(0.5 / 0.75).epsilon(1e-12));
	CHECK(inv.H(1, 0) == doctest::Approx(0.5 / 0.75).epsilon(1e-12));
	CHECK(inv.H(1, 1) == doctest::Approx(1.0 / 0.75).epsilon(1e-12));
}

TEST_CASE("inverse invariants hold on random economies") {
	for (std::uint64_t seed : {7u, 8u, 9u, 10u}) {
		CoefficientSystem cs = testing::random_coeffs(23, seed);
		LeontiefInverse inv = leontief_inverse(cs);
		int n = cs.size();
		Matrix residual = (Matrix::Identity(n, n) - cs.A) * inv.H - Matrix::Identity(n, n);
		CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
		CHECK(inv.H.minCoeff() >= 0.0);
		CHECK(inv.H.diagonal().minCoeff() >= 1.0);
		// every spent unit of money eventually reaches households
		Vector reach = inv.H.transpose() * cs.labor_share;
		CHECK((reach.array() - 1.0).abs().maxCoeff() < 1e-9);
	}
}

TEST_CASE("solve on the transposed chain system gives the multipliers") {
	CoefficientSystem cs = testing::chain_coeffs(0.4);
	Vector x = solve_leontief(cs, Vector::Ones(2), true);
	CHECK(x(0) == doctest::Approx(1.6).epsilon(1e-12));
	CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve residual stays within the contract bound") {
	for (std::uint64_t seed : {21u, 22u, 23u}) {
		CoefficientSystem cs = testing::random_coeffs(40, seed);
		CounterRng rng(seed, 5);
		Vector b(cs.size());
		for (int i = 0; i < cs.size(); ++i) b(i) = rng.next_double() * 10 - 5;
		for (bool transpose : {false, true}) {
			Vector x = solve_leontief(cs, b, transpose);
			Matrix ia = Matrix::Identity(cs.size(), cs.size()) -
			            (transpose ? Matrix(cs.A.transpose()) : cs.A);
			double residual = (ia * x - b).cwiseAbs().maxCoeff();
			CHECK(residual <= 1e-10 * b.cwiseAbs().maxCoeff());
		}
	}
}

TEST_CASE("series oracle agrees with the factored solve") {
	for (std::uint64_t seed : {31u, 32u, 33u, 34u, 35u}) {
		CoefficientSystem cs = testing::random_coeffs(15, seed);
		Vector b = Vector::Ones(cs.size());
		for (bool transpose : {false, true}) {
			Vector direct = solve_leontief(cs, b, transpose);
			Vector series = neumann_series_oracle(cs, b, transpose, 1e-12);
			CHECK((direct - series).cwiseAbs().maxCoeff() < 1e-10);
		}
	}
}

TEST_CASE("sparse and dense paths agree") {
	// 80 industries, each buying from at most 6 suppliers: density < 5%
	CoefficientSystem cs = testing::random_coeffs(80, 77);
	double density =
	    static_cast<double>((cs.A.array() != 0.0).count()) / static_cast<double>(cs.A.size());
	REQUIRE(density < 0.05);
	Vector b = Vector::Ones(cs.size());
	Vector sparse_route = solve_leontief(cs, b, true);
	Vector series = neumann_series_oracle(cs, b, true, 1e-13);
	CHECK((sparse_route - series).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("a closed loop without labor leakage is reported as singular") {
	IOTable table;
	table.industries = {{"", "a"}, {"", "b"}, {"", "c"}};
	table.intermediate_flows = Matrix::Zero(3, 3);
	table.intermediate_flows(0, 1) = 1.0;  // b pays a
	table.intermediate_flows(1, 0) = 1.0;  // a pays b
	table.final_demand = Vector::Zero(3);
	table.final_demand(2) = 1.0;
	table.labor_payments = Vector::Zero(3);
	table.labor_payments(2) = 1.0;
	table.year = 2000;
	CoefficientSystem cs = build_coefficients(table);
	try {
		leontief_inverse(cs);
		FAIL("expected SingularityError");
	} catch (const SingularityError& e) {
		std::string msg = e.what();
		auto pos = msg.find("leakage:");
		REQUIRE(pos != std::string::npos);
		CHECK(msg.substr(pos) == "leakage: a b");
	}
	CHECK_THROWS_AS(solve_leontief(cs, Vector::Ones(3), true), SingularityError);
}

TEST_CASE("walks absorb immediately when everything is paid to labor") {
	CoefficientSystem cs = build_coefficients(synthetic::flat());
	WalkStats stats = random_walk_path_length(cs, 0, 500, 42);
	CHECK(stats.mean_length == 1.0);
	CHECK(stats.stderr_mean == 0.0);
	CHECK(stats.walks == 500);
}

TEST_CASE("chain walk length estimates the multiplier") {
	CoefficientSystem cs = testing::chain_coeffs(0.4);
	WalkStats from_a = random_walk_path_length(cs, 0, 100000, 20240101);
	CHECK(std::abs(from_a.mean_length - 1.6) <= 3.0 * from_a.stderr_mean);
	WalkStats from_b = random_walk_path_length(cs, 1, 1000, 20240101);
	CHECK(from_b.mean_length == 1.0);  // b pays only labor
}

TEST_CASE("walks are deterministic and thread-count independent") {
	CoefficientSystem cs = testing::random_coeffs(9, 3);
	WalkStats one = random_walk_path_length(cs, 2, 20000, 99, 1);
	WalkStats again = random_walk_path_length(cs, 2, 20000, 99, 1);
	WalkStats four = random_walk_path_length(cs, 2, 20000, 99, 4);
	CHECK(one.mean_length == again.mean_length);
	CHECK(one.mean_length == four.mean_length);
	CHECK(one.stderr_mean == four.stderr_mean);

	WalkStats other_seed = random_walk_path_length(cs, 2, 20000, 100, 1);
	CHECK(one.mean_length != other_seed.mean_length);
}

TEST_CASE("three routes agree on random economies") {
	for (std::uint64_t seed : {51u, 52u, 53u}) {
		CoefficientSystem cs = testing::random_coeffs(10, seed);
		Vector ones = Vector::Ones(cs.size());
		Vector solve_route = solve_leontief(cs, ones, true);
		Vector series_route = neumann_series_oracle(cs, ones, true, 1e-12);
		CHECK((solve_route - series_route).cwiseAbs().maxCoeff() < 1e-8);
		for (int start : {0, cs.size() / 2}) {
			WalkStats walk = random_walk_path_length(cs, start, 20000, seed * 7 + 1);
			CHECK(std::abs(walk.mean_length - solve_route(start)) <=
			      std::max(3.0 * walk.stderr_mean, 1e-8));
		}
	}
}

TEST_CASE("hash distinguishes perturbed systems") {
	CoefficientSystem cs = testing::random_coeffs(6, 4);
	CoefficientSystem other = cs;
	other.A(0, 0) += 1e-13;
	CHECK(coefficient_hash(cs) != coefficient_hash(other));
	CHECK(coefficient_hash(cs) == coefficient_hash(testing::random_coeffs(6, 4)));
}

TEST_CASE("spectral radius matches known cases") {
	CHECK(spectral_radius(Matrix::Zero(3, 3)) == 0.0);
	Matrix loop(2, 2);
	loop << 0.0, 0.5, 0.5, 0.0;
	CHECK(spectral_radius(loop) == doctest::Approx(0.5).epsilon(1e-10));
	CoefficientSystem chain = testing::chain_coeffs(0.4);
	CHECK(spectral_radius(chain.A) < 1e-9);  // nilpotent line
}
