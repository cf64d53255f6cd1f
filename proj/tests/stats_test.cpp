#include <doctest.h>

#include <cmath>

#include "leontief/rng.hpp"
#include "leontief/stats.hpp"
#include "test_support.hpp"

using namespace leontief;

namespace {

Vector vec(std::initializer_list<double> values) {
	Vector v(static_cast<int>(values.size()));
	int i = 0;
	for (double value : values) v(i++) = value;
	return v;
}

}  // namespace

TEST_CASE("ols recovers an exact line") {
	Vector x(10), y(10);
	for (int i = 0; i < 10; ++i) {
		x(i) = i;
		y(i) = 2.0 * i + 1.0;
	}
	RegressionResult fit = ols(x, y);
	CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
	CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(fit.p_value_slope < 1e-12);
	CHECK(fit.n == 10);
}

TEST_CASE("ols reproduces textbook arithmetic on a small sample") {
	// hand-checked: slope 0.6, intercept 2.2, R^2 0.6,
	// se_slope sqrt(2/25) = 0.2828..., t = 2.1213..., p = 0.12402... (3 dof)
	Vector x = vec({1, 2, 3, 4, 5});
	Vector y = vec({2, 4, 5, 4, 5});
	RegressionResult fit = ols(x, y);
	CHECK(fit.slope == doctest::Approx(0.6).epsilon(1e-12));
	CHECK(fit.intercept == doctest::Approx(2.2).epsilon(1e-12));
	CHECK(fit.r_squared == doctest::Approx(0.6).epsilon(1e-12));
	CHECK(fit.std_errors[1] == doctest::Approx(0.282842712474619).epsilon(1e-12));
	CHECK(fit.p_value_slope == doctest::Approx(0.124027062658030).epsilon(1e-9));
	CHECK(fit.coefficients[0] == doctest::Approx(2.2).epsilon(1e-12));
	CHECK(fit.coefficients[1] == doctest::Approx(0.6).epsilon(1e-12));
	CHECK(fit.p_values[1] == doctest::Approx(fit.p_value_slope).epsilon(1e-14));
}

TEST_CASE("constant response gives zero slope and zero r-squared") {
	Vector x = vec({1, 2, 3, 4, 5, 6});
	Vector y = Vector::Constant(6, 3.5);
	RegressionResult fit = ols(x, y);
	CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-14));
	CHECK(fit.intercept == doctest::Approx(3.5).epsilon(1e-14));
	CHECK(fit.r_squared == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("simple ols r-squared equals the squared correlation") {
	CounterRng rng(7, 30);
	Vector x(40), y(40);
	for (int i = 0; i < 40; ++i) {
		x(i) = rng.next_double();
		y(i) = 0.3 * x(i) + 0.1 * rng.next_normal();
	}
	RegressionResult fit = ols(x, y);
	Correlation corr = pearson(x, y);
	CHECK(fit.r_squared == doctest::Approx(corr.r * corr.r).epsilon(1e-12));
	CHECK(fit.p_value_slope == doctest::Approx(corr.p_value).epsilon(1e-9));
}

TEST_CASE("extra covariates enter the fit and the p-values") {
	CounterRng rng(8, 31);
	Vector x(30), z(30), y(30);
	for (int i = 0; i < 30; ++i) {
		x(i) = rng.next_double();
		z(i) = rng.next_double();
		y(i) = 1.0 + 2.0 * x(i) - 3.0 * z(i);
	}
	RegressionResult fit = ols(x, y, {z});
	REQUIRE(fit.coefficients.size() == 3);
	CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
	CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
	CHECK(fit.coefficients[2] == doctest::Approx(-3.0).epsilon(1e-10));
	CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(fit.p_values.size() == 3);
	CHECK(fit.std_errors.size() == 3);
}

TEST_CASE("a collinear design names the offending column") {
	Vector x = vec({1, 2, 3, 4, 5, 6});
	Vector y = vec({2, 3, 5, 7, 11, 13});
	Vector copy = 2.0 * x;  // perfectly collinear with x
	try {
		ols(x, y, {copy});
		FAIL("expected DomainError");
	} catch (const DomainError& e) {
		std::string msg = e.what();
		CHECK(msg.find("collinear") != std::string::npos);
		// either member of the collinear pair is a fair culprit
		bool named = msg.find(" x") != std::string::npos ||
		             msg.find("covariate_1") != std::string::npos;
		CHECK(named);
	}
	CHECK_THROWS_AS(ols(x, vec({1, 2, 3})), DomainError);  // size mismatch
	CHECK_THROWS_AS(ols(vec({1, 2}), vec({1, 2})), DomainError);  // too few points
}

TEST_CASE("pearson correlation matches its definition") {
	Vector x = vec({1, 2, 3, 4, 5});
	Vector y = vec({2, 4, 5, 4, 5});
	Correlation corr = pearson(x, y);
	CHECK(corr.r == doctest::Approx(0.774596669241483).epsilon(1e-12));
	CHECK(corr.p_value == doctest::Approx(0.124027062658030).epsilon(1e-9));
	CHECK(corr.n == 5);

	Correlation perfect = pearson(x, Vector(2.0 * x));
	CHECK(perfect.r == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(perfect.p_value < 1e-20);

	CHECK_THROWS_AS(pearson(x, Vector::Constant(5, 1.0)), DomainError);
	CHECK_THROWS_AS(pearson(vec({1, 2}), vec({1, 2})), DomainError);
}

TEST_CASE("binning splits a hundred points into 45 and 55") {
	Vector x(100), y(100);
	for (int i = 0; i < 100; ++i) {
		x(i) = i;
		y(i) = 2.0 * i;
	}
	std::vector<Bin> bins = bin_means(x, y, 45);
	REQUIRE(bins.size() == 2);
	CHECK(bins[0].count == 45);
	CHECK(bins[1].count == 55);
	CHECK(bins[0].center == doctest::Approx(22.0).epsilon(1e-12));  // mean of 0..44
	CHECK(bins[1].center == doctest::Approx(72.0).epsilon(1e-12));  // mean of 45..99
	CHECK(bins[0].mean_y == doctest::Approx(44.0).epsilon(1e-12));
	CHECK(bins[1].mean_y == doctest::Approx(144.0).epsilon(1e-12));
}

TEST_CASE("a remainder of at least half the target keeps its own bin") {
	Vector x(25), y(25);
	for (int i = 0; i < 25; ++i) {
		x(i) = i;
		y(i) = 1.0;
	}
	std::vector<Bin> bins = bin_means(x, y, 10);
	// 25 = 10 + 10 + 5; 5 < 10/2 is false... 5*2 == 10, not < 10, so it stays
	REQUIRE(bins.size() == 3);
	CHECK(bins[2].count == 5);

	std::vector<Bin> absorbed = bin_means(x, y, 11);
	// 25 = 11 + 11 + 3; 3*2 < 11, absorbed into the second bin
	REQUIRE(absorbed.size() == 2);
	CHECK(absorbed[0].count == 11);
	CHECK(absorbed[1].count == 14);
}

TEST_CASE("constant y inside a bin gives zero standard error") {
	Vector x(20), y = Vector::Constant(20, 7.0);
	for (int i = 0; i < 20; ++i) x(i) = i;
	for (const Bin& bin : bin_means(x, y, 5)) {
		CHECK(bin.mean_y == 7.0);
		CHECK(bin.stderr_y == 0.0);
	}
}

TEST_CASE("binning ignores the input order") {
	CounterRng rng(9, 32);
	int n = 37;
	Vector x(n), y(n);
	for (int i = 0; i < n; ++i) {
		x(i) = rng.next_double();
		y(i) = rng.next_double();
	}
	std::vector<Bin> forward = bin_means(x, y, 8);
	Vector rx = x.reverse(), ry = y.reverse();
	std::vector<Bin> reversed = bin_means(rx, ry, 8);
	REQUIRE(forward.size() == reversed.size());
	for (size_t k = 0; k < forward.size(); ++k) {
		CHECK(forward[k].center == reversed[k].center);
		CHECK(forward[k].mean_y == reversed[k].mean_y);
		CHECK(forward[k].count == reversed[k].count);
	}
}

TEST_CASE("fewer points than the target give a single bin") {
	Vector x = vec({3, 1, 2});
	Vector y = vec({6, 2, 4});
	std::vector<Bin> bins = bin_means(x, y, 10);
	REQUIRE(bins.size() == 1);
	CHECK(bins[0].count == 3);
	CHECK(bins[0].center == doctest::Approx(2.0).epsilon(1e-14));
	CHECK(bins[0].mean_y == doctest::Approx(4.0).epsilon(1e-14));

	CHECK_THROWS_AS(bin_means(x, y, 0), DomainError);
	CHECK_THROWS_AS(bin_means(x, vec({1, 2}), 2), DomainError);
}

TEST_CASE("group normalization centers and scales each group") {
	Vector values = vec({1, 2, 3, 10, 20, 30, 5, 5});
	std::vector<std::string> groups = {"a", "a", "a", "b", "b", "b", "flat", "flat"};
	NormalizeResult result = center_normalize_by_group(values, groups);

	REQUIRE(result.excluded_groups == std::vector<std::string>{"flat"});
	CHECK(std::isnan(result.values(6)));
	CHECK(std::isnan(result.values(7)));

	// group a: mean 2, sd 1 -> (-1, 0, 1)
	CHECK(result.values(0) == doctest::Approx(-1.0).epsilon(1e-12));
	CHECK(result.values(1) == doctest::Approx(0.0).epsilon(1e-12));
	CHECK(result.values(2) == doctest::Approx(1.0).epsilon(1e-12));
	// group b: mean 20, sd 10
	CHECK(result.values(3) == doctest::Approx(-1.0).epsilon(1e-12));
	CHECK(result.values(5) == doctest::Approx(1.0).epsilon(1e-12));

	// normalizing the normalized values changes nothing
	Vector kept(6);
	std::vector<std::string> kept_groups;
	for (int i = 0; i < 6; ++i) {
		kept(i) = result.values(i);
		kept_groups.push_back(groups[i]);
	}
	NormalizeResult again = center_normalize_by_group(kept, kept_groups);
	CHECK(again.excluded_groups.empty());
	CHECK((again.values - kept).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ar1 forecast reproduces a noiseless autoregression") {
	int n = 12;
	CounterRng rng(10, 33);
	Vector first(n), second(n);
	for (int i = 0; i < n; ++i) first(i) = rng.next_double();
	second = 0.005 + (0.7 * first.array());

	Ar1Forecast forecast = ar1_forecast(first, second);
	CHECK(forecast.a_hat == doctest::Approx(0.005).epsilon(1e-10));
	CHECK(forecast.b_hat == doctest::Approx(0.7).epsilon(1e-10));
	CHECK_FALSE(forecast.c_hat.has_value());
	Vector expected = 0.005 + (0.7 * second.array());
	CHECK((forecast.gamma_next - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ar1 forecast uses the multiplier covariate when given") {
	int n = 15;
	CounterRng rng(11, 34);
	Vector first(n), L(n), second(n);
	for (int i = 0; i < n; ++i) {
		first(i) = rng.next_double() * 0.02;
		L(i) = 1.0 + rng.next_double();
	}
	second = 0.001 + 0.5 * first.array() + 0.002 * L.array();

	Ar1Forecast forecast = ar1_forecast(first, second, &L);
	REQUIRE(forecast.c_hat.has_value());
	CHECK(forecast.a_hat == doctest::Approx(0.001).epsilon(1e-8));
	CHECK(forecast.b_hat == doctest::Approx(0.5).epsilon(1e-8));
	CHECK(*forecast.c_hat == doctest::Approx(0.002).epsilon(1e-8));
	Vector expected = 0.001 + 0.5 * second.array() + 0.002 * L.array();
	CHECK((forecast.gamma_next - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("a constant first period cannot identify the autoregression") {
	Vector first = Vector::Constant(8, 0.01);
	Vector second = Vector::Constant(8, 0.02);
	try {
		ar1_forecast(first, second);
		FAIL("expected DomainError");
	} catch (const DomainError& e) {
		std::string msg = e.what();
		CHECK(msg.find("intercept-only") != std::string::npos);
	}
}
