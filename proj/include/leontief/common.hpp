#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace leontief {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error hierarchy. The CLI maps ParseError/ValidationError/DomainError/
// SingularityError/NumericError to exit code 1; usage errors exit 2.
struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// Malformed input files (carries file/line context in the message).
struct ParseError : Error {
	using Error::Error;
};

// Data violates a stated invariant (imbalance, negative flows, bad shares).
struct ValidationError : Error {
	using Error::Error;
};

// Arguments outside a function's stated domain.
struct DomainError : Error {
	using Error::Error;
};

// (I - A) not invertible; names a violating strongly connected component.
struct SingularityError : Error {
	using Error::Error;
};

// A numeric post-condition (residual bound, convergence) failed.
struct NumericError : Error {
	using Error::Error;
};

inline double rel_diff(double a, double b) {
	double scale = std::max({1.0, std::abs(a), std::abs(b)});
	return std::abs(a - b) / scale;
}

std::string format_value(double v);  // shortest round-trip form used by all writers

}  // namespace leontief
