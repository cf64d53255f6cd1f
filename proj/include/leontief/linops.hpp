#pragma once

#include <cstdint>

#include "leontief/coefficients.hpp"

namespace leontief {

// Materialised H = (I - A)^-1. Entries are nonnegative with unit-or-larger
// diagonal, and H^T l~ = 1 (a spent unit of money is eventually paid to
// households). source_hash fingerprints the coefficient system it came from.
struct LeontiefInverse {
	Matrix H;
	std::uint64_t source_hash = 0;
};

struct WalkStats {
	double mean_length = 0.0;
	double stderr_mean = 0.0;
	std::int64_t walks = 0;
};

std::uint64_t coefficient_hash(const CoefficientSystem& cs);

// Largest |eigenvalue| via power iteration (nonnegative matrices).
double spectral_radius(const Matrix& m, int max_iter = 1000, double tol = 1e-12);

// Requires spectral radius < 1 - 1e-10; otherwise throws SingularityError
// naming a strongly connected component that violates it.
LeontiefInverse leontief_inverse(const CoefficientSystem& cs);

// Factored solve of (I - A) x = b (or the transpose). Dense LU by default;
// switches to sparse LU when A has density under 5%. Residual is refined to
// at most 1e-10 * ||b||_inf.
Vector solve_leontief(const CoefficientSystem& cs, const Vector& b, bool transpose);

// Truncated power series sum_k A^k b. Independent route used to cross-check
// the factored solve; throws NumericError if 1e6 terms do not converge.
Vector neumann_series_oracle(const CoefficientSystem& cs, const Vector& b, bool transpose,
                             double tol = 1e-12);

// Mean absorbing-walk length from `start`: step j -> i with probability
// a_ij, absorb with probability l~_j. Estimates the output multiplier L_i.
// Deterministic for fixed (seed, walks) regardless of thread count; a walk
// exceeding 1e6 steps aborts with NumericError.
WalkStats random_walk_path_length(const CoefficientSystem& cs, int start, std::int64_t walks,
                                  std::uint64_t seed, int threads = 1);

// Worker cap shared by walk sampling and covariance tiling: explicit value,
// else LEONTIEF_LAB_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace leontief
