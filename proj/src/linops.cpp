#include "leontief/linops.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

#include "leontief/rng.hpp"

namespace leontief {

namespace {

constexpr double kSpectralMargin = 1e-10;
constexpr double kSolveRelResidual = 1e-10;
constexpr double kSparseDensityCutoff = 0.05;
constexpr int kSparseMinSize = 64;
constexpr std::int64_t kMaxWalkSteps = 1000000;

void hash_bytes(std::uint64_t& h, const void* data, size_t len) {
	const unsigned char* p = static_cast<const unsigned char*>(data);
	for (size_t i = 0; i < len; ++i) {
		h ^= p[i];
		h *= 0x100000001b3ull;  // FNV-1a
	}
}

// Tarjan strongly connected components of the support graph (edge j -> i
// when a_ij > 0), used only to name the offending loop in error messages.
struct SccFinder {
	const Matrix& a;
	int n;
	std::vector<int> index, lowlink, stack;
	std::vector<bool> on_stack;
	std::vector<std::vector<int>> components;
	int counter = 0;

	explicit SccFinder(const Matrix& m)
	    : a(m), n(static_cast<int>(m.rows())), index(n, -1), lowlink(n, 0), on_stack(n, false) {}

	void strongconnect(int v) {
		index[v] = lowlink[v] = counter++;
		stack.push_back(v);
		on_stack[v] = true;
		for (int w = 0; w < n; ++w) {
			if (a(w, v) <= 0.0) continue;  // edge v -> w in the walk ordering
			if (index[w] < 0) {
				strongconnect(w);
				lowlink[v] = std::min(lowlink[v], lowlink[w]);
			} else if (on_stack[w]) {
				lowlink[v] = std::min(lowlink[v], index[w]);
			}
		}
		if (lowlink[v] == index[v]) {
			components.emplace_back();
			int w;
			do {
				w = stack.back();
				stack.pop_back();
				on_stack[w] = false;
				components.back().push_back(w);
			} while (w != v);
		}
	}

	std::vector<std::vector<int>> run() {
		for (int v = 0; v < n; ++v)
			if (index[v] < 0) strongconnect(v);
		return components;
	}
};

[[noreturn]] void throw_singular(const CoefficientSystem& cs, double radius) {
	auto components = SccFinder(cs.A).run();
	std::ostringstream msg;
	msg << "I - A is numerically singular (spectral radius " << radius << ")";
	for (const auto& comp : components) {
		if (comp.size() == 0) continue;
		Matrix sub(comp.size(), comp.size());
		for (size_t r = 0; r < comp.size(); ++r)
			for (size_t c = 0; c < comp.size(); ++c) sub(r, c) = cs.A(comp[r], comp[c]);
		if (spectral_radius(sub) < 1.0 - kSpectralMargin) continue;
		std::vector<std::string> labels;
		for (int v : comp) labels.push_back(cs.industries[v].label());
		std::sort(labels.begin(), labels.end());
		msg << "; component without labor leakage:";
		for (const auto& label : labels) msg << " " << label;
		break;
	}
	throw SingularityError(msg.str());
}

double density(const Matrix& a) {
	if (a.size() == 0) return 1.0;
	return static_cast<double>((a.array() != 0.0).count()) / static_cast<double>(a.size());
}

}  // namespace

std::uint64_t coefficient_hash(const CoefficientSystem& cs) {
	std::uint64_t h = 0xcbf29ce484222325ull;
	std::int64_t n = cs.size();
	hash_bytes(h, &n, sizeof(n));
	hash_bytes(h, cs.A.data(), sizeof(double) * cs.A.size());
	hash_bytes(h, cs.labor_share.data(), sizeof(double) * cs.labor_share.size());
	hash_bytes(h, cs.theta.data(), sizeof(double) * cs.theta.size());
	return h;
}

double spectral_radius(const Matrix& m, int max_iter, double tol) {
	int n = static_cast<int>(m.rows());
	if (n == 0) return 0.0;
	Vector x = Vector::Constant(n, 1.0 / n);
	double radius = 0.0;
	for (int it = 0; it < max_iter; ++it) {
		Vector y = m * x;
		double norm = y.norm();
		if (norm == 0.0) return 0.0;  // nilpotent direction reached
		y /= norm;
		double next = y.dot(m * y);
		if (it > 0 && std::abs(next - radius) <= tol * std::max(1.0, std::abs(next))) {
			radius = next;
			break;
		}
		radius = next;
		x = y;
	}
	return std::abs(radius);
}

int resolve_threads(int requested) {
	if (requested > 0) return requested;
	if (const char* env = std::getenv("LEONTIEF_LAB_THREADS")) {
		int v = std::atoi(env);
		if (v > 0) return v;
	}
	return 1;
}

LeontiefInverse leontief_inverse(const CoefficientSystem& cs) {
	double radius = spectral_radius(cs.A);
	if (radius >= 1.0 - kSpectralMargin) throw_singular(cs, radius);
	int n = cs.size();
	Matrix ia = Matrix::Identity(n, n) - cs.A;
	LeontiefInverse inv;
	inv.H = ia.partialPivLu().solve(Matrix::Identity(n, n));
	inv.source_hash = coefficient_hash(cs);

	double residual = (ia * inv.H - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
	if (residual > 1e-9)
		throw NumericError("Leontief inverse residual " + std::to_string(residual));
	return inv;
}

Vector solve_leontief(const CoefficientSystem& cs, const Vector& b, bool transpose) {
	int n = cs.size();
	if (b.size() != n) throw DomainError("right-hand side size mismatch");
	double radius = spectral_radius(cs.A);
	if (radius >= 1.0 - kSpectralMargin) throw_singular(cs, radius);

	Matrix ia = Matrix::Identity(n, n) - (transpose ? Matrix(cs.A.transpose()) : cs.A);
	double b_norm = b.cwiseAbs().maxCoeff();
	double bound = kSolveRelResidual * std::max(b_norm, 1e-300);

	Vector x;
	if (n >= kSparseMinSize && density(cs.A) < kSparseDensityCutoff) {
		Eigen::SparseMatrix<double> sp = ia.sparseView();
		sp.makeCompressed();
		Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sp);
		if (lu.info() != Eigen::Success) throw_singular(cs, radius);
		x = lu.solve(b);
		for (int pass = 0; pass < 3; ++pass) {
			Vector r = b - ia * x;
			if (r.cwiseAbs().maxCoeff() <= bound) break;
			x += lu.solve(r);
		}
	} else {
		Eigen::PartialPivLU<Matrix> lu(ia);
		x = lu.solve(b);
		for (int pass = 0; pass < 3; ++pass) {
			Vector r = b - ia * x;
			if (r.cwiseAbs().maxCoeff() <= bound) break;
			x += lu.solve(r);
		}
	}
	double residual = (b - ia * x).cwiseAbs().maxCoeff();
	if (residual > bound)
		throw NumericError("solve residual " + std::to_string(residual) + " exceeds bound");
	return x;
}

Vector neumann_series_oracle(const CoefficientSystem& cs, const Vector& b, bool transpose,
                             double tol) {
	int n = cs.size();
	if (b.size() != n) throw DomainError("right-hand side size mismatch");
	Vector sum = b;
	Vector term = b;
	for (std::int64_t k = 1; k <= 1000000; ++k) {
		term = transpose ? Vector(cs.A.transpose() * term) : Vector(cs.A * term);
		sum += term;
		if (term.cwiseAbs().maxCoeff() < tol) return sum;
	}
	throw NumericError("Neumann series did not converge within 1e6 terms");
}

WalkStats random_walk_path_length(const CoefficientSystem& cs, int start, std::int64_t walks,
                                  std::uint64_t seed, int threads) {
	int n = cs.size();
	if (start < 0 || start >= n) throw DomainError("walk start out of range");
	if (walks <= 0) throw DomainError("walk count must be positive");

	// Column-wise cumulative transition weights; the tail [cum(n-1, j), 1)
	// is absorption into households.
	Matrix cum(n, n);
	for (int j = 0; j < n; ++j) {
		double acc = 0.0;
		for (int i = 0; i < n; ++i) {
			acc += cs.A(i, j);
			cum(i, j) = acc;
		}
	}

	auto walk_length = [&](std::int64_t w) -> std::int64_t {
		CounterRng rng(seed, static_cast<std::uint64_t>(w));
		int node = start;
		std::int64_t steps = 0;
		while (true) {
			++steps;
			if (steps > kMaxWalkSteps)
				throw NumericError("random walk exceeded 1e6 steps without absorption");
			double u = rng.next_double();
			if (u >= cum(n - 1, node)) return steps;  // absorbed by households
			int next = 0;
			// binary search the cumulative column
			int lo = 0, hi = n - 1;
			while (lo < hi) {
				int mid = (lo + hi) / 2;
				if (u < cum(mid, node))
					hi = mid;
				else
					lo = mid + 1;
			}
			next = lo;
			node = next;
		}
	};

	std::vector<std::int64_t> lengths(static_cast<size_t>(walks));
	int workers = std::max(1, resolve_threads(threads));
	if (workers == 1 || walks < 1024) {
		for (std::int64_t w = 0; w < walks; ++w) lengths[w] = walk_length(w);
	} else {
		std::vector<std::thread> pool;
		std::exception_ptr failure;
		std::mutex failure_mutex;
		for (int t = 0; t < workers; ++t) {
			pool.emplace_back([&, t]() {
				try {
					for (std::int64_t w = t; w < walks; w += workers)
						lengths[w] = walk_length(w);
				} catch (...) {
					std::lock_guard<std::mutex> lock(failure_mutex);
					if (!failure) failure = std::current_exception();
				}
			});
		}
		for (auto& th : pool) th.join();
		if (failure) std::rethrow_exception(failure);
	}

	// Deterministic reduction in walk order regardless of worker count.
	double mean = 0.0;
	for (std::int64_t w = 0; w < walks; ++w) mean += static_cast<double>(lengths[w]);
	mean /= static_cast<double>(walks);
	double ss = 0.0;
	for (std::int64_t w = 0; w < walks; ++w) {
		double d = static_cast<double>(lengths[w]) - mean;
		ss += d * d;
	}
	WalkStats stats;
	stats.mean_length = mean;
	stats.walks = walks;
	stats.stderr_mean =
	    walks > 1 ? std::sqrt(ss / static_cast<double>(walks - 1) / static_cast<double>(walks))
	              : 0.0;
	return stats;
}

}  // namespace leontief
