#pragma once

#include <cmath>
#include <cstdint>

namespace leontief {

// Counter-based generator: every stream is a pure function of (seed, stream)
// and its draw counter, so parallel consumers get identical values no matter
// how work is split across threads or platforms.
class CounterRng {
public:
	explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
	    : state_(mix(seed ^ 0x9e3779b97f4a7c15ull * (stream + 1), stream)) {}

	std::uint64_t next_u64() {
		state_ += 0x9e3779b97f4a7c15ull;
		return finalize(state_);
	}

	// uniform in [0, 1), 53-bit mantissa
	double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

	// standard normal via Box-Muller; fresh pair every two draws
	double next_normal() {
		if (have_spare_) {
			have_spare_ = false;
			return spare_;
		}
		double u1 = 0.0;
		while (u1 <= 0.0) u1 = next_double();
		double u2 = next_double();
		double radius = std::sqrt(-2.0 * std::log(u1));
		double angle = 6.283185307179586476925286766559 * u2;
		spare_ = radius * std::sin(angle);
		have_spare_ = true;
		return radius * std::cos(angle);
	}

	// index in [0, n)
	std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

private:
	static std::uint64_t finalize(std::uint64_t z) {
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
		return z ^ (z >> 31);
	}

	static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
		return finalize(a + 0x9e3779b97f4a7c15ull * (b + 0x632be59bd9b4e019ull));
	}

	std::uint64_t state_;
	double spare_ = 0.0;
	bool have_spare_ = false;
};

}  // namespace leontief
