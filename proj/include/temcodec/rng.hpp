#pragma once

#include <cstdint>

namespace temcodec {

/// Deterministic PRNG (splitmix64). Per-trial streams are derived from
/// (seed, stream index), so trials produce identical draws whether they run
/// serially or in parallel.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : state_(seed) {}

	static Rng for_stream(std::uint64_t seed, std::uint64_t stream)
	{
		return Rng(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
	}

	std::uint64_t next()
	{
		std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
		z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
		z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
		return z ^ (z >> 31);
	}

	/// Uniform on [0, 1) with 53 random bits.
	double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

	double gaussian(double mean, double sd);

private:
	std::uint64_t state_;
};

}  // namespace temcodec
