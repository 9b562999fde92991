#pragma once

#include <cstdint>
#include <limits>

namespace forestmat {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
	return z ^ (z >> 31);
}

/**
 * Counter-based 64-bit generator.
 *
 * Output k of stream s under seed is a fixed function of (seed, s, k), so
 * independent streams can be handed to parallel workers and any stream can be
 * replayed without touching the others. Satisfies UniformRandomBitGenerator.
 */
class CounterRng
{
public:
	using result_type = std::uint64_t;

	explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
		: seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream ^ 0xD1B54A32D192ED03ULL)))
	{}

	static constexpr result_type min() noexcept { return 0; }
	static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

	result_type operator()() noexcept { return mix64(key_ ^ mix64(counter_++ + 0x9E3779B97F4A7C15ULL)); }

	/// Uniform integer in [0, bound). bound must be positive.
	std::uint64_t below(std::uint64_t bound) noexcept
	{
		// Lemire's multiply-shift rejection.
		std::uint64_t x = (*this)();
		__uint128_t m = static_cast<__uint128_t>(x) * bound;
		auto low = static_cast<std::uint64_t>(m);
		if (low < bound) {
			const std::uint64_t threshold = (0 - bound) % bound;
			while (low < threshold) {
				x = (*this)();
				m = static_cast<__uint128_t>(x) * bound;
				low = static_cast<std::uint64_t>(m);
			}
		}
		return static_cast<std::uint64_t>(m >> 64);
	}

	/// Uniform double in [0, 1) with 53 random bits.
	double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

	/// Independent generator for sub-stream `index` of this generator's stream.
	CounterRng split(std::uint64_t index) const noexcept
	{
		return CounterRng(seed_ ^ mix64(stream_ + 0x632BE59BD9B4E019ULL), index);
	}

	std::uint64_t seed() const noexcept { return seed_; }
	std::uint64_t stream() const noexcept { return stream_; }
	std::uint64_t counter() const noexcept { return counter_; }

private:
	std::uint64_t seed_;
	std::uint64_t stream_;
	std::uint64_t key_;
	std::uint64_t counter_ = 0;
};

} // namespace forestmat
