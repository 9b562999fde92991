#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>

namespace forestmat::stats {

struct ChiSquareResult
{
	double statistic = 0.0;
	double critical = 0.0; // upper quantile at the requested significance
	std::size_t dof = 0;

	bool passed() const noexcept { return statistic <= critical; }
};

/// Pearson goodness of fit of observed counts against a uniform distribution over the bins.
inline ChiSquareResult chi_square_uniform(std::span<const double> observed, double significance)
{
	if (observed.size() < 2)
		return {0.0, 0.0, 0};
	double total = 0.0;
	for (double o : observed)
		total += o;
	const double expected = total / static_cast<double>(observed.size());
	ChiSquareResult r;
	for (double o : observed)
		r.statistic += (o - expected) * (o - expected) / expected;
	r.dof = observed.size() - 1;
	boost::math::chi_squared dist(static_cast<double>(r.dof));
	r.critical = boost::math::quantile(boost::math::complement(dist, significance));
	return r;
}

/// Running mean and variance (Welford).
class RunningMoments
{
public:
	void add(double x) noexcept
	{
		++count_;
		const double delta = x - mean_;
		mean_ += delta / static_cast<double>(count_);
		m2_ += delta * (x - mean_);
	}

	std::uint64_t count() const noexcept { return count_; }
	double mean() const noexcept { return mean_; }
	/// Population variance.
	double variance() const noexcept { return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_); }

private:
	std::uint64_t count_ = 0;
	double mean_ = 0.0;
	double m2_ = 0.0;
};

} // namespace forestmat::stats
