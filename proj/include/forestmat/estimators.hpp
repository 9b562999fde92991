#pragma once

#include "forestmat/errors.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/graph.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace forestmat {

enum class Method
{
	SFQ,
	SFQPlus
};

inline std::string_view to_string(Method m) { return m == Method::SFQ ? "SFQ" : "SFQPlus"; }

inline Method parse_method(std::string_view s)
{
	if (s == "sfq" || s == "SFQ")
		return Method::SFQ;
	if (s == "sfqplus" || s == "SFQPlus" || s == "sfq+")
		return Method::SFQPlus;
	throw UsageError("unknown method \"" + std::string(s) + "\" (expected sfq or sfqplus)");
}

/// Accuracy target: error at most epsilon with probability at least 1 - delta.
struct EstimatorParams
{
	double epsilon = 0.03;
	double delta = 0.01;

	void validate() const
	{
		if (!(epsilon > 0.0 && epsilon < 1.0))
			throw UsageError("epsilon must lie in (0, 1)");
		if (!(delta > 0.0 && delta < 1.0))
			throw UsageError("delta must lie in (0, 1)");
	}
};

struct EntryEstimate
{
	double value = 0.0;
	std::uint64_t sample_weight = 0;
	Method method = Method::SFQ;
};

/**
 * Number of forests for the SFQPlus estimate of one entry to be within epsilon
 * (absolute, off-diagonal) or epsilon * omega_ii (relative, diagonal) with
 * probability 1 - delta. `column_degree` is the out-degree of the queried
 * column node in the current graph. Never less than 1.
 */
inline std::uint64_t required_samples(const EstimatorParams& p, std::size_t column_degree, bool diagonal)
{
	p.validate();
	const double eps = p.epsilon;
	const double log_term = std::log(2.0 / p.delta);
	double l = 0.0;
	if (diagonal) {
		l = (2.0 / (3.0 * eps) + 1.0 / (4.0 * eps * eps)) * log_term;
	} else {
		const double scale = 2.0 + static_cast<double>(column_degree);
		l = (1.0 / (scale * scale)) * (1.0 / (2.0 * eps * eps) + 2.0 / (3.0 * eps)) * log_term;
	}
	return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(l)));
}

namespace detail {

/// Per-forest estimators of omega_ij, given the root of i in that forest.
enum class PerForest
{
	Indicator,  // 1{r(i) = j}
	InNeighbor, // (1/(1+d_j)) * #{k in N-(j) : r(i) = k}; off-diagonal only
	Combined    // SFQPlus per-forest value
};

inline double per_forest_value(const Digraph& g, PerForest kind, NodeId i, NodeId j, NodeId root_of_i)
{
	const double dj = static_cast<double>(g.out_degree(j));
	switch (kind) {
	case PerForest::Indicator:
		return root_of_i == j ? 1.0 : 0.0;
	case PerForest::InNeighbor:
		return g.has_edge(root_of_i, j) ? 1.0 / (1.0 + dj) : 0.0;
	case PerForest::Combined:
		if (i == j)
			return (1.0 + (g.has_edge(root_of_i, i) ? 1.0 : 0.0)) / (1.0 + dj);
		return (root_of_i == j || g.has_edge(root_of_i, j)) ? 1.0 / (2.0 + dj) : 0.0;
	}
	return 0.0;
}

inline void check_query(const ForestList& list, NodeId i, NodeId j)
{
	if (list.empty() || list.total_weight() == 0)
		throw UsageError("no samples");
	const std::size_t n = list.forests().front().node_count();
	if (i >= n || j >= n)
		throw GraphError("query node out of range");
}

} // namespace detail

/**
 * SFQ: multiplicity-weighted fraction of forests in which i is rooted at j.
 * Hits are summed as integer weights, so no precision is lost for large lists.
 */
inline EntryEstimate sfq_query(const ForestList& list, NodeId i, NodeId j)
{
	detail::check_query(list, i, j);
	std::uint64_t hits = 0;
	for (const Forest& f : list.forests())
		if (f.resolve_root(i) == j)
			hits += f.multiplicity();
	return {static_cast<double>(hits) / static_cast<double>(list.total_weight()), list.total_weight(), Method::SFQ};
}

/**
 * SFQPlus: variance-reduced estimate that also credits forests in which i is
 * rooted at an in-neighbor of j. Off-diagonal hits weigh 1/(2+d_j); the
 * diagonal estimate is 1/(1+d_i) plus 1/(1+d_i) per in-neighbor hit.
 * Degrees and in-neighbors come from the current graph.
 */
inline EntryEstimate sfqplus_query(const Digraph& g, const ForestList& list, NodeId i, NodeId j)
{
	detail::check_query(list, i, j);
	std::uint64_t hits = 0;
	for (const Forest& f : list.forests()) {
		const NodeId k = f.resolve_root(i);
		if ((k == j && i != j) || g.has_edge(k, j))
			hits += f.multiplicity();
	}
	const double dj = static_cast<double>(g.out_degree(j));
	const double frac = static_cast<double>(hits) / static_cast<double>(list.total_weight());
	const double value = i == j ? (1.0 + frac) / (1.0 + dj) : frac / (2.0 + dj);
	return {value, list.total_weight(), Method::SFQPlus};
}

inline EntryEstimate query(const Digraph& g, const ForestList& list, NodeId i, NodeId j, Method method)
{
	return method == Method::SFQ ? sfq_query(list, i, j) : sfqplus_query(g, list, i, j);
}

/// Forest distance omega_ii + omega_jj - omega_ij - omega_ji from four entry estimates. Zero when i == j.
inline double forest_distance(const Digraph& g, const ForestList& list, NodeId i, NodeId j, Method method)
{
	if (i == j)
		return 0.0;
	return query(g, list, i, i, method).value + query(g, list, j, j, method).value -
		   query(g, list, i, j, method).value - query(g, list, j, i, method).value;
}

} // namespace forestmat
