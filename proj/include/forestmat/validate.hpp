#pragma once

#include "forestmat/dynamic.hpp"
#include "forestmat/errors.hpp"
#include "forestmat/estimators.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/generators.hpp"
#include "forestmat/oracle.hpp"
#include "forestmat/sampler.hpp"
#include "forestmat/stats.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace forestmat {

/// Weight per distinct forest (keyed by successor array) of a list.
inline std::map<std::vector<NodeId>, std::uint64_t> forest_histogram(const ForestList& list)
{
	std::map<std::vector<NodeId>, std::uint64_t> hist;
	for (const Forest& f : list.forests())
		hist[f.successors()] += f.multiplicity();
	return hist;
}

/// List holding every forest of the set exactly once: the exactly uniform sample.
inline ForestList uniform_list(const ForestSet& set)
{
	ForestList list;
	for (const auto& successor : set.forests)
		list.push_back(Forest::from_successors(successor));
	return list;
}

/**
 * Chi-square test of a list's weighted forest frequencies against the uniform
 * law over `set`. Forests outside the set make the test fail outright.
 */
inline stats::ChiSquareResult uniformity_test(const ForestList& list, const ForestSet& set, double significance,
											  bool* foreign = nullptr)
{
	std::map<std::vector<NodeId>, std::size_t> index;
	for (std::size_t k = 0; k < set.forests.size(); ++k)
		index.emplace(set.forests[k], k);
	std::vector<double> observed(set.forests.size(), 0.0);
	bool unknown = false;
	for (const auto& [successor, weight] : forest_histogram(list)) {
		auto it = index.find(successor);
		if (it == index.end())
			unknown = true;
		else
			observed[it->second] += static_cast<double>(weight);
	}
	if (foreign != nullptr)
		*foreign = unknown;
	auto result = stats::chi_square_uniform(observed, significance);
	if (unknown)
		result.statistic = std::numeric_limits<double>::infinity();
	return result;
}

/**
 * Applies one update to the exactly uniform list of g and checks that every
 * forest of the updated graph ends up with the same total weight and nothing
 * else appears. Returns an empty string on success, else a diagnostic.
 */
inline std::string check_exact_update_uniformity(const Digraph& g, const UpdateEvent& event)
{
	Digraph work = g;
	ForestList list = uniform_list(enumerate_forests(work));
	apply_update(work, list, event);
	const ForestSet after = enumerate_forests(work);
	const auto hist = forest_histogram(list);

	std::ostringstream why;
	if (hist.size() != after.size()) {
		why << "distinct forests " << hist.size() << " != " << after.size();
		return why.str();
	}
	const std::uint64_t expected = hist.begin()->second;
	for (const auto& successor : after.forests) {
		auto it = hist.find(successor);
		if (it == hist.end()) {
			why << "forest missing after update";
			return why.str();
		}
		if (it->second != expected) {
			why << "unequal weights " << it->second << " vs " << expected;
			return why.str();
		}
	}
	for (const Forest& f : list.forests())
		check_forest(f, work);
	return {};
}

struct ValidationOptions
{
	std::uint64_t seed = 1;
	std::size_t samples = 100000;
	double significance = 0.001;
	double marginal_sigmas = 5.0;
	bool inject_corrupt_forest = false;
};

struct ValidationReport
{
	struct Item
	{
		std::string graph;
		std::string check;
		bool passed = true;
		std::string detail;
	};

	std::vector<Item> items;

	bool ok() const
	{
		for (const Item& it : items)
			if (!it.passed)
				return false;
		return true;
	}

	void add(std::string graph, std::string check, bool passed, std::string detail = {})
	{
		items.push_back({std::move(graph), std::move(check), passed, std::move(detail)});
	}

	void write_csv(std::ostream& out) const
	{
		out << "graph,check,status,detail\n";
		for (const Item& it : items)
			out << it.graph << ',' << it.check << ',' << (it.passed ? "pass" : "fail") << ",\"" << it.detail << "\"\n";
	}
};

/**
 * Full invariant battery for a small graph: oracle cross-check, sampler
 * uniformity and root marginals, exact uniformity of every single-edge update,
 * forest invariants after churn, and SFQPlus range checks.
 */
inline void validate_graph(const Digraph& g, const std::string& name, const ValidationOptions& opt,
						   ValidationReport& report)
{
	auto guarded = [&](const char* check, auto&& body) {
		try {
			body();
		} catch (const std::exception& err) {
			report.add(name, check, false, err.what());
		}
	};

	if (opt.inject_corrupt_forest) {
		guarded("forest_invariants", [&] {
			const std::size_t n = std::max<std::size_t>(g.node_count(), 1);
			std::vector<NodeId> successor(n);
			for (NodeId i = 0; i < n; ++i)
				successor[i] = static_cast<NodeId>((i + 1) % n);
			Forest corrupt(successor, std::vector<NodeId>(n, 0));
			check_forest(corrupt, g);
			report.add(name, "forest_invariants", true, "corrupt forest went undetected");
		});
		return;
	}

	const bool feasible = g.node_count() <= kDenseOracleLimit && enumeration_space(g) <= kEnumerationLimit;
	if (!feasible) {
		report.add(name, "oracle", false, "graph too large for exhaustive validation");
		return;
	}

	guarded("cross_check", [&] {
		const auto cc = cross_check(g);
		std::ostringstream detail;
		detail << "forests=" << cc.forest_count << " max_abs_diff=" << cc.max_abs_diff;
		if (!cc.ok())
			detail << " first_failure=" << cc.failures.front().check << '(' << cc.failures.front().i << ','
				   << cc.failures.front().j << ')';
		report.add(name, "cross_check", cc.ok(), detail.str());
	});

	const ForestSet set = enumerate_forests(g);
	const DenseMatrix omega = exact_forest_matrix(g);
	ForestList list;
	guarded("sampler_uniformity", [&] {
		list = sample_forest_list(g, opt.samples, opt.seed);
		bool foreign = false;
		const auto chi = uniformity_test(list, set, opt.significance, &foreign);
		std::ostringstream detail;
		detail << "chi2=" << chi.statistic << " critical=" << chi.critical << " dof=" << chi.dof;
		report.add(name, "sampler_uniformity", chi.passed() && !foreign, detail.str());
	});
	if (list.empty())
		return;

	guarded("forest_invariants", [&] {
		check_forest_list(list, g);
		report.add(name, "forest_invariants", true);
	});

	guarded("root_marginals", [&] {
		const std::size_t n = g.node_count();
		const double w = static_cast<double>(list.total_weight());
		double worst = 0.0;
		bool ok = true;
		for (NodeId i = 0; i < n; ++i)
			for (NodeId j = 0; j < n; ++j) {
				const double p = omega(i, j);
				const double est = sfq_query(list, i, j).value;
				const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / w);
				const double dev = std::abs(est - p);
				if (sigma < 1e-12 ? dev > 1e-12 : dev > opt.marginal_sigmas * sigma)
					ok = false;
				if (sigma > 1e-12)
					worst = std::max(worst, dev / sigma);
			}
		report.add(name, "root_marginals", ok, "max_sigma=" + std::to_string(worst));
	});

	guarded("sfqplus_range", [&] {
		bool ok = true;
		for (NodeId i = 0; i < g.node_count(); ++i) {
			const double d = static_cast<double>(g.out_degree(i));
			const double v = sfqplus_query(g, list, i, i).value;
			ok &= v >= 1.0 / (1.0 + d) - 1e-12 && v <= 2.0 / (1.0 + d) + 1e-12;
		}
		report.add(name, "sfqplus_range", ok);
	});

	guarded("exact_update_uniformity", [&] {
		std::size_t updates = 0;
		std::string failure;
		for (NodeId u = 0; u < g.node_count() && failure.empty(); ++u)
			for (NodeId v = 0; v < g.node_count() && failure.empty(); ++v) {
				if (u == v)
					continue;
				UpdateEvent ev;
				ev.kind = g.has_edge(u, v) ? UpdateEvent::Kind::Delete : UpdateEvent::Kind::Insert;
				ev.edge = {u, v};
				failure = check_exact_update_uniformity(g, ev);
				if (!failure.empty())
					failure = (ev.kind == UpdateEvent::Kind::Insert ? "insert (" : "delete (") + std::to_string(u) + "," +
							  std::to_string(v) + "): " + failure;
				++updates;
			}
		report.add(name, "exact_update_uniformity", failure.empty(),
				   failure.empty() ? std::to_string(updates) + " updates" : failure);
	});

	guarded("churn_invariants", [&] {
		Digraph work = g;
		ForestList churned = sample_forest_list(work, 200, opt.seed + 1);
		PruneConfig cfg{churned.total_weight(), 5.0};
		CounterRng rng(opt.seed, 0x7072756EULL);
		const auto events = random_churn(work, 10, 10, opt.seed);
		for (const UpdateEvent& ev : events) {
			const std::uint64_t before = churned.total_weight();
			apply_update(work, churned, ev);
			if (churned.total_weight() < before)
				throw InvariantViolation("update decreased total weight");
			check_forest_list(churned, work);
			if (churned.total_weight() > cfg.threshold())
				prune(churned, cfg, rng);
			check_forest_list(churned, work);
		}
		report.add(name, "churn_invariants", true, std::to_string(events.size()) + " events");
	});
}

} // namespace forestmat
