#pragma once

#include "forestmat/dynamic.hpp"
#include "forestmat/errors.hpp"
#include "forestmat/estimators.hpp"
#include "forestmat/generators.hpp"
#include "forestmat/graph.hpp"
#include "forestmat/oracle.hpp"
#include "forestmat/sampler.hpp"
#include "forestmat/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace forestmat {

/// Options shared by every subcommand. Echoed as '#' lines at the top of all output.
struct RunConfig
{
	std::string command;
	std::string graph_path;
	GraphMode mode = GraphMode::Directed;
	std::uint64_t seed = 1;
	double epsilon = 0.03;
	double delta = 0.01;
	double prune_factor = 5.0;
	unsigned threads = 1;
	std::vector<std::pair<std::string, std::string>> extra; // command-specific arguments, in order

	EstimatorParams params() const { return {epsilon, delta}; }

	void validate() const
	{
		params().validate();
		if (!(prune_factor >= 1.0))
			throw UsageError("--prune-factor must be at least 1");
		if (threads == 0)
			throw UsageError("--threads must be positive");
	}

	void write_header(std::ostream& out) const
	{
		out << "# forestmat " << command << '\n';
		out << "# graph=" << graph_path << '\n';
		out << "# mode=" << (mode == GraphMode::Directed ? "directed" : "undirected") << '\n';
		out << "# seed=" << seed << '\n';
		out << "# epsilon=" << epsilon << '\n';
		out << "# delta=" << delta << '\n';
		out << "# prune_factor=" << prune_factor << '\n';
		out << "# threads=" << threads << '\n';
		for (const auto& [key, value] : extra)
			out << "# " << key << '=' << value << '\n';
	}
};

namespace detail {

inline LoadedGraph load_graph_file(const RunConfig& cfg)
{
	std::ifstream in(cfg.graph_path);
	if (!in)
		throw UsageError("cannot open graph file " + cfg.graph_path);
	return load_graph(in, cfg.mode);
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start)
{
	return std::chrono::duration<double>(Clock::now() - start).count();
}

inline double mean_of(const std::vector<double>& v)
{
	if (v.empty())
		return 0.0;
	double s = 0.0;
	for (double x : v)
		s += x;
	return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v)
{
	if (v.empty())
		return 0.0;
	std::sort(v.begin(), v.end());
	const std::size_t mid = v.size() / 2;
	return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace detail

/// Prints one entry estimate. `samples` overrides the accuracy-derived list size.
inline int cmd_query(const RunConfig& cfg, std::int64_t i_id, std::int64_t j_id, Method method,
					 std::optional<std::uint64_t> samples, std::ostream& out)
{
	cfg.validate();
	const LoadedGraph loaded = detail::load_graph_file(cfg);
	const Digraph& g = loaded.graph;
	const NodeId i = loaded.node(i_id);
	const NodeId j = loaded.node(j_id);
	const std::uint64_t l = samples.value_or(required_samples(cfg.params(), g.out_degree(j), i == j));

	auto start = detail::Clock::now();
	const ForestList list = sample_forest_list(g, l, cfg.seed, cfg.threads);
	const double sample_seconds = detail::seconds_since(start);
	start = detail::Clock::now();
	const EntryEstimate est = query(g, list, i, j, method);
	const double query_seconds = detail::seconds_since(start);

	cfg.write_header(out);
	out.precision(12);
	out << "i,j,method,estimate,samples,sample_seconds,query_seconds\n";
	out << i_id << ',' << j_id << ',' << to_string(method) << ',' << est.value << ',' << est.sample_weight << ','
		<< sample_seconds << ',' << query_seconds << '\n';
	return 0;
}

struct ReplayOptions
{
	std::string stream_path;
	std::vector<std::pair<std::int64_t, std::int64_t>> queries; // ids as in the graph file
	std::optional<std::uint64_t> samples;
	bool timing = false;
};

/**
 * Replays an update stream, querying every requested entry with both
 * estimators after each event. Without timing columns the output depends only
 * on the configuration, so equal configurations give byte-identical CSV.
 */
inline int cmd_replay(const RunConfig& cfg, const ReplayOptions& opt, std::ostream& out)
{
	cfg.validate();
	LoadedGraph loaded = detail::load_graph_file(cfg);
	Digraph& g = loaded.graph;

	std::ifstream stream_in(opt.stream_path);
	if (!stream_in)
		throw UsageError("cannot open update stream " + opt.stream_path);
	const auto events = parse_update_stream(stream_in, [&](std::int64_t id) { return loaded.node(id); });

	std::vector<std::pair<NodeId, NodeId>> queries;
	for (const auto& [a, b] : opt.queries)
		queries.emplace_back(loaded.node(a), loaded.node(b));

	const std::uint64_t l0 = opt.samples.value_or(required_samples(cfg.params(), 0, true));
	ForestList list = sample_forest_list(g, l0, cfg.seed, cfg.threads);
	const PruneConfig prune_cfg{l0, cfg.prune_factor};
	CounterRng prune_rng(cfg.seed, 0x7072756E65ULL);

	cfg.write_header(out);
	out << "# initial_samples=" << l0 << '\n';
	out << "event,kind,u,v,total_weight,forests,pruned";
	if (opt.timing)
		out << ",update_seconds";
	for (std::size_t q = 0; q < opt.queries.size(); ++q) {
		const auto& [a, b] = opt.queries[q];
		out << ",sfq_" << a << '_' << b << ",sfqplus_" << a << '_' << b;
		if (opt.timing)
			out << ",sfq_seconds_" << a << '_' << b << ",sfqplus_seconds_" << a << '_' << b;
	}
	out << '\n';
	out.precision(12);

	for (std::size_t idx = 0; idx < events.size(); ++idx) {
		const UpdateEvent& ev = events[idx];
		auto start = detail::Clock::now();
		try {
			apply_update(g, list, ev);
		} catch (const GraphError& err) {
			throw StreamError(idx, err.what());
		}
		bool pruned = false;
		if (list.total_weight() > prune_cfg.threshold())
			pruned = prune(list, prune_cfg, prune_rng);
		const double update_seconds = detail::seconds_since(start);

		out << idx << ',' << (ev.kind == UpdateEvent::Kind::Insert ? 'I' : 'D') << ','
			<< loaded.original_ids[ev.edge.from] << ',' << loaded.original_ids[ev.edge.to] << ','
			<< list.total_weight() << ',' << list.size() << ',' << (pruned ? 1 : 0);
		if (opt.timing)
			out << ',' << update_seconds;
		for (const auto& [i, j] : queries) {
			start = detail::Clock::now();
			const double sfq = sfq_query(list, i, j).value;
			const double sfq_seconds = detail::seconds_since(start);
			start = detail::Clock::now();
			const double plus = sfqplus_query(g, list, i, j).value;
			const double plus_seconds = detail::seconds_since(start);
			out << ',' << sfq << ',' << plus;
			if (opt.timing)
				out << ',' << sfq_seconds << ',' << plus_seconds;
		}
		out << '\n';
	}
	return 0;
}

/// Per-operation timings of one benchmark run, in seconds.
struct BenchResult
{
	std::string graph;
	std::size_t nodes = 0;
	std::size_t edges = 0;
	std::uint64_t samples = 0;
	double sample_seconds = 0.0;
	std::vector<double> sfq_static, sfqplus_static, update, sfq_dynamic, sfqplus_dynamic;
	std::optional<double> solver_seconds;
};

struct BenchOptions
{
	std::size_t queries = 100;
	std::size_t inserts = 50;
	std::size_t deletes = 50;
	std::optional<std::uint64_t> samples;
};

/**
 * Static queries, then inserts + deletes with pruning, then the same number of
 * queries on the updated graph. Query pairs are uniform random node pairs.
 */
inline BenchResult run_bench(Digraph g, const std::string& name, const RunConfig& cfg, const BenchOptions& opt)
{
	BenchResult r;
	r.graph = name;
	r.nodes = g.node_count();
	r.edges = g.edge_count();
	r.samples = opt.samples.value_or(required_samples(cfg.params(), 0, true));
	if (g.node_count() == 0)
		return r;

	auto start = detail::Clock::now();
	ForestList list = sample_forest_list(g, r.samples, cfg.seed, cfg.threads);
	r.sample_seconds = detail::seconds_since(start);

	CounterRng pick(cfg.seed, 0x7069636BULL);
	volatile double sink = 0.0;
	auto time_queries = [&](std::vector<double>& sfq_times, std::vector<double>& plus_times) {
		for (std::size_t q = 0; q < opt.queries; ++q) {
			const auto i = static_cast<NodeId>(pick.below(g.node_count()));
			const auto j = static_cast<NodeId>(pick.below(g.node_count()));
			auto t = detail::Clock::now();
			sink = sink + sfq_query(list, i, j).value;
			sfq_times.push_back(detail::seconds_since(t));
			t = detail::Clock::now();
			sink = sink + sfqplus_query(g, list, i, j).value;
			plus_times.push_back(detail::seconds_since(t));
		}
	};
	time_queries(r.sfq_static, r.sfqplus_static);

	const PruneConfig prune_cfg{r.samples, cfg.prune_factor};
	CounterRng prune_rng(cfg.seed, 0x7072756E65ULL);
	for (const UpdateEvent& ev : random_churn(g, opt.inserts, opt.deletes, cfg.seed)) {
		const auto t = detail::Clock::now();
		apply_update(g, list, ev);
		if (list.total_weight() > prune_cfg.threshold())
			prune(list, prune_cfg, prune_rng);
		r.update.push_back(detail::seconds_since(t));
	}

	time_queries(r.sfq_dynamic, r.sfqplus_dynamic);

	if (g.node_count() <= kDenseOracleLimit) {
		const auto t = detail::Clock::now();
		const DenseMatrix omega = exact_forest_matrix(g);
		r.solver_seconds = detail::seconds_since(t);
		sink = sink + omega(0, 0);
	}
	return r;
}

inline void write_bench_header(std::ostream& out)
{
	out << "graph,n,m,l,sample_seconds,SFQ-S,SFQPlus-S,Update,SFQ-D,SFQPlus-D,Solver\n";
}

inline void write_bench_row(std::ostream& out, const BenchResult& r)
{
	out.precision(6);
	out << r.graph << ',' << r.nodes << ',' << r.edges << ',' << r.samples << ',' << r.sample_seconds << ','
		<< detail::mean_of(r.sfq_static) << ',' << detail::mean_of(r.sfqplus_static) << ','
		<< detail::mean_of(r.update) << ',' << detail::mean_of(r.sfq_dynamic) << ','
		<< detail::mean_of(r.sfqplus_dynamic) << ',';
	if (r.solver_seconds)
		out << *r.solver_seconds;
	else
		out << "NA";
	out << '\n';
}

/// Timing table over the graph file (if given) and synthetic sparse digraphs of the given sizes.
inline int cmd_bench(const RunConfig& cfg, const std::vector<std::size_t>& synthetic_sizes, const BenchOptions& opt,
					 std::ostream& out)
{
	cfg.validate();
	cfg.write_header(out);
	write_bench_header(out);
	if (!cfg.graph_path.empty()) {
		const LoadedGraph loaded = detail::load_graph_file(cfg);
		write_bench_row(out, run_bench(loaded.graph, cfg.graph_path, cfg, opt));
	}
	for (std::size_t n : synthetic_sizes) {
		Digraph g = random_sparse_digraph(n, 2, 8, cfg.seed);
		write_bench_row(out, run_bench(std::move(g), "synthetic-" + std::to_string(n), cfg, opt));
	}
	return 0;
}

struct ValidateCommandOptions
{
	std::size_t random_graphs = 0; // additional random digraphs with 2..5 nodes
	ValidationOptions battery;
};

/// Runs the invariant battery; returns 0 only if every check passed.
inline int cmd_validate(const RunConfig& cfg, const ValidateCommandOptions& opt, std::ostream& out)
{
	cfg.validate();
	ValidationReport report;
	ValidationOptions battery = opt.battery;
	battery.seed = cfg.seed;
	if (!cfg.graph_path.empty()) {
		const LoadedGraph loaded = detail::load_graph_file(cfg);
		validate_graph(loaded.graph, cfg.graph_path, battery, report);
	}
	CounterRng rng(cfg.seed, 0x76616C6964ULL);
	for (std::size_t k = 0; k < opt.random_graphs; ++k) {
		const std::size_t n = 2 + rng.below(4);
		const double p = 0.2 + 0.6 * rng.uniform01();
		const Digraph g = random_digraph(n, p, rng);
		ValidationOptions local = battery;
		local.seed = cfg.seed + 1000 + k;
		validate_graph(g, "random-" + std::to_string(k), local, report);
	}
	cfg.write_header(out);
	report.write_csv(out);
	out << "# result=" << (report.ok() ? "pass" : "fail") << '\n';
	return report.ok() ? 0 : 1;
}

} // namespace forestmat
