#include "forestmat/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& text)
{
	const auto comma = text.find(',');
	if (comma == std::string::npos)
		throw forestmat::UsageError("expected \"i,j\", got \"" + text + "\"");
	return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
}

} // namespace

int main(int argc, char** argv)
{
	using namespace forestmat;

	CLI::App app{"Forest matrix entry estimation on evolving digraphs"};
	app.require_subcommand(1);

	RunConfig cfg;
	std::string mode = "directed";
	app.add_option("--graph", cfg.graph_path, "Edge list file (\"u v\" per line)");
	app.add_option("--mode", mode, "directed or undirected")
		->check(CLI::IsMember({"directed", "undirected"}))
		->capture_default_str();
	app.add_option("--seed", cfg.seed, "Master RNG seed")->capture_default_str();
	app.add_option("--epsilon", cfg.epsilon, "Error target")->capture_default_str();
	app.add_option("--delta", cfg.delta, "Failure probability")->capture_default_str();
	app.add_option("--prune-factor", cfg.prune_factor, "Prune threshold as a multiple of the initial sample count")
		->capture_default_str();
	app.add_option("--threads", cfg.threads, "Sampling threads")->capture_default_str();

	auto* query = app.add_subcommand("query", "Estimate one forest matrix entry");
	std::int64_t qi = 0, qj = 0;
	std::string method = "sfqplus";
	std::uint64_t samples = 0;
	query->add_option("-i,--row", qi, "Row node id (as in the graph file)")->required();
	query->add_option("-j,--col", qj, "Column node id (as in the graph file)")->required();
	query->add_option("--method", method, "sfq or sfqplus")->capture_default_str();
	query->add_option("--samples", samples, "Override the number of sampled forests");

	auto* replay = app.add_subcommand("replay", "Apply an update stream with interleaved queries");
	ReplayOptions replay_opt;
	std::vector<std::string> replay_queries;
	replay->add_option("--stream", replay_opt.stream_path, "Update stream (\"I u v\" / \"D u v\" per line)")
		->required();
	replay->add_option("--query", replay_queries, "Entry to query after every event, as i,j (repeatable)");
	replay->add_option("--samples", samples, "Override the initial number of sampled forests");
	replay->add_flag("--timing", replay_opt.timing, "Add wall-clock columns (output no longer reproducible)");

	auto* bench = app.add_subcommand("bench", "Timing table for static and dynamic queries");
	BenchOptions bench_opt;
	std::vector<std::size_t> sizes;
	bench->add_option("--sizes", sizes, "Node counts of synthetic sparse digraphs")->delimiter(',');
	bench->add_option("--queries", bench_opt.queries, "Queries per phase")->capture_default_str();
	bench->add_option("--inserts", bench_opt.inserts, "Random edge insertions")->capture_default_str();
	bench->add_option("--deletes", bench_opt.deletes, "Random edge deletions")->capture_default_str();
	bench->add_option("--samples", samples, "Override the number of sampled forests");

	auto* validate = app.add_subcommand("validate", "Run the invariant battery against the exact oracle");
	ValidateCommandOptions validate_opt;
	validate->add_option("--random", validate_opt.random_graphs, "Also validate this many random digraphs (n <= 5)");
	validate->add_option("--samples", validate_opt.battery.samples, "Forests sampled per graph")
		->capture_default_str();
	validate->add_flag("--inject-corruption", validate_opt.battery.inject_corrupt_forest,
					   "Debug hook: check a deliberately cyclic forest");

	CLI11_PARSE(app, argc, argv);

	try {
		cfg.mode = mode == "directed" ? GraphMode::Directed : GraphMode::Undirected;
		std::optional<std::uint64_t> sample_override;
		if (samples > 0)
			sample_override = samples;

		if (query->parsed()) {
			if (cfg.graph_path.empty())
				throw UsageError("query needs --graph");
			cfg.command = "query";
			cfg.extra = {{"i", std::to_string(qi)}, {"j", std::to_string(qj)}, {"method", method}};
			if (sample_override)
				cfg.extra.emplace_back("samples", std::to_string(*sample_override));
			return cmd_query(cfg, qi, qj, parse_method(method), sample_override, std::cout);
		}
		if (replay->parsed()) {
			if (cfg.graph_path.empty())
				throw UsageError("replay needs --graph");
			cfg.command = "replay";
			cfg.extra.emplace_back("stream", replay_opt.stream_path);
			for (const auto& q : replay_queries) {
				replay_opt.queries.push_back(parse_pair(q));
				cfg.extra.emplace_back("query", q);
			}
			replay_opt.samples = sample_override;
			if (sample_override)
				cfg.extra.emplace_back("samples", std::to_string(*sample_override));
			cfg.extra.emplace_back("timing", replay_opt.timing ? "1" : "0");
			return cmd_replay(cfg, replay_opt, std::cout);
		}
		if (bench->parsed()) {
			cfg.command = "bench";
			bench_opt.samples = sample_override;
			std::string size_list;
			for (std::size_t n : sizes)
				size_list += (size_list.empty() ? "" : ",") + std::to_string(n);
			cfg.extra = {{"sizes", size_list},
						 {"queries", std::to_string(bench_opt.queries)},
						 {"inserts", std::to_string(bench_opt.inserts)},
						 {"deletes", std::to_string(bench_opt.deletes)}};
			if (cfg.graph_path.empty() && sizes.empty())
				throw UsageError("bench needs --graph or --sizes");
			return cmd_bench(cfg, sizes, bench_opt, std::cout);
		}
		if (validate->parsed()) {
			cfg.command = "validate";
			cfg.extra = {{"random", std::to_string(validate_opt.random_graphs)},
						 {"samples", std::to_string(validate_opt.battery.samples)},
						 {"inject_corruption", validate_opt.battery.inject_corrupt_forest ? "1" : "0"}};
			if (cfg.graph_path.empty() && validate_opt.random_graphs == 0)
				throw UsageError("validate needs --graph or --random");
			return cmd_validate(cfg, validate_opt, std::cout);
		}
	} catch (const std::exception& err) {
		std::cerr << "forestmat: " << err.what() << '\n';
		return 2;
	}
	return 0;
}
