#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace forestmat;
using namespace forestmat::testing;

constexpr NodeId R = kNoSuccessor;

TEST(InsertUpdate, ThreeCycleSpawnsTwoForests)
{
	Digraph g = cycle3();
	ForestList list = uniform_list(enumerate_forests(g));
	const auto epoch = list.epoch();
	insert_update(g, list, {0, 2});
	EXPECT_TRUE(g.has_edge(0, 2));
	EXPECT_EQ(list.size(), 9u);
	EXPECT_EQ(list.total_weight(), 9u);
	EXPECT_GT(list.epoch(), epoch);
	const auto hist = forest_histogram(list);
	EXPECT_EQ(hist.count({2, R, R}), 1u);
	EXPECT_EQ(hist.count({2, 2, R}), 1u);
	check_forest_list(list, g);

	// Omega after the insert, derived independently.
	const double expected[3][3] = {{4 / 9.0, 2 / 9.0, 1 / 3.0}, {1 / 9.0, 5 / 9.0, 1 / 3.0}, {2 / 9.0, 1 / 9.0, 2 / 3.0}};
	for (NodeId i = 0; i < 3; ++i)
		for (NodeId j = 0; j < 3; ++j) {
			EXPECT_NEAR(sfq_query(list, i, j).value, expected[i][j], 1e-15);
			EXPECT_NEAR(sfqplus_query(g, list, i, j).value, expected[i][j], 1e-15);
		}
}

TEST(DeleteUpdate, ThreeCycleDoublesEqually)
{
	Digraph g = cycle3();
	ForestList list = uniform_list(enumerate_forests(g));
	delete_update(g, list, {2, 0});
	EXPECT_FALSE(g.has_edge(2, 0));
	EXPECT_EQ(list.size(), 7u);
	EXPECT_EQ(list.total_weight(), 8u);
	const auto hist = forest_histogram(list);
	ASSERT_EQ(hist.size(), 4u);
	for (const auto& [succ, weight] : hist)
		EXPECT_EQ(weight, 2u);
	check_forest_list(list, g);

	// Path 0 -> 1 -> 2: omega = [[1/2, 1/4, 1/4], [0, 1/2, 1/2], [0, 0, 1]].
	const double expected[3][3] = {{0.5, 0.25, 0.25}, {0, 0.5, 0.5}, {0, 0, 1}};
	for (NodeId i = 0; i < 3; ++i)
		for (NodeId j = 0; j < 3; ++j) {
			EXPECT_NEAR(sfq_query(list, i, j).value, expected[i][j], 1e-15);
			EXPECT_NEAR(sfqplus_query(g, list, i, j).value, expected[i][j], 1e-15);
		}
}

TEST(Updates, InvalidEdgesLeaveStateUntouched)
{
	Digraph g = cycle3();
	ForestList list = uniform_list(enumerate_forests(g));
	EXPECT_THROW(insert_update(g, list, {0, 1}), GraphError);
	EXPECT_THROW(insert_update(g, list, {1, 1}), GraphError);
	EXPECT_THROW(delete_update(g, list, {0, 2}), GraphError);
	EXPECT_THROW(delete_update(g, list, {0, 9}), GraphError);
	EXPECT_EQ(g.edge_count(), 3u);
	EXPECT_EQ(list.total_weight(), 7u);
	EXPECT_EQ(list.epoch(), 0u);
}

TEST(Updates, DeleteThenReinsertRestoresSupport)
{
	Digraph g = cycle3();
	ForestList list = uniform_list(enumerate_forests(g));
	delete_update(g, list, {0, 1});
	insert_update(g, list, {0, 1});
	const ForestSet set = enumerate_forests(g);
	const auto hist = forest_histogram(list);
	EXPECT_EQ(hist.size(), set.size());
	for (const auto& [succ, weight] : hist)
		EXPECT_EQ(weight, hist.begin()->second);
}

// Every single-edge update of every digraph on up to 3 nodes keeps an exactly
// uniform list exactly uniform.
TEST(Updates, ExactUniformitySmallGraphs)
{
	for (std::size_t n = 2; n <= 3; ++n) {
		const std::uint64_t masks = 1ULL << (n * (n - 1));
		for (std::uint64_t mask = 0; mask < masks; ++mask) {
			const Digraph g = digraph_from_mask(n, mask);
			for (NodeId u = 0; u < n; ++u)
				for (NodeId v = 0; v < n; ++v) {
					if (u == v)
						continue;
					UpdateEvent ev;
					ev.kind = g.has_edge(u, v) ? UpdateEvent::Kind::Delete : UpdateEvent::Kind::Insert;
					ev.edge = {u, v};
					EXPECT_EQ(check_exact_update_uniformity(g, ev), "") << "n=" << n << " mask=" << mask;
				}
		}
	}
}

TEST(Prune, NoOpBelowThreshold)
{
	ForestList list = uniform_list(enumerate_forests(cycle3()));
	CounterRng rng(1);
	EXPECT_FALSE(prune(list, {7, 1.0}, rng));
	EXPECT_EQ(list.total_weight(), 7u);
}

TEST(Prune, KeepsExactlyThresholdSlots)
{
	const Digraph g = cycle3();
	ForestList list = uniform_list(enumerate_forests(g));
	for (std::size_t k = 0; k < list.size(); ++k)
		list.forests()[k].set_multiplicity(k + 1);
	list.recompute_total_weight(); // 28
	const auto before = forest_histogram(list);
	CounterRng rng(3);
	EXPECT_TRUE(prune(list, {4, 2.5}, rng));
	EXPECT_EQ(list.total_weight(), 10u);
	for (const auto& [succ, weight] : forest_histogram(list))
		EXPECT_LE(weight, before.at(succ));
	check_forest_list(list, g);
	EXPECT_THROW(prune(list, {0, 2.0}, rng), UsageError);
	EXPECT_THROW(prune(list, {4, 0.5}, rng), UsageError);
}

TEST(Prune, CompactsHeavilyPatchedForests)
{
	Digraph g(20);
	for (NodeId i = 0; i + 1 < 20; ++i)
		g.insert_edge({i, i + 1});
	Forest f = Forest::from_successors(std::vector<NodeId>(20, R));
	for (NodeId i = 0; i < 10; ++i)
		f.set_successor(i, i + 1);
	ForestList list;
	list.push_back(f);
	list.push_back(f);
	CounterRng rng(2);
	ASSERT_TRUE(prune(list, {1, 1.0, 4}, rng));
	ASSERT_EQ(list.size(), 1u);
	EXPECT_FALSE(list.forests()[0].dirty());
	check_forest_list(list, g);
}

// Each unit of weight survives with equal probability, so a forest keeps
// weight in proportion to its multiplicity.
TEST(Prune, SlotsSurviveUniformly)
{
	// Forest k is told apart by successor[0]: root for k = 0, else node k.
	const std::size_t forests = 5;
	const std::uint64_t keep = 6;
	std::vector<double> kept(forests, 0.0);
	CounterRng rng(17);
	const int trials = 20000;
	std::uint64_t total = 0;
	for (int trial = 0; trial < trials; ++trial) {
		ForestList list;
		for (NodeId k = 0; k < forests; ++k) {
			std::vector<NodeId> succ(forests, R);
			if (k > 0)
				succ[0] = k;
			list.push_back(Forest::from_successors(succ, k + 1));
		}
		total = list.total_weight();
		ASSERT_TRUE(prune(list, {keep, 1.0}, rng));
		ASSERT_EQ(list.total_weight(), keep);
		for (const Forest& f : list.forests()) {
			const NodeId s0 = f.successor(0);
			const std::size_t k = s0 == R ? 0 : s0;
			ASSERT_LE(f.multiplicity(), k + 1);
			kept[k] += static_cast<double>(f.multiplicity());
		}
	}
	double statistic = 0.0;
	for (std::size_t k = 0; k < forests; ++k) {
		const double expected = static_cast<double>(trials * keep * (k + 1)) / static_cast<double>(total);
		statistic += (kept[k] - expected) * (kept[k] - expected) / expected;
	}
	// Critical value of chi-square with 4 degrees of freedom at 0.001.
	EXPECT_LT(statistic, 18.4668);
}

TEST(ApplyStream, PrunesAndReportsFailingEvent)
{
	Digraph g = cycle3();
	ForestList list = sample_forest_list(g, 50, 1);
	CounterRng rng(4);
	std::istringstream text("I 0 2\nI 1 0\nD 2 0\nD 2 0\n");
	const auto events = parse_update_stream(text, g.node_count());
	ASSERT_EQ(events.size(), 4u);
	EXPECT_EQ(events[3].sequence, 3u);
	try {
		apply_stream(g, list, events, {50, 1.5}, rng);
		FAIL();
	} catch (const StreamError& err) {
		EXPECT_EQ(err.index(), 3u);
	}
	EXPECT_FALSE(g.has_edge(2, 0));
	EXPECT_TRUE(g.has_edge(1, 0));
	EXPECT_LE(list.total_weight(), 75u);
	EXPECT_GE(list.total_weight(), 50u);
	check_forest_list(list, g);
}

TEST(ParseUpdateStream, Errors)
{
	std::istringstream bad_kind("I 0 1\nX 0 1\n");
	try {
		parse_update_stream(bad_kind, 3);
		FAIL();
	} catch (const ParseError& err) {
		EXPECT_EQ(err.line(), 2u);
	}
	std::istringstream bad_node("# header\nD 0 7\n");
	EXPECT_THROW(parse_update_stream(bad_node, 3), ParseError);
	std::istringstream empty("");
	EXPECT_TRUE(parse_update_stream(empty, 3).empty());
}

// Sampled list, one insert and one delete, then chi-square against the new forest set.
TEST(Updates, SampledListStaysUniform)
{
	Digraph g = cycle3();
	ForestList list = sample_forest_list(g, 60000, 8);
	insert_update(g, list, {0, 2});
	auto chi = uniformity_test(list, enumerate_forests(g), 0.001);
	EXPECT_TRUE(chi.passed()) << chi.statistic << " > " << chi.critical;
	delete_update(g, list, {1, 2});
	chi = uniformity_test(list, enumerate_forests(g), 0.001);
	EXPECT_TRUE(chi.passed()) << chi.statistic << " > " << chi.critical;
}

// Property: random churn with pruning keeps every forest valid and the
// estimates close to the exact forest matrix of the final graph.
TEST(Updates, RandomChurnProperty)
{
	for (std::uint64_t seed = 0; seed < 6; ++seed) {
		CounterRng rng(seed, 31);
		Digraph g = random_digraph(5, 0.4, rng);
		const std::uint64_t l0 = 40000;
		ForestList list = sample_forest_list(g, l0, seed);
		const auto events = random_churn(g, 6, 6, seed);
		CounterRng prune_rng(seed, 32);
		apply_stream(g, list, events, {l0, 2.0}, prune_rng);
		check_forest_list(list, g);
		const DenseMatrix omega = exact_forest_matrix(g);
		// Pruned lists are dependent samples; use a loose 0.03 absolute band (about 6 sigma at l0).
		for (NodeId i = 0; i < 5; ++i)
			for (NodeId j = 0; j < 5; ++j)
				EXPECT_NEAR(sfq_query(list, i, j).value, omega(i, j), 0.03) << seed;
	}
}

// Large graph: spawned forests share storage and stay valid through churn.
TEST(Updates, LargeGraphChurnKeepsInvariants)
{
	Digraph g = random_sparse_digraph(2000, 1, 4, 6);
	ForestList list = sample_forest_list(g, 40, 6);
	CounterRng rng(6, 1);
	const auto events = random_churn(g, 30, 30, 6);
	apply_stream(g, list, events, {40, 3.0}, rng);
	check_forest_list(list, g);
}
