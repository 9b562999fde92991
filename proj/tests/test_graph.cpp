#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace forestmat;
using forestmat::testing::parse;

TEST(LoadGraph, DirectedThreeCycle)
{
	auto loaded = parse("0 1\n1 2\n2 0\n");
	EXPECT_EQ(loaded.graph.node_count(), 3u);
	EXPECT_EQ(loaded.graph.edge_count(), 3u);
	EXPECT_TRUE(loaded.graph.has_edge(0, 1));
	EXPECT_TRUE(loaded.graph.has_edge(1, 2));
	EXPECT_TRUE(loaded.graph.has_edge(2, 0));
	EXPECT_FALSE(loaded.graph.has_edge(1, 0));
}

TEST(LoadGraph, EmptyStream)
{
	auto loaded = parse("");
	EXPECT_EQ(loaded.graph.node_count(), 0u);
	EXPECT_EQ(loaded.graph.edge_count(), 0u);
}

TEST(LoadGraph, UndirectedStoresBothArcs)
{
	auto loaded = parse("0 1\n", GraphMode::Undirected);
	const Digraph& g = loaded.graph;
	EXPECT_EQ(g.edge_count(), 2u);
	ASSERT_EQ(g.out_degree(0), 1u);
	ASSERT_EQ(g.out_degree(1), 1u);
	EXPECT_EQ(g.out_neighbors(0)[0], 1u);
	EXPECT_EQ(g.out_neighbors(1)[0], 0u);
}

TEST(LoadGraph, CommentsDuplicatesSelfLoopsAndRemap)
{
	auto loaded = parse("# SNAP header\n% KONECT header\n\n10 20\n10 20\n30 30\n20 10 1 1700000000\n");
	EXPECT_EQ(loaded.graph.node_count(), 3u);
	EXPECT_EQ(loaded.graph.edge_count(), 2u);
	EXPECT_EQ(loaded.duplicate_edges, 1u);
	EXPECT_EQ(loaded.self_loops, 1u);
	EXPECT_EQ(loaded.node(10), 0u);
	EXPECT_EQ(loaded.node(20), 1u);
	EXPECT_EQ(loaded.node(30), 2u);
	EXPECT_EQ(loaded.original_ids[2], 30);
	EXPECT_THROW(loaded.node(40), GraphError);
}

TEST(LoadGraph, MalformedLineReportsLineNumber)
{
	try {
		parse("0 1\n1 x\n");
		FAIL() << "expected ParseError";
	} catch (const ParseError& err) {
		EXPECT_EQ(err.line(), 2u);
	}
	EXPECT_THROW(parse("7\n"), ParseError);
}

TEST(Digraph, InsertUpdatesDegree)
{
	Digraph g = forestmat::testing::cycle3();
	g.insert_edge({0, 2});
	EXPECT_EQ(g.out_degree(0), 2u);
	EXPECT_EQ(g.in_degree(2), 2u);
	EXPECT_EQ(g.edge_count(), 4u);
}

TEST(Digraph, RejectsDuplicateAndSelfLoop)
{
	Digraph g = forestmat::testing::cycle3();
	try {
		g.insert_edge({0, 1});
		FAIL();
	} catch (const GraphError& err) {
		EXPECT_STREQ(err.what(), "edge exists");
	}
	try {
		g.insert_edge({0, 0});
		FAIL();
	} catch (const GraphError& err) {
		EXPECT_STREQ(err.what(), "self-loop");
	}
	EXPECT_THROW(g.insert_edge({0, 3}), GraphError);
	EXPECT_EQ(g.edge_count(), 3u);
}

TEST(Digraph, DeleteAndReinsert)
{
	Digraph g = forestmat::testing::cycle3();
	g.delete_edge({2, 0});
	EXPECT_EQ(g.edge_count(), 2u);
	EXPECT_FALSE(g.has_edge(2, 0));
	try {
		g.delete_edge({0, 2});
		FAIL();
	} catch (const GraphError& err) {
		EXPECT_STREQ(err.what(), "edge not found");
	}
	g.insert_edge({2, 0});
	Digraph original = forestmat::testing::cycle3();
	for (NodeId i = 0; i < 3; ++i) {
		std::set<NodeId> a(g.out_neighbors(i).begin(), g.out_neighbors(i).end());
		std::set<NodeId> b(original.out_neighbors(i).begin(), original.out_neighbors(i).end());
		EXPECT_EQ(a, b);
	}
}

// Random insert/delete sequences against a set-of-pairs model, crossing the
// indexed-adjacency threshold in both directions.
TEST(Digraph, RandomOperationsMatchSetModel)
{
	for (std::uint64_t seed = 0; seed < 20; ++seed) {
		CounterRng rng(seed);
		const std::size_t n = 2 + rng.below(20);
		Digraph g(n);
		std::set<std::pair<NodeId, NodeId>> model;
		for (int step = 0; step < 2000; ++step) {
			const auto u = static_cast<NodeId>(rng.below(n));
			const auto v = static_cast<NodeId>(rng.below(n));
			const bool present = model.count({u, v}) > 0;
			ASSERT_EQ(g.has_edge(u, v), present);
			if (rng.below(3) != 0) {
				if (u == v || present) {
					EXPECT_THROW(g.insert_edge({u, v}), GraphError);
				} else {
					g.insert_edge({u, v});
					model.insert({u, v});
				}
			} else if (present) {
				g.delete_edge({u, v});
				model.erase({u, v});
			} else {
				EXPECT_THROW(g.delete_edge({u, v}), GraphError);
			}
		}
		ASSERT_EQ(g.edge_count(), model.size());
		std::size_t out_sum = 0, in_sum = 0;
		for (NodeId i = 0; i < n; ++i) {
			out_sum += g.out_degree(i);
			in_sum += g.in_degree(i);
			for (NodeId j : g.out_neighbors(i)) {
				EXPECT_TRUE(model.count({i, j}));
				auto in = g.in_neighbors(j);
				EXPECT_NE(std::find(in.begin(), in.end(), i), in.end());
			}
			for (NodeId k : g.in_neighbors(i))
				EXPECT_TRUE(model.count({k, i}));
		}
		EXPECT_EQ(out_sum, model.size());
		EXPECT_EQ(in_sum, model.size());
		for (NodeId i = 0; i < n; ++i)
			for (NodeId j = 0; j < n; ++j)
				EXPECT_EQ(g.has_edge(i, j), model.count({i, j}) > 0);
	}
}
