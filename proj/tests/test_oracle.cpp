#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace forestmat;
using namespace forestmat::testing;

namespace {

void expect_matrix(const DenseMatrix& actual, const std::vector<std::vector<double>>& expected)
{
	ASSERT_EQ(static_cast<std::size_t>(actual.rows()), expected.size());
	for (std::size_t i = 0; i < expected.size(); ++i)
		for (std::size_t j = 0; j < expected.size(); ++j)
			EXPECT_NEAR(actual(i, j), expected[i][j], 1e-12) << i << ',' << j;
}

} // namespace

TEST(Oracle, FrozenMatrices)
{
	expect_matrix(exact_forest_matrix(cycle3()),
				  {{4 / 7.0, 2 / 7.0, 1 / 7.0}, {1 / 7.0, 4 / 7.0, 2 / 7.0}, {2 / 7.0, 1 / 7.0, 4 / 7.0}});
	expect_matrix(exact_forest_matrix(from_edges(3, {{0, 1}, {1, 2}, {2, 0}, {0, 2}})),
				  {{4 / 9.0, 2 / 9.0, 1 / 3.0}, {1 / 9.0, 5 / 9.0, 1 / 3.0}, {2 / 9.0, 1 / 9.0, 2 / 3.0}});
	expect_matrix(exact_forest_matrix(from_edges(3, {{0, 1}, {1, 2}})),
				  {{0.5, 0.25, 0.25}, {0, 0.5, 0.5}, {0, 0, 1}});
	expect_matrix(exact_forest_matrix(two_node()), {{0.5, 0.5}, {0, 1}});
	expect_matrix(exact_forest_matrix(Digraph(1)), {{1.0}});
	EXPECT_EQ(exact_forest_matrix(Digraph(0)).rows(), 0);
}

TEST(Oracle, FrozenForestCounts)
{
	EXPECT_EQ(enumerate_forests(cycle3()).size(), 7u);
	EXPECT_EQ(enumerate_forests(from_edges(3, {{0, 1}, {1, 2}, {2, 0}, {0, 2}})).size(), 9u);
	EXPECT_EQ(enumerate_forests(from_edges(3, {{0, 1}, {1, 2}})).size(), 4u);
	EXPECT_EQ(enumerate_forests(two_node()).size(), 2u);
	EXPECT_EQ(enumerate_forests(Digraph(4)).size(), 1u);
	EXPECT_EQ(enumerate_forests(Digraph(0)).size(), 1u);
	// Complete digraph on 3 nodes: 16 rooted spanning forests of K3.
	EXPECT_EQ(enumerate_forests(digraph_from_mask(3, 0x3F)).size(), 16u);
}

TEST(Oracle, EnumeratedForestsAreDistinctAndValid)
{
	const Digraph g = digraph_from_mask(4, 0xABC);
	const ForestSet set = enumerate_forests(g);
	std::set<std::vector<NodeId>> distinct(set.forests.begin(), set.forests.end());
	EXPECT_EQ(distinct.size(), set.size());
	for (const auto& succ : set.forests)
		check_forest(Forest::from_successors(succ), g);
}

TEST(Oracle, EnumerationLimit)
{
	const Digraph big = random_sparse_digraph(60, 3, 3, 1);
	EXPECT_THROW(enumerate_forests(big), UsageError);
	EXPECT_THROW(exact_forest_matrix(Digraph(kDenseOracleLimit + 1)), UsageError);
}

TEST(Oracle, LaplacianRowsSumToOne)
{
	const Digraph g = random_sparse_digraph(30, 1, 5, 2);
	const DenseMatrix m = regularized_laplacian(g);
	for (Eigen::Index i = 0; i < m.rows(); ++i)
		EXPECT_NEAR(m.row(i).sum(), 1.0, 1e-15);
}

// Property: enumeration and LU agree on 100 random digraphs, and the
// structural facts of the forest matrix hold.
TEST(Oracle, CrossCheckRandomGraphs)
{
	CounterRng rng(123);
	for (int k = 0; k < 100; ++k) {
		const Digraph g = random_digraph(1 + rng.below(5), rng.uniform01(), rng);
		const auto report = cross_check(g);
		std::ostringstream csv;
		report.write_csv(csv);
		EXPECT_TRUE(report.ok()) << csv.str();
		EXPECT_LE(report.max_abs_diff, 1e-10);
	}
}

TEST(Oracle, CrossCheckReportsFailures)
{
	// A tolerance below zero turns every comparison into a failure row.
	const auto report = cross_check(cycle3(), -1.0);
	EXPECT_FALSE(report.ok());
	std::ostringstream csv;
	report.write_csv(csv);
	EXPECT_EQ(csv.str().rfind("check,i,j,expected,actual\n", 0), 0u);
}

TEST(Oracle, ColumnSolverMatchesDense)
{
	const Digraph g = random_sparse_digraph(400, 1, 6, 3);
	const DenseMatrix omega = exact_forest_matrix(g);
	ForestColumnSolver solver(g);
	for (NodeId j : {0u, 17u, 399u}) {
		const Eigen::VectorXd col = solver.column(j);
		EXPECT_LE((col - omega.col(j)).cwiseAbs().maxCoeff(), 1e-10);
		EXPECT_NEAR(solver.diagonal(j), omega(j, j), 1e-10);
	}
}
