#pragma once

#include "forestmat/errors.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace forestmat {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDenseOracleLimit = 2000;
inline constexpr double kEnumerationLimit = 1e7;

/// I + L with L = D - A, D the out-degree diagonal.
inline DenseMatrix regularized_laplacian(const Digraph& g)
{
	const auto n = static_cast<Eigen::Index>(g.node_count());
	DenseMatrix m = DenseMatrix::Identity(n, n);
	for (NodeId i = 0; i < g.node_count(); ++i) {
		m(i, i) += static_cast<double>(g.out_degree(i));
		for (NodeId j : g.out_neighbors(i))
			m(i, j) -= 1.0;
	}
	return m;
}

/// Forest matrix (I + L)^-1 by LU with partial pivoting. Limited to n <= 2000.
inline DenseMatrix exact_forest_matrix(const Digraph& g)
{
	if (g.node_count() > kDenseOracleLimit)
		throw UsageError("dense forest matrix limited to " + std::to_string(kDenseOracleLimit) + " nodes");
	const auto n = static_cast<Eigen::Index>(g.node_count());
	if (n == 0)
		return DenseMatrix(0, 0);
	Eigen::PartialPivLU<DenseMatrix> lu(regularized_laplacian(g));
	DenseMatrix omega = lu.solve(DenseMatrix::Identity(n, n));
	if (!omega.allFinite())
		throw InvariantViolation("LU factorization of I + L produced non-finite entries");
	return omega;
}

/**
 * Column j of the forest matrix for graphs too large for the dense solver:
 * solves (I + L) x = e_j with BiCGSTAB to a relative residual of `tolerance`.
 * I + L is strictly row diagonally dominant, so the solve is well conditioned.
 */
class ForestColumnSolver
{
public:
	explicit ForestColumnSolver(const Digraph& g, double tolerance = 1e-13)
	{
		const auto n = static_cast<Eigen::Index>(g.node_count());
		std::vector<Eigen::Triplet<double>> entries;
		entries.reserve(g.node_count() + g.edge_count());
		for (NodeId i = 0; i < g.node_count(); ++i) {
			entries.emplace_back(i, i, 1.0 + static_cast<double>(g.out_degree(i)));
			for (NodeId j : g.out_neighbors(i))
				entries.emplace_back(i, j, -1.0);
		}
		matrix_.resize(n, n);
		matrix_.setFromTriplets(entries.begin(), entries.end());
		matrix_.makeCompressed();
		solver_.setTolerance(tolerance);
		solver_.setMaxIterations(10000);
		solver_.compute(matrix_);
	}

	Eigen::VectorXd column(NodeId j)
	{
		Eigen::VectorXd rhs = Eigen::VectorXd::Zero(matrix_.rows());
		rhs(j) = 1.0;
		Eigen::VectorXd x = solver_.solve(rhs);
		if (solver_.info() != Eigen::Success)
			throw InvariantViolation("iterative forest-matrix solve did not converge");
		return x;
	}

	double diagonal(NodeId i) { return column(i)(i); }

private:
	Eigen::SparseMatrix<double, Eigen::RowMajor> matrix_;
	Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>> solver_;
};

/// Every spanning converging forest of a small graph, with root-count tallies.
struct ForestSet
{
	std::size_t node_count = 0;
	std::vector<std::vector<NodeId>> forests; // successor arrays, kNoSuccessor for roots
	std::vector<std::uint64_t> root_counts;  // |F_ij| at [i * n + j]

	std::size_t size() const noexcept { return forests.size(); }
	std::uint64_t count(NodeId i, NodeId j) const { return root_counts[i * node_count + j]; }
	double ratio(NodeId i, NodeId j) const
	{
		return static_cast<double>(count(i, j)) / static_cast<double>(forests.size());
	}
};

/// Product of (1 + d_i): the number of root-or-out-edge assignments.
inline double enumeration_space(const Digraph& g)
{
	double space = 1.0;
	for (NodeId i = 0; i < g.node_count(); ++i)
		space *= 1.0 + static_cast<double>(g.out_degree(i));
	return space;
}

/**
 * Brute-force enumeration: each node either is a root or picks one out-edge;
 * assignments that close a directed cycle are cut as soon as the cycle forms.
 * Forests come out in lexicographic order of successor arrays (root first).
 */
inline ForestSet enumerate_forests(const Digraph& g)
{
	if (enumeration_space(g) > kEnumerationLimit)
		throw UsageError("graph too large to enumerate");

	const std::size_t n = g.node_count();
	ForestSet set;
	set.node_count = n;
	set.root_counts.assign(n * n, 0);

	std::vector<std::vector<NodeId>> choices(n);
	for (NodeId i = 0; i < n; ++i) {
		choices[i].push_back(kNoSuccessor);
		auto out = g.out_neighbors(i);
		choices[i].insert(choices[i].end(), out.begin(), out.end());
		std::sort(choices[i].begin() + 1, choices[i].end());
	}

	std::vector<NodeId> successor(n, kNoSuccessor);
	// Nodes >= depth are unassigned; a chain from the node being assigned can only
	// return to it through assigned nodes.
	auto closes_cycle = [&](NodeId node, NodeId next) {
		NodeId x = next;
		while (x != kNoSuccessor && x != node && x < node)
			x = successor[x];
		return x == node;
	};

	auto record = [&]() {
		auto roots = detail::compute_roots(successor);
		for (NodeId i = 0; i < n; ++i)
			++set.root_counts[i * n + roots[i]];
		set.forests.push_back(successor);
	};

	// Iterative odometer over per-node choices.
	std::vector<std::size_t> pick(n, 0);
	if (n == 0) {
		set.forests.emplace_back();
		return set;
	}
	std::size_t depth = 0;
	while (true) {
		if (depth == n) {
			record();
			--depth;
			++pick[depth];
			continue;
		}
		if (pick[depth] >= choices[depth].size()) {
			pick[depth] = 0;
			successor[depth] = kNoSuccessor;
			if (depth == 0)
				break;
			--depth;
			++pick[depth];
			continue;
		}
		const NodeId next = choices[depth][pick[depth]];
		if (next != kNoSuccessor && closes_cycle(static_cast<NodeId>(depth), next)) {
			++pick[depth];
			continue;
		}
		successor[depth] = next;
		++depth;
	}
	return set;
}

/// Outcome of comparing the dense solve against forest enumeration.
struct CrossCheckReport
{
	struct Row
	{
		std::string check;
		NodeId i = 0;
		NodeId j = 0;
		double expected = 0.0;
		double actual = 0.0;
	};

	std::size_t node_count = 0;
	std::size_t forest_count = 0;
	double max_abs_diff = 0.0;
	std::vector<Row> failures;

	bool ok() const noexcept { return failures.empty(); }

	void write_csv(std::ostream& out) const
	{
		out << "check,i,j,expected,actual\n";
		out.precision(17);
		for (const Row& r : failures)
			out << r.check << ',' << r.i << ',' << r.j << ',' << r.expected << ',' << r.actual << '\n';
	}
};

/**
 * Checks |F_ij|/|F| against (I + L)^-1 entrywise within `tolerance`, plus the
 * structural facts of the forest matrix: 0 <= omega_ji < omega_ii <= 1 for
 * i != j, 1/(1+d_i) <= omega_ii <= 2/(2+d_i), and unit row sums.
 */
inline CrossCheckReport cross_check(const Digraph& g, double tolerance = 1e-10)
{
	const std::size_t n = g.node_count();
	const DenseMatrix omega = exact_forest_matrix(g);
	const ForestSet set = enumerate_forests(g);

	CrossCheckReport report;
	report.node_count = n;
	report.forest_count = set.size();
	auto fail = [&](const char* what, NodeId i, NodeId j, double expected, double actual) {
		report.failures.push_back({what, i, j, expected, actual});
	};

	for (NodeId i = 0; i < n; ++i) {
		double row_sum = 0.0;
		for (NodeId j = 0; j < n; ++j) {
			const double w = omega(i, j);
			row_sum += w;
			const double diff = std::abs(set.ratio(i, j) - w);
			report.max_abs_diff = std::max(report.max_abs_diff, diff);
			if (diff > tolerance)
				fail("forest_ratio", i, j, set.ratio(i, j), w);
			if (i != j) {
				if (w < -tolerance)
					fail("nonnegative", i, j, 0.0, w);
				if (!(w < omega(j, j)))
					fail("column_diagonal_dominance", i, j, omega(j, j), w);
			}
		}
		if (std::abs(row_sum - 1.0) > tolerance)
			fail("row_sum", i, i, 1.0, row_sum);
		const double d = static_cast<double>(g.out_degree(i));
		const double wii = omega(i, i);
		if (wii > 1.0 + tolerance)
			fail("diagonal_at_most_one", i, i, 1.0, wii);
		if (wii < 1.0 / (1.0 + d) - tolerance)
			fail("diagonal_lower_bound", i, i, 1.0 / (1.0 + d), wii);
		if (wii > 2.0 / (2.0 + d) + tolerance)
			fail("diagonal_upper_bound", i, i, 2.0 / (2.0 + d), wii);
	}
	return report;
}

} // namespace forestmat
