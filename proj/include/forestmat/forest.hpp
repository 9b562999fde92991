#pragma once

#include "forestmat/errors.hpp"
#include "forestmat/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace forestmat {

inline constexpr NodeId kNoSuccessor = UINT32_MAX;

namespace detail {

/// Terminal of every successor chain, in O(n). Throws InvariantViolation on a cycle.
inline std::vector<NodeId> compute_roots(const std::vector<NodeId>& successor)
{
	const std::size_t n = successor.size();
	constexpr NodeId kUnvisited = kNoSuccessor;
	constexpr NodeId kOnPath = kNoSuccessor - 1;
	std::vector<NodeId> root(n, kUnvisited);
	std::vector<NodeId> path;
	for (NodeId start = 0; start < n; ++start) {
		if (root[start] != kUnvisited)
			continue;
		path.clear();
		NodeId x = start;
		NodeId terminal = kUnvisited;
		for (;;) {
			if (root[x] == kOnPath)
				throw InvariantViolation("cycle in forest through node " + std::to_string(x));
			if (root[x] != kUnvisited) {
				terminal = root[x];
				break;
			}
			const NodeId next = successor[x];
			if (next == kNoSuccessor) {
				terminal = x;
				root[x] = x;
				break;
			}
			if (next >= n)
				throw InvariantViolation("successor of node " + std::to_string(x) + " out of range");
			root[x] = kOnPath;
			path.push_back(x);
			x = next;
		}
		for (NodeId p : path)
			root[p] = terminal;
	}
	return root;
}

} // namespace detail

/**
 * One spanning converging forest: every node has at most one successor and
 * following successors always ends at a root.
 *
 * The successor and root arrays live in storage shared between forests that
 * were derived from each other. Edits after sharing are kept as a short
 * per-forest patch list on top of the shared arrays; while patches exist the
 * forest is dirty and root lookups walk the patched chain instead of trusting
 * the cached roots. rebuild_roots() folds the patches into private storage.
 */
class Forest
{
public:
	Forest() : storage_(std::make_shared<Storage>()) {}

	/// Builds a forest from trusted successor and root arrays (sampler output).
	Forest(std::vector<NodeId> successor, std::vector<NodeId> root, std::uint64_t multiplicity = 1)
		: storage_(std::make_shared<Storage>(Storage{std::move(successor), std::move(root)})),
		  multiplicity_(multiplicity)
	{}

	/// Builds a forest from a successor array, computing the roots. Throws InvariantViolation on a cycle.
	static Forest from_successors(std::vector<NodeId> successor, std::uint64_t multiplicity = 1)
	{
		auto root = detail::compute_roots(successor);
		return Forest(std::move(successor), std::move(root), multiplicity);
	}

	std::size_t node_count() const noexcept { return storage_->successor.size(); }

	std::uint64_t multiplicity() const noexcept { return multiplicity_; }
	void set_multiplicity(std::uint64_t m) noexcept { multiplicity_ = m; }

	bool dirty() const noexcept { return !patches_.empty(); }
	std::size_t patch_count() const noexcept { return patches_.size(); }

	/// Number of forests (including this one) referencing the same base arrays.
	long storage_use_count() const noexcept { return storage_.use_count(); }

	NodeId successor(NodeId i) const
	{
		for (const Patch& p : patches_)
			if (p.node == i)
				return p.successor;
		return storage_->successor[i];
	}

	bool is_root(NodeId i) const { return successor(i) == kNoSuccessor; }

	bool contains_edge(Edge e) const { return successor(e.from) == e.to; }

	/**
	 * Root of the converging tree containing i.
	 *
	 * Clean forests answer from the root cache. Dirty forests still use the
	 * cache for base trees that no patch touches; inside touched trees the
	 * chain is walked, re-entering the cache after each patched hop.
	 */
	NodeId resolve_root(NodeId i) const
	{
		const Storage& s = *storage_;
		if (patches_.empty())
			return s.root[i];

		const std::size_t limit = 2 * s.successor.size() + 2;
		std::size_t steps = 0;
		NodeId x = i;
		for (;;) {
			const NodeId base_root = s.root[x];
			bool touched = false;
			for (const Patch& p : patches_)
				touched |= (p.base_root == base_root);
			if (!touched)
				return base_root;
			for (;;) {
				if (++steps > limit)
					throw InvariantViolation("cycle in forest while resolving root of node " + std::to_string(i));
				const Patch* patch = find_patch(x);
				if (patch != nullptr) {
					if (patch->successor == kNoSuccessor)
						return x;
					x = patch->successor;
					break;
				}
				const NodeId next = s.successor[x];
				if (next == kNoSuccessor)
					return x;
				x = next;
			}
		}
	}

	/**
	 * Sets successor[node] (kNoSuccessor makes node a root). The change is recorded
	 * as a patch; storage shared with other forests is never written.
	 */
	void set_successor(NodeId node, NodeId next)
	{
		const Storage& s = *storage_;
		for (auto it = patches_.begin(); it != patches_.end(); ++it) {
			if (it->node != node)
				continue;
			if (s.successor[node] == next)
				patches_.erase(it);
			else
				it->successor = next;
			return;
		}
		if (s.successor[node] != next)
			patches_.push_back({node, next, s.root[node]});
	}

	/// Copy of this forest with `e` added. Shares base storage; costs O(patch_count).
	Forest with_edge(Edge e) const
	{
		Forest child = *this;
		child.set_successor(e.from, e.to);
		return child;
	}

	/// Folds patches into private storage and recomputes every root. O(n).
	void rebuild_roots()
	{
		if (patches_.empty())
			return;
		auto successor = successors();
		auto root = detail::compute_roots(successor);
		storage_ = std::make_shared<Storage>(Storage{std::move(successor), std::move(root)});
		patches_.clear();
	}

	/// Materialized successor array, patches applied.
	std::vector<NodeId> successors() const
	{
		std::vector<NodeId> result = storage_->successor;
		for (const Patch& p : patches_)
			result[p.node] = p.successor;
		return result;
	}

	/// Cached roots of the base arrays. Meaningful as r(i) only when !dirty().
	const std::vector<NodeId>& cached_roots() const noexcept { return storage_->root; }

	/// Debug dump as "i -> successor" lines, roots as "i -> root". Not a stable format.
	void write_debug(std::ostream& out) const
	{
		for (NodeId i = 0; i < node_count(); ++i) {
			const NodeId next = successor(i);
			out << i << " -> ";
			if (next == kNoSuccessor)
				out << "root";
			else
				out << next;
			out << '\n';
		}
	}

private:
	struct Storage
	{
		std::vector<NodeId> successor;
		std::vector<NodeId> root;
	};

	struct Patch
	{
		NodeId node;
		NodeId successor;
		NodeId base_root; // storage root of `node`; only trees with this root can reach the patch
	};

	const Patch* find_patch(NodeId i) const
	{
		for (const Patch& p : patches_)
			if (p.node == i)
				return &p;
		return nullptr;
	}

	std::shared_ptr<const Storage> storage_;
	std::vector<Patch> patches_;
	std::uint64_t multiplicity_ = 1;
};

/// Multiset of forests. total_weight() is the sum of multiplicities.
class ForestList
{
public:
	ForestList() = default;

	std::vector<Forest>& forests() noexcept { return forests_; }
	const std::vector<Forest>& forests() const noexcept { return forests_; }

	std::size_t size() const noexcept { return forests_.size(); }
	bool empty() const noexcept { return forests_.empty(); }

	std::uint64_t total_weight() const noexcept { return total_weight_; }

	void push_back(Forest f)
	{
		total_weight_ += f.multiplicity();
		forests_.push_back(std::move(f));
	}

	void reserve(std::size_t n) { forests_.reserve(n); }

	/// Recomputes total_weight from the forests. Call after editing multiplicities in place.
	std::uint64_t recompute_total_weight() noexcept
	{
		total_weight_ = 0;
		for (const Forest& f : forests_)
			total_weight_ += f.multiplicity();
		return total_weight_;
	}

	/// Incremented by every dynamic update; lets readers detect an interleaved write.
	std::uint64_t epoch() const noexcept { return epoch_; }
	void bump_epoch() noexcept { ++epoch_; }

private:
	std::vector<Forest> forests_;
	std::uint64_t total_weight_ = 0;
	std::uint64_t epoch_ = 0;
};

/// Free-function spelling of Forest::resolve_root.
inline NodeId resolve_root(const Forest& f, NodeId i) { return f.resolve_root(i); }

inline void rebuild_roots(Forest& f) { f.rebuild_roots(); }

/**
 * Full invariant check of one forest against a graph: acyclic successor
 * chains, clean root cache coherent with the chains, every successor edge
 * present in g, multiplicity >= 1. Throws InvariantViolation.
 */
inline void check_forest(const Forest& f, const Digraph& g)
{
	if (f.node_count() != g.node_count())
		throw InvariantViolation("forest has " + std::to_string(f.node_count()) + " nodes, graph has " +
								 std::to_string(g.node_count()));
	if (f.multiplicity() == 0)
		throw InvariantViolation("forest multiplicity is zero");
	const auto successor = f.successors();
	const auto roots = detail::compute_roots(successor);
	for (NodeId i = 0; i < f.node_count(); ++i) {
		if (successor[i] != kNoSuccessor && !g.has_edge(i, successor[i]))
			throw InvariantViolation("forest edge (" + std::to_string(i) + "," + std::to_string(successor[i]) +
									 ") is not in the graph");
		if (!f.dirty() && f.cached_roots()[i] != roots[i])
			throw InvariantViolation("stale root cache at node " + std::to_string(i));
		if (f.resolve_root(i) != roots[i])
			throw InvariantViolation("resolve_root disagrees with chain walk at node " + std::to_string(i));
	}
}

inline void check_forest_list(const ForestList& list, const Digraph& g)
{
	std::uint64_t weight = 0;
	for (const Forest& f : list.forests()) {
		check_forest(f, g);
		weight += f.multiplicity();
	}
	if (weight != list.total_weight())
		throw InvariantViolation("total weight " + std::to_string(list.total_weight()) +
								 " differs from multiplicity sum " + std::to_string(weight));
}

} // namespace forestmat
