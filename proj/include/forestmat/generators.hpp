#pragma once

#include "forestmat/dynamic.hpp"
#include "forestmat/graph.hpp"
#include "forestmat/rng.hpp"

#include <cstdint>
#include <vector>

namespace forestmat {

/// Each node gets a uniform out-degree in [min_degree, max_degree] with distinct random targets.
inline Digraph random_sparse_digraph(std::size_t n, std::size_t min_degree, std::size_t max_degree, std::uint64_t seed)
{
	Digraph g(n);
	if (n < 2)
		return g;
	CounterRng rng(seed, 0x6772617068ULL);
	max_degree = std::min(max_degree, n - 1);
	min_degree = std::min(min_degree, max_degree);
	for (NodeId i = 0; i < n; ++i) {
		const std::size_t d = min_degree + rng.below(max_degree - min_degree + 1);
		while (g.out_degree(i) < d) {
			const auto j = static_cast<NodeId>(rng.below(n));
			if (j != i && !g.has_edge(i, j))
				g.insert_edge({i, j});
		}
	}
	return g;
}

/// Erdos-Renyi style digraph: each ordered pair (i != j) is an edge with probability p.
inline Digraph random_digraph(std::size_t n, double p, CounterRng& rng)
{
	Digraph g(n);
	for (NodeId i = 0; i < n; ++i)
		for (NodeId j = 0; j < n; ++j)
			if (i != j && rng.uniform01() < p)
				g.insert_edge({i, j});
	return g;
}

/// Digraph whose edge set is the bit pattern `mask` over the n(n-1) ordered pairs.
inline Digraph digraph_from_mask(std::size_t n, std::uint64_t mask)
{
	Digraph g(n);
	std::size_t bit = 0;
	for (NodeId i = 0; i < n; ++i)
		for (NodeId j = 0; j < n; ++j)
			if (i != j) {
				if ((mask >> bit) & 1U)
					g.insert_edge({i, j});
				++bit;
			}
	return g;
}

/**
 * Random churn valid against the evolving graph: `inserts` insertions of
 * absent edges and `deletes` deletions of present edges in shuffled order.
 * `g` is only read; the events are validated on a private copy.
 */
inline std::vector<UpdateEvent> random_churn(const Digraph& g, std::size_t inserts, std::size_t deletes,
											 std::uint64_t seed)
{
	CounterRng rng(seed, 0x636875726EULL);
	std::vector<UpdateEvent::Kind> kinds(inserts, UpdateEvent::Kind::Insert);
	kinds.insert(kinds.end(), deletes, UpdateEvent::Kind::Delete);
	for (std::size_t k = kinds.size(); k > 1; --k)
		std::swap(kinds[k - 1], kinds[rng.below(k)]);

	Digraph work = g;
	const std::size_t n = work.node_count();
	std::vector<UpdateEvent> events;
	for (auto kind : kinds) {
		UpdateEvent ev;
		ev.kind = kind;
		ev.sequence = events.size();
		if (kind == UpdateEvent::Kind::Insert) {
			if (work.edge_count() >= n * (n - 1))
				continue;
			for (;;) {
				const auto u = static_cast<NodeId>(rng.below(n));
				const auto v = static_cast<NodeId>(rng.below(n));
				if (u != v && !work.has_edge(u, v)) {
					ev.edge = {u, v};
					break;
				}
			}
			work.insert_edge(ev.edge);
		} else {
			if (work.edge_count() == 0)
				continue;
			for (;;) {
				const auto u = static_cast<NodeId>(rng.below(n));
				if (work.out_degree(u) == 0)
					continue;
				const auto out = work.out_neighbors(u);
				ev.edge = {u, out[rng.below(out.size())]};
				break;
			}
			work.delete_edge(ev.edge);
		}
		events.push_back(ev);
	}
	return events;
}

} // namespace forestmat
