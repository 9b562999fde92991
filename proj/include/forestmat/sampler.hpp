#pragma once

#include "forestmat/errors.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/graph.hpp"
#include "forestmat/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace forestmat {

/**
 * Wilson's loop-erased random walk on the graph augmented with an absorbing
 * sink. The sink is implicit: at node x the walk is absorbed with probability
 * 1/(1+d_x) (x becomes a root) and otherwise moves to a uniform out-neighbor.
 * Scratch buffers are reused across samples.
 */
class ForestSampler
{
public:
	/// Draws one spanning converging forest uniformly at random.
	Forest sample(const Digraph& g, CounterRng& rng)
	{
		const std::size_t n = g.node_count();
		in_tree_.assign(n, 0);
		next_hop_.assign(n, kNoSuccessor);
		std::vector<NodeId> root(n, kNoSuccessor);

		// Absorption happens with probability >= 1/(1+n) per step, so this cap is unreachable in practice.
		const std::uint64_t cap = n == 0 ? 0 : (n > (UINT64_MAX >> 32) ? UINT64_MAX : static_cast<std::uint64_t>(n) << 32);
		std::uint64_t steps = 0;

		for (NodeId start = 0; start < n; ++start) {
			if (in_tree_[start])
				continue;

			NodeId x = start;
			for (;;) {
				if (++steps > cap)
					throw InvariantViolation("random walk exceeded its iteration cap");
				const auto out = g.out_neighbors(x);
				const std::uint64_t pick = rng.below(out.size() + 1);
				if (pick == out.size()) {
					next_hop_[x] = kNoSuccessor; // absorbed into the sink
					break;
				}
				next_hop_[x] = out[pick];
				x = out[pick];
				if (in_tree_[x])
					break;
			}

			// The chain of next hops from start is the loop-erased walk.
			NodeId terminal = start;
			while (!in_tree_[terminal] && next_hop_[terminal] != kNoSuccessor)
				terminal = next_hop_[terminal];
			const NodeId tree_root = in_tree_[terminal] ? root[terminal] : terminal;

			for (NodeId y = start; !in_tree_[y]; y = next_hop_[y]) {
				in_tree_[y] = 1;
				root[y] = tree_root;
				if (next_hop_[y] == kNoSuccessor)
					break;
			}
		}
		return Forest(next_hop_, std::move(root));
	}

private:
	std::vector<std::uint8_t> in_tree_;
	std::vector<NodeId> next_hop_;
};

inline Forest sample_forest(const Digraph& g, CounterRng& rng)
{
	ForestSampler sampler;
	return sampler.sample(g, rng);
}

/**
 * Draws `count` independent uniform forests, each with multiplicity 1.
 *
 * Forest k is drawn from stream k of `seed`, so the list is identical for any
 * thread count. The graph is only read.
 */
inline ForestList sample_forest_list(const Digraph& g, std::size_t count, std::uint64_t seed, unsigned threads = 1)
{
	if (count == 0)
		throw UsageError("sample count must be positive");
	std::vector<Forest> forests(count);
	auto work = [&](std::size_t begin, std::size_t end) {
		ForestSampler sampler;
		for (std::size_t k = begin; k < end; ++k) {
			CounterRng rng(seed, k);
			forests[k] = sampler.sample(g, rng);
		}
	};

	threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
	if (threads == 1) {
		work(0, count);
	} else {
		std::vector<std::thread> pool;
		const std::size_t chunk = (count + threads - 1) / threads;
		for (unsigned t = 0; t < threads; ++t) {
			const std::size_t begin = t * chunk;
			const std::size_t end = std::min(count, begin + chunk);
			if (begin < end)
				pool.emplace_back(work, begin, end);
		}
		for (auto& th : pool)
			th.join();
	}

	ForestList list;
	list.reserve(count);
	for (Forest& f : forests)
		list.push_back(std::move(f));
	return list;
}

} // namespace forestmat
