#pragma once

#include "forestmat/errors.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/graph.hpp"
#include "forestmat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace forestmat {

struct UpdateEvent
{
	enum class Kind
	{
		Insert,
		Delete
	};

	Kind kind = Kind::Insert;
	Edge edge;
	std::uint64_t sequence = 0;
};

/// Size cap for a forest list under churn.
struct PruneConfig
{
	std::uint64_t base_count = 1; // l0, the initial list weight
	double factor = 5.0;          // threshold = factor * base_count
	std::size_t max_patches = 16; // forests carrying more edits than this are compacted during prune

	std::uint64_t threshold() const
	{
		return static_cast<std::uint64_t>(std::floor(factor * static_cast<double>(base_count)));
	}

	void validate() const
	{
		if (base_count == 0)
			throw UsageError("prune base count must be positive");
		if (!(factor >= 1.0))
			throw UsageError("prune factor must be at least 1");
	}
};

/**
 * Adds edge e = (u, v) to g and keeps `list` uniform over the forests of the new graph.
 *
 * Every forest is kept. Each forest with r(u) = u and r(v) != u additionally
 * spawns the forest with e added, with the same multiplicity. Spawned forests
 * share storage with their parent. O(list size) root resolutions.
 * Throws GraphError (list untouched) if e cannot be inserted.
 */
inline void insert_update(Digraph& g, ForestList& list, Edge e)
{
	g.check_insertable(e);
	g.insert_edge(e);

	auto& forests = list.forests();
	const std::size_t existing = forests.size();
	for (std::size_t k = 0; k < existing; ++k) {
		const Forest& f = forests[k];
		if (f.resolve_root(e.from) == e.from && f.resolve_root(e.to) != e.from) {
			Forest child = f.with_edge(e);
			list.push_back(std::move(child));
		}
	}
	list.bump_epoch();
}

/**
 * Removes edge e = (u, v) from g and keeps `list` uniform over the forests of the new graph.
 *
 * Forests containing e lose it and keep their weight. Forests with r(u) = u and
 * r(v) != u keep their weight. All other forests have their multiplicity
 * doubled. The list total weight never decreases.
 * Throws GraphError (list untouched) if e is not in g.
 */
inline void delete_update(Digraph& g, ForestList& list, Edge e)
{
	g.check_deletable(e);
	for (Forest& f : list.forests()) {
		if (f.contains_edge(e)) {
			f.set_successor(e.from, kNoSuccessor);
		} else if (f.resolve_root(e.from) == e.from && f.resolve_root(e.to) != e.from) {
			// kept once
		} else {
			f.set_multiplicity(f.multiplicity() * 2);
		}
	}
	list.recompute_total_weight();
	g.delete_edge(e);
	list.bump_epoch();
}

/**
 * Uniformly keeps `cfg.threshold()` of the list's total-weight slots, without
 * replacement, when the total weight exceeds the threshold. A forest with
 * multiplicity m owns m slots. Surviving forests whose patch lists grew past
 * cfg.max_patches are compacted. Returns whether anything was pruned.
 */
inline bool prune(ForestList& list, const PruneConfig& cfg, CounterRng& rng)
{
	cfg.validate();
	const std::uint64_t keep = cfg.threshold();
	const std::uint64_t total = list.total_weight();
	if (total <= keep)
		return false;

	// Floyd's algorithm: `keep` distinct slots out of [0, total).
	std::unordered_set<std::uint64_t> chosen;
	chosen.reserve(keep * 2);
	for (std::uint64_t j = total - keep; j < total; ++j) {
		const std::uint64_t t = rng.below(j + 1);
		if (!chosen.insert(t).second)
			chosen.insert(j);
	}
	std::vector<std::uint64_t> slots(chosen.begin(), chosen.end());
	std::sort(slots.begin(), slots.end());

	auto& forests = list.forests();
	std::vector<Forest> kept;
	std::uint64_t slot_begin = 0;
	std::size_t s = 0;
	for (Forest& f : forests) {
		const std::uint64_t slot_end = slot_begin + f.multiplicity();
		std::uint64_t count = 0;
		while (s < slots.size() && slots[s] < slot_end) {
			++count;
			++s;
		}
		slot_begin = slot_end;
		if (count == 0)
			continue;
		f.set_multiplicity(count);
		if (f.patch_count() > cfg.max_patches)
			f.rebuild_roots();
		kept.push_back(std::move(f));
	}
	forests = std::move(kept);
	list.recompute_total_weight();
	return true;
}

inline void apply_update(Digraph& g, ForestList& list, const UpdateEvent& event)
{
	if (event.kind == UpdateEvent::Kind::Insert)
		insert_update(g, list, event.edge);
	else
		delete_update(g, list, event.edge);
}

/**
 * Applies events in order, pruning after any update that pushes the total
 * weight above the threshold. The first event that cannot be applied throws
 * StreamError carrying its index; earlier events stay applied.
 */
inline void apply_stream(Digraph& g, ForestList& list, std::span<const UpdateEvent> events, const PruneConfig& cfg,
						 CounterRng& rng)
{
	cfg.validate();
	for (std::size_t idx = 0; idx < events.size(); ++idx) {
		try {
			apply_update(g, list, events[idx]);
		} catch (const GraphError& err) {
			throw StreamError(idx, err.what());
		}
		if (list.total_weight() > cfg.threshold())
			prune(list, cfg, rng);
		if (list.total_weight() < cfg.base_count)
			throw InvariantViolation("forest list weight fell below its base count");
	}
}

/// Resolves node ids as written in an input file to dense ids.
template <class Resolver>
concept NodeResolver = requires(const Resolver& r, std::int64_t id) {
	{ r(id) } -> std::convertible_to<NodeId>;
};

/**
 * Parses "I u v" / "D u v" lines ('#' comments and blank lines skipped).
 * Sequence numbers are assigned in file order starting at 0.
 */
template <NodeResolver Resolver>
std::vector<UpdateEvent> parse_update_stream(std::istream& in, const Resolver& resolve)
{
	std::vector<UpdateEvent> events;
	std::vector<std::string> tokens;
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (!detail::tokenize(line, tokens))
			continue;
		std::int64_t u = 0, v = 0;
		if (tokens.size() != 3 || (tokens[0] != "I" && tokens[0] != "D") || !detail::parse_int(tokens[1], u) ||
			!detail::parse_int(tokens[2], v))
			throw ParseError(line_no, "expected \"I u v\" or \"D u v\", got \"" + line + "\"");
		UpdateEvent ev;
		ev.kind = tokens[0] == "I" ? UpdateEvent::Kind::Insert : UpdateEvent::Kind::Delete;
		try {
			ev.edge = {static_cast<NodeId>(resolve(u)), static_cast<NodeId>(resolve(v))};
		} catch (const GraphError& err) {
			throw ParseError(line_no, err.what());
		}
		ev.sequence = events.size();
		events.push_back(ev);
	}
	return events;
}

/// Stream parser for graphs whose node ids are already dense.
inline std::vector<UpdateEvent> parse_update_stream(std::istream& in, std::size_t node_count)
{
	return parse_update_stream(in, [node_count](std::int64_t id) -> NodeId {
		if (id < 0 || static_cast<std::uint64_t>(id) >= node_count)
			throw GraphError("unknown node id " + std::to_string(id));
		return static_cast<NodeId>(id);
	});
}

} // namespace forestmat
