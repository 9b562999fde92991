#pragma once

#include "forestmat/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace forestmat {

using NodeId = std::uint32_t;

struct Edge
{
	NodeId from = 0;
	NodeId to = 0;

	friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Mutable simple digraph over a fixed node set [0, n).
 *
 * Out- and in-neighbor lists are kept in insertion order and use swap-remove
 * on deletion. Once a list grows past kIndexThreshold entries a per-node
 * position index is kept alongside it, so edge lookup, insertion and deletion
 * stay expected O(1) for high-degree nodes.
 */
class Digraph
{
public:
	static constexpr std::size_t kIndexThreshold = 8;

	Digraph() = default;
	explicit Digraph(std::size_t n) : out_(n), in_(n) {}

	std::size_t node_count() const noexcept { return out_.size(); }
	std::size_t edge_count() const noexcept { return m_; }

	std::span<const NodeId> out_neighbors(NodeId i) const { return out_[i].list; }
	std::span<const NodeId> in_neighbors(NodeId i) const { return in_[i].list; }
	std::size_t out_degree(NodeId i) const { return out_[i].list.size(); }
	std::size_t in_degree(NodeId i) const { return in_[i].list.size(); }

	bool contains(NodeId i) const noexcept { return i < node_count(); }

	bool has_edge(NodeId from, NodeId to) const
	{
		if (!contains(from) || !contains(to))
			return false;
		// Probe whichever side is shorter.
		const Adjacency& a = out_[from];
		const Adjacency& b = in_[to];
		return a.list.size() <= b.list.size() ? a.find(to) != kMissing : b.find(from) != kMissing;
	}
	bool has_edge(Edge e) const { return has_edge(e.from, e.to); }

	void insert_edge(Edge e)
	{
		check_insertable(e);
		out_[e.from].add(e.to);
		in_[e.to].add(e.from);
		++m_;
	}

	void delete_edge(Edge e)
	{
		check_deletable(e);
		out_[e.from].remove(e.to);
		in_[e.to].remove(e.from);
		--m_;
	}

	/// Throws GraphError unless `e` could be inserted.
	void check_insertable(Edge e) const
	{
		check_node(e.from);
		check_node(e.to);
		if (e.from == e.to)
			throw GraphError("self-loop");
		if (has_edge(e))
			throw GraphError("edge exists");
	}

	/// Throws GraphError unless `e` is present.
	void check_deletable(Edge e) const
	{
		check_node(e.from);
		check_node(e.to);
		if (!has_edge(e))
			throw GraphError("edge not found");
	}

	void check_node(NodeId i) const
	{
		if (!contains(i))
			throw GraphError("node " + std::to_string(i) + " out of range [0, " + std::to_string(node_count()) + ")");
	}

	/// All edges, grouped by source node.
	std::vector<Edge> edges() const
	{
		std::vector<Edge> result;
		result.reserve(m_);
		for (NodeId i = 0; i < node_count(); ++i)
			for (NodeId j : out_[i].list)
				result.push_back({i, j});
		return result;
	}

private:
	static constexpr std::uint32_t kMissing = UINT32_MAX;

	struct Adjacency
	{
		std::vector<NodeId> list;
		std::unordered_map<NodeId, std::uint32_t> position; // populated only above kIndexThreshold

		std::uint32_t find(NodeId v) const
		{
			if (!position.empty()) {
				auto it = position.find(v);
				return it == position.end() ? kMissing : it->second;
			}
			auto it = std::find(list.begin(), list.end(), v);
			return it == list.end() ? kMissing : static_cast<std::uint32_t>(it - list.begin());
		}

		void add(NodeId v)
		{
			list.push_back(v);
			if (!position.empty())
				position.emplace(v, static_cast<std::uint32_t>(list.size() - 1));
			else if (list.size() > kIndexThreshold)
				reindex();
		}

		void remove(NodeId v)
		{
			const std::uint32_t at = find(v);
			const NodeId last = list.back();
			list[at] = last;
			list.pop_back();
			if (!position.empty()) {
				position.erase(v);
				if (last != v)
					position[last] = at;
				if (list.size() <= kIndexThreshold)
					position.clear();
			}
		}

		void reindex()
		{
			position.clear();
			position.reserve(list.size() * 2);
			for (std::uint32_t k = 0; k < list.size(); ++k)
				position.emplace(list[k], k);
		}
	};

	std::vector<Adjacency> out_;
	std::vector<Adjacency> in_;
	std::size_t m_ = 0;
};

enum class GraphMode
{
	Directed,
	Undirected
};

/// Result of reading an edge list: the graph plus the dense id remapping.
struct LoadedGraph
{
	Digraph graph;
	std::vector<std::int64_t> original_ids;              // dense id -> id in the file
	std::unordered_map<std::int64_t, NodeId> dense_ids;  // id in the file -> dense id
	std::size_t duplicate_edges = 0;
	std::size_t self_loops = 0;

	/// Dense id for an id as written in the input file.
	NodeId node(std::int64_t original) const
	{
		auto it = dense_ids.find(original);
		if (it == dense_ids.end())
			throw GraphError("unknown node id " + std::to_string(original));
		return it->second;
	}
};

namespace detail {

/// Splits a data line into whitespace-separated tokens; returns false for blank and comment lines.
inline bool tokenize(const std::string& line, std::vector<std::string>& tokens)
{
	tokens.clear();
	std::size_t pos = line.find_first_not_of(" \t\r");
	if (pos == std::string::npos || line[pos] == '#' || line[pos] == '%')
		return false;
	while (pos != std::string::npos) {
		const std::size_t end = line.find_first_of(" \t\r", pos);
		tokens.push_back(line.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
		pos = line.find_first_not_of(" \t\r", end);
	}
	return true;
}

inline bool parse_int(const std::string& token, std::int64_t& out)
{
	try {
		std::size_t used = 0;
		out = std::stoll(token, &used);
		return used == token.size();
	} catch (const std::exception&) {
		return false;
	}
}

} // namespace detail

/**
 * Reads a SNAP/KONECT style edge list: one "u v" pair per line, lines starting
 * with '#' or '%' are comments, extra columns (weights, timestamps) are ignored.
 * Ids are remapped densely in ascending order of the ids in the file.
 * Undirected mode stores each line as two opposite arcs. Self-loops and repeated
 * arcs are dropped and counted.
 */
inline LoadedGraph load_graph(std::istream& in, GraphMode mode)
{
	std::vector<std::pair<std::int64_t, std::int64_t>> raw;
	std::vector<std::string> tokens;
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (!detail::tokenize(line, tokens))
			continue;
		std::int64_t u = 0, v = 0;
		if (tokens.size() < 2 || !detail::parse_int(tokens[0], u) || !detail::parse_int(tokens[1], v))
			throw ParseError(line_no, "expected \"u v\" integer pair, got \"" + line + "\"");
		raw.emplace_back(u, v);
	}

	LoadedGraph result;
	for (const auto& [u, v] : raw) {
		result.original_ids.push_back(u);
		result.original_ids.push_back(v);
	}
	std::sort(result.original_ids.begin(), result.original_ids.end());
	result.original_ids.erase(std::unique(result.original_ids.begin(), result.original_ids.end()),
							  result.original_ids.end());
	result.dense_ids.reserve(result.original_ids.size());
	for (NodeId k = 0; k < result.original_ids.size(); ++k)
		result.dense_ids.emplace(result.original_ids[k], k);

	result.graph = Digraph(result.original_ids.size());
	auto add = [&](NodeId a, NodeId b) {
		if (a == b) {
			++result.self_loops;
		} else if (result.graph.has_edge(a, b)) {
			++result.duplicate_edges;
		} else {
			result.graph.insert_edge({a, b});
		}
	};
	for (const auto& [u, v] : raw) {
		const NodeId a = result.dense_ids.at(u);
		const NodeId b = result.dense_ids.at(v);
		add(a, b);
		if (mode == GraphMode::Undirected && a != b)
			add(b, a);
	}
	return result;
}

} // namespace forestmat
