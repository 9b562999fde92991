#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forestmat {

/// Rejected graph mutation or lookup (duplicate edge, self-loop, missing edge, bad node id).
class GraphError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Malformed edge-list or update-stream input.
class ParseError : public std::runtime_error
{
public:
	ParseError(std::size_t line, const std::string& what)
		: std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
	{}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

/// An update stream event that could not be applied. Events before it were applied.
class StreamError : public std::runtime_error
{
public:
	StreamError(std::size_t index, const std::string& what)
		: std::runtime_error("event " + std::to_string(index) + ": " + what), index_(index)
	{}

	std::size_t index() const noexcept { return index_; }

private:
	std::size_t index_;
};

/// Broken internal invariant (e.g. a cycle in a forest). Not recoverable.
class InvariantViolation : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

/// Query or argument outside the supported domain (empty sample list, oversized oracle input, ...).
class UsageError : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

} // namespace forestmat
