#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treeshift {

class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Malformed text: a term, a document line, a missing section.
class ParseError : public Error
{
public:
	using Error::Error;
};

/// Well-formed input that violates a domain precondition (arity or alphabet
/// mismatch, non-essential automaton, out-of-range ids, ...).
class SemanticError : public Error
{
public:
	using Error::Error;
};

class BudgetExceeded : public Error
{
public:
	using Error::Error;
};

/// Caps the number of objects (states, bundles, blocks, table entries) a
/// single construction may materialize.
struct Budget
{
	std::size_t max_states = std::size_t{1} << 22;

	void check(std::size_t count, std::string_view what) const
	{
		if (count > max_states) {
			throw BudgetExceeded(std::string(what) + ": " + std::to_string(count) +
			                     " exceeds budget of " + std::to_string(max_states));
		}
	}
};

} // namespace treeshift
