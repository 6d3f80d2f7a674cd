#pragma once

// Shifts of finite type given by forbidden blocks of a common size.

#include <span>
#include <vector>

#include "treeshift/rabin.hpp"

namespace treeshift {

class SftDescription
{
public:
	/// Forbidden blocks must all have size `memory`; they are stored sorted
	/// and without repetition.
	SftDescription(Alphabet alphabet, unsigned arity, unsigned memory,
	               std::vector<Block> forbidden);

	const Alphabet& alphabet() const { return alphabet_; }
	unsigned arity() const { return arity_; }
	unsigned memory() const { return memory_; }
	const std::vector<Block>& forbidden() const { return forbidden_; }

	static SftDescription full_shift(Alphabet alphabet, unsigned arity);

private:
	Alphabet alphabet_;
	unsigned arity_;
	unsigned memory_;
	std::vector<Block> forbidden_;
};

enum class Scope
{
	local,  ///< avoids every forbidden block that fits inside delta(n)
	global, ///< restriction of some configuration of the shift
};

/// Replaces every forbidden block by all of its extensions to size n.
std::vector<Block> normalize_memory(std::span<const Block> forbidden, unsigned n,
                                    std::size_t alphabet_size, const Budget& budget = {});

/// Sorted blocks of size n admissible at the given scope.
std::vector<Block> admissible_blocks(const SftDescription& x, unsigned n, Scope scope,
                                     const Budget& budget = {});

/// Presentation whose states are the global blocks of size memory.
RabinAutomaton canonical_presentation(const SftDescription& x, const Budget& budget = {});

bool sft_is_empty(const SftDescription& x, const Budget& budget = {});

} // namespace treeshift
