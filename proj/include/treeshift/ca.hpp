#pragma once

// Cellular automata with memory set delta(n), given by explicit rule tables.

#include <functional>
#include <vector>

#include "treeshift/rabin.hpp"
#include "treeshift/sft.hpp"

namespace treeshift {

/// Position of a block in the rule table: labels read as a little-endian
/// number in base `radix` (level order, root least significant). Restriction
/// to delta(m) is then a reduction modulo radix^|delta(m)|.
std::size_t block_index(const Block& b, std::size_t radix);
Block block_at_index(std::size_t index, unsigned arity, unsigned size, std::size_t radix);

class CellularAutomaton
{
public:
	/// `table` is indexed by block_index over the input alphabet and must be total.
	CellularAutomaton(Alphabet input, Alphabet output, unsigned arity, unsigned memory,
	                  std::vector<Letter> table);

	static CellularAutomaton from_rule(Alphabet input, Alphabet output, unsigned arity,
	                                   unsigned memory,
	                                   const std::function<Letter(const Block&)>& rule,
	                                   const Budget& budget = {});
	static CellularAutomaton identity(Alphabet alphabet, unsigned arity);

	const Alphabet& input() const { return input_; }
	const Alphabet& output() const { return output_; }
	unsigned arity() const { return arity_; }
	unsigned memory() const { return memory_; }
	const std::vector<Letter>& table() const { return table_; }

	/// Local rule applied to a block of exactly `memory` size.
	Letter operator()(const Block& b) const;

	/// Memory 1 and every letter mapped to the same-named letter.
	bool is_identity() const;

private:
	Alphabet input_;
	Alphabet output_;
	unsigned arity_;
	unsigned memory_;
	std::vector<Letter> table_;
};

/// Block of size m + n - 1 to its image block of size m.
Block apply_to_pattern(const CellularAutomaton& tau, const Block& p);

CellularAutomaton pad_memory(const CellularAutomaton& tau, unsigned memory,
                             const Budget& budget = {});

/// outer after inner.
CellularAutomaton compose(const CellularAutomaton& outer, const CellularAutomaton& inner,
                          const Budget& budget = {});

MooreColoring apply_to_moore(const CellularAutomaton& tau, const MooreColoring& m);

/// Presentation of tau(X). Pads tau and reads X with memory n - 1, n >= 2;
/// states are the global blocks of size n - 1.
RabinAutomaton image_automaton(const CellularAutomaton& tau, const SftDescription& x,
                               const Budget& budget = {});

struct SftCover
{
	SftDescription shift;
	CellularAutomaton map;
};

/// Shift of finite type over the bundle alphabet of `a` (consecutive bundles
/// must chain through states) together with the bundle-to-label map.
SftCover sft_cover(const RabinAutomaton& a, const Budget& budget = {});

} // namespace treeshift
