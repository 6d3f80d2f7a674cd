#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treeshift/rabin.hpp"

namespace treeshift::detail {

/// Set of state ids as a bitset of any width.
class StateSet
{
public:
	StateSet() = default;
	explicit StateSet(std::size_t n) : words_((n + 63) / 64, 0) {}

	static StateSet full(std::size_t n)
	{
		StateSet s(n);
		for (std::size_t i = 0; i < n; ++i) {
			s.insert(i);
		}
		return s;
	}

	bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
	void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
	bool empty() const;
	/// Some member in [lo, hi).
	bool any_in(std::size_t lo, std::size_t hi) const;

	bool operator==(const StateSet&) const = default;
	std::size_t hash() const;

private:
	std::vector<std::uint64_t> words_;
};

/// Bundles stored as rows (source, label, targets...) of width arity + 2.
class FlatBundles
{
public:
	explicit FlatBundles(unsigned arity = 0) : arity_(arity) {}

	unsigned arity() const { return arity_; }
	std::size_t size() const { return rows_.size() / (arity_ + 2); }
	StateId source(std::size_t i) const { return rows_[i * (arity_ + 2)]; }
	Letter label(std::size_t i) const { return rows_[i * (arity_ + 2) + 1]; }
	const StateId* targets(std::size_t i) const { return &rows_[i * (arity_ + 2) + 2]; }

	void push(StateId source, Letter label, const std::vector<StateId>& targets);
	std::vector<Bundle> to_bundles() const;
	static FlatBundles from(const RabinAutomaton& a);

private:
	unsigned arity_;
	std::vector<StateId> rows_;
};

/// Subsets reachable bottom-up from the full state set under
/// pre_a(P_0, ..., P_{k-1}) = { s : (s; a; s_0..s_{k-1}) with s_i in P_i }.
struct SubsetClosure
{
	std::vector<StateSet> subsets; ///< discovery order; subsets[0] is the full set
	FlatBundles bundles;           ///< over indices into `subsets`
	std::size_t empty_index = SIZE_MAX;
};

enum class EmptySubset
{
	drop, ///< tuples whose pre-image is empty get no bundle
	seed, ///< the empty subset is a state from the start (co-complete result)
};

SubsetClosure subset_closure(const RabinAutomaton& a, EmptySubset empty, const Budget& budget);

std::string subset_name(const StateSet& set, const RabinAutomaton& a);

/// Least accepted full-tree-pattern: least height first, then term order.
/// Frontier vertices carry `final_state`; the root must be `initial`.
std::optional<Pattern> least_accepted(const FlatBundles& bundles, std::size_t state_count,
                                      const std::vector<char>& initial, StateId final_state);

} // namespace treeshift::detail
