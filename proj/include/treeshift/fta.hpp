#pragma once

// Finite-tree automata: Rabin automata with initial states and a final
// state, recognizing sets of full-tree-patterns.

#include <optional>
#include <vector>

#include "treeshift/rabin.hpp"

namespace treeshift {

class FiniteTreeAutomaton
{
public:
	/// Every state other than `final_state` must be the source of a bundle.
	FiniteTreeAutomaton(RabinAutomaton base, std::vector<StateId> initials, StateId final_state);

	const RabinAutomaton& base() const { return base_; }
	const std::vector<StateId>& initials() const { return initials_; }
	StateId final_state() const { return final_; }
	bool is_initial(StateId s) const;

private:
	RabinAutomaton base_;
	std::vector<StateId> initials_;
	StateId final_;
};

enum class SubsetMode
{
	language,   ///< recognizes the full-tree-patterns of the shift
	complement, ///< recognizes every other full-tree-pattern
};

enum class EmptinessMethod
{
	fixpoint,
	naive, ///< enumerate patterns of height <= |S|
};

/// Frontier vertices (T+ minus T) get the final state; the root must start
/// in an initial state.
Acceptance fta_accepts(const FiniteTreeAutomaton& g, const Pattern& p);

/// Subset automaton over the subsets reachable bottom-up from the full set
/// (the final state). In complement mode the empty subset is the single
/// initial state and the result is co-complete.
FiniteTreeAutomaton subset_fta(const RabinAutomaton& a, SubsetMode mode, const Budget& budget = {});

/// Co-completes with a fresh sink and complements the initial set.
FiniteTreeAutomaton complement(const FiniteTreeAutomaton& g, const Budget& budget = {});

bool fta_is_empty(const FiniteTreeAutomaton& g, EmptinessMethod method = EmptinessMethod::fixpoint,
                  const Budget& budget = {});

/// An accepted pattern of least height, least in term_order among those.
std::optional<Pattern> sample_accepted(const FiniteTreeAutomaton& g);

/// Drops non-final states that cannot head any accepted subpattern. Keeps the
/// recognized language.
FiniteTreeAutomaton trim(const RabinAutomaton& base, const std::vector<StateId>& initials,
                         StateId final_state);

} // namespace treeshift
