#pragma once

// Unrestricted Rabin automata over the k-regular tree.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treeshift/core.hpp"

namespace treeshift {

/// (source; label; targets[0..k-1]).
struct Bundle
{
	StateId source;
	Letter label;
	std::vector<StateId> targets;

	auto operator<=>(const Bundle&) const = default;
};

class RabinAutomaton
{
public:
	/// Bundles are stored sorted by (source, label, targets); duplicates are rejected.
	RabinAutomaton(unsigned arity, Alphabet alphabet, std::vector<std::string> states,
	               std::vector<Bundle> bundles);

	unsigned arity() const { return arity_; }
	const Alphabet& alphabet() const { return alphabet_; }
	const std::vector<std::string>& state_names() const { return states_; }
	std::size_t state_count() const { return states_.size(); }
	const std::vector<Bundle>& bundles() const { return bundles_; }
	std::optional<StateId> find_state(const std::string& name) const;

	/// Bundles leaving s, in sorted order.
	std::span<const Bundle> outgoing(StateId s) const;

	/// Every state is the source of some bundle.
	bool is_essential() const;

	/// Same automaton over a superset alphabet.
	RabinAutomaton with_alphabet(const Alphabet& superset) const;

private:
	unsigned arity_;
	Alphabet alphabet_;
	std::vector<std::string> states_;
	std::vector<Bundle> bundles_;
	std::vector<std::size_t> first_;
};

/// Finite restriction of a run: vertex -> state.
using RunAssignment = std::map<Word, StateId>;

struct Acceptance
{
	bool accepted = false;
	std::optional<RunAssignment> run;

	explicit operator bool() const { return accepted; }
};

struct Classification
{
	bool deterministic = false;
	bool codeterministic = false;
	bool cocomplete = false;
};

struct MooreMembership
{
	bool member = false;
	/// On rejection: a depth d whose truncation to delta(d) is already rejected.
	unsigned rejection_depth = 0;
};

/// Greatest sub-automaton in which every state has an outgoing bundle.
RabinAutomaton essentialize(const RabinAutomaton& a);

/// Quotient by downward bisimulation: states with the same labels and
/// equivalent targets are merged. Every state keeps the patterns it heads.
RabinAutomaton merge_bisimilar(const RabinAutomaton& a);

Classification classify(const RabinAutomaton& a);

/// Acceptance of a pattern on an arbitrary subtree (leaves only need a bundle
/// with the right label). The witness run covers T, or T+ for full patterns.
/// Throws SemanticError on a non-essential automaton.
Acceptance accepts_pattern(const RabinAutomaton& a, const Pattern& p);

/// Extends an accepted pattern to a block of size `depth` accepted by `a`,
/// choosing the smallest bundle at every vertex outside the support.
Pattern extend_accepted(const RabinAutomaton& a, const Pattern& p, const RunAssignment& run,
                        unsigned depth);

/// Product automaton presenting the intersection. Alphabets are merged.
RabinAutomaton join(const RabinAutomaton& a, const RabinAutomaton& b, const Budget& budget = {});

/// Subset construction: co-deterministic automaton presenting the same shift.
RabinAutomaton codeterminize(const RabinAutomaton& a, const Budget& budget = {});

/// Membership of the configuration described by `m` in the shift of `a`.
MooreMembership member_moore(const RabinAutomaton& a, const MooreColoring& m);

bool is_empty_shift(const RabinAutomaton& a);

} // namespace treeshift
