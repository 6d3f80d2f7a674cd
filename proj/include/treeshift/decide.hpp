#pragma once

// Fullness, equality and containment of sofic shifts, and surjectivity of
// cellular automata between them.

#include <optional>
#include <variant>

#include "treeshift/ca.hpp"
#include "treeshift/fta.hpp"
#include "treeshift/rabin.hpp"
#include "treeshift/sft.hpp"

namespace treeshift {

/// The shift map(domain).
struct ShiftImage
{
	SftDescription domain;
	CellularAutomaton map;
};

using SoficInput = std::variant<RabinAutomaton, ShiftImage>;

struct Verdict
{
	bool answer = false;
	/// Full-tree-pattern over `alphabet` separating the two sides, when answer is false.
	std::optional<Pattern> witness;
	Alphabet alphabet;
};

/// Essential automaton presenting the input shift.
RabinAutomaton presentation(const SoficInput& x, const Budget& budget = {});

unsigned arity_of(const SoficInput& x);

Verdict is_full(const RabinAutomaton& a, const Budget& budget = {});

/// Witness: a pattern of one shift that does not occur in the other.
Verdict equal_sofic(const SoficInput& x, const SoficInput& y, const Budget& budget = {});

/// Is every pattern of x a pattern of y? Witness: a pattern of x missing from y.
Verdict contained_sofic(const SoficInput& x, const SoficInput& y, const Budget& budget = {});

/// tau(X) = Y. Witness: a pattern of Y without preimage, or a pattern of
/// tau(X) outside Y.
Verdict surjective(const CellularAutomaton& tau, const SoficInput& x, const SoficInput& y,
                   const Budget& budget = {});

} // namespace treeshift
