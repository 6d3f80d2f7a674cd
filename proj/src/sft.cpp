#include "treeshift/sft.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "treeshift/ca.hpp"

namespace treeshift {

SftDescription::SftDescription(Alphabet alphabet, unsigned arity, unsigned memory,
                               std::vector<Block> forbidden)
    : alphabet_(std::move(alphabet)), arity_(arity), memory_(memory),
      forbidden_(std::move(forbidden))
{
	if (alphabet_.empty()) {
		throw SemanticError("shift needs a nonempty alphabet");
	}
	if (arity_ == 0 || arity_ > max_arity) {
		throw SemanticError("shift arity out of range");
	}
	if (memory_ == 0) {
		throw SemanticError("shift memory must be at least 1");
	}
	for (const auto& b : forbidden_) {
		if (b.arity() != arity_ || b.size() != memory_) {
			throw SemanticError("forbidden block does not have the declared arity and memory");
		}
		for (Letter a : b.labels()) {
			if (a >= alphabet_.size()) {
				throw SemanticError("forbidden block uses a letter outside the alphabet");
			}
		}
	}
	std::sort(forbidden_.begin(), forbidden_.end());
	forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()), forbidden_.end());
}

SftDescription SftDescription::full_shift(Alphabet alphabet, unsigned arity)
{
	return SftDescription(std::move(alphabet), arity, 1, {});
}

std::vector<Block> normalize_memory(std::span<const Block> forbidden, unsigned n,
                                    std::size_t alphabet_size, const Budget& budget)
{
	std::set<Block> out;
	for (const auto& q : forbidden) {
		if (q.size() > n) {
			throw SemanticError("normalize_memory: target size smaller than a forbidden block");
		}
		const auto have = q.labels().size();
		const auto want = delta_size(q.arity(), n);
		std::vector<Letter> labels = q.labels();
		labels.resize(want, 0);
		for (;;) {
			out.emplace(q.arity(), n, labels);
			budget.check(out.size(), "normalize_memory blocks");
			std::size_t i = want;
			while (i > have && ++labels[i - 1] == alphabet_size) {
				labels[--i] = 0;
			}
			if (i == have) {
				break;
			}
		}
	}
	return {out.begin(), out.end()};
}

namespace {

/// Blocks of size n avoiding every forbidden block at every position where
/// it fits. Built level by level: a block is admissible iff its children
/// are and the window at the root is not forbidden.
std::vector<Block> locally_admissible(const SftDescription& x, unsigned n, const Budget& budget)
{
	const std::set<Block> forbidden(x.forbidden().begin(), x.forbidden().end());
	const unsigned k = x.arity();
	const auto letters = static_cast<Letter>(x.alphabet().size());
	auto root_ok = [&](const Block& b) {
		return b.size() < x.memory() || !forbidden.count(b.restrict(x.memory()));
	};

	std::vector<Block> current;
	for (Letter a = 0; a < letters; ++a) {
		Block b(k, 1, {a});
		if (root_ok(b)) {
			current.push_back(std::move(b));
		}
	}
	for (unsigned size = 2; size <= n; ++size) {
		std::size_t candidates = letters;
		for (unsigned i = 0; i < k && !current.empty(); ++i) {
			candidates *= current.size();
			budget.check(candidates, "admissible block candidates");
		}
		std::vector<Block> next;
		if (!current.empty()) {
			std::vector<std::size_t> pick(k, 0);
			std::vector<Block> children(k, current.front());
			for (;;) {
				for (unsigned s = 0; s < k; ++s) {
					children[s] = current[pick[s]];
				}
				for (Letter a = 0; a < letters; ++a) {
					auto b = Block::graft(a, children);
					if (root_ok(b)) {
						next.push_back(std::move(b));
					}
				}
				unsigned j = k;
				while (j > 0 && ++pick[j - 1] == current.size()) {
					pick[--j] = 0;
				}
				if (j == 0) {
					break;
				}
			}
		}
		current = std::move(next);
	}
	std::sort(current.begin(), current.end());
	return current;
}

} // namespace

std::vector<Block> admissible_blocks(const SftDescription& x, unsigned n, Scope scope,
                                     const Budget& budget)
{
	if (n == 0) {
		throw SemanticError("admissible_blocks: size must be at least 1");
	}
	if (scope == Scope::local) {
		return locally_admissible(x, n, budget);
	}

	// A block heads a configuration iff it extends downward forever: keep the
	// locally admissible blocks of size N whose every child window continues
	// into another kept block (greatest fixpoint).
	const unsigned big = std::max(n, x.memory());
	const auto blocks = locally_admissible(x, big, budget);
	std::map<Block, std::size_t> key_id;
	auto id_of = [&](Block b) {
		return key_id.emplace(std::move(b), key_id.size()).first->second;
	};
	std::vector<std::size_t> prefix(blocks.size());
	std::vector<std::vector<std::size_t>> wants(blocks.size());
	for (std::size_t i = 0; i < blocks.size(); ++i) {
		prefix[i] = id_of(blocks[i].restrict(big - 1));
		for (unsigned s = 0; s < x.arity(); ++s) {
			wants[i].push_back(id_of(blocks[i].child(s)));
		}
	}
	std::vector<std::size_t> supply(key_id.size(), 0);
	for (auto p : prefix) {
		++supply[p];
	}
	std::vector<char> alive(blocks.size(), 1);
	for (bool changed = true; changed;) {
		changed = false;
		for (std::size_t i = 0; i < blocks.size(); ++i) {
			if (alive[i] && std::any_of(wants[i].begin(), wants[i].end(),
			                            [&](std::size_t key) { return supply[key] == 0; })) {
				alive[i] = 0;
				--supply[prefix[i]];
				changed = true;
			}
		}
	}
	std::set<Block> out;
	for (std::size_t i = 0; i < blocks.size(); ++i) {
		if (alive[i]) {
			out.insert(blocks[i].restrict(n));
		}
	}
	return {out.begin(), out.end()};
}

RabinAutomaton canonical_presentation(const SftDescription& x, const Budget& budget)
{
	return image_automaton(CellularAutomaton::identity(x.alphabet(), x.arity()), x, budget);
}

bool sft_is_empty(const SftDescription& x, const Budget& budget)
{
	return is_empty_shift(canonical_presentation(x, budget));
}

} // namespace treeshift
