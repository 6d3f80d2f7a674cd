#include "treeshift/ca.hpp"

#include <algorithm>
#include <map>

namespace treeshift {

namespace {

std::size_t table_size(std::size_t radix, unsigned arity, unsigned memory, const Budget& budget)
{
	const auto cells = delta_size(arity, memory);
	std::size_t size = 1;
	for (std::size_t i = 0; i < cells; ++i) {
		size *= radix;
		budget.check(size, "rule table entries");
	}
	return size;
}

Word word_at(unsigned level, std::size_t val, unsigned arity)
{
	std::vector<std::uint8_t> dirs(level);
	for (unsigned i = level; i > 0; --i) {
		dirs[i - 1] = static_cast<std::uint8_t>(val % arity);
		val /= arity;
	}
	return Word(std::move(dirs));
}

} // namespace

std::size_t block_index(const Block& b, std::size_t radix)
{
	std::size_t index = 0;
	for (auto it = b.labels().rbegin(); it != b.labels().rend(); ++it) {
		index = index * radix + *it;
	}
	return index;
}

Block block_at_index(std::size_t index, unsigned arity, unsigned size, std::size_t radix)
{
	std::vector<Letter> labels(delta_size(arity, size));
	for (auto& a : labels) {
		a = static_cast<Letter>(index % radix);
		index /= radix;
	}
	return Block(arity, size, std::move(labels));
}

CellularAutomaton::CellularAutomaton(Alphabet input, Alphabet output, unsigned arity,
                                     unsigned memory, std::vector<Letter> table)
    : input_(std::move(input)), output_(std::move(output)), arity_(arity), memory_(memory),
      table_(std::move(table))
{
	if (input_.empty() || output_.empty()) {
		throw SemanticError("cellular automaton needs nonempty alphabets");
	}
	if (arity_ == 0 || arity_ > max_arity) {
		throw SemanticError("cellular automaton arity out of range");
	}
	if (memory_ == 0) {
		throw SemanticError("cellular automaton memory must be at least 1");
	}
	Budget unlimited{SIZE_MAX};
	if (table_.size() != table_size(input_.size(), arity_, memory_, unlimited)) {
		throw SemanticError("rule table is not total");
	}
	if (std::any_of(table_.begin(), table_.end(), [&](Letter a) { return a >= output_.size(); })) {
		throw SemanticError("rule table produces a letter outside the output alphabet");
	}
}

CellularAutomaton CellularAutomaton::from_rule(Alphabet input, Alphabet output, unsigned arity,
                                               unsigned memory,
                                               const std::function<Letter(const Block&)>& rule,
                                               const Budget& budget)
{
	const auto size = table_size(input.size(), arity, memory, budget);
	std::vector<Letter> table(size);
	for (std::size_t i = 0; i < size; ++i) {
		table[i] = rule(block_at_index(i, arity, memory, input.size()));
	}
	return CellularAutomaton(std::move(input), std::move(output), arity, memory, std::move(table));
}

CellularAutomaton CellularAutomaton::identity(Alphabet alphabet, unsigned arity)
{
	std::vector<Letter> table(alphabet.size());
	for (Letter a = 0; a < table.size(); ++a) {
		table[a] = a;
	}
	return CellularAutomaton(alphabet, alphabet, arity, 1, std::move(table));
}

Letter CellularAutomaton::operator()(const Block& b) const
{
	if (b.arity() != arity_ || b.size() != memory_) {
		throw SemanticError("local rule applied to a block of the wrong shape");
	}
	if (std::any_of(b.labels().begin(), b.labels().end(),
	                [&](Letter a) { return a >= input_.size(); })) {
		throw SemanticError("local rule applied to a letter outside the input alphabet");
	}
	return table_[block_index(b, input_.size())];
}

bool CellularAutomaton::is_identity() const
{
	if (memory_ != 1 || input_ != output_) {
		return false;
	}
	for (Letter a = 0; a < table_.size(); ++a) {
		if (table_[a] != a) {
			return false;
		}
	}
	return true;
}

Block apply_to_pattern(const CellularAutomaton& tau, const Block& p)
{
	const unsigned n = tau.memory();
	if (p.arity() != tau.arity()) {
		throw SemanticError("apply_to_pattern: arity mismatch");
	}
	if (p.size() < n) {
		throw SemanticError("apply_to_pattern: block smaller than the memory set");
	}
	const unsigned m = p.size() - n + 1;
	std::vector<Letter> labels;
	labels.reserve(delta_size(p.arity(), m));
	std::size_t width = 1;
	for (unsigned level = 0; level < m; ++level, width *= p.arity()) {
		for (std::size_t val = 0; val < width; ++val) {
			labels.push_back(tau(p.at(word_at(level, val, p.arity()), n)));
		}
	}
	return Block(p.arity(), m, std::move(labels));
}

CellularAutomaton pad_memory(const CellularAutomaton& tau, unsigned memory, const Budget& budget)
{
	if (memory < tau.memory()) {
		throw SemanticError("pad_memory: cannot shrink the memory set");
	}
	if (memory == tau.memory()) {
		return tau;
	}
	const auto size = table_size(tau.input().size(), tau.arity(), memory, budget);
	const auto old = tau.table().size();
	std::vector<Letter> table(size);
	for (std::size_t i = 0; i < size; ++i) {
		table[i] = tau.table()[i % old];
	}
	return CellularAutomaton(tau.input(), tau.output(), tau.arity(), memory, std::move(table));
}

CellularAutomaton compose(const CellularAutomaton& outer, const CellularAutomaton& inner,
                          const Budget& budget)
{
	if (outer.arity() != inner.arity()) {
		throw SemanticError("compose: arity mismatch");
	}
	if (inner.output() != outer.input()) {
		throw SemanticError("compose: inner output alphabet differs from outer input alphabet");
	}
	const unsigned memory = outer.memory() + inner.memory() - 1;
	return CellularAutomaton::from_rule(
	    inner.input(), outer.output(), inner.arity(), memory,
	    [&](const Block& b) { return outer(apply_to_pattern(inner, b)); }, budget);
}

MooreColoring apply_to_moore(const CellularAutomaton& tau, const MooreColoring& m)
{
	if (m.arity() != tau.arity()) {
		throw SemanticError("apply_to_moore: arity mismatch");
	}
	const auto letters = letter_map(m.alphabet(), tau.input());
	std::vector<Letter> inputs;
	for (Letter a : m.outputs()) {
		inputs.push_back(letters[a]);
	}
	const auto relabeled = m.with_outputs(tau.input(), std::move(inputs));
	const auto window = delta(tau.memory(), tau.arity());
	std::vector<Letter> out;
	for (StateId q = 0; q < m.state_count(); ++q) {
		out.push_back(tau(Block::from_pattern(moore_expand(relabeled.started_at(q), window))));
	}
	return m.with_outputs(tau.output(), std::move(out));
}

RabinAutomaton image_automaton(const CellularAutomaton& tau, const SftDescription& x,
                               const Budget& budget)
{
	if (tau.arity() != x.arity()) {
		throw SemanticError("image_automaton: arity mismatch");
	}
	if (tau.input() != x.alphabet()) {
		throw SemanticError("image_automaton: rule input alphabet differs from the shift alphabet");
	}
	const unsigned n = std::max({tau.memory(), x.memory() + 1, 2u});

	// Every block q of X_n is one bundle: (q on delta(n-1); mu(q); children of q).
	const auto big = admissible_blocks(x, n, Scope::global, budget);
	std::map<Block, StateId> state;
	for (const auto& q : big) {
		state.emplace(q.restrict(n - 1), 0);
	}
	std::vector<std::string> names;
	for (auto& [block, id] : state) {
		id = static_cast<StateId>(names.size());
		names.push_back(to_term(block.to_pattern(), x.alphabet()));
	}
	std::vector<Bundle> bundles;
	bundles.reserve(big.size());
	for (const auto& q : big) {
		Bundle b{state.at(q.restrict(n - 1)), tau(q.restrict(tau.memory())), {}};
		for (unsigned s = 0; s < x.arity(); ++s) {
			auto it = state.find(q.child(s));
			if (it == state.end()) {
				throw Error("image_automaton: global blocks are not closed under shifts");
			}
			b.targets.push_back(it->second);
		}
		bundles.push_back(std::move(b));
	}
	return RabinAutomaton(x.arity(), tau.output(), std::move(names), std::move(bundles));
}

SftCover sft_cover(const RabinAutomaton& a, const Budget& budget)
{
	if (!a.is_essential() || a.state_count() == 0) {
		throw SemanticError("sft_cover: automaton must be essential and nonempty");
	}
	const unsigned k = a.arity();
	const auto& bundles = a.bundles();
	const auto m = bundles.size();

	std::vector<std::string> letters;
	std::vector<Letter> labels;
	for (std::size_t t = 0; t < m; ++t) {
		letters.push_back("t" + std::to_string(t));
		labels.push_back(bundles[t].label);
	}
	Alphabet bundle_alphabet(std::move(letters));

	std::size_t count = m;
	for (unsigned i = 0; i < k; ++i) {
		count *= m;
		budget.check(count, "sft_cover windows");
	}
	std::vector<Block> forbidden;
	std::vector<Letter> window(k + 1, 0);
	for (;;) {
		const auto& parent = bundles[window[0]];
		for (unsigned s = 0; s < k; ++s) {
			if (bundles[window[s + 1]].source != parent.targets[s]) {
				forbidden.emplace_back(k, 2, window);
				break;
			}
		}
		std::size_t j = k + 1;
		while (j > 0 && ++window[j - 1] == m) {
			window[--j] = 0;
		}
		if (j == 0) {
			break;
		}
	}
	SftDescription shift(bundle_alphabet, k, 2, std::move(forbidden));
	CellularAutomaton map(std::move(bundle_alphabet), a.alphabet(), k, 1, std::move(labels));
	return {std::move(shift), std::move(map)};
}

} // namespace treeshift
