#include "subset.hpp"

#include <bit>
#include <unordered_map>

namespace treeshift::detail {

bool StateSet::empty() const
{
	for (auto w : words_) {
		if (w != 0) {
			return false;
		}
	}
	return true;
}

bool StateSet::any_in(std::size_t lo, std::size_t hi) const
{
	for (std::size_t i = lo; i < hi; ++i) {
		if (contains(i)) {
			return true;
		}
	}
	return false;
}

std::size_t StateSet::hash() const
{
	std::size_t h = words_.size();
	for (auto w : words_) {
		h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
	}
	return h;
}

void FlatBundles::push(StateId source, Letter label, const std::vector<StateId>& targets)
{
	rows_.push_back(source);
	rows_.push_back(label);
	rows_.insert(rows_.end(), targets.begin(), targets.end());
}

std::vector<Bundle> FlatBundles::to_bundles() const
{
	std::vector<Bundle> out;
	out.reserve(size());
	for (std::size_t i = 0; i < size(); ++i) {
		out.push_back(Bundle{source(i), label(i), {targets(i), targets(i) + arity_}});
	}
	return out;
}

FlatBundles FlatBundles::from(const RabinAutomaton& a)
{
	FlatBundles out(a.arity());
	for (const auto& b : a.bundles()) {
		out.push(b.source, b.label, b.targets);
	}
	return out;
}

namespace {

struct SetHash
{
	std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

/// Bundles of one label in source order. rows[s] holds, per known subset, a
/// bit per bundle: is target s inside the subset?
struct LabelIndex
{
	std::vector<const Bundle*> bundles;
	std::vector<std::size_t> run_end; ///< end of the run of bundles sharing a source
	std::size_t words = 0;
	std::vector<std::vector<std::uint64_t>> rows;

	void add_subset(const StateSet& m)
	{
		for (std::size_t s = 0; s < rows.size(); ++s) {
			auto& row = rows[s];
			const auto base = row.size();
			row.resize(base + words, 0);
			for (std::size_t j = 0; j < bundles.size(); ++j) {
				if (m.contains(bundles[j]->targets[s])) {
					row[base + j / 64] |= std::uint64_t{1} << (j % 64);
				}
			}
		}
	}

	std::uint64_t word(const std::vector<StateId>& tuple, std::size_t w) const
	{
		std::uint64_t bits = ~std::uint64_t{0};
		for (std::size_t s = 0; s < rows.size() && bits; ++s) {
			bits &= rows[s][tuple[s] * words + w];
		}
		return bits;
	}

	/// Sources of the bundles whose targets all lie in the tuple's subsets.
	void pre(const std::vector<StateId>& tuple, StateSet& out) const
	{
		std::size_t j = 0;
		while (j < bundles.size()) {
			const auto w = j / 64;
			const auto bits = word(tuple, w) & (~std::uint64_t{0} << (j % 64));
			if (bits == 0) {
				j = (w + 1) * 64;
				continue;
			}
			const auto hit = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
			out.insert(bundles[hit]->source);
			j = run_end[hit];
		}
	}
};

} // namespace

SubsetClosure subset_closure(const RabinAutomaton& a, EmptySubset empty, const Budget& budget)
{
	const auto n = a.state_count();
	const unsigned k = a.arity();

	std::vector<LabelIndex> by_label(a.alphabet().size());
	for (const auto& b : a.bundles()) {
		by_label[b.label].bundles.push_back(&b);
	}
	for (auto& li : by_label) {
		li.words = (li.bundles.size() + 63) / 64;
		li.rows.resize(k);
		li.run_end.resize(li.bundles.size());
		for (std::size_t j = li.bundles.size(); j > 0; --j) {
			const bool last = j == li.bundles.size() ||
			                  li.bundles[j]->source != li.bundles[j - 1]->source;
			li.run_end[j - 1] = last ? j : li.run_end[j];
		}
	}

	SubsetClosure out;
	out.bundles = FlatBundles(k);
	std::unordered_map<StateSet, StateId, SetHash> index;
	auto intern = [&](const StateSet& m) -> StateId {
		auto [it, fresh] = index.emplace(m, static_cast<StateId>(out.subsets.size()));
		if (fresh) {
			out.subsets.push_back(m);
			budget.check(out.subsets.size(), "subset construction states");
			for (auto& li : by_label) {
				li.add_subset(m);
			}
		}
		return it->second;
	};
	intern(StateSet::full(n));
	if (empty == EmptySubset::seed) {
		out.empty_index = intern(StateSet(n));
	}

	// Semi-naive rounds: each tuple is visited once, in the first round where
	// all of its entries are known.
	std::size_t done = 0;
	std::vector<StateId> tuple(k);
	while (done < out.subsets.size()) {
		const std::size_t count = out.subsets.size();
		for (unsigned fresh_pos = 0; fresh_pos < k; ++fresh_pos) {
			// positions < fresh_pos range over old subsets, fresh_pos over new ones,
			// later positions over everything known
			auto lo = [&](unsigned j) { return j == fresh_pos ? done : 0; };
			auto hi = [&](unsigned j) { return j < fresh_pos ? done : count; };
			bool empty_range = false;
			for (unsigned j = 0; j < k; ++j) {
				if (lo(j) >= hi(j)) {
					empty_range = true;
				}
				tuple[j] = static_cast<StateId>(lo(j));
			}
			if (empty_range) {
				continue;
			}
			for (;;) {
				for (Letter label = 0; label < by_label.size(); ++label) {
					StateSet pre(n);
					by_label[label].pre(tuple, pre);
					if (pre.empty() && empty == EmptySubset::drop) {
						continue;
					}
					out.bundles.push(intern(pre), label, tuple);
					budget.check(out.bundles.size(), "subset construction bundles");
				}
				unsigned j = k;
				while (j > 0) {
					--j;
					if (++tuple[j] < hi(j)) {
						break;
					}
					tuple[j] = static_cast<StateId>(lo(j));
					if (j == 0) {
						j = k + 1;
						break;
					}
				}
				if (j == k + 1) {
					break;
				}
			}
		}
		done = count;
	}
	return out;
}

std::string subset_name(const StateSet& set, const RabinAutomaton& a)
{
	std::string name = "{";
	bool first = true;
	for (std::size_t s = 0; s < a.state_count(); ++s) {
		if (set.contains(s)) {
			if (!first) {
				name += ',';
			}
			name += a.state_names()[s];
			first = false;
		}
	}
	return name + "}";
}

} // namespace treeshift::detail
