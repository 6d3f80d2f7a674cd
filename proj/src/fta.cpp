#include "treeshift/fta.hpp"

#include <algorithm>
#include <set>

#include "indexed.hpp"
#include "subset.hpp"

namespace treeshift {

FiniteTreeAutomaton::FiniteTreeAutomaton(RabinAutomaton base, std::vector<StateId> initials,
                                         StateId final_state)
    : base_(std::move(base)), initials_(std::move(initials)), final_(final_state)
{
	const auto n = base_.state_count();
	if (final_ >= n) {
		throw SemanticError("final state out of range");
	}
	std::sort(initials_.begin(), initials_.end());
	initials_.erase(std::unique(initials_.begin(), initials_.end()), initials_.end());
	if (!initials_.empty() && initials_.back() >= n) {
		throw SemanticError("initial state out of range");
	}
	for (StateId s = 0; s < n; ++s) {
		if (s != final_ && base_.outgoing(s).empty()) {
			throw SemanticError("state '" + base_.state_names()[s] +
			                    "' is neither final nor the source of a bundle");
		}
	}
}

bool FiniteTreeAutomaton::is_initial(StateId s) const
{
	return std::binary_search(initials_.begin(), initials_.end(), s);
}

namespace {

bool is_leaf_bundle(const Bundle& b, StateId final_state)
{
	return std::all_of(b.targets.begin(), b.targets.end(),
	                   [&](StateId t) { return t == final_state; });
}

bool fits_vertex(const Bundle& b, const detail::IndexedPattern& ip, std::size_t i,
                 StateId final_state, const std::vector<std::vector<char>>& feasible)
{
	if (b.label != ip.labels[i]) {
		return false;
	}
	if (ip.is_leaf(i)) {
		return is_leaf_bundle(b, final_state);
	}
	for (std::size_t s = 0; s < b.targets.size(); ++s) {
		if (!feasible[static_cast<std::size_t>(ip.children[i][s])][b.targets[s]]) {
			return false;
		}
	}
	return true;
}

/// States that head some full-tree-pattern whose frontier is the final
/// state, grouped by the round in which they first appear (round r means
/// least height r).
std::vector<unsigned> productive_rounds(const RabinAutomaton& base, StateId final_state)
{
	const auto n = base.state_count();
	std::vector<unsigned> round(n, 0);
	for (unsigned r = 1;; ++r) {
		std::vector<StateId> fresh;
		for (const auto& b : base.bundles()) {
			if (round[b.source] != 0) {
				continue;
			}
			bool ok = r == 1 ? is_leaf_bundle(b, final_state)
			                 : std::all_of(b.targets.begin(), b.targets.end(), [&](StateId t) {
				                   return round[t] != 0 && round[t] < r;
			                   });
			if (ok) {
				fresh.push_back(b.source);
			}
		}
		if (fresh.empty()) {
			return round;
		}
		for (StateId s : fresh) {
			round[s] = r;
		}
	}
}

} // namespace

Acceptance fta_accepts(const FiniteTreeAutomaton& g, const Pattern& p)
{
	const auto& a = g.base();
	if (p.arity() != a.arity()) {
		throw SemanticError("fta_accepts: arity mismatch");
	}
	if (!p.is_full()) {
		throw SemanticError("fta_accepts: pattern is not a full-tree-pattern");
	}
	for (const auto& entry : p.labels()) {
		if (entry.second >= a.alphabet().size()) {
			throw SemanticError("fta_accepts: pattern letter outside automaton alphabet");
		}
	}
	const detail::IndexedPattern ip(p);
	const auto f = g.final_state();
	std::vector<std::vector<char>> feasible(ip.size(), std::vector<char>(a.state_count(), 0));
	for (std::size_t i = ip.size(); i-- > 0;) {
		for (const auto& b : a.bundles()) {
			if (!feasible[i][b.source] && fits_vertex(b, ip, i, f, feasible)) {
				feasible[i][b.source] = 1;
			}
		}
	}
	auto root = std::find_if(g.initials().begin(), g.initials().end(),
	                         [&](StateId s) { return feasible[0][s]; });
	if (root == g.initials().end()) {
		return {};
	}
	RunAssignment run;
	std::vector<StateId> state(ip.size());
	state[0] = *root;
	for (std::size_t i = 0; i < ip.size(); ++i) {
		run.emplace(ip.words[i], state[i]);
		for (const auto& b : a.outgoing(state[i])) {
			if (!fits_vertex(b, ip, i, f, feasible)) {
				continue;
			}
			for (unsigned s = 0; s < a.arity(); ++s) {
				if (ip.is_leaf(i)) {
					run.emplace(ip.words[i].child(s), f);
				} else {
					state[static_cast<std::size_t>(ip.children[i][s])] = b.targets[s];
				}
			}
			break;
		}
	}
	return {true, std::move(run)};
}

FiniteTreeAutomaton subset_fta(const RabinAutomaton& a, SubsetMode mode, const Budget& budget)
{
	if (!a.is_essential()) {
		throw SemanticError("subset_fta: automaton is not essential");
	}
	const bool complement_mode = mode == SubsetMode::complement;
	auto closure = detail::subset_closure(
	    a, complement_mode ? detail::EmptySubset::seed : detail::EmptySubset::drop, budget);
	std::vector<std::string> names;
	std::vector<StateId> initials;
	for (StateId i = 0; i < closure.subsets.size(); ++i) {
		names.push_back(detail::subset_name(closure.subsets[i], a));
		if (!complement_mode && !closure.subsets[i].empty()) {
			initials.push_back(i);
		}
	}
	if (complement_mode) {
		initials.push_back(static_cast<StateId>(closure.empty_index));
	}
	RabinAutomaton base(a.arity(), a.alphabet(), std::move(names), closure.bundles.to_bundles());
	return FiniteTreeAutomaton(std::move(base), std::move(initials), 0);
}

FiniteTreeAutomaton complement(const FiniteTreeAutomaton& g, const Budget& budget)
{
	const auto& a = g.base();
	if (!classify(a).codeterministic) {
		throw SemanticError("complement: automaton is not co-deterministic");
	}
	const unsigned k = a.arity();
	const auto n = a.state_count();
	std::size_t tuples = a.alphabet().size();
	for (unsigned i = 0; i < k; ++i) {
		tuples *= n + 1;
		budget.check(tuples, "complement co-completion");
	}

	std::string sink = "sink";
	while (a.find_state(sink)) {
		sink += "'";
	}
	auto names = a.state_names();
	names.push_back(sink);
	const auto sink_id = static_cast<StateId>(n);

	std::set<std::pair<std::vector<StateId>, Letter>> covered;
	for (const auto& b : a.bundles()) {
		covered.emplace(b.targets, b.label);
	}
	auto bundles = a.bundles();
	std::vector<StateId> tuple(k, 0);
	for (;;) {
		for (Letter label = 0; label < a.alphabet().size(); ++label) {
			if (!covered.count({tuple, label})) {
				bundles.push_back(Bundle{sink_id, label, tuple});
			}
		}
		unsigned j = k;
		while (j > 0 && ++tuple[j - 1] == n + 1) {
			tuple[--j] = 0;
		}
		if (j == 0) {
			break;
		}
	}

	std::vector<StateId> initials;
	for (StateId s = 0; s <= n; ++s) {
		if (!g.is_initial(s)) {
			initials.push_back(s);
		}
	}
	RabinAutomaton base(k, a.alphabet(), std::move(names), std::move(bundles));
	return FiniteTreeAutomaton(std::move(base), std::move(initials), g.final_state());
}

bool fta_is_empty(const FiniteTreeAutomaton& g, EmptinessMethod method, const Budget& budget)
{
	const auto& a = g.base();
	if (method == EmptinessMethod::fixpoint) {
		auto round = productive_rounds(a, g.final_state());
		return std::none_of(g.initials().begin(), g.initials().end(),
		                    [&](StateId s) { return round[s] != 0; });
	}

	const auto max_height = static_cast<unsigned>(a.state_count());
	auto trees = full_trees(a.arity(), max_height);
	std::size_t total = 0;
	for (const auto& t : trees) {
		std::size_t count = 1;
		for (std::size_t i = 0; i < t.size(); ++i) {
			count *= a.alphabet().size();
			budget.check(count, "naive emptiness patterns");
		}
		total += count;
		budget.check(total, "naive emptiness patterns");
	}
	for (const auto& t : trees) {
		bool found = false;
		for_each_labeling(t, a.alphabet().size(), [&](const Pattern& p) {
			if (!found && fta_accepts(g, p)) {
				found = true;
			}
		});
		if (found) {
			return false;
		}
	}
	return true;
}

std::optional<Pattern> sample_accepted(const FiniteTreeAutomaton& g)
{
	const auto& a = g.base();
	std::vector<char> initial(a.state_count(), 0);
	for (StateId s : g.initials()) {
		initial[s] = 1;
	}
	return detail::least_accepted(detail::FlatBundles::from(a), a.state_count(), initial,
	                              g.final_state());
}

namespace detail {

namespace {

constexpr std::uint32_t undefined = UINT32_MAX;

struct Choice
{
	std::size_t bundle = SIZE_MAX;
	bool leaf = false;
};

} // namespace

std::optional<Pattern> least_accepted(const FlatBundles& bundles, std::size_t state_count,
                                      const std::vector<char>& initial, StateId final_state)
{
	const unsigned k = bundles.arity();
	// rank[s]: position of the least pattern headed by s among those of the
	// previous round, equal patterns sharing a rank
	std::vector<std::uint32_t> rank(state_count, undefined);
	std::vector<std::vector<Choice>> choices;
	std::size_t defined = 0;

	// key of bundle i read as a node (or leaf) candidate, against `rank`
	std::vector<std::uint32_t> key_a(k + 2), key_b(k + 2);
	auto key = [&](std::size_t i, bool leaf, std::vector<std::uint32_t>& out) {
		out[0] = bundles.label(i);
		out[1] = leaf ? 0 : 1;
		for (unsigned j = 0; j < k; ++j) {
			out[j + 2] = leaf ? 0 : rank[bundles.targets(i)[j]];
		}
	};

	for (;;) {
		std::vector<Choice> best(state_count);
		for (std::size_t i = 0; i < bundles.size(); ++i) {
			const auto* t = bundles.targets(i);
			bool leaf = std::all_of(t, t + k, [&](StateId x) { return x == final_state; });
			if (!leaf && (choices.empty() ||
			              std::any_of(t, t + k, [&](StateId x) { return rank[x] == undefined; }))) {
				continue;
			}
			auto& slot = best[bundles.source(i)];
			if (slot.bundle != SIZE_MAX) {
				key(i, leaf, key_a);
				key(slot.bundle, slot.leaf, key_b);
				if (!(key_a < key_b)) {
					continue;
				}
			}
			slot = {i, leaf};
		}

		std::vector<StateId> order;
		for (StateId s = 0; s < state_count; ++s) {
			if (best[s].bundle != SIZE_MAX) {
				order.push_back(s);
			}
		}
		std::vector<std::vector<std::uint32_t>> keys(state_count);
		for (StateId s : order) {
			keys[s].resize(k + 2);
			key(best[s].bundle, best[s].leaf, keys[s]);
		}
		std::sort(order.begin(), order.end(), [&](StateId x, StateId y) { return keys[x] < keys[y]; });
		std::vector<std::uint32_t> next(state_count, undefined);
		std::uint32_t r = 0;
		for (std::size_t j = 0; j < order.size(); ++j) {
			if (j > 0 && keys[order[j - 1]] != keys[order[j]]) {
				++r;
			}
			next[order[j]] = r;
		}
		choices.push_back(std::move(best));

		StateId root = static_cast<StateId>(state_count);
		for (StateId s : order) {
			if (initial[s]) {
				root = s;
				break;
			}
		}
		if (root < state_count) {
			auto build = [&](auto& self, StateId s, std::size_t h) -> Pattern {
				const auto& c = choices[h][s];
				if (c.leaf) {
					return Pattern::leaf(k, bundles.label(c.bundle));
				}
				std::vector<Pattern> children;
				for (unsigned j = 0; j < k; ++j) {
					children.push_back(self(self, bundles.targets(c.bundle)[j], h - 1));
				}
				return Pattern::node(bundles.label(c.bundle), children);
			};
			return build(build, root, choices.size() - 1);
		}
		if (order.size() == defined) {
			return std::nullopt;
		}
		defined = order.size();
		rank = std::move(next);
	}
}

} // namespace detail

FiniteTreeAutomaton trim(const RabinAutomaton& base, const std::vector<StateId>& initials,
                         StateId final_state)
{
	const auto n = base.state_count();
	std::vector<char> alive(n, 1);
	for (bool changed = true; changed;) {
		changed = false;
		for (StateId s = 0; s < n; ++s) {
			if (!alive[s] || s == final_state) {
				continue;
			}
			auto out = base.outgoing(s);
			bool has = std::any_of(out.begin(), out.end(), [&](const Bundle& b) {
				return std::all_of(b.targets.begin(), b.targets.end(),
				                   [&](StateId t) { return alive[t]; });
			});
			if (!has) {
				alive[s] = 0;
				changed = true;
			}
		}
	}
	std::vector<StateId> remap(n);
	std::vector<std::string> names;
	for (StateId s = 0; s < n; ++s) {
		if (alive[s]) {
			remap[s] = static_cast<StateId>(names.size());
			names.push_back(base.state_names()[s]);
		}
	}
	std::vector<Bundle> bundles;
	for (const auto& b : base.bundles()) {
		if (!alive[b.source] ||
		    !std::all_of(b.targets.begin(), b.targets.end(), [&](StateId t) { return alive[t]; })) {
			continue;
		}
		Bundle c{remap[b.source], b.label, {}};
		for (StateId t : b.targets) {
			c.targets.push_back(remap[t]);
		}
		bundles.push_back(std::move(c));
	}
	std::vector<StateId> kept;
	for (StateId s : initials) {
		if (s < n && alive[s]) {
			kept.push_back(remap[s]);
		}
	}
	return FiniteTreeAutomaton(RabinAutomaton(base.arity(), base.alphabet(), std::move(names),
	                                          std::move(bundles)),
	                           std::move(kept), remap[final_state]);
}

} // namespace treeshift
