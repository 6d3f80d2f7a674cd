#include "treeshift/rabin.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "indexed.hpp"
#include "subset.hpp"

namespace treeshift {

RabinAutomaton::RabinAutomaton(unsigned arity, Alphabet alphabet, std::vector<std::string> states,
                               std::vector<Bundle> bundles)
    : arity_(arity), alphabet_(std::move(alphabet)), states_(std::move(states)),
      bundles_(std::move(bundles))
{
	if (arity_ == 0 || arity_ > max_arity) {
		throw SemanticError("automaton arity out of range");
	}
	if (alphabet_.empty()) {
		throw SemanticError("automaton needs a nonempty alphabet");
	}
	std::set<std::string> names;
	for (const auto& s : states_) {
		if (!names.insert(s).second) {
			throw SemanticError("duplicate state '" + s + "'");
		}
	}
	const auto n = states_.size();
	for (const auto& b : bundles_) {
		if (b.source >= n || b.label >= alphabet_.size() || b.targets.size() != arity_ ||
		    std::any_of(b.targets.begin(), b.targets.end(), [&](StateId t) { return t >= n; })) {
			throw SemanticError("bundle references unknown state or letter, or has wrong arity");
		}
	}
	std::sort(bundles_.begin(), bundles_.end());
	if (std::adjacent_find(bundles_.begin(), bundles_.end()) != bundles_.end()) {
		throw SemanticError("duplicate transition bundle");
	}
	first_.assign(n + 1, 0);
	for (const auto& b : bundles_) {
		++first_[b.source + 1];
	}
	for (std::size_t s = 0; s < n; ++s) {
		first_[s + 1] += first_[s];
	}
}

std::optional<StateId> RabinAutomaton::find_state(const std::string& name) const
{
	auto it = std::find(states_.begin(), states_.end(), name);
	if (it == states_.end()) {
		return std::nullopt;
	}
	return static_cast<StateId>(it - states_.begin());
}

std::span<const Bundle> RabinAutomaton::outgoing(StateId s) const
{
	return std::span<const Bundle>(bundles_).subspan(first_[s], first_[s + 1] - first_[s]);
}

bool RabinAutomaton::is_essential() const
{
	for (StateId s = 0; s < states_.size(); ++s) {
		if (outgoing(s).empty()) {
			return false;
		}
	}
	return true;
}

RabinAutomaton RabinAutomaton::with_alphabet(const Alphabet& superset) const
{
	if (superset == alphabet_) {
		return *this;
	}
	auto map = letter_map(alphabet_, superset);
	auto bundles = bundles_;
	for (auto& b : bundles) {
		b.label = map[b.label];
	}
	return RabinAutomaton(arity_, superset, states_, std::move(bundles));
}

RabinAutomaton essentialize(const RabinAutomaton& a)
{
	const auto n = a.state_count();
	std::vector<char> alive(n, 1);
	for (bool changed = true; changed;) {
		changed = false;
		for (StateId s = 0; s < n; ++s) {
			if (!alive[s]) {
				continue;
			}
			auto out = a.outgoing(s);
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
			names.push_back(a.state_names()[s]);
		}
	}
	std::vector<Bundle> bundles;
	for (const auto& b : a.bundles()) {
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
	return RabinAutomaton(a.arity(), a.alphabet(), std::move(names), std::move(bundles));
}

RabinAutomaton merge_bisimilar(const RabinAutomaton& a)
{
	const auto n = a.state_count();
	std::vector<StateId> cls(n, 0);
	std::size_t classes = n == 0 ? 0 : 1;
	for (;;) {
		std::map<std::pair<StateId, std::vector<StateId>>, StateId> ids;
		std::vector<StateId> next(n);
		for (StateId s = 0; s < n; ++s) {
			std::set<std::vector<StateId>> moves;
			for (const auto& b : a.outgoing(s)) {
				std::vector<StateId> m{b.label};
				for (auto t : b.targets) {
					m.push_back(cls[t]);
				}
				moves.insert(std::move(m));
			}
			std::vector<StateId> signature;
			for (const auto& m : moves) {
				signature.insert(signature.end(), m.begin(), m.end());
			}
			next[s] = ids.emplace(std::pair{cls[s], std::move(signature)}, ids.size()).first->second;
		}
		cls = std::move(next);
		if (ids.size() == classes) {
			break;
		}
		classes = ids.size();
	}

	std::vector<std::string> names(classes);
	std::vector<char> named(classes, 0);
	for (StateId s = 0; s < n; ++s) {
		if (!named[cls[s]]) {
			names[cls[s]] = a.state_names()[s];
			named[cls[s]] = 1;
		}
	}
	std::set<Bundle> bundles;
	for (const auto& b : a.bundles()) {
		Bundle c{cls[b.source], b.label, {}};
		for (auto t : b.targets) {
			c.targets.push_back(cls[t]);
		}
		bundles.insert(std::move(c));
	}
	return RabinAutomaton(a.arity(), a.alphabet(), std::move(names), {bundles.begin(), bundles.end()});
}

Classification classify(const RabinAutomaton& a)
{
	Classification c{true, true, true};
	std::set<std::pair<StateId, Letter>> by_source;
	std::set<std::pair<std::vector<StateId>, Letter>> by_targets;
	for (const auto& b : a.bundles()) {
		if (!by_source.emplace(b.source, b.label).second) {
			c.deterministic = false;
		}
		if (!by_targets.emplace(b.targets, b.label).second) {
			c.codeterministic = false;
		}
	}
	// distinct (targets, label) pairs must cover |S|^k * |A|
	std::size_t needed = a.alphabet().size();
	for (unsigned i = 0; i < a.arity(); ++i) {
		needed *= a.state_count();
		if (needed > a.bundles().size()) {
			break;
		}
	}
	c.cocomplete = by_targets.size() == needed;
	return c;
}

namespace {

void require_essential(const RabinAutomaton& a, const char* op)
{
	if (!a.is_essential()) {
		throw SemanticError(std::string(op) + ": automaton is not essential");
	}
}

void require_pattern_fits(const RabinAutomaton& a, const Pattern& p, const char* op)
{
	if (p.arity() != a.arity()) {
		throw SemanticError(std::string(op) + ": pattern arity does not match automaton");
	}
	for (const auto& entry : p.labels()) {
		if (entry.second >= a.alphabet().size()) {
			throw SemanticError(std::string(op) + ": pattern letter outside automaton alphabet");
		}
	}
}

bool bundle_fits(const Bundle& b, Letter label, const std::vector<int>& children,
                 const std::vector<std::vector<char>>& feasible)
{
	if (b.label != label) {
		return false;
	}
	for (std::size_t s = 0; s < children.size(); ++s) {
		int c = children[s];
		if (c != detail::IndexedPattern::absent &&
		    !feasible[static_cast<std::size_t>(c)][b.targets[s]]) {
			return false;
		}
	}
	return true;
}

} // namespace

Acceptance accepts_pattern(const RabinAutomaton& a, const Pattern& p)
{
	require_essential(a, "accepts_pattern");
	require_pattern_fits(a, p, "accepts_pattern");

	const detail::IndexedPattern ip(p);
	const auto n = a.state_count();
	std::vector<std::vector<char>> feasible(ip.size(), std::vector<char>(n, 0));
	for (std::size_t i = ip.size(); i-- > 0;) {
		for (const auto& b : a.bundles()) {
			if (!feasible[i][b.source] && bundle_fits(b, ip.labels[i], ip.children[i], feasible)) {
				feasible[i][b.source] = 1;
			}
		}
	}
	auto root = std::find(feasible[0].begin(), feasible[0].end(), 1);
	if (root == feasible[0].end()) {
		return {};
	}

	const bool full = p.is_full();
	RunAssignment run;
	std::vector<StateId> state(ip.size());
	state[0] = static_cast<StateId>(root - feasible[0].begin());
	for (std::size_t i = 0; i < ip.size(); ++i) {
		run.emplace(ip.words[i], state[i]);
		for (const auto& b : a.outgoing(state[i])) {
			if (!bundle_fits(b, ip.labels[i], ip.children[i], feasible)) {
				continue;
			}
			for (unsigned s = 0; s < a.arity(); ++s) {
				int c = ip.children[i][s];
				if (c != detail::IndexedPattern::absent) {
					state[static_cast<std::size_t>(c)] = b.targets[s];
				} else if (full) {
					run.emplace(ip.words[i].child(s), b.targets[s]);
				}
			}
			break;
		}
	}
	return {true, std::move(run)};
}

Pattern extend_accepted(const RabinAutomaton& a, const Pattern& p, const RunAssignment& run,
                        unsigned depth)
{
	require_essential(a, "extend_accepted");
	require_pattern_fits(a, p, "extend_accepted");
	if (depth < height(p)) {
		throw SemanticError("extend_accepted: depth smaller than pattern height");
	}
	const Tree support_plus = plus(p.support());
	for (const auto& [w, s] : run) {
		if (!support_plus.contains(w) || s >= a.state_count()) {
			throw SemanticError("extend_accepted: run assigns an invalid vertex or state");
		}
	}

	auto consistent = [&](const Bundle& b, const Word& w, const RunAssignment& known) {
		for (unsigned s = 0; s < a.arity(); ++s) {
			auto it = known.find(w.child(s));
			if (it != known.end() && it->second != b.targets[s]) {
				return false;
			}
		}
		return true;
	};

	RunAssignment states = run;
	std::map<Word, Letter> labels;
	std::vector<Word> level{Word{}};
	for (unsigned len = 0; len < depth; ++len) {
		std::vector<Word> next;
		for (const auto& w : level) {
			auto it = states.find(w);
			if (it == states.end()) {
				throw SemanticError("extend_accepted: run does not cover vertex " + w.str());
			}
			const bool inside = p.contains(w);
			const Bundle* chosen = nullptr;
			for (const auto& b : a.outgoing(it->second)) {
				if (inside && (b.label != p.at(w) || !consistent(b, w, states))) {
					continue;
				}
				chosen = &b;
				break;
			}
			if (chosen == nullptr) {
				throw SemanticError("extend_accepted: run is not a valid witness at " + w.str());
			}
			labels.emplace(w, chosen->label);
			for (unsigned s = 0; s < a.arity(); ++s) {
				states.emplace(w.child(s), chosen->targets[s]);
				next.push_back(w.child(s));
			}
		}
		level = std::move(next);
	}
	return Pattern(a.arity(), std::move(labels));
}

RabinAutomaton join(const RabinAutomaton& a, const RabinAutomaton& b, const Budget& budget)
{
	if (a.arity() != b.arity()) {
		throw SemanticError("join: arity mismatch");
	}
	const auto alphabet = merge(a.alphabet(), b.alphabet());
	const auto la = a.with_alphabet(alphabet);
	const auto lb = b.with_alphabet(alphabet);
	const auto nb = lb.state_count();
	budget.check(la.state_count() * nb, "join states");

	std::vector<std::string> names;
	names.reserve(la.state_count() * nb);
	for (const auto& x : la.state_names()) {
		for (const auto& y : lb.state_names()) {
			names.push_back("(" + x + "," + y + ")");
		}
	}
	auto pair = [nb](StateId x, StateId y) { return static_cast<StateId>(x * nb + y); };

	std::vector<std::vector<const Bundle*>> b_by_label(alphabet.size());
	for (const auto& t : lb.bundles()) {
		b_by_label[t.label].push_back(&t);
	}
	std::vector<Bundle> bundles;
	for (const auto& t1 : la.bundles()) {
		for (const Bundle* t2 : b_by_label[t1.label]) {
			Bundle t{pair(t1.source, t2->source), t1.label, {}};
			for (unsigned s = 0; s < la.arity(); ++s) {
				t.targets.push_back(pair(t1.targets[s], t2->targets[s]));
			}
			bundles.push_back(std::move(t));
		}
		budget.check(bundles.size(), "join bundles");
	}
	return RabinAutomaton(a.arity(), alphabet, std::move(names), std::move(bundles));
}

RabinAutomaton codeterminize(const RabinAutomaton& a, const Budget& budget)
{
	require_essential(a, "codeterminize");
	auto closure = detail::subset_closure(a, detail::EmptySubset::drop, budget);
	std::vector<std::string> names;
	for (const auto& set : closure.subsets) {
		names.push_back(detail::subset_name(set, a));
	}
	return essentialize(
	    RabinAutomaton(a.arity(), a.alphabet(), std::move(names), closure.bundles.to_bundles()));
}

MooreMembership member_moore(const RabinAutomaton& a, const MooreColoring& m)
{
	require_essential(a, "member_moore");
	if (m.arity() != a.arity()) {
		throw SemanticError("member_moore: arity mismatch");
	}
	const auto letters = letter_map(m.alphabet(), a.alphabet());
	const auto nq = m.state_count();
	const auto ns = a.state_count();

	// related[q][s]: the truncation of the configuration at q to delta(round)
	// is accepted from s
	std::vector<std::vector<char>> related(nq, std::vector<char>(ns, 1));
	auto start_alive = [&] {
		return std::find(related[m.start()].begin(), related[m.start()].end(), 1) !=
		       related[m.start()].end();
	};
	if (!start_alive()) {
		return {false, 1};
	}
	for (unsigned round = 1;; ++round) {
		auto next = related;
		bool changed = false;
		for (StateId q = 0; q < nq; ++q) {
			for (StateId s = 0; s < ns; ++s) {
				if (!related[q][s]) {
					continue;
				}
				auto out = a.outgoing(s);
				bool keep = std::any_of(out.begin(), out.end(), [&](const Bundle& b) {
					if (b.label != letters[m.output(q)]) {
						return false;
					}
					for (unsigned sigma = 0; sigma < a.arity(); ++sigma) {
						if (!related[m.step(q, sigma)][b.targets[sigma]]) {
							return false;
						}
					}
					return true;
				});
				if (!keep) {
					next[q][s] = 0;
					changed = true;
				}
			}
		}
		related = std::move(next);
		if (!start_alive()) {
			return {false, round};
		}
		if (!changed) {
			return {true, 0};
		}
	}
}

bool is_empty_shift(const RabinAutomaton& a)
{
	return essentialize(a).state_count() == 0;
}

} // namespace treeshift
