#pragma once

// Brute-force oracles and random generators shared by the test binaries.
// The oracles follow the definitions directly and never call the library's
// decision code.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "treeshift/decide.hpp"
#include "treeshift/io.hpp"

namespace testing {

using namespace treeshift;

inline std::string fixture(const std::string& name)
{
	return std::string(FIXTURE_DIR) + "/" + name;
}

template <class T>
T load(const std::string& name)
{
	return std::get<T>(read_document(fixture(name)));
}

inline Alphabet binary()
{
	return Alphabet({"0", "1"});
}

inline Pattern term(const std::string& text, const Alphabet& alphabet = binary(), unsigned k = 2)
{
	return parse_term(text, alphabet, k);
}

/// Top-down search for a run: every vertex of the pattern gets a bundle
/// with its label, children follow the bundle's targets. Leaves need only
/// some bundle with the right label. Assumes `a` is essential.
inline bool oracle_accepts_from(const RabinAutomaton& a, const Pattern& p, const Word& v,
                                StateId s)
{
	for (const auto& b : a.bundles()) {
		if (b.source != s || b.label != p.at(v)) {
			continue;
		}
		bool ok = true;
		for (unsigned sigma = 0; sigma < a.arity() && ok; ++sigma) {
			const auto c = v.child(sigma);
			if (p.contains(c)) {
				ok = oracle_accepts_from(a, p, c, b.targets[sigma]);
			}
		}
		if (ok) {
			return true;
		}
	}
	return false;
}

inline bool oracle_accepts(const RabinAutomaton& a, const Pattern& p)
{
	for (StateId s = 0; s < a.state_count(); ++s) {
		if (oracle_accepts_from(a, p, Word{}, s)) {
			return true;
		}
	}
	return false;
}

/// Same search for a finite-tree automaton over a full pattern: the
/// children of a leaf must all be in the final state.
inline bool oracle_fta_from(const FiniteTreeAutomaton& g, const Pattern& p, const Word& v,
                            StateId s)
{
	for (const auto& b : g.base().bundles()) {
		if (b.source != s || b.label != p.at(v)) {
			continue;
		}
		bool ok = true;
		for (unsigned sigma = 0; sigma < b.targets.size() && ok; ++sigma) {
			const auto c = v.child(sigma);
			ok = p.contains(c) ? oracle_fta_from(g, p, c, b.targets[sigma])
			                   : b.targets[sigma] == g.final_state();
		}
		if (ok) {
			return true;
		}
	}
	return false;
}

inline bool oracle_fta_accepts(const FiniteTreeAutomaton& g, const Pattern& p)
{
	for (auto s : g.initials()) {
		if (oracle_fta_from(g, p, Word{}, s)) {
			return true;
		}
	}
	return false;
}

/// Every labeling of every full tree of height <= max_height.
inline std::vector<Pattern> full_patterns(unsigned max_height, std::size_t letters = 2,
                                          unsigned k = 2)
{
	std::vector<Pattern> out;
	for (const auto& t : full_trees(k, max_height)) {
		for_each_labeling(t, letters, [&](const Pattern& p) { out.push_back(p); });
	}
	return out;
}

inline std::vector<Pattern> blocks_of(unsigned size, std::size_t letters = 2, unsigned k = 2)
{
	std::vector<Pattern> out;
	for_each_labeling(delta(size, k), letters, [&](const Pattern& p) { out.push_back(p); });
	return out;
}

/// Block patterns of the given size containing no forbidden window anywhere.
inline std::set<std::map<Word, Letter>> oracle_local_blocks(const SftDescription& x, unsigned size)
{
	std::set<std::map<Word, Letter>> out;
	const auto m = x.memory();
	for (const auto& p : blocks_of(size, x.alphabet().size(), x.arity())) {
		bool ok = true;
		for (const auto& [w, a] : p.labels()) {
			if (w.length() + m > size) {
				continue;
			}
			std::map<Word, Letter> window;
			for (const auto& [u, b] : p.labels()) {
				if (u.has_prefix(w) && u.length() < w.length() + m) {
					window.emplace(u.drop_prefix(w.length()), b);
				}
			}
			for (const auto& f : x.forbidden()) {
				if (f.to_pattern().labels() == window) {
					ok = false;
				}
			}
		}
		if (ok) {
			out.insert(p.labels());
		}
	}
	return out;
}

/// Local rule given as a function of the window read at a vertex.
using WindowRule = std::function<Letter(const std::function<Letter(const Word&)>&)>;

/// Image of a block under a rule with memory n, computed vertex by vertex.
inline std::map<Word, Letter> oracle_image(const Pattern& p, unsigned n, const WindowRule& rule)
{
	std::map<Word, Letter> out;
	const auto size = height(p);
	for (const auto& [w, a] : p.labels()) {
		if (w.length() + n <= size) {
			out.emplace(w, rule([&](const Word& u) { return p.at(w + u); }));
		}
	}
	return out;
}

inline std::set<std::map<Word, Letter>> accepted_blocks(const RabinAutomaton& a, unsigned size)
{
	std::set<std::map<Word, Letter>> out;
	for (const auto& p : blocks_of(size, a.alphabet().size(), a.arity())) {
		if (oracle_accepts(a, p)) {
			out.insert(p.labels());
		}
	}
	return out;
}

/// Essential automaton with 1..max_states states over {0,1}, k = 2. Every
/// state gets at least one bundle.
inline RabinAutomaton random_automaton(std::mt19937& rng, unsigned max_states,
                                       double density = 0.2)
{
	std::uniform_int_distribution<unsigned> count(1, max_states);
	const unsigned n = count(rng);
	std::uniform_int_distribution<unsigned> state(0, n - 1);
	std::uniform_int_distribution<unsigned> letter(0, 1);
	std::bernoulli_distribution keep(density);
	std::set<Bundle> bundles;
	for (StateId s = 0; s < n; ++s) {
		for (Letter a = 0; a < 2; ++a) {
			for (StateId x = 0; x < n; ++x) {
				for (StateId y = 0; y < n; ++y) {
					if (keep(rng)) {
						bundles.insert(Bundle{s, a, {x, y}});
					}
				}
			}
		}
		bundles.insert(Bundle{s, letter(rng), {state(rng), state(rng)}});
	}
	std::vector<std::string> names;
	for (unsigned s = 0; s < n; ++s) {
		names.push_back("s" + std::to_string(s));
	}
	return RabinAutomaton(2, binary(), names, {bundles.begin(), bundles.end()});
}

/// Finite-tree automaton with 1..max_states base states; the last state is
/// final and may or may not have bundles of its own.
inline FiniteTreeAutomaton random_fta(std::mt19937& rng, unsigned max_states)
{
	std::uniform_int_distribution<unsigned> count(1, max_states);
	const unsigned n = count(rng);
	std::uniform_int_distribution<unsigned> state(0, n - 1);
	std::uniform_int_distribution<unsigned> letter(0, 1);
	std::bernoulli_distribution keep(0.15);
	std::bernoulli_distribution coin(0.5);
	const StateId f = n - 1;
	std::set<Bundle> bundles;
	for (StateId s = 0; s < n; ++s) {
		for (Letter a = 0; a < 2; ++a) {
			for (StateId x = 0; x < n; ++x) {
				for (StateId y = 0; y < n; ++y) {
					if (keep(rng)) {
						bundles.insert(Bundle{s, a, {x, y}});
					}
				}
			}
		}
		if (s != f) {
			bundles.insert(Bundle{s, letter(rng), {state(rng), state(rng)}});
		}
	}
	std::vector<std::string> names;
	std::vector<StateId> initials;
	for (unsigned s = 0; s < n; ++s) {
		names.push_back("q" + std::to_string(s));
		if (coin(rng)) {
			initials.push_back(s);
		}
	}
	return FiniteTreeAutomaton(RabinAutomaton(2, binary(), names, {bundles.begin(), bundles.end()}),
	                           initials, f);
}

} // namespace testing
