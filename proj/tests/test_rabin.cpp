#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace testing;

namespace {

RabinAutomaton make(std::vector<std::string> states, std::vector<Bundle> bundles)
{
	return RabinAutomaton(2, binary(), std::move(states), std::move(bundles));
}

RabinAutomaton full_automaton()
{
	return make({"u"}, {{0, 0, {0, 0}}, {0, 1, {0, 0}}});
}

/// Random automaton that may have dead states.
RabinAutomaton random_raw(std::mt19937& rng, unsigned max_states)
{
	std::uniform_int_distribution<unsigned> count(1, max_states);
	const unsigned n = count(rng);
	std::bernoulli_distribution keep(0.15);
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
	}
	std::vector<std::string> names;
	for (unsigned s = 0; s < n; ++s) {
		names.push_back("r" + std::to_string(s));
	}
	return make(names, {bundles.begin(), bundles.end()});
}

/// s heads a tree of depth r in which every vertex has a bundle.
bool alive(const RabinAutomaton& a, StateId s, std::size_t r)
{
	if (r == 0) {
		return true;
	}
	for (const auto& b : a.outgoing(s)) {
		if (std::all_of(b.targets.begin(), b.targets.end(),
		                [&](StateId t) { return alive(a, t, r - 1); })) {
			return true;
		}
	}
	return false;
}

bool shift_accepts_from(const RabinAutomaton& a, const Pattern& p, const Word& v, StateId s)
{
	for (const auto& b : a.outgoing(s)) {
		bool ok = b.label == p.at(v);
		for (unsigned sigma = 0; sigma < a.arity() && ok; ++sigma) {
			const auto c = v.child(sigma);
			ok = p.contains(c) ? shift_accepts_from(a, p, c, b.targets[sigma])
			                   : alive(a, b.targets[sigma], a.state_count());
		}
		if (ok) {
			return true;
		}
	}
	return false;
}

/// Pattern of the shift of a possibly non-essential automaton: the run must
/// continue below the frontier for |S| more levels, which no dead state can.
bool shift_accepts(const RabinAutomaton& a, const Pattern& p)
{
	for (StateId s = 0; s < a.state_count(); ++s) {
		if (shift_accepts_from(a, p, Word{}, s)) {
			return true;
		}
	}
	return false;
}

/// The run respects a bundle at every vertex of the pattern.
bool valid_run(const RabinAutomaton& a, const Pattern& p, const RunAssignment& run)
{
	for (const auto& [w, letter] : p.labels()) {
		if (!run.contains(w)) {
			return false;
		}
		bool found = false;
		for (const auto& b : a.outgoing(run.at(w))) {
			bool ok = b.label == letter;
			for (unsigned s = 0; s < a.arity() && ok; ++s) {
				auto it = run.find(w.child(s));
				ok = it == run.end() ? !p.is_full() : it->second == b.targets[s];
			}
			found = found || ok;
		}
		if (!found) {
			return false;
		}
	}
	return true;
}

std::set<std::map<Word, Letter>> accepted(const RabinAutomaton& a, unsigned max_height)
{
	std::set<std::map<Word, Letter>> out;
	for (const auto& p : full_patterns(max_height)) {
		if (oracle_accepts(a, p)) {
			out.insert(p.labels());
		}
	}
	return out;
}

} // namespace

TEST_CASE("automaton construction")
{
	CHECK_THROWS_AS(make({"a"}, {{0, 0, {0, 0}}, {0, 0, {0, 0}}}), SemanticError);
	CHECK_THROWS_AS(make({"a"}, {{0, 0, {0, 1}}}), SemanticError);
	CHECK_THROWS_AS(make({"a"}, {{0, 2, {0, 0}}}), SemanticError);
	CHECK_THROWS_AS(make({"a"}, {{0, 0, {0}}}), SemanticError);
	CHECK_THROWS_AS(make({"a", "a"}, {}), SemanticError);
	const auto m = load<RabinAutomaton>("mono.rabin");
	CHECK(m.find_state("s1") == StateId{1});
	CHECK_FALSE(m.find_state("s2"));
	CHECK(m.outgoing(1).size() == 2);
	CHECK(m.is_essential());
}

TEST_CASE("essentialize")
{
	CHECK(essentialize(make({"a", "b"}, {{0, 0, {1, 1}}})).state_count() == 0);
	const auto m = load<RabinAutomaton>("mono.rabin");
	CHECK(essentialize(m).bundles() == m.bundles());
	CHECK(essentialize(full_automaton()).bundles() == full_automaton().bundles());
	const auto dead = essentialize(load<RabinAutomaton>("dead_state.rabin"));
	CHECK(dead.state_names() == std::vector<std::string>{"u"});
	CHECK(dead.bundles().size() == 1);

	std::mt19937 rng(11);
	for (int i = 0; i < 200; ++i) {
		const auto a = random_raw(rng, 3);
		const auto e = essentialize(a);
		CHECK(e.is_essential());
		for (const auto& p : full_patterns(3)) {
			REQUIRE(oracle_accepts(e, p) == shift_accepts(a, p));
		}
		CHECK(accepted(e, 3) == accepted(essentialize(e), 3));
	}
}

TEST_CASE("classify")
{
	const auto m = classify(load<RabinAutomaton>("mono.rabin"));
	CHECK_FALSE(m.deterministic);
	CHECK(m.codeterministic);
	CHECK_FALSE(m.cocomplete);
	const auto u = classify(full_automaton());
	CHECK(u.deterministic);
	CHECK(u.codeterministic);
	CHECK(u.cocomplete);
	const auto i = classify(load<RabinAutomaton>("isolated.rabin"));
	CHECK_FALSE(i.deterministic);
	CHECK(i.codeterministic);
	CHECK_FALSE(i.cocomplete);
}

TEST_CASE("accepts_pattern")
{
	const auto m = load<RabinAutomaton>("mono.rabin");
	CHECK(accepts_pattern(m, term("0(1,1)")));
	CHECK_FALSE(accepts_pattern(m, term("0(0,1)")));
	for (const auto& p : full_patterns(3)) {
		CHECK(accepts_pattern(full_automaton(), p));
	}
	CHECK_THROWS_AS(accepts_pattern(load<RabinAutomaton>("dead_state.rabin"), term("0")),
	                SemanticError);

	// leaves of a partial subtree only need a bundle with their label
	const Pattern partial(2, {{Word{}, 0}, {Word{0}, 1}});
	CHECK(accepts_pattern(m, partial));
	const Pattern mixed(2, {{Word{}, 0}, {Word{0}, 1}, {Word{1}, 0}});
	CHECK_FALSE(accepts_pattern(m, mixed));

	std::mt19937 rng(12);
	for (int i = 0; i < 150; ++i) {
		const auto a = random_automaton(rng, 3);
		for (const auto& p : full_patterns(3)) {
			const auto r = accepts_pattern(a, p);
			REQUIRE(r.accepted == oracle_accepts(a, p));
			if (r.accepted) {
				REQUIRE(r.run);
				CHECK(r.run->size() == plus(p.support()).size());
				CHECK(valid_run(a, p, *r.run));
			}
		}
	}
}

TEST_CASE("extend_accepted")
{
	const auto m = load<RabinAutomaton>("mono.rabin");
	const auto leaf = term("0");
	const auto r = accepts_pattern(m, leaf);
	REQUIRE(r);
	CHECK(extend_accepted(m, leaf, *r.run, 2) == term("0(0,0)"));
	const auto one = term("1");
	CHECK(extend_accepted(full_automaton(), one, *accepts_pattern(full_automaton(), one).run, 2) ==
	      term("1(0,0)"));
	const auto p = term("1(0,0)");
	CHECK(extend_accepted(m, p, *accepts_pattern(m, p).run, 2) == p);

	std::mt19937 rng(13);
	for (int i = 0; i < 50; ++i) {
		const auto a = random_automaton(rng, 3);
		for (const auto& q : full_patterns(2)) {
			const auto acc = accepts_pattern(a, q);
			if (acc) {
				const auto e = extend_accepted(a, q, *acc.run, 3);
				CHECK(height(e) == 3);
				CHECK(e.support() == delta(3, 2));
				CHECK(restrict_to(e, q.support()) == q);
				CHECK(oracle_accepts(a, e));
			}
		}
	}
}

TEST_CASE("join")
{
	const auto m = load<RabinAutomaton>("mono.rabin");
	const auto u = full_automaton();
	const auto mu = join(m, u);
	CHECK(mu.state_count() == 2);
	CHECK(accepted(mu, 3) == accepted(m, 3));
	CHECK(join(u, u).state_count() == 1);
	CHECK(accepted(join(u, u), 3) == accepted(u, 3));
	CHECK(accepted_blocks(join(m, m), 3).size() == 16);

	std::mt19937 rng(14);
	for (int i = 0; i < 100; ++i) {
		const auto a = random_automaton(rng, 3);
		const auto b = random_automaton(rng, 3);
		const auto j = join(a, b);
		for (const auto& p : full_patterns(3)) {
			REQUIRE(oracle_accepts(j, p) == (oracle_accepts(a, p) && oracle_accepts(b, p)));
		}
	}
}

TEST_CASE("codeterminize")
{
	const auto u = full_automaton();
	CHECK(codeterminize(u).state_count() == 1);
	CHECK(codeterminize(u).bundles().size() == 2);
	const auto c = codeterminize(load<RabinAutomaton>("isolated.rabin"));
	CHECK(classify(c).codeterministic);
	CHECK_THROWS_AS(codeterminize(load<RabinAutomaton>("isolated.rabin"), Budget{1}), BudgetExceeded);

	std::mt19937 rng(15);
	for (int i = 0; i < 150; ++i) {
		const auto a = random_automaton(rng, 3);
		const auto d = codeterminize(a);
		CHECK(d.is_essential());
		CHECK(classify(d).codeterministic);
		CHECK(accepted(a, 3) == accepted(d, 3));
	}
}

TEST_CASE("merge_bisimilar")
{
	const auto twin = make({"a", "b"}, {{0, 0, {1, 1}}, {1, 0, {0, 0}}});
	CHECK(merge_bisimilar(twin).state_count() == 1);
	CHECK(merge_bisimilar(load<RabinAutomaton>("mono.rabin")).state_count() == 2);

	std::mt19937 rng(16);
	for (int i = 0; i < 150; ++i) {
		const auto a = random_automaton(rng, 3);
		const auto q = merge_bisimilar(a);
		CHECK(q.state_count() <= a.state_count());
		CHECK(q.is_essential());
		CHECK(accepted(a, 3) == accepted(q, 3));
	}
}

TEST_CASE("member_moore")
{
	const auto m = load<RabinAutomaton>("mono.rabin");
	const auto zero = MooreColoring(2, binary(), {"z"}, 0, {{0, 0}}, {0});
	const auto parity = MooreColoring(2, binary(), {"even", "odd"}, 0, {{1, 1}, {0, 0}}, {0, 1});
	const auto direction =
	    MooreColoring(2, binary(), {"root", "left", "right"}, 0, {{1, 2}, {1, 1}, {2, 2}}, {0, 0, 1});
	CHECK(member_moore(m, zero).member);
	CHECK(member_moore(m, parity).member);
	const auto d = member_moore(m, direction);
	CHECK_FALSE(d.member);
	CHECK(d.rejection_depth == 2);
	CHECK(member_moore(full_automaton(), direction).member);

	std::mt19937 rng(17);
	std::uniform_int_distribution<StateId> state(0, 2);
	std::uniform_int_distribution<Letter> letter(0, 1);
	for (int i = 0; i < 100; ++i) {
		const auto a = random_automaton(rng, 3);
		const MooreColoring c(2, binary(), {"x", "y", "z"}, state(rng),
		                      {{state(rng), state(rng)}, {state(rng), state(rng)}, {state(rng), state(rng)}},
		                      {letter(rng), letter(rng), letter(rng)});
		const auto r = member_moore(a, c);
		if (r.member) {
			for (unsigned n = 1; n <= 4; ++n) {
				CHECK(oracle_accepts(a, moore_expand(c, delta(n, 2))));
			}
		} else {
			CHECK(r.rejection_depth >= 1);
			CHECK_FALSE(oracle_accepts(a, moore_expand(c, delta(r.rejection_depth, 2))));
		}
	}
}

TEST_CASE("is_empty_shift")
{
	CHECK_FALSE(is_empty_shift(load<RabinAutomaton>("mono.rabin")));
	CHECK(is_empty_shift(make({"a", "b"}, {{0, 0, {1, 1}}})));
	CHECK_FALSE(is_empty_shift(make({"a"}, {{0, 1, {0, 0}}})));
}

TEST_CASE("with_alphabet")
{
	const auto m = load<RabinAutomaton>("mono.rabin");
	const auto wide = m.with_alphabet(Alphabet({"x", "1", "0"}));
	CHECK(wide.alphabet().size() == 3);
	const Alphabet ab({"x", "1", "0"});
	CHECK(accepts_pattern(wide, parse_term("0(1,1)", ab, 2)));
	CHECK_FALSE(accepts_pattern(wide, parse_term("0(0,1)", ab, 2)));
	CHECK_THROWS_AS(m.with_alphabet(Alphabet({"0"})), SemanticError);
}
