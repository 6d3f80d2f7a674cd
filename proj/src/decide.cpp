#include "treeshift/decide.hpp"

#include "subset.hpp"

namespace treeshift {

RabinAutomaton presentation(const SoficInput& x, const Budget& budget)
{
	if (const auto* a = std::get_if<RabinAutomaton>(&x)) {
		return essentialize(*a);
	}
	const auto& img = std::get<ShiftImage>(x);
	return essentialize(image_automaton(img.map, img.domain, budget));
}

unsigned arity_of(const SoficInput& x)
{
	if (const auto* a = std::get_if<RabinAutomaton>(&x)) {
		return a->arity();
	}
	return std::get<ShiftImage>(x).domain.arity();
}

Verdict is_full(const RabinAutomaton& a, const Budget& budget)
{
	const auto e = merge_bisimilar(essentialize(a));
	const auto g = subset_fta(e, SubsetMode::complement, budget);
	auto witness = sample_accepted(g);
	return {!witness, std::move(witness), e.alphabet()};
}

namespace {

enum class Sides
{
	first_only, ///< patterns of the first shift missing from the second
	both,
};

/// Runs both complement subset automata in lockstep. A pair of subsets is a
/// subset of the disjoint union of the two state sets, so the reachable part
/// of their product is the subset closure of that union.
Verdict difference(const RabinAutomaton& x, const RabinAutomaton& y, Sides sides,
                   const Budget& budget)
{
	if (x.arity() != y.arity()) {
		throw SemanticError("arity mismatch: " + std::to_string(x.arity()) + " vs " +
		                    std::to_string(y.arity()));
	}
	const auto alphabet = merge(x.alphabet(), y.alphabet());
	const auto a = merge_bisimilar(essentialize(x)).with_alphabet(alphabet);
	const auto b = merge_bisimilar(essentialize(y)).with_alphabet(alphabet);
	const auto na = static_cast<StateId>(a.state_count());

	std::vector<std::string> names;
	for (const auto& s : a.state_names()) {
		names.push_back("1:" + s);
	}
	for (const auto& s : b.state_names()) {
		names.push_back("2:" + s);
	}
	auto bundles = a.bundles();
	for (auto bundle : b.bundles()) {
		bundle.source += na;
		for (auto& t : bundle.targets) {
			t += na;
		}
		bundles.push_back(std::move(bundle));
	}
	const RabinAutomaton both(a.arity(), alphabet, std::move(names), std::move(bundles));

	const auto closure = detail::subset_closure(both, detail::EmptySubset::drop, budget);
	const auto total = both.state_count();
	std::vector<char> initial(closure.subsets.size(), 0);
	for (StateId i = 0; i < closure.subsets.size(); ++i) {
		const bool in_a = closure.subsets[i].any_in(0, na);
		const bool in_b = closure.subsets[i].any_in(na, total);
		initial[i] = in_a != in_b && (in_a || sides == Sides::both);
	}
	auto witness = detail::least_accepted(closure.bundles, closure.subsets.size(), initial, 0);
	return {!witness, std::move(witness), alphabet};
}

} // namespace

Verdict equal_sofic(const SoficInput& x, const SoficInput& y, const Budget& budget)
{
	return difference(presentation(x, budget), presentation(y, budget), Sides::both, budget);
}

Verdict contained_sofic(const SoficInput& x, const SoficInput& y, const Budget& budget)
{
	return difference(presentation(x, budget), presentation(y, budget), Sides::first_only, budget);
}

namespace {

bool is_full_shift(const SoficInput& x, const Alphabet& alphabet)
{
	const auto* img = std::get_if<ShiftImage>(&x);
	return img && img->domain.forbidden().empty() && img->map.is_identity() &&
	       img->map.output() == alphabet;
}

} // namespace

Verdict surjective(const CellularAutomaton& tau, const SoficInput& x, const SoficInput& y,
                   const Budget& budget)
{
	if (arity_of(x) != tau.arity() || arity_of(y) != tau.arity()) {
		throw SemanticError("surjective: arity mismatch");
	}

	// (Z, cover) with cover(Z) = X
	std::optional<ShiftImage> z;
	if (const auto* a = std::get_if<RabinAutomaton>(&x)) {
		if (a->alphabet() != tau.input()) {
			if (merge(tau.input(), a->alphabet()) != tau.input()) {
				throw SemanticError("surjective: shift alphabet is not contained in the rule's input alphabet");
			}
		}
		const auto e = essentialize(a->with_alphabet(tau.input()));
		if (e.state_count() != 0) {
			auto cover = sft_cover(e, budget);
			z = ShiftImage{std::move(cover.shift), std::move(cover.map)};
		}
	} else {
		const auto& img = std::get<ShiftImage>(x);
		if (img.map.output() != tau.input()) {
			throw SemanticError("surjective: shift alphabet differs from the rule's input alphabet");
		}
		z = img;
	}

	RabinAutomaton image(tau.arity(), tau.output(), {}, {});
	if (z) {
		const auto composed = z->map.is_identity() ? tau : compose(tau, z->map, budget);
		image = image_automaton(composed, z->domain, budget);
	}

	if (is_full_shift(y, tau.output()) && is_full_shift(x, tau.input())) {
		return is_full(image, budget);
	}
	const auto target = presentation(y, budget);
	auto onto = difference(target, image, Sides::first_only, budget);
	if (!onto.answer) {
		return onto;
	}
	return difference(image, target, Sides::first_only, budget);
}

} // namespace treeshift
