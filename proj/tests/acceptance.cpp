// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                      run every criterion
//   acceptance --write-golden DIR   regenerate the CLI golden files

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_cases.hpp"
#include "support.hpp"

using namespace testing;
using namespace treeshift;

namespace {

struct Failure
{
	std::string what;
};

void expect(bool ok, const std::string& what)
{
	if (!ok) {
		throw Failure{what};
	}
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void()>& body)
{
	std::string verdict = "PASS";
	std::string detail;
	try {
		body();
	} catch (const Failure& f) {
		verdict = "FAIL";
		detail = f.what;
	} catch (const std::exception& e) {
		verdict = "FAIL";
		detail = std::string("exception: ") + e.what();
	}
	if (verdict == "FAIL") {
		++failures;
	}
	std::cout << verdict << " criterion " << id << ": " << title;
	if (!detail.empty()) {
		std::cout << " (" << detail << ")";
	}
	std::cout << std::endl;
}

std::string show(const Pattern& p, const Alphabet& a = binary())
{
	return to_term(p, a);
}

/// The witness must separate the two automata.
void expect_separates(const Verdict& v, const RabinAutomaton& x, const RabinAutomaton& y)
{
	expect(v.witness.has_value(), "negative verdict without witness");
	expect(oracle_accepts(x, *v.witness) != oracle_accepts(y, *v.witness),
	       "witness " + show(*v.witness, v.alphabet) + " does not separate");
}

std::vector<RabinAutomaton> corpus()
{
	std::mt19937 rng(20240601);
	std::vector<RabinAutomaton> out;
	for (int i = 0; i < 200; ++i) {
		out.push_back(random_automaton(rng, 3));
	}
	return out;
}

const std::vector<Pattern>& small_patterns()
{
	static const auto patterns = full_patterns(3);
	return patterns;
}

using Rule = std::pair<std::string, std::pair<WindowRule, std::string>>;

std::vector<Rule> rules()
{
	return {
	    {"identity", {[](const auto& at) { return at(Word{}); }, "id.ca"}},
	    {"constant-0", {[](const auto&) { return Letter{0}; }, "zero.ca"}},
	    {"xor", {[](const auto& at) { return at(Word{0}) ^ at(Word{1}); }, "xor.ca"}},
	};
}

/// Some block of size height(p) + n - 1 maps onto p.
bool has_preimage(const Pattern& p, unsigned n, const WindowRule& rule)
{
	for (const auto& q : blocks_of(height(p) + n - 1)) {
		const auto img = oracle_image(q, n, rule);
		bool match = true;
		for (const auto& [w, a] : p.labels()) {
			auto it = img.find(w);
			if (it == img.end() || it->second != a) {
				match = false;
				break;
			}
		}
		if (match) {
			return true;
		}
	}
	return false;
}

std::vector<std::string> split_documents(const std::string& text)
{
	static const std::set<std::string> kinds = {"rabin", "fta", "sft", "ca", "pattern", "moore"};
	std::vector<std::string> docs;
	std::istringstream in(text);
	for (std::string line; std::getline(in, line);) {
		if (kinds.count(line)) {
			docs.emplace_back();
		}
		if (line.rfind("exit: ", 0) == 0) {
			break;
		}
		if (!docs.empty()) {
			docs.back() += line + "\n";
		}
	}
	return docs;
}

std::string golden_dir()
{
	return GOLDEN_DIR;
}

} // namespace

int main(int argc, char** argv)
{
	if (argc == 3 && std::string(argv[1]) == "--write-golden") {
		for (const auto& c : cli_cases()) {
			std::ofstream(std::string(argv[2]) + "/" + c.name + ".out", std::ios::binary)
			    << run_case(c, FIXTURE_DIR);
		}
		return 0;
	}

	const auto m = load<RabinAutomaton>("mono.rabin");
	const auto u = load<RabinAutomaton>("full.rabin");
	const auto mono_sft = load<SftDescription>("mono.sft");
	const auto full_sft = load<SftDescription>("full.sft");

	criterion(1, "monochromatic fixture: 4 and 16 blocks, 0(1,1) in, 0(0,1) out", [&] {
		for (unsigned d : {2u, 3u}) {
			const auto oracle = oracle_local_blocks(mono_sft, d);
			expect(oracle.size() == (d == 2 ? 4u : 16u),
			       "forbidden-block enumeration at size " + std::to_string(d) + " gave " +
			           std::to_string(oracle.size()));
			std::set<std::map<Word, Letter>> accepted;
			for (const auto& p : blocks_of(d)) {
				if (accepts_pattern(m, p)) {
					accepted.insert(p.labels());
				}
			}
			expect(accepted == oracle, "accepted blocks differ at size " + std::to_string(d));
		}
		expect(accepts_pattern(m, term("0(1,1)")).accepted, "0(1,1) rejected");
		expect(!accepts_pattern(m, term("0(0,1)")).accepted, "0(0,1) accepted");
	});

	criterion(2, "presentation equivalence with witness", [&] {
		const auto canonical = canonical_presentation(mono_sft);
		expect(equal_sofic(m, canonical).answer, "M differs from the canonical presentation");
		const auto v = equal_sofic(m, u);
		expect(!v.answer, "M equals U");
		expect_separates(v, m, u);
	});

	const auto automata = corpus();

	criterion(3, "subset construction preserves patterns of height <= 3 (200 automata)", [&] {
		for (std::size_t i = 0; i < automata.size(); ++i) {
			const auto& a = automata[i];
			const auto c = codeterminize(a);
			expect(classify(c).codeterministic, "automaton " + std::to_string(i) + " not co-deterministic");
			for (const auto& p : small_patterns()) {
				expect(oracle_accepts(a, p) == oracle_accepts(c, p),
				       "automaton " + std::to_string(i) + " pattern " + show(p));
			}
		}
	});

	criterion(4, "complement partition, co-complete and co-deterministic (200 automata)", [&] {
		for (std::size_t i = 0; i < automata.size(); ++i) {
			const auto& a = automata[i];
			const auto g = subset_fta(a, SubsetMode::complement);
			const auto c = classify(g.base());
			expect(c.cocomplete && c.codeterministic, "automaton " + std::to_string(i));
			expect(g.initials().size() == 1, "automaton " + std::to_string(i) + " initial set");
			for (const auto& p : small_patterns()) {
				const bool in_a = oracle_accepts(a, p);
				const bool in_g = oracle_fta_accepts(g, p);
				expect(in_a != in_g, "automaton " + std::to_string(i) + " pattern " + show(p));
				expect(fta_accepts(g, p).accepted == in_g, "fta_accepts disagrees on " + show(p));
			}
		}
	});

	criterion(5, "emptiness: fixpoint and naive agree (200 FTAs)", [&] {
		std::mt19937 rng(777);
		int empty = 0;
		for (int i = 0; i < 200; ++i) {
			const auto g = random_fta(rng, 3);
			const bool fix = fta_is_empty(g, EmptinessMethod::fixpoint);
			const bool naive = fta_is_empty(g, EmptinessMethod::naive);
			expect(fix == naive, "FTA " + std::to_string(i));
			empty += fix;
			if (!fix) {
				expect(oracle_fta_accepts(g, *sample_accepted(g)), "sample rejected");
			}
		}
		expect(empty > 0 && empty < 200, "corpus lacks empty or nonempty cases");
	});

	criterion(6, "image automaton blocks equal images of admissible blocks (d <= 3)", [&] {
		// every locally admissible block of these two shifts extends downward
		for (const auto* x : {&full_sft, &mono_sft}) {
			for (const auto& [name, rule] : rules()) {
				const auto tau = load<CellularAutomaton>(rule.second);
				const auto b = essentialize(image_automaton(tau, *x));
				for (unsigned d = 1; d <= 3; ++d) {
					std::set<std::map<Word, Letter>> images;
					const auto size = d + tau.memory() - 1;
					for (const auto& labels : oracle_local_blocks(*x, size)) {
						images.insert(oracle_image(Pattern(2, labels), tau.memory(), rule.first));
					}
					expect(accepted_blocks(b, d) == images,
					       name + " at depth " + std::to_string(d));
				}
			}
		}
	});

	criterion(7, "surjectivity verdicts with brute-force preimage check", [&] {
		const auto id = load<CellularAutomaton>("id.ca");
		const auto zero = load<CellularAutomaton>("zero.ca");
		const auto xr = load<CellularAutomaton>("xor.ca");
		const ShiftImage full_x{full_sft, CellularAutomaton::identity(binary(), 2)};
		expect(surjective(id, full_x, full_x).answer, "identity");
		const auto z = surjective(zero, full_x, full_x);
		expect(!z.answer && z.witness, "constant-0");
		expect(!has_preimage(*z.witness, 1, rules()[1].second.first),
		       "constant-0 witness " + show(*z.witness) + " has a preimage");
		expect(surjective(xr, full_x, full_x).answer, "xor (image of the full sft)");
		expect(surjective(xr, u, u).answer, "xor (automaton input)");
		for (unsigned d = 1; d <= 3; ++d) {
			for (const auto& p : blocks_of(d)) {
				expect(has_preimage(p, 2, rules()[2].second.first), "no xor preimage for " + show(p));
			}
		}
	});

	criterion(8, "sft cover round trip on the automaton fixtures", [&] {
		int count = 0;
		for (const auto& entry : std::filesystem::directory_iterator(FIXTURE_DIR)) {
			if (entry.path().extension() != ".rabin") {
				continue;
			}
			const auto name = entry.path().filename().string();
			const auto a = essentialize(std::get<RabinAutomaton>(read_document(entry.path())));
			const auto cover = sft_cover(a);
			const auto back = image_automaton(cover.map, cover.shift);
			expect(equal_sofic(a, back).answer, name);
			++count;
		}
		expect(count >= 5, "fixture automata missing");
	});

	criterion(9, "fullness of U, M and the xor image", [&] {
		expect(is_full(u).answer, "U");
		const auto v = is_full(m);
		expect(!v.answer && v.witness && !oracle_accepts(m, *v.witness), "M");
		expect(is_full(image_automaton(load<CellularAutomaton>("xor.ca"), full_sft)).answer, "xor");
	});

	criterion(10, "CLI golden outputs, determinism and document round trips", [&] {
		std::vector<std::string> docs;
		for (const auto& c : cli_cases()) {
			const auto first = run_case(c, FIXTURE_DIR);
			const auto second = run_case(c, FIXTURE_DIR);
			expect(first == second, c.name + " differs between runs");
			std::ifstream golden(golden_dir() + "/" + c.name + ".out", std::ios::binary);
			expect(golden.good(), c.name + " has no golden file");
			std::ostringstream want;
			want << golden.rdbuf();
			expect(first == want.str(), c.name + " differs from its golden file");
			for (auto& d : split_documents(first)) {
				docs.push_back(std::move(d));
			}
		}
		for (const auto& entry : std::filesystem::directory_iterator(FIXTURE_DIR)) {
			try {
				docs.push_back(write_document(read_document(entry.path())));
			} catch (const Error&) {
				// fixtures for the error cases
			}
		}
		expect(docs.size() > 20, "too few documents");
		for (const auto& d : docs) {
			const auto once = write_document(parse_document(d));
			expect(once == d, "document does not round-trip:\n" + d);
		}
	});

	std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
	          << std::endl;
	return failures == 0 ? 0 : 1;
}
