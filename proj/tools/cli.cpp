#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>

#include "treeshift/decide.hpp"
#include "treeshift/io.hpp"

namespace treeshift::cli {

namespace {

class UsageError : public Error
{
public:
	using Error::Error;
};

template <class T>
T load(const std::string& path, std::string_view kind)
{
	auto doc = read_document(path);
	if (auto* v = std::get_if<T>(&doc)) {
		return std::move(*v);
	}
	throw UsageError(path + ": expected a " + std::string(kind) + " document, got " +
	                 std::string(kind_name(doc)));
}

/// `x.rabin`, `x.sft` (identity image) or `x.sft+t.ca`.
SoficInput load_sofic(const std::string& arg)
{
	std::string first = arg;
	std::string second;
	if (auto plus = arg.rfind('+'); plus != std::string::npos && !std::filesystem::exists(arg)) {
		first = arg.substr(0, plus);
		second = arg.substr(plus + 1);
	}
	auto doc = read_document(first);
	if (second.empty()) {
		if (auto* a = std::get_if<RabinAutomaton>(&doc)) {
			return std::move(*a);
		}
		if (auto* x = std::get_if<SftDescription>(&doc)) {
			auto id = CellularAutomaton::identity(x->alphabet(), x->arity());
			return ShiftImage{std::move(*x), std::move(id)};
		}
		throw UsageError(first + ": expected a rabin or sft document");
	}
	auto* x = std::get_if<SftDescription>(&doc);
	if (!x) {
		throw UsageError(first + ": expected an sft document before '+'");
	}
	return ShiftImage{std::move(*x), load<CellularAutomaton>(second, "ca")};
}

void print_verdict(std::ostream& out, const Verdict& v)
{
	out << (v.answer ? "true" : "false") << '\n';
	if (v.witness) {
		out << "witness: " << to_term(*v.witness, v.alphabet) << '\n';
	}
}

void print_bool(std::ostream& out, bool b)
{
	out << (b ? "true" : "false") << '\n';
}

void save(const std::string& path, const Document& doc)
{
	std::ofstream file(path, std::ios::binary);
	if (!file) {
		throw FileError("cannot write '" + path + "'");
	}
	file << write_document(doc);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Tree shifts, sofic presentations and cellular automata", "treeshift"};
	app.require_subcommand(1);
	std::size_t budget_states = Budget{}.max_states;
	app.add_option("--budget", budget_states, "Maximum states, bundles or blocks per construction")
	    ->check(CLI::PositiveNumber);

	std::function<void()> action;
	std::string file1, file2, file3, sft_out, ca_out;
	std::string method = "fixpoint";
	std::string scope = "global";
	std::string mode = "language";
	unsigned size = 1;
	Budget budget;

	auto unary = [&](const char* name, const char* help, const char* arg,
	                 std::function<void()> body) {
		auto* sub = app.add_subcommand(name, help);
		sub->add_option(arg, file1)->required();
		sub->callback([&action, body] { action = body; });
		return sub;
	};
	auto binary = [&](const char* name, const char* help, const char* arg1, const char* arg2,
	                  std::function<void()> body) {
		auto* sub = unary(name, help, arg1, std::move(body));
		sub->add_option(arg2, file2)->required();
		return sub;
	};

	unary("essentialize", "Remove states that cannot carry a run", "rabin", [&] {
		out << write_document(essentialize(load<RabinAutomaton>(file1, "rabin")));
	});
	unary("classify", "Determinism properties of an automaton", "rabin", [&] {
		const auto c = classify(load<RabinAutomaton>(file1, "rabin"));
		out << "deterministic: " << (c.deterministic ? "true" : "false") << '\n';
		out << "co-deterministic: " << (c.codeterministic ? "true" : "false") << '\n';
		out << "co-complete: " << (c.cocomplete ? "true" : "false") << '\n';
	});
	unary("codet", "Co-deterministic automaton for the same shift", "rabin", [&] {
		out << write_document(
		    codeterminize(essentialize(load<RabinAutomaton>(file1, "rabin")), budget));
	});
	binary("join", "Automaton for the intersection", "rabin1", "rabin2", [&] {
		out << write_document(join(load<RabinAutomaton>(file1, "rabin"),
		                           load<RabinAutomaton>(file2, "rabin"), budget));
	});
	unary("complement", "Complement of a co-deterministic finite-tree automaton", "fta", [&] {
		out << write_document(complement(load<FiniteTreeAutomaton>(file1, "fta"), budget));
	});
	unary("empty", "Emptiness of an fta language, a sofic shift or an sft", "file", [&] {
		auto doc = read_document(file1);
		if (auto* g = std::get_if<FiniteTreeAutomaton>(&doc)) {
			const bool empty = fta_is_empty(
			    *g, method == "naive" ? EmptinessMethod::naive : EmptinessMethod::fixpoint, budget);
			print_bool(out, empty);
			if (!empty) {
				out << "witness: " << to_term(*sample_accepted(*g), g->base().alphabet()) << '\n';
			}
		} else if (auto* a = std::get_if<RabinAutomaton>(&doc)) {
			print_bool(out, is_empty_shift(*a));
		} else if (auto* x = std::get_if<SftDescription>(&doc)) {
			print_bool(out, sft_is_empty(*x, budget));
		} else {
			throw UsageError(file1 + ": expected an fta, rabin or sft document");
		}
	})->add_option("--method", method, "fixpoint or naive (fta only)")
	    ->check(CLI::IsMember({"fixpoint", "naive"}));
	unary("full", "Is the sofic shift the full shift?", "sofic",
	      [&] { print_verdict(out, is_full(presentation(load_sofic(file1), budget), budget)); });
	binary("accepts", "Acceptance of a pattern", "automaton", "pattern", [&] {
		const auto p = load<PatternDocument>(file2, "pattern");
		auto doc = read_document(file1);
		auto remap = [&](const Alphabet& target) {
			const auto map = letter_map(p.alphabet, target);
			std::map<Word, Letter> labels;
			for (const auto& [w, a] : p.pattern.labels()) {
				labels.emplace(w, map[a]);
			}
			return Pattern(p.arity, std::move(labels));
		};
		if (auto* g = std::get_if<FiniteTreeAutomaton>(&doc)) {
			print_bool(out, fta_accepts(*g, remap(g->base().alphabet())).accepted);
		} else if (auto* a = std::get_if<RabinAutomaton>(&doc)) {
			const auto e = essentialize(*a);
			print_bool(out, accepts_pattern(e, remap(e.alphabet())).accepted);
		} else {
			throw UsageError(file1 + ": expected a rabin or fta document");
		}
	});
	binary("member", "Membership of a Moore-colored configuration", "rabin", "moore", [&] {
		const auto r = member_moore(load<RabinAutomaton>(file1, "rabin"),
		                            load<MooreColoring>(file2, "moore"));
		print_bool(out, r.member);
		if (!r.member) {
			out << "rejected-at-depth: " << r.rejection_depth << '\n';
		}
	});
	auto* blocks = unary("blocks", "Admissible blocks of an sft", "sft", [&] {
		const auto x = load<SftDescription>(file1, "sft");
		const auto found = admissible_blocks(
		    x, size, scope == "local" ? Scope::local : Scope::global, budget);
		std::vector<Pattern> patterns;
		for (const auto& b : found) {
			patterns.push_back(b.to_pattern());
		}
		std::sort(patterns.begin(), patterns.end(), term_less);
		for (const auto& p : patterns) {
			out << to_term(p, x.alphabet()) << '\n';
		}
	});
	blocks->add_option("--size", size, "Block size")->required()->check(CLI::PositiveNumber);
	blocks->add_option("--scope", scope, "local or global")
	    ->check(CLI::IsMember({"local", "global"}));
	unary("present", "Canonical automaton of an sft", "sft", [&] {
		out << write_document(canonical_presentation(load<SftDescription>(file1, "sft"), budget));
	});
	auto* cover = unary("cover", "Sft over bundles and the labeling map", "rabin", [&] {
		auto c = sft_cover(essentialize(load<RabinAutomaton>(file1, "rabin")), budget);
		if (sft_out.empty() && ca_out.empty()) {
			out << write_document(c.shift) << write_document(c.map);
			return;
		}
		if (!sft_out.empty()) {
			save(sft_out, c.shift);
		}
		if (!ca_out.empty()) {
			save(ca_out, c.map);
		}
	});
	cover->add_option("--sft-out", sft_out, "Write the sft here");
	cover->add_option("--ca-out", ca_out, "Write the map here");
	binary("compose", "outer after inner", "outer", "inner", [&] {
		out << write_document(compose(load<CellularAutomaton>(file1, "ca"),
		                              load<CellularAutomaton>(file2, "ca"), budget));
	});
	binary("image", "Automaton presenting the image of an sft", "ca", "sft", [&] {
		out << write_document(image_automaton(load<CellularAutomaton>(file1, "ca"),
		                                      load<SftDescription>(file2, "sft"), budget));
	});
	binary("equal", "Equality of two sofic shifts", "sofic1", "sofic2", [&] {
		print_verdict(out, equal_sofic(load_sofic(file1), load_sofic(file2), budget));
	});
	binary("contained", "Is the first sofic shift inside the second?", "sofic1", "sofic2", [&] {
		print_verdict(out, contained_sofic(load_sofic(file1), load_sofic(file2), budget));
	});
	unary("subset", "Subset finite-tree automaton", "rabin", [&] {
		const auto a = essentialize(load<RabinAutomaton>(file1, "rabin"));
		out << write_document(subset_fta(
		    a, mode == "complement" ? SubsetMode::complement : SubsetMode::language, budget));
	})->add_option("--mode", mode, "language or complement")
	    ->check(CLI::IsMember({"language", "complement"}));
	auto* surj = binary("surjective", "Is the rule onto the target shift?", "ca", "source",
	                    [&] {
		                    print_verdict(out, surjective(load<CellularAutomaton>(file1, "ca"),
		                                                  load_sofic(file2), load_sofic(file3),
		                                                  budget));
	                    });
	surj->add_option("target", file3)->required();
	unary("sample", "Least accepted pattern of a finite-tree automaton", "fta", [&] {
		const auto g = load<FiniteTreeAutomaton>(file1, "fta");
		const auto p = sample_accepted(g);
		out << (p ? to_term(*p, g.base().alphabet()) : std::string("none")) << '\n';
	});

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? 0 : 2;
	}
	budget.max_states = budget_states;
	try {
		action();
		return 0;
	} catch (const UsageError& e) {
		err << "error: " << e.what() << '\n';
		return 2;
	} catch (const FileError& e) {
		err << "error: " << e.what() << '\n';
		return 2;
	} catch (const ParseError& e) {
		err << "parse error: " << e.what() << '\n';
		return 3;
	} catch (const SemanticError& e) {
		err << "semantic error: " << e.what() << '\n';
		return 4;
	} catch (const BudgetExceeded& e) {
		err << "budget exceeded: " << e.what() << '\n';
		return 5;
	} catch (const Error& e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
}

} // namespace treeshift::cli
