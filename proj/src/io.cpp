#include "treeshift/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace treeshift {

namespace {

struct Line
{
	std::size_t number;
	std::string keyword;
	std::vector<std::string> args;
	std::string rest; ///< everything after the keyword, trimmed
};

std::string trim(std::string_view s)
{
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos) {
		return {};
	}
	const auto e = s.find_last_not_of(" \t\r");
	return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const Line& line, const std::string& what)
{
	throw ParseError("line " + std::to_string(line.number) + ": " + what);
}

/// Lines of one document grouped by keyword.
class Sections
{
public:
	Sections(std::string_view text)
	{
		std::size_t number = 0;
		std::size_t pos = 0;
		while (pos <= text.size()) {
			auto end = text.find('\n', pos);
			if (end == std::string_view::npos) {
				end = text.size();
			}
			++number;
			auto raw = text.substr(pos, end - pos);
			pos = end + 1;
			if (auto hash = raw.find('#'); hash != std::string_view::npos) {
				raw = raw.substr(0, hash);
			}
			auto body = trim(raw);
			if (body.empty()) {
				continue;
			}
			Line line{number, {}, {}, {}};
			std::istringstream in(body);
			in >> line.keyword;
			for (std::string tok; in >> tok;) {
				line.args.push_back(tok);
			}
			line.rest = trim(std::string_view(body).substr(line.keyword.size()));
			if (kind_.empty()) {
				if (!line.args.empty()) {
					fail(line, "kind tag line takes no arguments");
				}
				kind_ = line.keyword;
				continue;
			}
			lines_[line.keyword].push_back(std::move(line));
		}
		if (kind_.empty()) {
			throw ParseError("empty document");
		}
	}

	const std::string& kind() const { return kind_; }

	void allow(std::initializer_list<std::string_view> keywords) const
	{
		for (const auto& [key, lines] : lines_) {
			if (std::find(keywords.begin(), keywords.end(), key) == keywords.end()) {
				fail(lines.front(), "unexpected keyword '" + key + "' in " + kind_ + " document");
			}
		}
	}

	const std::vector<Line>& all(const std::string& key) const
	{
		static const std::vector<Line> none;
		auto it = lines_.find(key);
		return it == lines_.end() ? none : it->second;
	}

	const Line& one(const std::string& key) const
	{
		const auto& v = all(key);
		if (v.empty()) {
			throw ParseError(kind_ + " document: missing '" + key + "' line");
		}
		if (v.size() > 1) {
			fail(v[1], "duplicate '" + key + "' line");
		}
		return v.front();
	}

private:
	std::string kind_;
	std::map<std::string, std::vector<Line>> lines_;
};

unsigned parse_number(const Line& line, const std::string& tok)
{
	if (tok.empty() || tok.size() > 9 ||
	    !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
		fail(line, "expected a number, got '" + tok + "'");
	}
	return static_cast<unsigned>(std::stoul(tok));
}

unsigned single_number(const Sections& s, const std::string& key)
{
	const auto& line = s.one(key);
	if (line.args.size() != 1) {
		fail(line, "'" + key + "' takes one number");
	}
	return parse_number(line, line.args[0]);
}

Alphabet alphabet_line(const Sections& s, const std::string& key)
{
	const auto& line = s.one(key);
	if (line.args.empty()) {
		fail(line, "empty alphabet");
	}
	return Alphabet(line.args);
}

Letter letter(const Line& line, const Alphabet& alphabet, const std::string& tok)
{
	auto a = alphabet.find(tok);
	if (!a) {
		fail(line, "unknown letter '" + tok + "'");
	}
	return *a;
}

class StateTable
{
public:
	StateTable(const Sections& s)
	{
		const auto& line = s.one("states");
		names_ = line.args;
		for (StateId i = 0; i < names_.size(); ++i) {
			if (!ids_.emplace(names_[i], i).second) {
				fail(line, "duplicate state '" + names_[i] + "'");
			}
		}
	}

	StateId operator()(const Line& line, const std::string& name) const
	{
		auto it = ids_.find(name);
		if (it == ids_.end()) {
			fail(line, "unknown state '" + name + "'");
		}
		return it->second;
	}

	const std::vector<std::string>& names() const { return names_; }

private:
	std::vector<std::string> names_;
	std::map<std::string, StateId, std::less<>> ids_;
};

Pattern term_on(const Line& line, std::string_view text, const Alphabet& alphabet, unsigned arity)
{
	if (text.empty()) {
		fail(line, "missing term");
	}
	try {
		return parse_term(text, alphabet, arity);
	} catch (const ParseError& e) {
		fail(line, e.what());
	}
}

Block block_on(const Line& line, std::string_view text, const Alphabet& alphabet, unsigned arity)
{
	auto p = term_on(line, text, alphabet, arity);
	if (p.size() != delta_size(arity, height(p))) {
		throw SemanticError("line " + std::to_string(line.number) + ": term is not a block");
	}
	return Block::from_pattern(p);
}

RabinAutomaton parse_rabin_body(const Sections& s)
{
	const auto k = single_number(s, "sigma");
	auto alphabet = alphabet_line(s, "alphabet");
	StateTable states(s);
	std::vector<Bundle> bundles;
	for (const auto& line : s.all("bundle")) {
		if (line.args.size() != k + 2) {
			fail(line, "bundle needs a source, a letter and " + std::to_string(k) + " targets");
		}
		Bundle b{states(line, line.args[0]), letter(line, alphabet, line.args[1]), {}};
		for (unsigned i = 0; i < k; ++i) {
			b.targets.push_back(states(line, line.args[i + 2]));
		}
		bundles.push_back(std::move(b));
	}
	{
		std::set<Bundle> seen;
		for (std::size_t i = 0; i < bundles.size(); ++i) {
			if (!seen.insert(bundles[i]).second) {
				fail(s.all("bundle")[i], "duplicate bundle");
			}
		}
	}
	return RabinAutomaton(k, std::move(alphabet), states.names(), std::move(bundles));
}

Document parse_rabin(const Sections& s)
{
	s.allow({"sigma", "alphabet", "states", "bundle"});
	return parse_rabin_body(s);
}

Document parse_fta(const Sections& s)
{
	s.allow({"sigma", "alphabet", "states", "bundle", "initial", "final"});
	auto base = parse_rabin_body(s);
	StateTable states(s);
	std::vector<StateId> initials;
	for (const auto& line : s.all("initial")) {
		for (const auto& name : line.args) {
			initials.push_back(states(line, name));
		}
	}
	const auto& fin = s.one("final");
	if (fin.args.size() != 1) {
		fail(fin, "'final' takes one state");
	}
	return FiniteTreeAutomaton(std::move(base), std::move(initials), states(fin, fin.args[0]));
}

Document parse_sft(const Sections& s)
{
	s.allow({"sigma", "alphabet", "memory", "forbid"});
	const auto k = single_number(s, "sigma");
	auto alphabet = alphabet_line(s, "alphabet");
	const auto memory = single_number(s, "memory");
	std::vector<Block> forbidden;
	for (const auto& line : s.all("forbid")) {
		auto b = block_on(line, line.rest, alphabet, k);
		if (b.size() > memory) {
			throw SemanticError("line " + std::to_string(line.number) +
			                    ": forbidden block larger than the memory");
		}
		forbidden.push_back(std::move(b));
	}
	if (memory == 0) {
		throw SemanticError("memory must be at least 1");
	}
	forbidden = normalize_memory(forbidden, memory, alphabet.size());
	return SftDescription(std::move(alphabet), k, memory, std::move(forbidden));
}

Document parse_ca(const Sections& s)
{
	s.allow({"sigma", "alphabet-in", "alphabet-out", "memory", "rule"});
	const auto k = single_number(s, "sigma");
	auto in = alphabet_line(s, "alphabet-in");
	auto out = alphabet_line(s, "alphabet-out");
	const auto memory = single_number(s, "memory");
	if (memory == 0) {
		throw SemanticError("memory must be at least 1");
	}
	std::map<std::size_t, Letter> rules;
	for (const auto& line : s.all("rule")) {
		if (line.args.size() < 2) {
			fail(line, "rule needs a block term and a letter");
		}
		const auto& tok = line.args.back();
		const auto term = trim(std::string_view(line.rest).substr(0, line.rest.size() - tok.size()));
		auto b = block_on(line, term, in, k);
		if (b.size() != memory) {
			fail(line, "rule block must have size " + std::to_string(memory));
		}
		if (!rules.emplace(block_index(b, in.size()), letter(line, out, tok)).second) {
			fail(line, "duplicate rule");
		}
	}
	std::size_t total = 1;
	for (std::size_t i = 0; i < delta_size(k, memory); ++i) {
		total *= in.size();
		if (total > rules.size()) {
			throw ParseError("ca document: rule table is not total (" + std::to_string(rules.size()) +
			                 " rules given)");
		}
	}
	if (total != rules.size()) {
		throw ParseError("ca document: rule table is not total");
	}
	std::vector<Letter> table;
	for (const auto& [index, a] : rules) {
		table.push_back(a);
	}
	return CellularAutomaton(std::move(in), std::move(out), k, memory, std::move(table));
}

Document parse_pattern(const Sections& s)
{
	s.allow({"sigma", "alphabet", "term"});
	const auto k = single_number(s, "sigma");
	auto alphabet = alphabet_line(s, "alphabet");
	const auto& line = s.one("term");
	auto p = term_on(line, line.rest, alphabet, k);
	return PatternDocument{k, std::move(alphabet), std::move(p)};
}

Document parse_moore(const Sections& s)
{
	s.allow({"sigma", "alphabet", "states", "start", "step", "out"});
	const auto k = single_number(s, "sigma");
	auto alphabet = alphabet_line(s, "alphabet");
	StateTable states(s);
	const auto n = states.names().size();
	const auto& start = s.one("start");
	if (start.args.size() != 1) {
		fail(start, "'start' takes one state");
	}
	constexpr StateId unset = ~StateId{0};
	std::vector<std::vector<StateId>> step(n, std::vector<StateId>(k, unset));
	for (const auto& line : s.all("step")) {
		if (line.args.size() != 3) {
			fail(line, "step needs a state, a direction and a state");
		}
		const auto from = states(line, line.args[0]);
		const auto dir = parse_number(line, line.args[1]);
		if (dir >= k) {
			fail(line, "direction out of range");
		}
		if (step[from][dir] != unset) {
			fail(line, "duplicate step");
		}
		step[from][dir] = states(line, line.args[2]);
	}
	std::vector<Letter> output(n, unset);
	for (const auto& line : s.all("out")) {
		if (line.args.size() != 2) {
			fail(line, "out needs a state and a letter");
		}
		const auto q = states(line, line.args[0]);
		if (output[q] != unset) {
			fail(line, "duplicate out");
		}
		output[q] = letter(line, alphabet, line.args[1]);
	}
	for (StateId q = 0; q < n; ++q) {
		if (output[q] == unset ||
		    std::find(step[q].begin(), step[q].end(), unset) != step[q].end()) {
			throw ParseError("moore document: state '" + states.names()[q] +
			                 "' lacks a step or an output");
		}
	}
	return MooreColoring(k, std::move(alphabet), states.names(), states(start, start.args[0]),
	                     std::move(step), std::move(output));
}

std::string joined(const std::vector<std::string>& v)
{
	std::string out;
	for (const auto& s : v) {
		out += ' ';
		out += s;
	}
	return out;
}

void write_rabin_body(std::ostringstream& out, const RabinAutomaton& a)
{
	out << "sigma " << a.arity() << '\n';
	out << "alphabet" << joined(a.alphabet().letters()) << '\n';
	out << "states" << joined(a.state_names()) << '\n';
	for (const auto& b : a.bundles()) {
		out << "bundle " << a.state_names()[b.source] << ' ' << a.alphabet().name(b.label);
		for (auto t : b.targets) {
			out << ' ' << a.state_names()[t];
		}
		out << '\n';
	}
}

std::vector<Pattern> sorted_patterns(const std::vector<Block>& blocks)
{
	std::vector<Pattern> out;
	for (const auto& b : blocks) {
		out.push_back(b.to_pattern());
	}
	std::sort(out.begin(), out.end(), term_less);
	return out;
}

} // namespace

Document parse_document(std::string_view text)
{
	Sections s(text);
	const auto& kind = s.kind();
	if (kind == "rabin") {
		return parse_rabin(s);
	}
	if (kind == "fta") {
		return parse_fta(s);
	}
	if (kind == "sft") {
		return parse_sft(s);
	}
	if (kind == "ca") {
		return parse_ca(s);
	}
	if (kind == "pattern") {
		return parse_pattern(s);
	}
	if (kind == "moore") {
		return parse_moore(s);
	}
	throw ParseError("unknown document kind '" + kind + "'");
}

Document read_document(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw FileError("cannot open '" + path.string() + "'");
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	try {
		return parse_document(buf.str());
	} catch (const ParseError& e) {
		throw ParseError(path.string() + ": " + e.what());
	} catch (const SemanticError& e) {
		throw SemanticError(path.string() + ": " + e.what());
	}
}

std::string_view kind_name(const Document& doc)
{
	static constexpr std::string_view names[] = {"rabin", "fta", "sft", "ca", "pattern", "moore"};
	return names[doc.index()];
}

std::string write_document(const Document& doc)
{
	std::ostringstream out;
	out << kind_name(doc) << '\n';
	if (const auto* a = std::get_if<RabinAutomaton>(&doc)) {
		write_rabin_body(out, *a);
	} else if (const auto* g = std::get_if<FiniteTreeAutomaton>(&doc)) {
		const auto& names = g->base().state_names();
		write_rabin_body(out, g->base());
		out << "initial";
		for (auto s : g->initials()) {
			out << ' ' << names[s];
		}
		out << "\nfinal " << names[g->final_state()] << '\n';
	} else if (const auto* x = std::get_if<SftDescription>(&doc)) {
		out << "sigma " << x->arity() << '\n';
		out << "alphabet" << joined(x->alphabet().letters()) << '\n';
		out << "memory " << x->memory() << '\n';
		for (const auto& p : sorted_patterns(x->forbidden())) {
			out << "forbid " << to_term(p, x->alphabet()) << '\n';
		}
	} else if (const auto* tau = std::get_if<CellularAutomaton>(&doc)) {
		out << "sigma " << tau->arity() << '\n';
		out << "alphabet-in" << joined(tau->input().letters()) << '\n';
		out << "alphabet-out" << joined(tau->output().letters()) << '\n';
		out << "memory " << tau->memory() << '\n';
		std::vector<Block> blocks;
		for (std::size_t i = 0; i < tau->table().size(); ++i) {
			blocks.push_back(block_at_index(i, tau->arity(), tau->memory(), tau->input().size()));
		}
		for (const auto& p : sorted_patterns(blocks)) {
			const auto b = Block::from_pattern(p);
			out << "rule " << to_term(p, tau->input()) << ' '
			    << tau->output().name(tau->table()[block_index(b, tau->input().size())]) << '\n';
		}
	} else if (const auto* pd = std::get_if<PatternDocument>(&doc)) {
		out << "sigma " << pd->arity << '\n';
		out << "alphabet" << joined(pd->alphabet.letters()) << '\n';
		out << "term " << to_term(pd->pattern, pd->alphabet) << '\n';
	} else {
		const auto& m = std::get<MooreColoring>(doc);
		out << "sigma " << m.arity() << '\n';
		out << "alphabet" << joined(m.alphabet().letters()) << '\n';
		out << "states" << joined(m.state_names()) << '\n';
		out << "start " << m.state_names()[m.start()] << '\n';
		for (StateId q = 0; q < m.state_count(); ++q) {
			for (unsigned d = 0; d < m.arity(); ++d) {
				out << "step " << m.state_names()[q] << ' ' << d << ' '
				    << m.state_names()[m.step(q, d)] << '\n';
			}
		}
		for (StateId q = 0; q < m.state_count(); ++q) {
			out << "out " << m.state_names()[q] << ' ' << m.alphabet().name(m.output(q)) << '\n';
		}
	}
	return out.str();
}

} // namespace treeshift
