#include "treeshift/core.hpp"

#include <algorithm>
#include <cctype>

namespace treeshift {

namespace {

bool valid_token_char(char c)
{
	return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
	       c != '#';
}

void check_arity(unsigned arity)
{
	if (arity == 0 || arity > max_arity) {
		throw SemanticError("arity must lie in [1, " + std::to_string(max_arity) + "], got " +
		                    std::to_string(arity));
	}
}

} // namespace

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters))
{
	if (letters_.empty()) {
		throw SemanticError("alphabet must contain at least one letter");
	}
	for (std::size_t i = 0; i < letters_.size(); ++i) {
		const auto& tok = letters_[i];
		if (tok.empty() || !std::all_of(tok.begin(), tok.end(), valid_token_char)) {
			throw SemanticError("invalid letter token '" + tok + "'");
		}
		for (std::size_t j = 0; j < i; ++j) {
			if (letters_[j] == tok) {
				throw SemanticError("duplicate letter '" + tok + "'");
			}
		}
	}
}

const std::string& Alphabet::name(Letter a) const
{
	if (a >= letters_.size()) {
		throw SemanticError("letter index " + std::to_string(a) + " outside alphabet");
	}
	return letters_[a];
}

std::optional<Letter> Alphabet::find(std::string_view token) const
{
	for (std::size_t i = 0; i < letters_.size(); ++i) {
		if (letters_[i] == token) {
			return static_cast<Letter>(i);
		}
	}
	return std::nullopt;
}

Letter Alphabet::index_of(std::string_view token) const
{
	if (auto a = find(token)) {
		return *a;
	}
	throw SemanticError("unknown letter '" + std::string(token) + "'");
}

std::optional<std::pair<Letter, std::size_t>> Alphabet::match_longest(std::string_view text,
                                                                      std::size_t pos) const
{
	std::optional<std::pair<Letter, std::size_t>> best;
	for (std::size_t i = 0; i < letters_.size(); ++i) {
		const auto& tok = letters_[i];
		if (text.substr(pos, tok.size()) == tok && (!best || tok.size() > best->second)) {
			best = std::pair{static_cast<Letter>(i), tok.size()};
		}
	}
	return best;
}

Alphabet merge(const Alphabet& a, const Alphabet& b)
{
	auto letters = a.letters();
	for (const auto& tok : b.letters()) {
		if (!a.find(tok)) {
			letters.push_back(tok);
		}
	}
	return Alphabet(std::move(letters));
}

std::vector<Letter> letter_map(const Alphabet& from, const Alphabet& to)
{
	std::vector<Letter> map;
	map.reserve(from.size());
	for (const auto& tok : from.letters()) {
		map.push_back(to.index_of(tok));
	}
	return map;
}

// -------------------------------------------------------------------- Word

Word::Word(std::initializer_list<unsigned> dirs)
{
	for (unsigned d : dirs) {
		if (d > max_arity) {
			throw SemanticError("direction out of range");
		}
		dirs_.push_back(static_cast<std::uint8_t>(d));
	}
}

Word Word::parse(std::string_view text)
{
	if (text == "e") {
		return {};
	}
	if (text.empty()) {
		throw ParseError("empty word (use 'e' for the root)");
	}
	std::vector<std::uint8_t> dirs;
	if (text.find('.') != std::string_view::npos) {
		std::size_t pos = 0;
		while (pos <= text.size()) {
			auto end = text.find('.', pos);
			auto part = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
			if (part.empty() || part.size() > 3 ||
			    !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(c); })) {
				throw ParseError("bad word '" + std::string(text) + "'");
			}
			unsigned v = std::stoul(std::string(part));
			if (v > max_arity) {
				throw ParseError("bad word '" + std::string(text) + "'");
			}
			dirs.push_back(static_cast<std::uint8_t>(v));
			if (end == std::string_view::npos) {
				break;
			}
			pos = end + 1;
		}
	} else {
		for (char c : text) {
			if (!std::isdigit(static_cast<unsigned char>(c))) {
				throw ParseError("bad word '" + std::string(text) + "'");
			}
			dirs.push_back(static_cast<std::uint8_t>(c - '0'));
		}
	}
	return Word(std::move(dirs));
}

std::string Word::str() const
{
	if (dirs_.empty()) {
		return "e";
	}
	bool wide = std::any_of(dirs_.begin(), dirs_.end(), [](auto d) { return d >= 10; });
	std::string out;
	for (std::size_t i = 0; i < dirs_.size(); ++i) {
		if (wide) {
			if (i) {
				out += '.';
			}
			out += std::to_string(dirs_[i]);
		} else {
			out += static_cast<char>('0' + dirs_[i]);
		}
	}
	return out;
}

Word Word::child(unsigned sigma) const
{
	auto dirs = dirs_;
	dirs.push_back(static_cast<std::uint8_t>(sigma));
	return Word(std::move(dirs));
}

Word Word::parent() const
{
	auto dirs = dirs_;
	dirs.pop_back();
	return Word(std::move(dirs));
}

Word Word::operator+(const Word& rhs) const
{
	auto dirs = dirs_;
	dirs.insert(dirs.end(), rhs.dirs_.begin(), rhs.dirs_.end());
	return Word(std::move(dirs));
}

bool Word::has_prefix(const Word& prefix) const
{
	return prefix.dirs_.size() <= dirs_.size() &&
	       std::equal(prefix.dirs_.begin(), prefix.dirs_.end(), dirs_.begin());
}

Word Word::drop_prefix(std::size_t n) const
{
	return Word(std::vector<std::uint8_t>(dirs_.begin() + static_cast<std::ptrdiff_t>(n),
	                                      dirs_.end()));
}

// -------------------------------------------------------------------- Tree

Tree::Tree(unsigned arity, std::set<Word> vertices) : arity_(arity), vertices_(std::move(vertices))
{
	check_arity(arity_);
	if (!contains(Word{})) {
		throw SemanticError("subtree must contain the root");
	}
	for (const auto& w : vertices_) {
		if (w.empty()) {
			continue;
		}
		if (w.back() >= arity_) {
			throw SemanticError("direction " + std::to_string(w.back()) + " in word " + w.str() +
			                    " exceeds arity");
		}
		if (!contains(w.parent())) {
			throw SemanticError("subtree is not prefix-closed at " + w.str());
		}
	}
}

std::size_t Tree::child_count(const Word& w) const
{
	std::size_t n = 0;
	for (unsigned s = 0; s < arity_; ++s) {
		n += contains(w.child(s));
	}
	return n;
}

bool Tree::is_full() const
{
	return std::all_of(vertices_.begin(), vertices_.end(), [&](const Word& w) {
		auto c = child_count(w);
		return c == 0 || c == arity_;
	});
}

Tree delta(unsigned n, unsigned arity)
{
	check_arity(arity);
	if (n == 0) {
		throw SemanticError("delta(0) is empty and not a rooted subtree");
	}
	std::set<Word> words{Word{}};
	std::vector<Word> level{Word{}};
	for (unsigned len = 1; len < n; ++len) {
		std::vector<Word> next;
		for (const auto& w : level) {
			for (unsigned s = 0; s < arity; ++s) {
				next.push_back(w.child(s));
			}
		}
		words.insert(next.begin(), next.end());
		level = std::move(next);
	}
	return Tree(arity, std::move(words));
}

Tree plus(const Tree& tree)
{
	auto words = tree.vertices();
	for (const auto& w : tree.vertices()) {
		for (unsigned s = 0; s < tree.arity(); ++s) {
			words.insert(w.child(s));
		}
	}
	return Tree(tree.arity(), std::move(words));
}

unsigned height(const Tree& tree)
{
	std::size_t deepest = 0;
	for (const auto& w : tree.vertices()) {
		deepest = std::max(deepest, w.length());
	}
	return static_cast<unsigned>(deepest + 1);
}

std::vector<Tree> full_trees(unsigned arity, unsigned max_height)
{
	check_arity(arity);
	std::vector<std::set<Word>> shapes;
	if (max_height == 0) {
		return {};
	}
	shapes.push_back({Word{}});
	for (unsigned h = 2; h <= max_height; ++h) {
		std::vector<std::set<Word>> next{{Word{}}};
		std::vector<std::size_t> pick(arity, 0);
		for (;;) {
			std::set<Word> t{Word{}};
			for (unsigned s = 0; s < arity; ++s) {
				for (const auto& w : shapes[pick[s]]) {
					t.insert(Word{s} + w);
				}
			}
			next.push_back(std::move(t));
			unsigned s = arity;
			while (s > 0 && ++pick[s - 1] == shapes.size()) {
				pick[--s] = 0;
			}
			if (s == 0) {
				break;
			}
		}
		shapes = std::move(next);
	}
	std::vector<Tree> out;
	out.reserve(shapes.size());
	for (auto& s : shapes) {
		out.emplace_back(arity, std::move(s));
	}
	std::stable_sort(out.begin(), out.end(),
	                 [](const Tree& a, const Tree& b) { return height(a) < height(b); });
	return out;
}

// ----------------------------------------------------------------- Pattern

Pattern::Pattern(unsigned arity, std::map<Word, Letter> labels)
    : arity_(arity), labels_(std::move(labels))
{
	check_arity(arity_);
	if (!contains(Word{})) {
		throw SemanticError("pattern support must contain the root");
	}
	for (const auto& [w, a] : labels_) {
		if (w.empty()) {
			continue;
		}
		if (w.back() >= arity_ || !contains(w.parent())) {
			throw SemanticError("pattern support is not a subtree at " + w.str());
		}
	}
}

Pattern Pattern::leaf(unsigned arity, Letter a)
{
	return Pattern(arity, {{Word{}, a}});
}

Pattern Pattern::node(Letter a, std::span<const Pattern> children)
{
	auto arity = static_cast<unsigned>(children.size());
	std::map<Word, Letter> labels{{Word{}, a}};
	for (unsigned s = 0; s < arity; ++s) {
		if (children[s].arity() != arity) {
			throw SemanticError("child pattern arity does not match number of children");
		}
		for (const auto& [w, b] : children[s].labels()) {
			labels.emplace(Word{s} + w, b);
		}
	}
	return Pattern(arity, std::move(labels));
}

Letter Pattern::at(const Word& w) const
{
	auto it = labels_.find(w);
	if (it == labels_.end()) {
		throw SemanticError("word " + w.str() + " not in pattern support");
	}
	return it->second;
}

bool Pattern::has_children(const Word& w) const
{
	for (unsigned s = 0; s < arity_; ++s) {
		if (contains(w.child(s))) {
			return true;
		}
	}
	return false;
}

Tree Pattern::support() const
{
	std::set<Word> words;
	for (const auto& entry : labels_) {
		words.insert(entry.first);
	}
	return Tree(arity_, std::move(words));
}

bool Pattern::is_full() const
{
	return support().is_full();
}

unsigned height(const Pattern& p)
{
	std::size_t deepest = 0;
	for (const auto& entry : p.labels()) {
		deepest = std::max(deepest, entry.first.length());
	}
	return static_cast<unsigned>(deepest + 1);
}

Pattern subtree_shift(const Pattern& p, const Word& w)
{
	if (!p.contains(w)) {
		throw SemanticError("subtree_shift: word " + w.str() + " not in support");
	}
	std::map<Word, Letter> labels;
	for (auto it = p.labels().find(w); it != p.labels().end() && it->first.has_prefix(w); ++it) {
		labels.emplace_hint(labels.end(), it->first.drop_prefix(w.length()), it->second);
	}
	return Pattern(p.arity(), std::move(labels));
}

Pattern restrict_to(const Pattern& p, const Tree& tree)
{
	std::map<Word, Letter> labels;
	for (const auto& w : tree.vertices()) {
		labels.emplace(w, p.at(w));
	}
	return Pattern(p.arity(), std::move(labels));
}

std::strong_ordering term_order(const Pattern& a, const Pattern& b)
{
	auto ia = a.labels().begin();
	auto ib = b.labels().begin();
	for (; ia != a.labels().end() && ib != b.labels().end(); ++ia, ++ib) {
		if (auto c = ia->second <=> ib->second; c != 0) {
			return c;
		}
		if (auto c = a.has_children(ia->first) <=> b.has_children(ib->first); c != 0) {
			return c;
		}
	}
	return (ia != a.labels().end()) <=> (ib != b.labels().end());
}

namespace {

void write_term(const Pattern& p, const Alphabet& alphabet, const Word& w, std::string& out)
{
	out += alphabet.name(p.at(w));
	if (!p.has_children(w)) {
		return;
	}
	out += '(';
	for (unsigned s = 0; s < p.arity(); ++s) {
		if (s) {
			out += ',';
		}
		write_term(p, alphabet, w.child(s), out);
	}
	out += ')';
}

class TermParser
{
public:
	TermParser(std::string_view text, const Alphabet& alphabet, unsigned arity)
	    : text_(text), alphabet_(alphabet), arity_(arity)
	{
	}

	Pattern parse()
	{
		std::map<Word, Letter> labels;
		term(Word{}, labels);
		skip_ws();
		if (pos_ != text_.size()) {
			fail("trailing characters");
		}
		return Pattern(arity_, std::move(labels));
	}

private:
	void term(const Word& at, std::map<Word, Letter>& labels)
	{
		skip_ws();
		auto m = alphabet_.match_longest(text_, pos_);
		if (!m) {
			fail("expected a letter");
		}
		labels.emplace(at, m->first);
		pos_ += m->second;
		skip_ws();
		if (pos_ < text_.size() && text_[pos_] == '(') {
			++pos_;
			for (unsigned s = 0; s < arity_; ++s) {
				if (s) {
					skip_ws();
					expect(',');
				}
				term(at.child(s), labels);
			}
			skip_ws();
			expect(')');
		}
	}

	void expect(char c)
	{
		if (pos_ >= text_.size() || text_[pos_] != c) {
			fail(std::string("expected '") + c + "'");
		}
		++pos_;
	}

	void skip_ws()
	{
		while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
			++pos_;
		}
	}

	[[noreturn]] void fail(const std::string& what) const
	{
		throw ParseError("term '" + std::string(text_) + "': " + what + " at offset " +
		                 std::to_string(pos_));
	}

	std::string_view text_;
	const Alphabet& alphabet_;
	unsigned arity_;
	std::size_t pos_ = 0;
};

} // namespace

std::string to_term(const Pattern& p, const Alphabet& alphabet)
{
	if (!p.is_full()) {
		throw SemanticError("only full-tree-patterns have a term form");
	}
	std::string out;
	write_term(p, alphabet, Word{}, out);
	return out;
}

Pattern parse_term(std::string_view text, const Alphabet& alphabet, unsigned arity)
{
	check_arity(arity);
	return TermParser(text, alphabet, arity).parse();
}

void for_each_labeling(const Tree& tree, std::size_t alphabet_size,
                       const std::function<void(const Pattern&)>& fn)
{
	if (alphabet_size == 0) {
		return;
	}
	std::vector<Word> words(tree.vertices().begin(), tree.vertices().end());
	std::vector<Letter> labels(words.size(), 0);
	for (;;) {
		std::map<Word, Letter> m;
		for (std::size_t i = 0; i < words.size(); ++i) {
			m.emplace_hint(m.end(), words[i], labels[i]);
		}
		fn(Pattern(tree.arity(), std::move(m)));
		std::size_t i = words.size();
		while (i > 0 && ++labels[i - 1] == alphabet_size) {
			labels[--i] = 0;
		}
		if (i == 0) {
			return;
		}
	}
}

// ------------------------------------------------------------------- Block

std::size_t delta_size(unsigned arity, unsigned n)
{
	std::size_t total = 0;
	std::size_t level = 1;
	for (unsigned l = 0; l < n; ++l) {
		total += level;
		level *= arity;
	}
	return total;
}

Block::Block(unsigned arity, unsigned size, std::vector<Letter> labels)
    : arity_(arity), size_(size), labels_(std::move(labels))
{
	check_arity(arity_);
	if (labels_.size() != delta_size(arity_, size_)) {
		throw SemanticError("block of size " + std::to_string(size_) + " needs " +
		                    std::to_string(delta_size(arity_, size_)) + " labels");
	}
}

Block Block::from_pattern(const Pattern& p)
{
	unsigned n = height(p);
	unsigned k = p.arity();
	if (p.size() != delta_size(k, n)) {
		throw SemanticError("pattern support is not a block");
	}
	std::vector<Letter> labels(p.size());
	for (const auto& [w, a] : p.labels()) {
		std::size_t val = 0;
		for (std::size_t i = 0; i < w.length(); ++i) {
			val = val * k + w[i];
		}
		labels[delta_size(k, static_cast<unsigned>(w.length())) + val] = a;
	}
	return Block(k, n, std::move(labels));
}

Pattern Block::to_pattern() const
{
	if (size_ == 0) {
		throw SemanticError("the empty block is not a pattern");
	}
	std::map<Word, Letter> labels;
	std::size_t index = 0;
	std::size_t width = 1;
	for (unsigned l = 0; l < size_; ++l, width *= arity_) {
		for (std::size_t val = 0; val < width; ++val, ++index) {
			std::vector<std::uint8_t> dirs(l);
			std::size_t v = val;
			for (unsigned i = l; i > 0; --i) {
				dirs[i - 1] = static_cast<std::uint8_t>(v % arity_);
				v /= arity_;
			}
			labels.emplace(Word(std::move(dirs)), labels_[index]);
		}
	}
	return Pattern(arity_, std::move(labels));
}

Block Block::restrict(unsigned m) const
{
	if (m > size_) {
		throw SemanticError("cannot restrict a block to a larger size");
	}
	auto n = delta_size(arity_, m);
	return Block(arity_, m, std::vector<Letter>(labels_.begin(),
	                                            labels_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Block Block::at(const Word& w, unsigned m) const
{
	if (w.length() + m > size_) {
		throw SemanticError("sub-block at " + w.str() + " exceeds block");
	}
	auto depth = static_cast<unsigned>(w.length());
	std::size_t val = 0;
	for (std::size_t i = 0; i < w.length(); ++i) {
		val = val * arity_ + w[i];
	}
	std::vector<Letter> labels;
	labels.reserve(delta_size(arity_, m));
	std::size_t width = 1;
	for (unsigned j = 0; j < m; ++j, width *= arity_) {
		auto start = delta_size(arity_, depth + j) + val * width;
		labels.insert(labels.end(), labels_.begin() + static_cast<std::ptrdiff_t>(start),
		              labels_.begin() + static_cast<std::ptrdiff_t>(start + width));
	}
	return Block(arity_, m, std::move(labels));
}

Block Block::child(unsigned sigma) const
{
	return at(Word{sigma}, size_ - 1);
}

Block Block::graft(Letter root, std::span<const Block> children)
{
	if (children.empty()) {
		throw SemanticError("graft needs at least one child");
	}
	auto arity = static_cast<unsigned>(children.size());
	unsigned m = children.front().size();
	std::vector<Letter> labels{root};
	labels.reserve(delta_size(arity, m + 1));
	std::size_t width = 1;
	for (unsigned j = 0; j < m; ++j, width *= arity) {
		auto start = delta_size(arity, j);
		for (const auto& c : children) {
			if (c.arity() != arity || c.size() != m) {
				throw SemanticError("graft children must share arity and size");
			}
			labels.insert(labels.end(), c.labels_.begin() + static_cast<std::ptrdiff_t>(start),
			              c.labels_.begin() + static_cast<std::ptrdiff_t>(start + width));
		}
	}
	return Block(arity, m + 1, std::move(labels));
}

// ----------------------------------------------------------- MooreColoring

MooreColoring::MooreColoring(unsigned arity, Alphabet alphabet, std::vector<std::string> states,
                             StateId start, std::vector<std::vector<StateId>> step,
                             std::vector<Letter> output)
    : arity_(arity), alphabet_(std::move(alphabet)), states_(std::move(states)), start_(start),
      step_(std::move(step)), output_(std::move(output))
{
	check_arity(arity_);
	auto n = states_.size();
	if (n == 0 || start_ >= n) {
		throw SemanticError("moore coloring needs a valid start state");
	}
	if (step_.size() != n || output_.size() != n) {
		throw SemanticError("moore coloring step and output must be total");
	}
	for (const auto& row : step_) {
		if (row.size() != arity_ ||
		    std::any_of(row.begin(), row.end(), [&](StateId q) { return q >= n; })) {
			throw SemanticError("moore coloring step must be total over valid states");
		}
	}
	for (Letter a : output_) {
		if (a >= alphabet_.size()) {
			throw SemanticError("moore coloring output outside alphabet");
		}
	}
}

StateId MooreColoring::run(const Word& w) const
{
	StateId q = start_;
	for (std::size_t i = 0; i < w.length(); ++i) {
		q = step_[q][w[i]];
	}
	return q;
}

MooreColoring MooreColoring::started_at(StateId q) const
{
	return MooreColoring(arity_, alphabet_, states_, q, step_, output_);
}

MooreColoring MooreColoring::with_outputs(Alphabet alphabet, std::vector<Letter> output) const
{
	return MooreColoring(arity_, std::move(alphabet), states_, start_, step_, std::move(output));
}

Pattern moore_expand(const MooreColoring& m, const Tree& tree)
{
	if (tree.arity() != m.arity()) {
		throw SemanticError("moore_expand: arity mismatch");
	}
	std::map<Word, Letter> labels;
	for (const auto& w : tree.vertices()) {
		labels.emplace_hint(labels.end(), w, m.output(m.run(w)));
	}
	return Pattern(m.arity(), std::move(labels));
}

} // namespace treeshift
