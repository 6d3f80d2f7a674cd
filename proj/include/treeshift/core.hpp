#pragma once

// Words over the k-regular rooted tree, subtrees, patterns, blocks and
// finitely described (Moore) configurations.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeshift/error.hpp"

namespace treeshift {

using Letter = std::uint32_t;
using StateId = std::uint32_t;

inline constexpr unsigned max_arity = 255;

/// Ordered set of letter tokens. Letters are referred to by their index;
/// the declared order is used for every tie-break.
class Alphabet
{
public:
	Alphabet() = default;
	explicit Alphabet(std::vector<std::string> letters);

	std::size_t size() const { return letters_.size(); }
	bool empty() const { return letters_.empty(); }
	const std::vector<std::string>& letters() const { return letters_; }
	const std::string& name(Letter a) const;

	std::optional<Letter> find(std::string_view token) const;
	Letter index_of(std::string_view token) const;

	/// Longest letter token starting at text[pos]; returns (letter, length).
	std::optional<std::pair<Letter, std::size_t>> match_longest(std::string_view text,
	                                                            std::size_t pos) const;

	bool operator==(const Alphabet&) const = default;

private:
	std::vector<std::string> letters_;
};

/// Letters of `a` followed by the letters of `b` not already in `a`.
Alphabet merge(const Alphabet& a, const Alphabet& b);

/// Index translation from `from` into `to`; every letter of `from` must occur in `to`.
std::vector<Letter> letter_map(const Alphabet& from, const Alphabet& to);

/// A vertex of the tree: a finite sequence of directions in {0, ..., k-1}.
class Word
{
public:
	Word() = default;
	Word(std::initializer_list<unsigned> dirs);
	explicit Word(std::vector<std::uint8_t> dirs) : dirs_(std::move(dirs)) {}

	/// `e` is the empty word; otherwise one digit per direction.
	static Word parse(std::string_view text);
	std::string str() const;

	std::size_t length() const { return dirs_.size(); }
	bool empty() const { return dirs_.empty(); }
	unsigned operator[](std::size_t i) const { return dirs_[i]; }
	unsigned back() const { return dirs_.back(); }
	const std::vector<std::uint8_t>& dirs() const { return dirs_; }

	Word child(unsigned sigma) const;
	Word parent() const;
	Word operator+(const Word& rhs) const;
	bool has_prefix(const Word& prefix) const;
	Word drop_prefix(std::size_t n) const;

	auto operator<=>(const Word&) const = default;

private:
	std::vector<std::uint8_t> dirs_;
};

/// Finite prefix-closed set of words containing the root.
class Tree
{
public:
	Tree(unsigned arity, std::set<Word> vertices);

	unsigned arity() const { return arity_; }
	const std::set<Word>& vertices() const { return vertices_; }
	std::size_t size() const { return vertices_.size(); }
	bool contains(const Word& w) const { return vertices_.count(w) != 0; }
	std::size_t child_count(const Word& w) const;
	bool is_leaf(const Word& w) const { return child_count(w) == 0; }

	/// Every vertex has either no child or all k children.
	bool is_full() const;

	bool operator==(const Tree&) const = default;

private:
	unsigned arity_;
	std::set<Word> vertices_;
};

/// All words of length < n.
Tree delta(unsigned n, unsigned arity);
/// T together with every child of every vertex of T.
Tree plus(const Tree& tree);
/// Least n with T contained in delta(n).
unsigned height(const Tree& tree);
/// Every full tree of height <= max_height, smallest first.
std::vector<Tree> full_trees(unsigned arity, unsigned max_height);

/// Labeling of a subtree by letter indices.
class Pattern
{
public:
	Pattern(unsigned arity, std::map<Word, Letter> labels);

	static Pattern leaf(unsigned arity, Letter a);
	/// Root `a` with the given k subpatterns (k = children.size()).
	static Pattern node(Letter a, std::span<const Pattern> children);

	unsigned arity() const { return arity_; }
	const std::map<Word, Letter>& labels() const { return labels_; }
	std::size_t size() const { return labels_.size(); }
	bool contains(const Word& w) const { return labels_.count(w) != 0; }
	Letter at(const Word& w) const;
	Letter root() const { return labels_.begin()->second; }
	bool has_children(const Word& w) const;

	Tree support() const;
	bool is_full() const;

	bool operator==(const Pattern&) const = default;

private:
	unsigned arity_;
	std::map<Word, Letter> labels_;
};

unsigned height(const Pattern& p);

/// p^w: the pattern read from vertex w downwards.
Pattern subtree_shift(const Pattern& p, const Word& w);

Pattern restrict_to(const Pattern& p, const Tree& tree);

/// Order used for every tie-break between patterns: preorder comparison of
/// (letter, has-children) pairs. On full patterns this is token-wise order
/// of the term syntax with letters in alphabet order and ')' < ',' < '('.
std::strong_ordering term_order(const Pattern& a, const Pattern& b);
inline bool term_less(const Pattern& a, const Pattern& b)
{
	return term_order(a, b) < 0;
}

/// `a` for a leaf, `a(t0,...,t{k-1})` otherwise. Requires a full pattern.
std::string to_term(const Pattern& p, const Alphabet& alphabet);
Pattern parse_term(std::string_view text, const Alphabet& alphabet, unsigned arity);

/// Calls fn on every labeling of `tree` by letters [0, alphabet_size).
void for_each_labeling(const Tree& tree, std::size_t alphabet_size,
                       const std::function<void(const Pattern&)>& fn);

/// Number of words of length < n.
std::size_t delta_size(unsigned arity, unsigned n);

/// Pattern on delta(size), stored in level order: the root, then the words
/// of length 1, length 2, ... each level in increasing base-k value.
/// Size 0 (the empty block) only appears as an overlap key.
class Block
{
public:
	Block(unsigned arity, unsigned size, std::vector<Letter> labels);

	static Block from_pattern(const Pattern& p);
	Pattern to_pattern() const;

	unsigned arity() const { return arity_; }
	unsigned size() const { return size_; }
	const std::vector<Letter>& labels() const { return labels_; }
	Letter root() const { return labels_.front(); }

	/// Restriction to delta(m), m <= size.
	Block restrict(unsigned m) const;
	/// Block of size m read from vertex w; needs |w| + m <= size.
	Block at(const Word& w, unsigned m) const;
	/// at({sigma}, size - 1).
	Block child(unsigned sigma) const;

	/// Root letter on top of k equally sized children.
	static Block graft(Letter root, std::span<const Block> children);

	auto operator<=>(const Block&) const = default;

private:
	unsigned arity_;
	unsigned size_;
	std::vector<Letter> labels_;
};

/// Deterministic tree-walking machine: the label of w is the output of the
/// state reached from `start` by following the directions of w.
class MooreColoring
{
public:
	MooreColoring(unsigned arity, Alphabet alphabet, std::vector<std::string> states,
	              StateId start, std::vector<std::vector<StateId>> step,
	              std::vector<Letter> output);

	unsigned arity() const { return arity_; }
	const Alphabet& alphabet() const { return alphabet_; }
	const std::vector<std::string>& state_names() const { return states_; }
	std::size_t state_count() const { return states_.size(); }
	StateId start() const { return start_; }
	StateId step(StateId q, unsigned sigma) const { return step_[q][sigma]; }
	Letter output(StateId q) const { return output_[q]; }
	const std::vector<Letter>& outputs() const { return output_; }

	StateId run(const Word& w) const;
	MooreColoring started_at(StateId q) const;
	MooreColoring with_outputs(Alphabet alphabet, std::vector<Letter> output) const;

private:
	unsigned arity_;
	Alphabet alphabet_;
	std::vector<std::string> states_;
	StateId start_;
	std::vector<std::vector<StateId>> step_;
	std::vector<Letter> output_;
};

Pattern moore_expand(const MooreColoring& m, const Tree& tree);

} // namespace treeshift
